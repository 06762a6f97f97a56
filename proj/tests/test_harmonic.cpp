#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hbubble/harmonic.hpp"

using namespace hbubble;

TEST_CASE("poisson_extend: mean value and single-mode data") {
    const BoundaryDatum constant([](double) { return Vec3{1, 2, 3}; }, 256);
    const HarmonicField f = poisson_extend(constant);
    CHECK(norm_inf(f.value(Complex(0.3, -0.5)) - Vec3{1, 2, 3}) < 1e-12);

    const BoundaryDatum mode2([](double t) { return Vec3{std::cos(2 * t), std::sin(2 * t), 0}; },
                              256);
    const HarmonicField g = poisson_extend(mode2);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-0.7, 0.7);
    for (int i = 0; i < 50; ++i) {
        const Complex z(U(rng), U(rng));
        const Complex z2 = z * z;
        CHECK(norm_inf(g.value(z) - Vec3{z2.real(), z2.imag(), 0}) < 1e-13);
    }
}

TEST_CASE("closed extension of the h-family trace") {
    CHECK(norm(closed_extension_h({0, 0}, {0.4, -0.3})) < 1e-15);
    CHECK(norm_inf(closed_extension_h({0.3, 0.4}, {0, 0}) - Vec3{-0.07, 0.24, 0}) < 1e-15);

    // display == complex closed form == spectral extension
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    for (PlanePoint xi : {PlanePoint{0.3, -0.2}, PlanePoint{0.0, 0.0}, PlanePoint{-0.5, 0.6}}) {
        const HarmonicField f = poisson_extend(BoundaryDatum(
            [&](double t) {
                const double x = std::cos(t) - xi.x, y = std::sin(t) - xi.y;
                const double r2 = x * x + y * y;
                return Vec3{(x * x - y * y) / (r2 * r2), 2 * x * y / (r2 * r2), 0};
            },
            2048));
        double worst_disp = 0, worst_spec = 0;
        for (int i = 0; i < 100; ++i) {
            PlanePoint z{U(rng), U(rng)};
            while (z.norm() > 0.9) z = {0.5 * z.x, 0.5 * z.y};
            const Vec3 disp = closed_extension_h(z, xi);
            const Complex pair = pairext::h1(z.c(), xi.c());
            worst_disp = std::max(worst_disp,
                                  norm_inf(disp - Vec3{pair.real(), pair.imag(), 0}));
            worst_spec = std::max(worst_spec, norm_inf(disp - f.value(z.c())));
        }
        CHECK(worst_disp <= 1e-13);
        CHECK(worst_spec <= 1e-10);
    }
}

TEST_CASE("closed extension of g_rho") {
    CHECK(norm(closed_extension_g_rho({0, 0}, 0.7)) < 1e-15);

    // matches the spectral extension of its boundary trace
    const double rho = 0.5;
    const HarmonicField f = poisson_extend(BoundaryDatum(
        [&](double t) {
            const double x = std::cos(t) - rho, y = std::sin(t);
            const double r2 = x * x + y * y;
            return Vec3{2 * (x * x - y * y) / (r2 * r2), 4 * x * y / (r2 * r2), 0};
        },
        2048));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-0.63, 0.63);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const PlanePoint z{U(rng), U(rng)};
        worst = std::max(worst, norm_inf(closed_extension_g_rho(z, rho) - f.value(z.c())));
    }
    CHECK(worst <= 1e-10);

    // rho -> 0 limit of the trace is 2 (cos 2t, sin 2t, 0)
    for (double t : {0.3, 1.1, 4.0}) {
        const PlanePoint z{std::cos(t), std::sin(t)};
        CHECK(norm_inf(closed_extension_g_rho(z, 0.0)
                       - Vec3{2 * std::cos(2 * t), 2 * std::sin(2 * t), 0}) < 1e-12);
    }
}

TEST_CASE("g_datum third component") {
    const PlanePoint omega{0.3, -0.1};
    const double eps = 0.25;
    const BoundaryDatum d = g_datum(omega, eps, 256);
    for (std::size_t i = 0; i < d.size(); i += 37) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(d.size());
        const PlanePoint z{std::cos(t), std::sin(t)};
        const double r2 = (z - omega).norm2();
        CHECK(d.samples[i].z == Catch::Approx(-2 * eps / (r2 * r2)).epsilon(1e-14));
    }
}

TEST_CASE("robin_closed: pinned values") {
    CHECK(robin_closed(RobinTag::hm1_1, 1, 0, 0, {0.5, 0}) == Catch::Approx(-4.0 / 3.0));
    CHECK(robin_closed(RobinTag::h1, 2, 1, 1, {0, 0}) == Catch::Approx(2.0));
    CHECK(robin_closed(RobinTag::h2_1, 1, 4, 0, {0, 0}) == Catch::Approx(-24.0));
    CHECK_THROWS_AS(robin_closed(RobinTag::h1, 3, 0, 0, {0.3, 0}), NotInTable);
    CHECK_THROWS_AS(robin_closed(RobinTag::hm1_1, 1, 1, 1, {0.3, 0}), NotInTable);
}

TEST_CASE("robin_numeric: pinned values and symmetry") {
    CHECK(robin_numeric(RobinTag::hm1_1, 1, 1, 0, {0.5, 0})
          == Catch::Approx(-2.0 / (0.75 * 0.75)).epsilon(1e-8));
    CHECK(robin_numeric(RobinTag::h1, 1, 0, 0, {0.4, 0.3})
          == Catch::Approx((0.16 - 0.09) / (0.75 * 0.75)).epsilon(1e-8));
    // odd symmetry of the datum under z -> -z at xi = 0
    CHECK(std::abs(robin_numeric(RobinTag::hm1_1, 1, 0, 0, {0, 0})) < 1e-12);
    CHECK(std::abs(robin_numeric(RobinTag::hm1_2, 2, 0, 0, {0, 0})) < 1e-12);
    CHECK(std::abs(robin_numeric(RobinTag::h1, 1, 1, 0, {0, 0})) < 1e-12);
    CHECK_THROWS_AS(robin_numeric(RobinTag::h1, 1, 0, 0, {0.995, 0}), NearBoundary);
}

TEST_CASE("robin closed vs numeric across the table") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    struct Entry {
        RobinTag tag;
        int comp, jx, jy;
    };
    std::vector<Entry> entries;
    for (int comp : {1, 2}) {
        for (auto [jx, jy] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}}) {
            entries.push_back({RobinTag::hm1_1, comp, jx, jy});
            entries.push_back({RobinTag::hm1_2, comp, jx, jy});
        }
        for (auto [jx, jy] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2},
                              {3, 0}, {2, 1}, {1, 2}, {0, 3}, {4, 0}, {3, 1}, {2, 2}, {1, 3},
                              {0, 4}})
            entries.push_back({RobinTag::h1, comp, jx, jy});
        for (auto [jx, jy] : {std::pair{1, 0}, {0, 1}, {4, 0}, {0, 4}}) {
            entries.push_back({RobinTag::h2_1, comp, jx, jy});
            entries.push_back({RobinTag::h2_2, comp, jx, jy});
        }
    }
    entries.push_back({RobinTag::h1, 1, 6, 0});
    entries.push_back({RobinTag::h1, 1, 0, 6});

    for (int trial = 0; trial < 6; ++trial) {
        PlanePoint xi{0.8 * U(rng), 0.8 * U(rng)};
        while (xi.norm() > 0.8) xi = {0.6 * xi.x, 0.6 * xi.y};
        for (const auto& e : entries) {
            const double closed = robin_closed(e.tag, e.comp, e.jx, e.jy, xi);
            const double numeric = robin_numeric(e.tag, e.comp, e.jx, e.jy, xi);
            const double tol = (e.jx + e.jy <= 2) ? 1e-6 : 1e-3;
            INFO(to_string(e.tag) << " comp " << e.comp << " beta (" << e.jx << "," << e.jy
                                  << ") xi (" << xi.x << "," << xi.y << ")");
            CHECK(std::abs(closed - numeric) <= tol * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("maximum principle for spectral fields") {
    const PlanePoint xi{0.35, -0.2};
    const HarmonicField f = poisson_extend(BoundaryDatum(
        [&](double t) { return detail::robin_datum(RobinTag::h1, xi, t); }, 2048));
    std::array<double, 3> bsup{0, 0, 0};
    for (int i = 0; i < 2048; ++i) {
        const double t = 2.0 * M_PI * i / 2048.0;
        const Vec3 v = f.value(Complex(std::cos(t), std::sin(t)));
        for (int k = 0; k < 3; ++k) bsup[k] = std::max(bsup[k], std::abs(v[k]));
    }
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        PlanePoint z{U(rng), U(rng)};
        if (z.norm() >= 1) continue;
        const Vec3 v = f.value(z.c());
        for (int k = 0; k < 3; ++k) CHECK(std::abs(v[k]) <= bsup[k] + 1e-10);
    }
}

TEST_CASE("cross-family identities") {
    const PlanePoint xi{0.3, -0.25};
    const auto field = [&](RobinTag tag, PlanePoint at) {
        return poisson_extend(
            BoundaryDatum([&, at](double t) { return detail::robin_datum(tag, at, t); }, 1024));
    };
    const HarmonicField a = field(RobinTag::hm1_1, xi);
    const HarmonicField b = field(RobinTag::hm1_2, xi);

    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> U(-0.8, 0.8);
    double w1 = 0, w2 = 0;
    for (int i = 0; i < 200; ++i) {
        PlanePoint z{U(rng), U(rng)};
        if (z.norm() > 0.9) continue;
        const Vec3 va = a.value(z.c()), vb = b.value(z.c());
        w1 = std::max(w1, std::abs(va.x - vb.y));  // h1^(-1,1) == h2^(-1,2)
        w2 = std::max(w2, std::abs(va.y + vb.x));  // h2^(-1,1) == -h1^(-1,2)
    }
    CHECK(w1 <= 1e-10);
    CHECK(w2 <= 1e-10);

    // xi-derivative relations: d h2^(-1,1)/d xi2 = 2 h1^(1),
    //                         -d h1^(-1,1)/d xi2 = 2 h2^(1)
    const double h = 1e-4;
    const HarmonicField ap = field(RobinTag::hm1_1, {xi.x, xi.y + h});
    const HarmonicField am = field(RobinTag::hm1_1, {xi.x, xi.y - h});
    double w3 = 0, w4 = 0;
    for (int i = 0; i < 100; ++i) {
        PlanePoint z{U(rng), U(rng)};
        if (z.norm() > 0.9) continue;
        const Vec3 dxi = (0.5 / h) * (ap.value(z.c()) - am.value(z.c()));
        const Vec3 h1v = closed_extension_h(z, xi);
        w3 = std::max(w3, std::abs(dxi.y - 2 * h1v.x));
        w4 = std::max(w4, std::abs(-dxi.x - 2 * h1v.y));
    }
    CHECK(w3 <= 1e-5);
    CHECK(w4 <= 1e-5);
}

TEST_CASE("trace harmonicity of h1^(1) at (xi, xi)") {
    for (PlanePoint xi : {PlanePoint{0.2, 0.5}, PlanePoint{-0.4, 0.1}}) {
        const double dxx = robin_numeric(RobinTag::h1, 1, 2, 0, xi);
        const double dyy = robin_numeric(RobinTag::h1, 1, 0, 2, xi);
        CHECK(std::abs(dxx + dyy) <= 1e-6 * std::abs(dxx));
    }
}

TEST_CASE("projected bubble") {
    BubbleParams prm;
    prm.mu = 0.1;
    prm.xi = {0.3, 0};
    const ProjectedBubble pb = project_bubble(prm);

    SECTION("vanishes on the boundary") {
        double worst = 0;
        for (int i = 0; i < 512; ++i) {
            const double t = 2.0 * M_PI * i / 512.0;
            worst = std::max(worst, norm(pb.value({std::cos(t), std::sin(t)})));
        }
        CHECK(worst <= 1e-8);
    }

    SECTION("phi matches the displayed leading orders") {
        BubbleParams small = prm;
        small.mu = 0.05;
        const ProjectedBubble pbs = project_bubble(small);
        const double mu = small.mu;
        {
            // third component of phi tends to 1 like 1 - 2 mu^4 h3(z, xi)
            const PlanePoint z{0.5, 0.2};
            const double phi3 = pbs.phi().value(z.c()).z;
            const double h3 = poisson_extend(BoundaryDatum(
                                  [&](double t) {
                                      return detail::robin_datum(RobinTag::h1, small.xi, t);
                                  },
                                  2048))
                                  .value(z.c())
                                  .z;
            CHECK(std::abs(phi3 - 1.0) <= 3 * mu * mu * mu * mu * h3);
            CHECK(std::abs(phi3 - (1.0 - 2 * std::pow(mu, 4) * h3)) <= 1e-8);
        }
        {
            // first component ~ 2 mu^2 h1^(1)(z, xi)
            const PlanePoint z{0.6, 0.1};
            const double phi1 = pbs.phi().value(z.c()).x;
            const double lead = 2 * mu * mu * closed_extension_h(z, small.xi).x;
            CHECK(std::abs(phi1 - lead) <= 50 * std::pow(mu, 6));
        }
    }

    SECTION("near-boundary guard") {
        BubbleParams bad = prm;
        bad.xi = {0.995, 0};
        CHECK_THROWS_AS(project_bubble(bad), NearBoundary);
    }
}
