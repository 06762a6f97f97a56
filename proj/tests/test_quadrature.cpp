#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hbubble/quadrature.hpp"

using namespace hbubble;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(16, x, w);
    double s0 = 0, s2 = 0;
    for (int i = 0; i < 16; ++i) {
        s0 += w[i];
        s2 += w[i] * x[i] * x[i];
    }
    CHECK(s0 == Catch::Approx(2.0).margin(1e-14));
    CHECK(s2 == Catch::Approx(2.0 / 3.0).margin(1e-14));
}

TEST_CASE("disk rule: measure and moments") {
    const auto rule = disk_rule(32, 64);
    double total = 0;
    for (double w : rule.weights) {
        CHECK(w > 0);
        total += w;
    }
    CHECK(total == Catch::Approx(M_PI).margin(1e-12));
    const double m2 = integrate(rule, [](PlanePoint p) { return p.norm2(); });
    CHECK(m2 == Catch::Approx(M_PI / 2).margin(1e-13));
}

TEST_CASE("adapted disk rule matches plain rule on smooth integrands") {
    const auto plain = disk_rule(128, 128);
    auto f = [](PlanePoint p) { return std::exp(-p.norm2()) + p.x * p.y; };
    const double ref = integrate(plain, f);
    for (auto [cx, mu] : {std::pair{0.3, 0.05}, std::pair{0.0, 0.5}, std::pair{0.88, 0.02}}) {
        const auto adapted = disk_rule(96, 128, DiskAdaptation{{cx, 0.1 * cx}, mu});
        double total = 0;
        for (double w : adapted.weights) {
            CHECK(w > 0);
            total += w;
        }
        CHECK(total == Catch::Approx(M_PI).margin(1e-10));
        CHECK(integrate(adapted, f) == Catch::Approx(ref).margin(1e-6));
    }
    CHECK_THROWS_AS(disk_rule(16, 16, DiskAdaptation{{1.2, 0.0}, 0.1}), InvalidAdaptation);
}

TEST_CASE("circle rule sums to 2 pi") {
    const auto rule = circle_rule(256);
    double total = 0;
    for (double w : rule.weights) total += w;
    CHECK(total == Catch::Approx(2 * M_PI).margin(1e-12));
}

TEST_CASE("plane rule handles algebraic decay") {
    const auto rule = plane_rule(120, 64);
    // \int 1/(1+|z|^2)^2 = pi
    const double v = integrate(rule, [](PlanePoint p) {
        const double s = 1 + p.norm2();
        return 1.0 / (s * s);
    });
    CHECK(v == Catch::Approx(M_PI).epsilon(1e-10));
}

TEST_CASE("identity suite reproduces the tabulated constants") {
    const auto records = identity_suite(160, 192);
    REQUIRE(records.size() >= 10);
    for (const auto& rec : records) {
        INFO(rec.id);
        if (rec.exact == 0.0) {
            CHECK(rec.abs_err <= 1e-10);
        } else {
            CHECK(rec.rel_err <= 1e-8);
        }
    }
}

TEST_CASE("identity suite: doubling the resolution moves values below the reported error") {
    const auto coarse = identity_suite(100, 128);
    const auto fine = identity_suite(200, 256);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        INFO(coarse[i].id);
        const double shift = std::abs(coarse[i].computed - fine[i].computed);
        CHECK(shift <= std::max(coarse[i].abs_err, 1e-12) + 1e-12);
    }
}
