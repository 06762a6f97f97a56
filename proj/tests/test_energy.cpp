#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hbubble/energy.hpp"

using namespace hbubble;

namespace {

SampleFn zero_field() {
    return [](PlanePoint) { return MapSample{}; };
}

SampleFn field_sampler(const HarmonicField& f) {
    return [&f](PlanePoint z) { return f.sample(z); };
}

} // namespace

TEST_CASE("energy_full: zero map") {
    const EnergyBreakdown b = energy_full(zero_field(), zero_field(), 0.1,
                                          {32, 64, std::nullopt, false});
    CHECK(b.total == 0.0);
    CHECK(b.dirichlet == 0.0);
    CHECK(b.cubic == 0.0);
    CHECK(b.boundary_linear == 0.0);
    CHECK(b.boundary_quadratic == 0.0);
}

TEST_CASE("single-bubble energy at mu = 0.02") {
    BubbleParams prm;
    prm.mu = 0.02;
    prm.xi = {0.3, 0};
    const double eps = prm.mu * prm.mu;
    const ProjectedBubble pb = project_bubble(prm);
    DatumSpec spec;
    spec.omega = prm.xi;
    const HarmonicField g = poisson_extend(g_datum(spec.omega, eps));

    EnergyQuadSpec q;
    q.adapt = DiskAdaptation{prm.xi, prm.mu};
    q.n_radial = 128;
    q.n_angular = 256;
    const EnergyBreakdown b = energy_full([&](PlanePoint z) { return pb.sample(z); },
                                          field_sampler(g), eps, q);
    CHECK(b.boundary_ok);
    CHECK(b.total == Catch::Approx(8 * M_PI / 3).epsilon(0.02));
    CHECK(b.dirichlet == Catch::Approx(8 * M_PI).epsilon(0.02));
    CHECK(std::abs(b.total - (b.dirichlet + b.cubic + b.boundary_linear + b.boundary_quadratic))
          <= 1e-12);
}

TEST_CASE("free energy of the canonical bubble") {
    const auto rule = plane_rule(200, 256);
    const double e = energy_free([](PlanePoint z) { return bubble_w_sample(z); }, rule);
    CHECK(e == Catch::Approx(8 * M_PI / 3).epsilon(1e-4));

    const double c = energy_free(
        [](PlanePoint) {
            return MapSample{{0.3, -1.0, 2.0}, {0, 0, 0}, {0, 0, 0}};
        },
        rule);
    CHECK(c == 0.0);

    // rotation invariance
    const RotationSO3 rot{1.1, -0.4, 0.7};
    const Mat3 q = rot.matrix();
    const double er = energy_free(
        [&](PlanePoint z) {
            MapSample s = bubble_w_sample(z);
            return MapSample{q * s.value, q * s.grad_x, q * s.grad_y};
        },
        rule);
    CHECK(std::abs(er - e) <= 1e-10);
}

TEST_CASE("reduced energy: closed form at the center") {
    // a = p = 0, rot = Id, xi = omega = 0:
    // F = 16 pi mu^4 - 32 pi eps mu^2
    BubbleParams prm;
    prm.mu = 0.37;
    DatumSpec spec;
    const double eps = 0.013;
    const double f = reduced_energy_F(prm, spec, eps);
    const double expected = 16 * M_PI * std::pow(prm.mu, 4) - 32 * M_PI * eps * prm.mu * prm.mu;
    CHECK(f == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("reduced energy: stationarity in mu at the main-order relation") {
    // 2 mu^2 H(xi) = eps d_{Q^{-1}} g(xi) zeroes dF/dmu when a = p = 0
    DatumSpec spec;
    spec.omega = {0.2, -0.1};
    BubbleParams prm;
    prm.xi = {0.35, 0.15};
    const double eps = 1e-3;
    const double dqg = field_dQg(prm.xi, prm.rot, spec, eps);
    REQUIRE(dqg > 0);
    prm.mu = std::sqrt(eps * dqg / (2 * field_H(prm.xi)));
    const Eigen::VectorXd g = reduced_energy_grad(prm, spec, eps);
    CHECK(std::abs(g[0]) <= 1e-12);
}

TEST_CASE("reduced energy scaling: t^4 and t^2 coefficients") {
    DatumSpec spec;
    spec.omega = {0.1, 0.2};
    BubbleParams prm;
    prm.xi = {0.1, 0.2};
    prm.mu = 0.05;
    const double eps = 2e-3;
    const double f1 = reduced_energy_F(prm, spec, eps);
    BubbleParams prm2 = prm;
    prm2.mu = 2 * prm.mu;
    const double f2 = reduced_energy_F(prm2, spec, eps);
    // solve c4 mu^4 + c2 mu^2 from the two evaluations and compare
    const double m2 = prm.mu * prm.mu, m4 = m2 * m2;
    // f1 = c4 m4 + c2 m2 ; f2 = 16 c4 m4 + 4 c2 m2
    const double c4 = (f2 - 4 * f1) / (12 * m4);
    const double c2 = (f1 - c4 * m4) / m2;
    const double c4_expected = 4 * M_PI * field_H(prm.xi);
    const double c2_expected = -4 * M_PI * eps * field_dQg(prm.xi, prm.rot, spec, eps);
    CHECK(c4 == Catch::Approx(c4_expected).epsilon(1e-10));
    CHECK(c2 == Catch::Approx(c2_expected).epsilon(1e-10));
}

TEST_CASE("reduced energy gradient vs finite differences") {
    DatumSpec spec;
    spec.omega = {0.25, -0.05};
    spec.S = rotation_about_z(0.3);
    BubbleParams prm;
    prm.mu = 0.08;
    prm.xi = {0.3, 0.1};
    prm.a = {2e-3, -1e-3};
    prm.p = {0.02, 0.01};
    prm.rot = {M_PI / 2 + 0.05, -0.02, 0.03};
    const double eps = 5e-3;

    const Eigen::VectorXd g = reduced_energy_grad(prm, spec, eps);
    double chi[10];
    detail::chi_from_params(prm, chi);
    for (int i = 0; i < 10; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(chi[i]));
        double cp[10], cm[10];
        std::copy(chi, chi + 10, cp);
        std::copy(chi, chi + 10, cm);
        cp[i] += h;
        cm[i] -= h;
        const double fd = (reduced_energy_F(detail::params_from_chi(cp), spec, eps)
                           - reduced_energy_F(detail::params_from_chi(cm), spec, eps))
                          / (2 * h);
        INFO("coordinate " << i);
        CHECK(std::abs(g[i] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("interaction_FD: closed-form coefficients") {
    BubbleParams b1, b2;
    b1.mu = b2.mu = 1.0;
    b1.xi = {0, 0};
    DatumSpec spec;

    SECTION("sigma = (1,0): q11 and q22 sigma-terms cancel at Q = Id") {
        b2.xi = {1, 0};
        const double v = interaction_FD(b1, b2, spec, 0.0);
        CHECK(v == Catch::Approx(0.0).margin(1e-12));
    }

    SECTION("sigma = (1,1) coefficient arithmetic") {
        const double S4 = 1.0 - 6.0 + 1.0;
        CHECK(S4 == -4.0);
        CHECK(-48 * M_PI * S4 / 16.0 == Catch::Approx(12 * M_PI));
        const double T = 1 * 1 * (1 - 1);
        CHECK(-192 * M_PI * T / 16.0 == 0.0);
    }

    SECTION("swap symmetry of the sigma part") {
        b1.mu = 0.8;
        b2.mu = 1.3;
        b2.xi = {0.9, 0.4};
        b2.rot = {M_PI / 2 + 0.3, -0.2, 0.1};
        const double v12 = interaction_FD(b1, b2, spec, 0.0);
        BubbleParams c1 = b2, c2 = b1; // swapped
        const double v21 = interaction_FD(c1, c2, spec, 0.0);
        CHECK(v12 == Catch::Approx(v21).epsilon(1e-12));
    }

    SECTION("too-close centers are refused") {
        b2.xi = {1e-4, 0};
        CHECK_THROWS_AS(interaction_FD(b1, b2, spec, 0.0), BubblesTooClose);
    }
}

TEST_CASE("interaction_linear: cancellations at Q = Id") {
    BubbleParams b1, b2;
    b1.mu = 0.7;
    b2.mu = 1.1;
    b1.a = {1.0, 0.0};
    b2.xi = {1, 0};
    CHECK(interaction_linear(1, b1, b2) == Catch::Approx(0.0).margin(1e-14));
    b2.xi = {0, 1};
    b1.a = {1.0, 1.0};
    CHECK(interaction_linear(1, b1, b2) == Catch::Approx(0.0).margin(1e-14));
    // a rotated second bubble breaks the cancellation
    b2.xi = {1, 0};
    b1.a = {1.0, 0.0};
    b2.rot = {M_PI / 2, 0.0, 0.4};
    CHECK(std::abs(interaction_linear(1, b1, b2)) > 1e-3);
}

TEST_CASE("two-bubble brute force: F_D q11 component") {
    // 2 int (P delta_2)_1 (d1_x ^ d1_y)_1 = -48 pi S4/|s|^8 m1^2 m2^2
    //                                     + 8 pi m1^2 m2^2 d^2 h1^(1)/dx^2 (xi, zeta)
    BubbleParams b1, b2;
    b1.mu = b2.mu = 1e-2;
    b1.xi = {-0.25, 0};
    b2.xi = {0.25, 0};
    const ProjectedBubble pb2 = project_bubble(b2);
    const double brute = bruteforce_pair_component(b1, pb2, 1);

    const PlanePoint sigma = b2.xi - b1.xi;
    const double S4 = std::pow(sigma.x, 4);
    const double s8 = std::pow(sigma.norm2(), 4);
    const double mm = std::pow(b1.mu * b2.mu, 2);
    const double corr = 2.0 * pairext::h1(b1.xi.c(), b2.xi.c(), 2).real(); // d^2 h1/dx^2
    const double closed = -48 * M_PI * S4 / s8 * mm + 8 * M_PI * mm * corr;
    CHECK(brute == Catch::Approx(closed).epsilon(0.05));
}

TEST_CASE("linear interaction brute force (Jan17 component)") {
    BubbleParams b1, b2;
    b1.mu = b2.mu = 1e-2;
    const double ang = 40.0 * M_PI / 180.0;
    b1.xi = {-0.25 * std::cos(ang), -0.25 * std::sin(ang)};
    b2.xi = {0.25 * std::cos(ang), 0.25 * std::sin(ang)};
    const ProjectedBubble pb2 = project_bubble(b2);
    const PlanePoint sigma = b2.xi - b1.xi;
    const double s6 = std::pow(sigma.norm2(), 3);
    const double m12 = b1.mu * b2.mu * b2.mu;

    // component identities with the verified signs: the q11 slot carries
    // +32 pi sigma1(sigma1^2 - 3 sigma2^2)/|sigma|^6 and the q22 slot its
    // negative; the h-corrections follow the paper unchanged
    const double cA = 32 * M_PI * sigma.x * (sigma.x * sigma.x - 3 * sigma.y * sigma.y) / s6;
    const Complex G1 = pairext::h1(b1.xi.c(), b2.xi.c(), 1); // d h^(1) pair at (xi, zeta)

    const double brute1 = bruteforce_linear_component(b1, pb2, 1);
    const double closed1 = cA * m12 - 16 * M_PI * m12 * G1.real(); // d h1/dx correction
    CHECK(brute1 == Catch::Approx(closed1).epsilon(0.05));

    const double brute2 = bruteforce_linear_component(b1, pb2, 2);
    const double closed2 = -cA * m12 - 16 * M_PI * m12 * G1.real(); // d h2/dy = d h1/dx
    CHECK(brute2 == Catch::Approx(closed2).epsilon(0.05));

    // assembled coupling with a rotated second bubble: adding eps Q2 g^(2)
    // with eps = mu^2 and omega = zeta balances the h-corrections away,
    // leaving the closed form
    BubbleParams b2r = b2;
    b2r.rot = {M_PI / 2 + 0.5, 0, 0};
    const ProjectedBubble pb2r = project_bubble(b2r);
    const double eps = b2.mu * b2.mu;
    const HarmonicField gfield = poisson_extend(g_datum(b2.xi, eps));
    const Mat3 q2 = b2r.rot.matrix();
    auto extra = [&](PlanePoint z) { return eps * (q2 * gfield.value(z.c())); };
    double brute_sum = 0;
    for (int comp = 1; comp <= 3; ++comp)
        brute_sum += bruteforce_linear_component(b1, pb2r, comp, 96, 192, extra);
    BubbleParams unit_a = b1;
    unit_a.a = {1.0, 0.0};
    const double assembled = interaction_linear(1, unit_a, b2r);
    CHECK(brute_sum == Catch::Approx(assembled).epsilon(0.05));
}

TEST_CASE("sigma energy") {
    DatumSpec s1, s2;
    s1.omega = {-0.5, 0};
    s2.omega = {0.5, 0};
    BubbleParams b1, b2;
    b1.mu = b2.mu = 0.01;
    b1.xi = {-0.5, 0};
    b2.xi = {0.5, 0};
    const double eps = 1e-4;

    SECTION("k = 1 reduces to the single-bubble energy") {
        CHECK(sigma_energy({b1}, {s1}, eps)
              == Catch::Approx(reduced_energy_F(b1, s1, eps)).epsilon(1e-14));
    }

    SECTION("order symmetry") {
        const double v = sigma_energy({b1, b2}, {s1, s2}, eps);
        const double w = sigma_energy({b2, b1}, {s2, s1}, eps);
        CHECK(v == Catch::Approx(w).epsilon(1e-12));
    }

    SECTION("symmetric two-bubble value matches hand assembly") {
        const double v = sigma_energy({b1, b2}, {s1, s2}, eps);
        const double hand = reduced_energy_F(b1, s1, eps) + reduced_energy_F(b2, s2, eps)
                          + interaction_FD(b1, b2, s1, eps) + interaction_linear(1, b1, b2)
                          + interaction_linear(2, b1, b2);
        CHECK(v == Catch::Approx(hand).epsilon(1e-14));
    }

    SECTION("too-close bubbles are refused") {
        BubbleParams b3 = b2;
        b3.xi = {-0.45, 0};
        CHECK_THROWS_AS(sigma_energy({b1, b3}, {s1, s2}, eps), BubblesTooClose);
    }

    SECTION("gradient vs finite differences") {
        b1.a = {1e-3, -2e-3};
        b2.p = {0.01, 0.005};
        b2.rot = {M_PI / 2 + 0.02, 0.01, -0.015};
        const std::vector<BubbleParams> st{b1, b2};
        const std::vector<DatumSpec> sp{s1, s2};
        const Eigen::VectorXd g = sigma_energy_grad(st, sp, eps);
        for (int i = 0; i < 20; ++i) {
            std::vector<BubbleParams> wp = st, wm = st;
            double c[10];
            detail::chi_from_params(st[static_cast<std::size_t>(i / 10)], c);
            const int slot = i % 10;
            const double h = 1e-7 * (1.0 + std::abs(c[slot]));
            double cp[10], cm[10];
            std::copy(c, c + 10, cp);
            std::copy(c, c + 10, cm);
            cp[slot] += h;
            cm[slot] -= h;
            wp[static_cast<std::size_t>(i / 10)] = detail::params_from_chi(cp);
            wm[static_cast<std::size_t>(i / 10)] = detail::params_from_chi(cm);
            const double fd = (sigma_energy(wp, sp, eps) - sigma_energy(wm, sp, eps)) / (2 * h);
            INFO("coordinate " << i);
            CHECK(std::abs(g[i] - fd)
                  <= std::max(1e-4 * std::abs(fd), 1e-8 * std::max(1.0, std::abs(fd))));
        }
    }
}

TEST_CASE("section-6 fields") {
    CHECK(field_H({0, 0}) == Catch::Approx(4.0));

    const double rho = 0.5;
    const double wmax = field_Wrho({rho, 0}, rho);
    const double disp = 4 * std::pow(rho * rho - 1, 2) * std::sqrt(4 * rho * (rho * rho * rho + rho) + 1)
                      / (std::sqrt(2 * rho * rho + 1) * std::pow(rho * rho * rho * rho - 2 * rho * rho + 1, 2));
    CHECK(wmax == Catch::Approx(disp).epsilon(1e-14));

    // gradient vanishes at (rho, 0)
    const double h = 1e-7;
    const double gx = (field_Wrho({rho + h, 0}, rho) - field_Wrho({rho - h, 0}, rho)) / (2 * h);
    const double gy = (field_Wrho({rho, h}, rho) - field_Wrho({rho, -h}, rho)) / (2 * h);
    CHECK(std::abs(gx) <= 1e-8 * std::abs(wmax / (1 - rho)));
    CHECK(std::abs(gy) <= 1e-8 * std::abs(wmax / (1 - rho)));

    // the two dQg routes agree for the pure rho-datum (eps-free part)
    DatumSpec spec;
    spec.omega = {rho, 0};
    for (RotationSO3 rot : {RotationSO3{}, RotationSO3{M_PI / 2 + 0.1, -0.2, 0.05}}) {
        const PlanePoint xi{0.42, -0.13};
        const double general = field_dQg(xi, rot, spec, 0.0);
        const double euler = field_dQg_rho(xi, rot, rho);
        CHECK(general == Catch::Approx(euler).epsilon(1e-10));
    }
}

TEST_CASE("hessian A: displayed entries vs the model") {
    const double rho = 0.95, eps = 1e-4;
    const Eigen::MatrixXd A = hessian_A(rho, eps);

    SECTION("pinned entry and symmetry") {
        CHECK(A(0, 1)
              == Catch::Approx(-384 * M_PI * (std::pow(rho, 3) + rho) * std::pow(eps, 1.5)
                               / std::pow(rho * rho - 1, 5)));
        CHECK((A - A.transpose()).norm() == 0.0);
    }

    SECTION("positive definite at (0.95, 1e-4)") {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        CHECK(es.eigenvalues().minCoeff() > 0);
    }

    SECTION("FD Hessian of the model matches the exact-coefficient entries") {
        Eigen::VectorXd chi0(10);
        chi0 << std::sqrt(eps), rho, 0, M_PI / 2, 0, 0, 0, 0, 0, 0;
        // steps sized against the cancellation inside the rho-datum
        // polynomials; too-small steps drown the second difference in noise
        Eigen::VectorXd hstep(10);
        hstep << 1e-6, 1e-4, 1e-4, 1e-3, 1e-3, 1e-3, 1e-5, 1e-5, 1e-3, 1e-3;
        auto F = [&](const Eigen::VectorXd& chi) { return model_F_tilde(chi, rho, eps); };
        Eigen::MatrixXd H(10, 10);
        const double f0 = F(chi0);
        for (int i = 0; i < 10; ++i)
            for (int j = i; j < 10; ++j) {
                double v;
                if (i == j) {
                    Eigen::VectorXd p = chi0, m = chi0;
                    p[i] += hstep[i];
                    m[i] -= hstep[i];
                    v = (F(p) - 2 * f0 + F(m)) / (hstep[i] * hstep[i]);
                } else {
                    Eigen::VectorXd pp = chi0, pm = chi0, mp = chi0, mm = chi0;
                    pp[i] += hstep[i]; pp[j] += hstep[j];
                    pm[i] += hstep[i]; pm[j] -= hstep[j];
                    mp[i] -= hstep[i]; mp[j] += hstep[j];
                    mm[i] -= hstep[i]; mm[j] -= hstep[j];
                    v = (F(pp) - F(pm) - F(mp) + F(mm)) / (4 * hstep[i] * hstep[j]);
                }
                H(i, j) = H(j, i) = v;
            }
        // every displayed entry except the p-diagonal is exact for the model
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                if ((i == 8 && j == 8) || (i == 9 && j == 9)) continue;
                const double scale = std::max({std::abs(A(i, i)), std::abs(A(j, j)), 1e-30});
                INFO("entry (" << i << "," << j << ")");
                CHECK(std::abs(H(i, j) - A(i, j)) <= 2e-3 * std::max(std::abs(A(i, j)), 1e-6 * scale));
            }
        // the displayed p-diagonal keeps only the leading Robin term; the
        // model Hessian equals the exact coefficient instead
        const double t = rho * rho - 1;
        const double exact = 64 * M_PI * std::pow(eps, 4)
                             * (35 + 60 * t + 30 * t * t + 4 * t * t * t) / std::pow(t, 8);
        CHECK(H(8, 8) == Catch::Approx(exact).epsilon(2e-3));
        CHECK(H(9, 9) == Catch::Approx(exact).epsilon(2e-3));
        CHECK(std::abs(H(8, 8) - A(8, 8)) / A(8, 8) == Catch::Approx(0.159).margin(0.02));
    }
}
