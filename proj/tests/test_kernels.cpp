#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hbubble/catalog.hpp"
#include "hbubble/kernels.hpp"

using namespace hbubble;

TEST_CASE("kernel closed forms: hand-evaluated points") {
    CHECK(norm(kernel_eval({0, 2}, {1, 0}) - Vec3{0, 1, 0}) < 1e-15);
    CHECK(norm(kernel_eval({-2, 1}, {0, 0}) - Vec3{0, 1, 0}) < 1e-15);
    CHECK(norm(kernel_eval({2, 1}, {0, 0}) - Vec3{2, 0, 0}) < 1e-15);
}

TEST_CASE("extra kernels: hand-evaluated points") {
    CHECK(norm(extra_kernel_eval(1, {0, 0}) - Vec3{0, 0, 1}) < 1e-15);
    CHECK(norm(extra_kernel_eval(2, {0, 0})) < 1e-15);
    CHECK(norm(extra_kernel_eval(3, {1, 0})) < 1e-15);
}

TEST_CASE("kernels equal the family parameter derivatives") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (KernelId id : kAllKernels) {
        double worst = 0;
        for (int i = 0; i < 50; ++i) {
            const PlanePoint z{U(rng), U(rng)};
            worst = std::max(worst, norm_inf(kernel_from_family(id, z, 1e-5) - kernel_eval(id, z)));
        }
        INFO("kernel (" << id.k << "," << id.j << ")");
        CHECK(worst <= 1e-7);
    }
}

TEST_CASE("family consistency after Richardson refinement") {
    // ids (-1,l), (2,l), (1,l), (0,l): FD of the family vs closed forms to 1e-6
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (KernelId id : {KernelId{-1, 1}, KernelId{-1, 2}, KernelId{2, 1}, KernelId{2, 2},
                        KernelId{1, 1}, KernelId{1, 2}, KernelId{0, 1}, KernelId{0, 2}}) {
        double worst = 0;
        for (int i = 0; i < 30; ++i) {
            const PlanePoint z{U(rng), U(rng)};
            const Vec3 coarse = kernel_from_family(id, z, 2e-4);
            const Vec3 fine = kernel_from_family(id, z, 1e-4);
            const Vec3 rich = (1.0 / 3.0) * (4.0 * fine - coarse);
            worst = std::max(worst, norm_inf(rich - kernel_eval(id, z)));
        }
        INFO("kernel (" << id.k << "," << id.j << ")");
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("kernel gradients match finite differences") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (KernelId id : kAllKernels) {
        double worst = 0;
        for (int i = 0; i < 25; ++i) {
            const PlanePoint z{U(rng), U(rng)};
            const MapSample s = kernel_grad(id, z);
            CHECK(norm_inf(s.value - kernel_eval(id, z)) < 1e-13);
            const double h = 1e-5;
            const Vec3 fdx = (0.5 / h) * (kernel_eval(id, {z.x + h, z.y}) - kernel_eval(id, {z.x - h, z.y}));
            const Vec3 fdy = (0.5 / h) * (kernel_eval(id, {z.x, z.y + h}) - kernel_eval(id, {z.x, z.y - h}));
            worst = std::max({worst, norm_inf(s.grad_x - fdx), norm_inf(s.grad_y - fdy)});
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("kernel annihilation on a grid") {
    // includes the three extra translation kernels
    double worst = 0;
    for (int gi = 0; gi < 30; ++gi)
        for (int gj = 0; gj < 30; ++gj) {
            const PlanePoint z{-2.0 + 4.0 * gi / 29.0, -2.0 + 4.0 * gj / 29.0};
            for (KernelId id : kAllKernels) {
                auto v = [&](PlanePoint p) { return kernel_eval(id, p); };
                worst = std::max(worst, norm(linearized_apply(v, z, 1e-3)));
            }
            for (int e = 1; e <= 3; ++e) {
                auto v = [&](PlanePoint p) { return extra_kernel_eval(e, p); };
                worst = std::max(worst, norm(linearized_apply(v, z, 1e-3)));
            }
        }
    CHECK(worst <= 1e-4);
}

TEST_CASE("L_W applied to the bubble itself") {
    // L_W[W] = Delta W - 4 W_x ^ W_y = -2 W_x ^ W_y
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    double worst = 0;
    for (int i = 0; i < 60; ++i) {
        const PlanePoint z{U(rng), U(rng)};
        auto v = [](PlanePoint p) { return bubble_w(p); };
        const Vec3 lw = linearized_apply(v, z, 1e-3);
        const Vec3 expected = -2.0 * appendixB_oracle("delta_cross", z);
        worst = std::max(worst, norm(lw - expected));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("kernel boundedness far out") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double sup = 0;
    for (int i = 0; i < 2000; ++i) {
        const double r = std::exp(std::log(1e3) * std::abs(U(rng)));
        const double t = M_PI * U(rng);
        const PlanePoint z{r * std::cos(t), r * std::sin(t)};
        for (KernelId id : kAllKernels) sup = std::max(sup, norm_inf(kernel_eval(id, z)));
    }
    CHECK(std::isfinite(sup));
    CHECK(sup <= 10.0);
}

TEST_CASE("second-order kernels") {
    using Fam = SecondOrderKernelId::Family;
    const PlanePoint z{0.4, 0.1};

    SECTION("mixed partials commute") {
        const Vec3 v12 = second_order_kernel({Fam::aa, 1, 2}, z);
        const Vec3 v21 = second_order_kernel({Fam::aa, 2, 1}, z);
        CHECK(norm_inf(v12 - v21) <= 1e-6);
    }

    SECTION("finite at the origin and matching the refined FD") {
        const Vec3 a = second_order_kernel({Fam::aa, 1, 1}, {0, 0});
        CHECK(std::isfinite(norm(a)));
        CHECK(norm_inf(a - second_order_kernel_analytic({Fam::aa, 1, 1}, {0, 0})) <= 1e-6);
    }

    SECTION("FD route matches the analytic route everywhere sampled") {
        std::mt19937_64 rng(53);
        std::uniform_real_distribution<double> U(-1.5, 1.5);
        for (Fam fam : {Fam::aa, Fam::ap, Fam::pp})
            for (int j = 1; j <= 2; ++j)
                for (int k = 1; k <= 2; ++k) {
                    double worst = 0;
                    for (int i = 0; i < 10; ++i) {
                        const PlanePoint p{U(rng), U(rng)};
                        worst = std::max(worst,
                                         norm_inf(second_order_kernel({fam, j, k}, p)
                                                  - second_order_kernel_analytic({fam, j, k}, p)));
                    }
                    CHECK(worst <= 1e-6);
                }
    }

    SECTION("second-order gradients match FD of the analytic kernels") {
        std::mt19937_64 rng(59);
        std::uniform_real_distribution<double> U(-1.2, 1.2);
        for (Fam fam : {Fam::aa, Fam::ap, Fam::pp}) {
            double worst = 0;
            for (int i = 0; i < 10; ++i) {
                const PlanePoint p{U(rng), U(rng)};
                const SecondOrderKernelId id{fam, 1, 2};
                const MapSample s = second_order_kernel_grad(id, p);
                const double h = 1e-5;
                auto ev = [&](PlanePoint q) { return second_order_kernel_analytic(id, q); };
                const Vec3 fdx = (0.5 / h) * (ev({p.x + h, p.y}) - ev({p.x - h, p.y}));
                const Vec3 fdy = (0.5 / h) * (ev({p.x, p.y + h}) - ev({p.x, p.y - h}));
                worst = std::max({worst, norm_inf(s.grad_x - fdx), norm_inf(s.grad_y - fdy)});
            }
            CHECK(worst <= 1e-7);
        }
    }
}
