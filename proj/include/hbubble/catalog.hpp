#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "hbubble/errors.hpp"
#include "hbubble/kernels.hpp"

namespace hbubble {

// Closed-form derivative/cross-product identities around the canonical
// bubble. `appendixB_oracle` evaluates the printed closed forms verbatim;
// `appendixB_reconstruct` rebuilds the same combination from the analytic
// kernel derivatives, so the two routes stay independent.

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "delta_x", "delta_y", "delta_cross",
        "expansion6-1", "J9-a2", "A26-5", "A26-6",
        "M28a1-1", "M28a1-2", "M28a2-1", "M28a2-2",
        "M30p1-1", "M30p1-2", "M30p2-1", "M30p2-2",
        "M27-2", "M27-3", "M2-p1p1", "M2-p2p2",
        "Ma30-a1a2", "A27-a1p1", "A27-a2p1", "A27-a1p2", "A27-a2p2", "M2-p1p2",
        "D31-1", "D31-2", "D31-3", "D27-1", "D27-4", "D27-5", "D31-6"};
    return names;
}

inline Vec3 appendixB_oracle(std::string_view name, PlanePoint zp) {
    const double x = zp.x, y = zp.y;
    const double r2 = x * x + y * y;
    const double az = r2 * r2 + 1.0;
    const double az2 = az * az, az3 = az2 * az, az4 = az3 * az, az5 = az4 * az;
    const double x2 = x * x, y2 = y * y;
    const double x4 = x2 * x2, y4 = y2 * y2;
    const double x6 = x4 * x2, y6 = y4 * y2;
    const double x8 = x4 * x4, y8 = y4 * y4;
    const double x10 = x8 * x2, y10 = y8 * y2;
    const double x12 = x8 * x4, y12 = y8 * y4;

    if (name == "delta_x")
        return {4 * x * (-x4 + 2 * x2 * y2 + 3 * y4 + 1) / az2,
                4 * y * (-3 * x4 - 2 * x2 * y2 + y4 + 1) / az2,
                8 * x * r2 / az2};
    if (name == "delta_y")
        return {4 * y * (-3 * x4 - 2 * x2 * y2 + y4 - 1) / az2,
                4 * x * (x4 - 2 * x2 * y2 - 3 * y4 + 1) / az2,
                8 * y * r2 / az2};
    if (name == "delta_cross")
        return {-32 * (x4 - y4) / az3, -64 * x * y * r2 / az3, 16 * (1 - r2 * r2) * r2 / az3};
    if (name == "expansion6-1")
        return {128 * x * r2 * (x2 * (r2 * r2 - 2) + 3 * y2) / az4,
                64 * y * r2 * (3 * x6 + 7 * x4 * y2 + x2 * (5 * y4 - 9) + y6 + y2) / az4,
                32 * x * r2 * (std::pow(r2, 4) - 8 * r2 * r2 + 3) / az4};
    if (name == "J9-a2")
        return {-128 * y * r2 * ((x4 - 2) * y2 + 2 * x2 * y4 + 3 * x2 + y6) / az4,
                64 * x * r2 * (x6 + 5 * x4 * y2 + x2 * (7 * y4 + 1) + 3 * y2 * (y4 - 3)) / az4,
                32 * y * r2 * (std::pow(r2, 4) - 8 * r2 * r2 + 3) / az4};
    if (name == "A26-5")
        return {32 * r2 * (5 * x4 - 14 * x2 * y2 + 5 * y4 - 1) / az4,
                384 * x * y * (x4 - y4) / az4,
                64 * (x - y) * (x + y) * r2 * (r2 * r2 - 2) / az4};
    if (name == "A26-6")
        return {384 * x * y * (x4 - y4) / az4,
                -32 * r2 * (x4 - 22 * x2 * y2 + y4 + 1) / az4,
                128 * x * y * r2 * (r2 * r2 - 2) / az4};
    if (name == "M28a1-1")
        return {4 * (x - y) * (x + y) * (r2 * (x6 + 3 * x4 * y2 + 3 * x2 * (y4 - 4) + y6 + 4 * y2) + 3) / az3,
                8 * x * y * (r2 * (x6 + 3 * x4 * y2 + 3 * x2 * (y4 - 4) + y6 + 4 * y2) + 3) / az3,
                -8 * r2 * (3 * x6 + 5 * x4 * y2 + x2 * (y4 - 5) - y2 * (y4 + 1)) / az3};
    if (name == "M28a1-2")
        return {8 * x * y * (r2 * (3 * (x4 + 2) * y2 + 3 * x2 * y4 + x2 * (x4 - 10) + y6) - 3) / az3,
                4 * (2 * (x4 - 1) * y6 + 3 * x2 * y8 - 3 * (x8 + 10 * x4 + 1) * y2
                     - 2 * x2 * (x4 + 17) * y4 + x2 * (-x8 + 2 * x4 + 3) + y10) / az3,
                -32 * x * y * r2 * (r2 * r2 - 1) / az3};
    if (name == "M28a2-1")
        return {-8 * x * y * (r2 * (x6 + 3 * x4 * y2 + 3 * x2 * (y4 + 2) + y6 - 10 * y2) - 3) / az3,
                4 * (x10 + 3 * x8 * y2 + 2 * x6 * (y4 - 1) - 2 * x4 * y2 * (y4 + 17)
                     - 3 * x2 * (y8 + 10 * y4 + 1) + y2 * (-y8 + 2 * y4 + 3)) / az3,
                -32 * x * y * r2 * (r2 * r2 - 1) / az3};
    if (name == "M28a2-2")
        return {4 * (x - y) * (x + y) * (r2 * (3 * (x4 - 4) * y2 + 3 * x2 * y4 + x2 * (x4 + 4) + y6) + 3) / az3,
                8 * x * y * (r2 * (3 * (x4 - 4) * y2 + 3 * x2 * y4 + x2 * (x4 + 4) + y6) + 3) / az3,
                8 * r2 * (x6 - x4 * y2 + x2 * (1 - 5 * y4) - 3 * y6 + 5 * y2) / az3};
    if (name == "M30p1-1")
        return {8 * x * (x6 - 9 * x4 * y2 - x2 * (5 * y4 + 3) + 5 * y6 + y2) / az3,
                8 * y * (5 * x6 - 5 * x4 * y2 - 3 * x2 * (3 * y4 + 1) + y6 + y2) / az3,
                8 * x * (-3 * x4 + 2 * x2 * y2 + 5 * y4 + 1) / az3};
    if (name == "M30p1-2")
        return {8 * y * (5 * x6 - 5 * x4 * y2 - 9 * x2 * y4 + x2 + y6 - 3 * y2) / az3,
                -8 * x * (x6 - 9 * x4 * y2 - 5 * x2 * y4 + x2 + 5 * y6 - 3 * y2) / az3,
                -8 * y * (5 * x4 + 2 * x2 * y2 - 3 * y4 + 1) / az3};
    if (name == "M30p2-1")
        return {8 * y * (5 * x6 - 5 * x4 * y2 - 3 * x2 * (3 * y4 + 1) + y6 + y2) / az3,
                -8 * x * (x6 - 9 * x4 * y2 + x2 * (1 - 5 * y4) + 5 * (y6 + y2)) / az3,
                8 * y * (-7 * x4 - 6 * x2 * y2 + y4 + 1) / az3};
    if (name == "M30p2-2")
        return {-8 * x * (x6 - 9 * x4 * y2 - 5 * x2 * y4 + x2 + 5 * y6 - 3 * y2) / az3,
                -8 * y * (5 * x6 - 5 * x4 * y2 + x2 * (5 - 9 * y4) + y6 + y2) / az3,
                8 * x * (x4 - 6 * x2 * y2 - 7 * y4 + 1) / az3};
    if (name == "M27-2")
        return {-32 * r2 * (r2 * r2 - 3)
                    * (3 * x8 + 10 * x6 * y2 + x4 * (12 * y4 - 5) + 6 * x2 * y2 * (y4 + 2) + y8 + y4) / az5,
                -64 * x * y * r2 * (r2 * r2 - 3) * (x6 + 3 * x4 * y2 + x2 * (3 * y4 - 7) + y6 + y2) / az5,
                -16 * r2 * r2 * (r2 * r2 - 3)
                    * (r2 * (x6 + 3 * x4 * y2 + 3 * x2 * (y4 - 4) + y6 + 4 * y2) + 3) / az5};
    if (name == "M27-3")
        return {32 * r2 * (x8 + (12 * x4 - 5) * y4 + x4 + 10 * x2 * y6 + 6 * (x4 + 2) * x2 * y2 + 3 * y8)
                    * (r2 * r2 - 3) / az5,
                -64 * x * y * r2 * (x6 + 3 * x4 * y2 + 3 * x2 * y4 + x2 + y6 - 7 * y2) * (r2 * r2 - 3) / az5,
                -16 * r2 * r2 * (r2 * r2 - 3)
                    * (r2 * (3 * (x4 - 4) * y2 + 3 * x2 * y4 + x2 * (x4 + 4) + y6) + 3) / az5};
    if (name == "M2-p1p1")
        return {-64 * (x - y) * (x + y) * r2 * (3 * x4 - 10 * x2 * y2 + 3 * y4 - 1) / az5,
                -128 * x * y * r2 * (5 * x4 - 6 * x2 * y2 + 5 * y4 + 1) / az5,
                -64 * r2 * (x8 + 4 * x6 * y2 + x4 * (6 * y4 - 3) + 2 * x2 * y2 * (2 * y4 + 5)
                            + y4 * (y4 - 3)) / az5};
    if (name == "M2-p2p2")
        return {-64 * (x - y) * (x + y) * r2 * (x4 + 18 * x2 * y2 + y4 + 1) / az5,
                128 * x * y * r2 * (x4 - 14 * x2 * y2 + y4 + 1) / az5,
                -64 * r2 * (x8 + 4 * x6 * y2 + x4 * (6 * y4 + 1) + 2 * x2 * y2 * (2 * y4 - 7) + y8 + y4) / az5};
    if (name == "Ma30-a1a2")
        return {512 * x * y * (x - y) * (x + y) * r2 * (r2 * r2 - 3) / az5,
                -128 * r2 * (r2 * r2 - 3)
                    * (x8 + 4 * x6 * y2 + x4 * (6 * y4 + 1) + x2 * (4 * y6 - 6 * y2) + y8 + y4) / az5,
                512 * x * y * r2 * r2 * r2 * (r2 * r2 - 3) / az5};
    if (name == "A27-a1p1") {
        const double f1 = -x12 - 2 * x10 * y2 + x8 * (5 * y4 + 9) + 20 * x6 * (y6 + y2)
                        + x4 * (25 * y8 + 6 * y4 - 6) + 2 * x2 * y6 * (7 * y4 - 6)
                        + y4 * (3 * y8 - 7 * y4 + 6);
        return {-32 * x * r2 * (9 * x8 - 8 * x6 * y2 - 2 * x4 * (23 * y4 + 10)
                               + 4 * x2 * y2 * (11 - 8 * y4) - 3 * y8 - 32 * y4 + 3) / az5,
                32 * y * r2 * (-23 * x8 + 2 * (5 * x4 + 1) * y4 + 38 * x4 + 24 * x2 * y6
                               - 8 * (4 * x4 + 7) * x2 * y2 + 5 * y8 - 3) / az5,
                64 * x * f1 / az5};
    }
    if (name == "A27-a2p1") {
        const double f2 = -(5 * x4 + 9) * y8 + 2 * x2 * y10 + (-25 * x8 - 6 * x4 + 6) * y4
                        + x4 * (-3 * x8 + 7 * x4 - 6) + 2 * x6 * (6 - 7 * x4) * y2
                        - 20 * x2 * (x4 + 1) * y6 + y12;
        return {32 * y * r2 * (3 * x8 + 32 * x6 * y2 + x4 * (46 * y4 + 32) + x2 * (8 * y6 - 44 * y2)
                              - 9 * y8 + 20 * y4 - 3) / az5,
                -32 * x * r2 * (5 * x8 + 24 * x6 * y2 + 2 * x4 * (5 * y4 + 1)
                               - 8 * x2 * y2 * (4 * y4 + 7) - 23 * y8 + 38 * y4 - 3) / az5,
                64 * y * f2 / az5};
    }
    if (name == "A27-a1p2")
        return {32 * y * r2 * (-27 * x8 + 2 * (2 - 7 * x4) * y4 + 40 * x4 + 8 * x2 * y6
                              - 4 * (12 * x4 + 13) * x2 * y2 + y8 + 3) / az5,
                32 * x * r2 * (5 * x8 - 10 * (7 * x4 + 1) * y4 + 2 * x4 - 48 * x2 * y6
                              + 8 * (11 - 3 * x4) * x2 * y2 - 7 * y8 - 3) / az5,
                64 * y * r2 * (-3 * x10 - 11 * x8 * y2 + x6 * (17 - 14 * y4) + x4 * y2 * (35 - 6 * y4)
                              + x2 * (y8 + 19 * y4 - 12) + y10 + y6) / az5};
    if (name == "A27-a2p2")
        return {-32 * x * r2 * (x8 + 8 * x6 * y2 + x4 * (4 - 14 * y4) - 4 * x2 * y2 * (12 * y4 + 13)
                               - 27 * y8 + 40 * y4 + 3) / az5,
                -32 * y * r2 * (7 * x8 + 48 * x6 * y2 + 10 * x4 * (7 * y4 + 1)
                               + 8 * x2 * y2 * (3 * y4 - 11) - 5 * y8 - 2 * y4 + 3) / az5,
                64 * x * r2 * (r2 * r2 * (x6 - x4 * y2 + x2 * (1 - 5 * y4) - 3 * y6 + 17 * y2)
                              - 12 * y2) / az5};
    if (name == "M2-p1p2")
        return {-256 * x * y * r2 * (3 * x4 - 10 * x2 * y2 + 3 * y4 - 1) / az5,
                128 * (x - y) * (x + y) * r2 * (x4 - 14 * x2 * y2 + y4 + 1) / az5,
                1024 * x * y * (x4 - y4) / az5};
    if (name == "D31-1") {
        const double f3 = x12 + 5 * x10 * y2 + x8 * (10 * y4 - 9) + 2 * x6 * y2 * (5 * y4 - 7)
                        + x4 * (5 * y8 + 6) + x2 * y2 * (y8 + 6 * y4 - 13) + y8 + y4;
        const double f4 = x10 + 5 * x8 * y2 + 2 * x6 * (5 * y4 - 8) + 2 * x4 * y2 * (5 * y4 - 18)
                        + x2 * (5 * y8 - 24 * y4 + 15) + y2 * (y4 - 5) * (y4 + 1);
        const double f5 = 16 * (-az4 + 11 * az3 + 2 * (24 * x2 * r2 - 11) * az2
                                - 12 * (18 * x2 * r2 - 1) * az + 192 * x2 * r2);
        return {-192 * r2 * f3 / az5, -192 * x * y * r2 * f4 / az5, f5 / az5};
    }
    if (name == "D31-2") {
        const double f6 = (5 * x8 + 6) * y4 + x8 + (10 * x4 - 9) * y8 + x4 + 5 * x2 * y10
                        + 2 * x2 * (5 * x4 - 7) * y6 + x2 * (x8 + 6 * x4 - 13) * y2 + y12;
        const double f7 = 2 * (5 * x4 - 8) * y6 + 5 * x2 * y8 + (5 * x8 - 24 * x4 + 15) * y2
                        + 2 * x2 * (5 * x4 - 18) * y4 + x2 * (x4 - 5) * (x4 + 1) + y10;
        const double f8 = (21 * x4 - 55) * y10 + 7 * x2 * y12 + (35 * x8 - 358 * x4 + 115) * y6
                        + x2 * (35 * x4 - 227) * y8 + (7 * x12 - 83 * x8 + 105 * x4 - 21) * y2
                        + x2 * (21 * x8 - 262 * x4 + 225) * y4
                        + x2 * (x4 + 1) * (x8 - 8 * x4 + 3) + y12 * y2;
        return {192 * r2 * f6 / az5, -192 * x * y * r2 * f7 / az5, -16 * r2 * f8 / az5};
    }
    if (name == "D31-3") {
        const double f9 = x12 + 6 * x10 * y2 + x8 * (15 * y4 - 2) + 4 * x6 * y2 * (5 * y4 - 8)
                        + 3 * x4 * (5 * y8 - 20 * y4 - 1) + 2 * x2 * y2 * (3 * y8 - 16 * y4 + 17)
                        + y4 * (y4 - 3) * (y4 + 1);
        return {768 * x * y * (x - y) * (x + y) * r2 * (3 * r2 * r2 - 5) / az5,
                -192 * r2 * f9 / az5,
                768 * x * y * r2 * ((2 * r2 * r2 - 5) * r2 * r2 + 1) / az5};
    }
    if (name == "D27-1")
        return {-96 * (x - y) * (x + y) * r2 * (5 * x4 - 22 * x2 * y2 + 5 * y4 - 3) / az5,
                -192 * x * y * r2 * (7 * x4 - 18 * x2 * y2 + 7 * y4 - 1) / az5,
                -32 * r2 * (5 * x8 - 4 * x6 * y2 - x4 * (18 * y4 + 17) + x2 * (38 * y2 - 4 * y6)
                           + 5 * y8 - 17 * y4 + 2) / az5};
    if (name == "D27-4")
        return {96 * (x - y) * (x + y) * r2 * (x4 - 30 * x2 * y2 + y4 + 1) / az5,
                192 * x * y * r2 * (3 * x4 - 26 * x2 * y2 + 3 * y4 + 3) / az5,
                32 * r2 * (x8 - (42 * x4 + 1) * y4 - x4 - 20 * x2 * y6 + 10 * (7 - 2 * x4) * x2 * y2
                          + y8 - 2) / az5};
    if (name == "D27-5")
        return {-384 * x * y * r2 * (7 * x4 - 18 * x2 * y2 + 7 * y4 - 1) / az5,
                192 * (x - y) * (x + y) * r2 * (x4 - 30 * x2 * y2 + y4 + 1) / az5,
                -768 * x * y * (x - y) * (x + y) * r2 * (r2 * r2 - 3) / az5};
    if (name == "D31-6")
        return {-192 * x * r2 * (5 * x8 + 4 * x6 * y2 - 10 * x4 * (y4 + 1) + 4 * x2 * y2 * (7 - 3 * y4)
                               - 3 * y4 * (y4 + 6) + 1) / az5,
                384 * y * r2 * (-5 * x8 - 10 * x6 * y2 + x4 * (11 - 4 * y4) + 2 * x2 * y2 * (y4 - 8)
                               + y8 + y4) / az5,
                -256 * x * r2 * (x10 + 4 * x8 * y2 + x6 * (6 * y4 - 7) + 4 * x4 * y2 * (y4 - 2)
                               + x2 * (y8 + 5 * y4 + 4) + 6 * y2 * (y4 - 1)) / az5};

    throw UnknownIdentity("appendixB_oracle: unknown identity '" + std::string(name) + "'");
}

/// Rebuild a catalog combination from analytic kernel/bubble derivatives.
/// Diagonal second-order kernels enter with the Taylor coefficient 1/2;
/// D31-6 pairs Z_{-1,1} with Z_{2,1}, i.e. the mixed a1-p1 kernel.
inline Vec3 appendixB_reconstruct(std::string_view name, PlanePoint z) {
    using Fam = SecondOrderKernelId::Family;
    auto kw = [&](KernelId a, KernelId b) { // (Za)_x ^ (Zb)_y + (Zb)_x ^ (Za)_y
        const MapSample sa = kernel_grad(a, z), sb = kernel_grad(b, z);
        return cross(sa.grad_x, sb.grad_y) + cross(sb.grad_x, sa.grad_y);
    };
    auto self = [&](KernelId a) {
        const MapSample s = kernel_grad(a, z);
        return cross(s.grad_x, s.grad_y);
    };
    auto dw = [&](KernelId a) { // (Za)_x ^ d_y + d_x ^ (Za)_y
        const MapSample s = kernel_grad(a, z), w = bubble_w_sample(z);
        return cross(s.grad_x, w.grad_y) + cross(w.grad_x, s.grad_y);
    };
    auto dso = [&](SecondOrderKernelId id, double scale) {
        const MapSample s = second_order_kernel_grad(id, z), w = bubble_w_sample(z);
        return scale * (cross(w.grad_x, s.grad_y) + cross(s.grad_x, w.grad_y));
    };
    const KernelId a1{-1, 1}, a2{-1, 2}, p1{2, 1}, p2{2, 2};

    if (name == "delta_x") return bubble_w_sample(z).grad_x;
    if (name == "delta_y") return bubble_w_sample(z).grad_y;
    if (name == "delta_cross") {
        const MapSample w = bubble_w_sample(z);
        return cross(w.grad_x, w.grad_y);
    }
    if (name == "expansion6-1") return dw(a1);
    if (name == "J9-a2") return dw(a2);
    if (name == "A26-5") return dw(p1);
    if (name == "A26-6") return dw(p2);
    if (name == "M28a1-1") return kernel_grad(a1, z).grad_x;
    if (name == "M28a1-2") return kernel_grad(a1, z).grad_y;
    if (name == "M28a2-1") return kernel_grad(a2, z).grad_x;
    if (name == "M28a2-2") return kernel_grad(a2, z).grad_y;
    if (name == "M30p1-1") return kernel_grad(p1, z).grad_x;
    if (name == "M30p1-2") return kernel_grad(p1, z).grad_y;
    if (name == "M30p2-1") return kernel_grad(p2, z).grad_x;
    if (name == "M30p2-2") return kernel_grad(p2, z).grad_y;
    if (name == "M27-2") return self(a1);
    if (name == "M27-3") return self(a2);
    if (name == "M2-p1p1") return self(p1);
    if (name == "M2-p2p2") return self(p2);
    if (name == "Ma30-a1a2") return kw(a1, a2);
    if (name == "A27-a1p1") return kw(a1, p1);
    if (name == "A27-a2p1") return kw(a2, p1);
    if (name == "A27-a1p2") return kw(a1, p2);
    if (name == "A27-a2p2") return kw(a2, p2);
    if (name == "M2-p1p2") return kw(p1, p2);
    if (name == "D31-1") return self(a1) + dso({Fam::aa, 1, 1}, 0.5);
    if (name == "D31-2") return self(a2) + dso({Fam::aa, 2, 2}, 0.5);
    if (name == "D31-3") return kw(a1, a2) + dso({Fam::aa, 1, 2}, 1.0);
    if (name == "D27-1") return self(p1) + dso({Fam::pp, 1, 1}, 0.5);
    if (name == "D27-4") return self(p2) + dso({Fam::pp, 2, 2}, 0.5);
    if (name == "D27-5") return kw(p1, p2) + dso({Fam::pp, 1, 2}, 1.0);
    if (name == "D31-6") return kw(a1, p1) + dso({Fam::ap, 1, 1}, 1.0);

    throw UnknownIdentity("appendixB_reconstruct: unknown identity '" + std::string(name) + "'");
}

} // namespace hbubble
