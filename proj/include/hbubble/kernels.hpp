#pragma once

#include <cmath>
#include <functional>

#include "hbubble/bubble.hpp"
#include "hbubble/errors.hpp"
#include "hbubble/geometry.hpp"

namespace hbubble {

/// Index of a first-order kernel Z_{k,j}: k is the Fourier mode, j picks one
/// of the two independent kernels of the mode.
struct KernelId {
    int k = 0; // in {-2,-1,0,1,2}
    int j = 1; // in {1,2}

    bool valid() const { return k >= -2 && k <= 2 && (j == 1 || j == 2); }
};

inline const KernelId kAllKernels[10] = {
    {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 1}, {2, 2}, {-1, 1}, {-1, 2}, {-2, 1}, {-2, 2}};

/// Closed-form kernel values.
inline Vec3 kernel_eval(KernelId id, PlanePoint zp) {
    if (!id.valid()) throw OutOfRange("kernel_eval: invalid kernel index");
    const double x = zp.x, y = zp.y;
    const double r2 = x * x + y * y;
    const double D = r2 * r2 + 1.0;
    const double D2 = D * D;
    switch (id.k * 10 + id.j) {
        case 1: // Z_{0,1}
            return {4 * (x - y) * (x + y) * (r2 - 1) * (r2 + 1) / D2,
                    8 * x * y * (r2 * r2 - 1) / D2,
                    -8 * r2 * r2 / D2};
        case 2: // Z_{0,2}
            return {-4 * x * y / D, 2 * (x - y) * (x + y) / D, 0};
        case 11: // Z_{1,1}
            return {4 * x * (std::pow(x, 4) - 2 * x * x * y * y - 3 * std::pow(y, 4) - 1) / D2,
                    -4 * y * (-3 * std::pow(x, 4) - 2 * x * x * y * y + std::pow(y, 4) + 1) / D2,
                    -8 * x * r2 / D2};
        case 12: // Z_{1,2}
            return {4 * y * (3 * std::pow(x, 4) + 2 * x * x * y * y - std::pow(y, 4) + 1) / D2,
                    -4 * x * (std::pow(x, 4) - 2 * x * x * y * y - 3 * std::pow(y, 4) + 1) / D2,
                    -8 * y * r2 / D2};
        case 21: // Z_{2,1}
            return {-2 * (std::pow(x, 4) - 6 * x * x * y * y + std::pow(y, 4) - 1) / D2,
                    -8 * x * y * (x - y) * (x + y) / D2,
                    4 * (x - y) * (x + y) / D2};
        case 22: // Z_{2,2}
            return {-8 * x * y * (x - y) * (x + y) / D2,
                    2 * (std::pow(x, 4) - 6 * x * x * y * y + std::pow(y, 4) + 1) / D2,
                    8 * x * y / D2};
        case -9: // Z_{-1,1}
            return {-4 * x * (3 * (std::pow(x, 4) + 1) * y * y + 3 * x * x * std::pow(y, 4)
                              + x * x * (std::pow(x, 4) - 1) + std::pow(y, 6)) / D2,
                    -4 * y * (std::pow(x, 6) + 3 * std::pow(x, 4) * y * y
                              + 3 * x * x * (std::pow(y, 4) - 1) + std::pow(y, 6) + y * y) / D2,
                    8 * x * r2 * r2 / D2};
        case -8: // Z_{-1,2}
            return {4 * y * (std::pow(x, 6) + 3 * std::pow(x, 4) * y * y
                             + 3 * x * x * (std::pow(y, 4) + 1) + std::pow(y, 6) - y * y) / D2,
                    -4 * x * (std::pow(x, 6) + 3 * std::pow(x, 4) * y * y + 3 * x * x * std::pow(y, 4)
                              + x * x + std::pow(y, 6) - 3 * y * y) / D2,
                    8 * y * r2 * r2 / D2};
        case -19: // Z_{-2,1}
            return {0, -(r2 * r2 - 1) / D, 4 * x * y / D};
        case -18: // Z_{-2,2}
            return {-(r2 * r2 - 1) / D, 0, 2 * (x - y) * (x + y) / D};
    }
    throw OutOfRange("kernel_eval: invalid kernel index");
}

/// The three extra bounded kernels of the linearization (target translations).
inline Vec3 extra_kernel_eval(int index, PlanePoint zp) {
    const double x = zp.x, y = zp.y;
    const double r2 = x * x + y * y;
    const double D = r2 * r2 + 1.0;
    const double D2 = D * D;
    const double s = r2 * r2 - 1.0;
    switch (index) {
        case 1:
            return {2 * (x * x - y * y) * s / D2, 4 * x * y * s / D2, s * s / D2};
        case 2:
            return {2 * (x * x - y * y) * (x * x - y * y) / D2,
                    4 * x * y * (x * x - y * y) / D2,
                    (x * x - y * y) * s / D2};
        case 3:
            return {4 * x * y * (x * x - y * y) / D2, 8 * x * x * y * y / D2, 2 * x * y * s / D2};
    }
    throw OutOfRange("extra_kernel_eval: index must be 1..3");
}

// ---------------------------------------------------------------------------
// analytic route: every eta-type kernel is dpi(z^2)[eta(z)] for a polynomial
// direction field eta; rotation kernels are linear in the bubble components.

namespace detail {

/// Complex direction of a kernel (nullopt-style flag via valid), plus its
/// z-derivative, so kernel gradients come out of the pi jet exactly.
struct KernelEta {
    bool is_eta = false;
    Complex eta, eta_prime; // eta(z) and d eta/dz
};

inline KernelEta kernel_eta(KernelId id, Complex z) {
    KernelEta r;
    r.is_eta = true;
    switch (id.k * 10 + id.j) {
        case 1: r.eta = -2.0 * z * z;       r.eta_prime = -4.0 * z; break;
        case 11: r.eta = -2.0 * z;          r.eta_prime = -2.0; break;
        case 12: r.eta = Complex(0, -2) * z; r.eta_prime = Complex(0, -2); break;
        case 21: r.eta = 1.0;               r.eta_prime = 0.0; break;
        case 22: r.eta = Complex(0, 1);     r.eta_prime = 0.0; break;
        case -9: r.eta = 2.0 * z * z * z;   r.eta_prime = 6.0 * z * z; break;
        case -8: r.eta = Complex(0, -2) * z * z * z; r.eta_prime = Complex(0, -6) * z * z; break;
        default: r.is_eta = false; break;
    }
    return r;
}

} // namespace detail

/// Analytic partial derivatives of a first-order kernel.
inline MapSample kernel_grad(KernelId id, PlanePoint zp) {
    const Complex z = zp.c();
    const auto eta = detail::kernel_eta(id, z);
    if (eta.is_eta) {
        const auto jet = PiJet::at(z * z, 2);
        const Complex zx = 2.0 * z;            // d(z^2)/dx
        const Complex zy = Complex(0, 2) * z;  // d(z^2)/dy
        MapSample s;
        s.value = jet.d1(eta.eta);
        s.grad_x = jet.d2(zx, eta.eta) + jet.d1(eta.eta_prime);
        s.grad_y = jet.d2(zy, eta.eta) + jet.d1(Complex(0, 1) * eta.eta_prime);
        return s;
    }
    // rotation kernels: componentwise in the canonical bubble
    const MapSample w = bubble_w_sample(zp);
    auto mix = [&](auto pick) {
        MapSample s;
        s.value = pick(w.value);
        s.grad_x = pick(w.grad_x);
        s.grad_y = pick(w.grad_y);
        return s;
    };
    if (id.k == 0 && id.j == 2) return mix([](const Vec3& v) { return Vec3{-v.y, v.x, 0}; });
    if (id.k == -2 && id.j == 1) return mix([](const Vec3& v) { return Vec3{0, -v.z, v.y}; });
    if (id.k == -2 && id.j == 2) return mix([](const Vec3& v) { return Vec3{-v.z, 0, v.x}; });
    throw OutOfRange("kernel_grad: invalid kernel index");
}

// ---------------------------------------------------------------------------
// family-derivative route (finite differences of bubble_eval)

/// Central-difference derivative of the family along the parameter that the
/// kernel index names. Conventions fixed by FD agreement at the canonical
/// parameters: mode 0 uses mu * d/dmu at mu = 1 and the phi Euler angle, the
/// k = -2 pair uses theta and psi.
inline Vec3 kernel_from_family(KernelId id, PlanePoint z, double h = 1e-5) {
    auto eval = [&](const BubbleParams& p) { return bubble_eval(p, z); };
    BubbleParams plus, minus;
    switch (id.k * 10 + id.j) {
        case 1:  plus.mu = 1 + h; minus.mu = 1 - h; break;
        case 2:  plus.rot.phi = h; minus.rot.phi = -h; break;
        case 11: plus.xi.x = h; minus.xi.x = -h; break;
        case 12: plus.xi.y = h; minus.xi.y = -h; break;
        case 21: plus.p.x = h; minus.p.x = -h; break;
        case 22: plus.p.y = h; minus.p.y = -h; break;
        case -9: plus.a.x = h; minus.a.x = -h; break;
        case -8: plus.a.y = h; minus.a.y = -h; break;
        case -19: plus.rot.theta = M_PI / 2 + h; minus.rot.theta = M_PI / 2 - h; break;
        case -18: plus.rot.psi = h; minus.rot.psi = -h; break;
        default: throw OutOfRange("kernel_from_family: invalid kernel index");
    }
    return (0.5 / h) * (eval(plus) - eval(minus));
}

// ---------------------------------------------------------------------------
// second-order kernels

struct SecondOrderKernelId {
    enum class Family { aa, ap, pp };
    Family family = Family::aa;
    int j = 1;
    int k = 1;
};

namespace detail {

inline BubbleParams shifted(SecondOrderKernelId::Family fam, int idx, double step) {
    BubbleParams p;
    double& slot = (fam == SecondOrderKernelId::Family::pp)
                       ? (idx == 1 ? p.p.x : p.p.y)
                       : (idx == 1 ? p.a.x : p.a.y);
    slot = step;
    return p;
}

inline Vec3 so2_fd(SecondOrderKernelId id, PlanePoint z, double h) {
    using Fam = SecondOrderKernelId::Family;
    auto eval = [&](double s1, double s2) {
        BubbleParams p;
        if (id.family == Fam::aa) {
            (id.j == 1 ? p.a.x : p.a.y) += s1;
            (id.k == 1 ? p.a.x : p.a.y) += s2;
        } else if (id.family == Fam::pp) {
            (id.j == 1 ? p.p.x : p.p.y) += s1;
            (id.k == 1 ? p.p.x : p.p.y) += s2;
        } else { // ap: j indexes a, k indexes p
            (id.j == 1 ? p.a.x : p.a.y) += s1;
            (id.k == 1 ? p.p.x : p.p.y) += s2;
        }
        return bubble_eval(p, z);
    };
    const bool same = (id.family != Fam::ap) && id.j == id.k;
    if (same) {
        return (1.0 / (h * h)) * (eval(h, 0) - 2.0 * eval(0, 0) + eval(-h, 0));
    }
    return (0.25 / (h * h)) * (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h));
}

} // namespace detail

/// Mixed second parameter derivative of the family at the canonical point,
/// by central differences with one Richardson refinement.
inline Vec3 second_order_kernel(SecondOrderKernelId id, PlanePoint z, double h = 1e-3) {
    const Vec3 coarse = detail::so2_fd(id, z, h);
    const Vec3 fine = detail::so2_fd(id, z, h / 2);
    return (1.0 / 3.0) * (4.0 * fine - coarse);
}

/// Closed-form second-order kernels through the pi jet (cross-check route).
inline Vec3 second_order_kernel_analytic(SecondOrderKernelId id, PlanePoint zp) {
    using Fam = SecondOrderKernelId::Family;
    const Complex z = zp.c();
    const auto jet = PiJet::at(z * z, 2);
    const Complex ea[3] = {0.0, 2.0 * z * z * z, Complex(0, -2) * z * z * z};
    const Complex ep[3] = {0.0, 1.0, Complex(0, 1)};
    if (id.family == Fam::pp) return jet.d2(ep[id.j], ep[id.k]);
    if (id.family == Fam::ap) return jet.d2(ea[id.j], ep[id.k]);
    // aa: the argument is quadratic in a as well
    Complex faa = 6.0 * z * z * z * z;
    if (id.j != id.k) faa *= Complex(0, -1);
    else if (id.j == 2) faa *= -1.0;
    return jet.d2(ea[id.j], ea[id.k]) + jet.d1(faa);
}

/// Analytic gradients of the second-order kernels (needs the order-3 jet).
inline MapSample second_order_kernel_grad(SecondOrderKernelId id, PlanePoint zp) {
    using Fam = SecondOrderKernelId::Family;
    const Complex z = zp.c();
    const auto jet = PiJet::at(z * z, 3);
    const Complex zx = 2.0 * z, zy = Complex(0, 2) * z;

    Complex e1, e2, e1p, e2p, fc, fcp; // directions, their z-derivatives, dpi-correction
    const Complex z3 = z * z * z, z2 = z * z, z4 = z2 * z2;
    auto dir_a = [&](int j, Complex& e, Complex& ep_) {
        e = (j == 1 ? 2.0 * z3 : Complex(0, -2) * z3);
        ep_ = (j == 1 ? 6.0 * z2 : Complex(0, -6) * z2);
    };
    auto dir_p = [&](int j, Complex& e, Complex& ep_) {
        e = (j == 1 ? Complex(1, 0) : Complex(0, 1));
        ep_ = 0.0;
    };
    fc = fcp = 0.0;
    if (id.family == Fam::pp) {
        dir_p(id.j, e1, e1p);
        dir_p(id.k, e2, e2p);
    } else if (id.family == Fam::ap) {
        dir_a(id.j, e1, e1p);
        dir_p(id.k, e2, e2p);
    } else {
        dir_a(id.j, e1, e1p);
        dir_a(id.k, e2, e2p);
        fc = 6.0 * z4;
        fcp = 24.0 * z3;
        if (id.j != id.k) { fc *= Complex(0, -1); fcp *= Complex(0, -1); }
        else if (id.j == 2) { fc *= -1.0; fcp *= -1.0; }
    }

    MapSample s;
    s.value = jet.d2(e1, e2) + jet.d1(fc);
    s.grad_x = jet.d3(zx, e1, e2) + jet.d2(e1p, e2) + jet.d2(e1, e2p)
             + jet.d2(zx, fc) + jet.d1(fcp);
    s.grad_y = jet.d3(zy, e1, e2) + jet.d2(Complex(0, 1) * e1p, e2) + jet.d2(e1, Complex(0, 1) * e2p)
             + jet.d2(zy, fc) + jet.d1(Complex(0, 1) * fcp);
    return s;
}

// ---------------------------------------------------------------------------
// linearized operator around the canonical bubble

/// L_W[v] = Delta v - 2 W_x ^ v_y - 2 v_x ^ W_y, with a finite-difference
/// Laplacian of v and analytic gradients of W.
inline Vec3 linearized_apply(const std::function<Vec3(PlanePoint)>& v, PlanePoint z, double h) {
    const Vec3 c = v(z);
    const Vec3 xp = v({z.x + h, z.y}), xm = v({z.x - h, z.y});
    const Vec3 yp = v({z.x, z.y + h}), ym = v({z.x, z.y - h});
    const Vec3 lap = (1.0 / (h * h)) * (xp + xm + yp + ym - 4.0 * c);
    const Vec3 vx = (0.5 / h) * (xp - xm);
    const Vec3 vy = (0.5 / h) * (yp - ym);
    const MapSample w = bubble_w_sample(z);
    return lap - 2.0 * cross(w.grad_x, vy) - 2.0 * cross(vx, w.grad_y);
}

} // namespace hbubble
