#pragma once

#include <cmath>
#include <functional>

#include "hbubble/errors.hpp"
#include "hbubble/geometry.hpp"
#include "hbubble/quadrature.hpp"

namespace hbubble {

/// Stereographic projection R^2 -> S^2.
inline Vec3 stereo(PlanePoint z) {
    const double s = 1.0 + z.x * z.x + z.y * z.y;
    return {2 * z.x / s, 2 * z.y / s, (z.x * z.x + z.y * z.y - 1) / s};
}

inline Vec3 stereo(Complex z) { return stereo(PlanePoint::from(z)); }

/// The canonical degree-2 bubble W(z) = stereo(z^2), written componentwise.
inline Vec3 bubble_w(PlanePoint z) {
    const double x = z.x, y = z.y;
    const double s = (x * x + y * y) * (x * x + y * y) + 1.0;
    return {2 * (x - y) * (x + y) / s, 4 * x * y / s, ((x * x + y * y) * (x * x + y * y) - 1) / s};
}

// ---------------------------------------------------------------------------
// derivatives of the stereographic projection at a point (u, v)
//
// Every partial is a polynomial numerator over D^k, D = 1 + u^2 + v^2.

struct PiJet {
    Vec3 pu, pv;                    // first order, / D^2
    Vec3 puu, puv, pvv;             // second order, / D^3
    Vec3 puuu, puuv, puvv, pvvv;    // third order, / D^4

    static PiJet at(Complex zeta, int order = 3) {
        const double u = zeta.real(), v = zeta.imag();
        const double u2 = u * u, v2 = v * v;
        const double D = 1 + u2 + v2;
        const double D2 = D * D, D3 = D2 * D, D4 = D3 * D;
        PiJet j;
        j.pu = {(-2 * u2 + 2 * v2 + 2) / D2, -4 * u * v / D2, 4 * u / D2};
        j.pv = {-4 * u * v / D2, (2 * u2 - 2 * v2 + 2) / D2, 4 * v / D2};
        if (order < 2) return j;
        j.puu = {u * (4 * u2 - 12 * v2 - 12) / D3, (12 * u2 * v - v * (4 * v2 + 4)) / D3,
                 (-12 * u2 + 4 * v2 + 4) / D3};
        j.puv = {(12 * u2 * v - v * (4 * v2 + 4)) / D3, u * (-4 * u2 + 12 * v2 - 4) / D3,
                 -16 * u * v / D3};
        j.pvv = {u * (-4 * u2 + 12 * v2 - 4) / D3, (-12 * u2 * v + v * (4 * v2 - 12)) / D3,
                 (4 * u2 - 12 * v2 + 4) / D3};
        if (order < 3) return j;
        j.puuu = {(u2 * (-12 * u2 + 72 * v2 + 72) + v2 * (-12 * v2 - 24) - 12) / D4,
                  u * (-48 * u2 * v + v * (48 * v2 + 48)) / D4,
                  u * (48 * u2 - 48 * v2 - 48) / D4};
        j.puuv = {u * (-48 * u2 * v + v * (48 * v2 + 48)) / D4,
                  (u2 * (12 * u2 - 72 * v2 + 8) + v2 * (12 * v2 + 8) - 4) / D4,
                  (80 * u2 * v - v * (16 * v2 + 16)) / D4};
        j.puvv = {(u2 * (12 * u2 - 72 * v2 + 8) + v2 * (12 * v2 + 8) - 4) / D4,
                  u * (48 * u2 * v + v * (48 - 48 * v2)) / D4,
                  u * (-16 * u2 + 80 * v2 - 16) / D4};
        j.pvvv = {u * (48 * u2 * v + v * (48 - 48 * v2)) / D4,
                  (u2 * (-12 * u2 + 72 * v2 - 24) + v2 * (72 - 12 * v2) - 12) / D4,
                  (-48 * u2 * v + v * (48 * v2 - 48)) / D4};
        return j;
    }

    Vec3 d1(Complex e) const { return pu * e.real() + pv * e.imag(); }

    Vec3 d2(Complex e1, Complex e2) const {
        return puu * (e1.real() * e2.real())
             + puv * (e1.real() * e2.imag() + e1.imag() * e2.real())
             + pvv * (e1.imag() * e2.imag());
    }

    Vec3 d3(Complex e1, Complex e2, Complex e3) const {
        const double a = e1.real(), b = e1.imag();
        const double c = e2.real(), d = e2.imag();
        const double e = e3.real(), f = e3.imag();
        return puuu * (a * c * e)
             + puuv * (a * c * f + a * d * e + b * c * e)
             + puvv * (a * d * f + b * c * f + b * d * e)
             + pvvv * (b * d * f);
    }
};

// ---------------------------------------------------------------------------
// the ten-parameter bubble family

/// Parameters of one bubble: scale mu, center xi, Moebius parameter a,
/// squared-argument shift p, target rotation.
struct BubbleParams {
    double mu = 1.0;
    PlanePoint xi{};
    PlanePoint a{};
    PlanePoint p{};
    RotationSO3 rot{};

    double d() const { return 1.0 - xi.norm2(); }
};

namespace detail {

/// The complex argument fed to the stereographic projection, plus its
/// z-derivative. w = (z - xi)/mu, the Moebius part uses the displayed
/// denominator (1 - 2 a.w + |a|^2 |w|^2)^2.
struct BubbleArg {
    Complex f;   // m^2 + p
    Complex fz;  // dF/dz (F is holomorphic in z)
};

inline BubbleArg bubble_arg(const BubbleParams& prm, PlanePoint z) {
    const Complex w = (z.c() - prm.xi.c()) / prm.mu;
    const Complex a = prm.a.c();
    const double w2 = std::norm(w);
    const double a2 = std::norm(a);
    const double den = 1.0 - 2.0 * (prm.a.x * w.real() + prm.a.y * w.imag()) + a2 * w2;
    if (std::abs(den) < 1e-300)
        throw DegenerateMoebius("bubble_eval: Moebius denominator vanished");
    const Complex num = w - a * w2;
    const Complex m = num / den;
    // den = |1 - conj(a) w|^2, so m = w / (1 - conj(a) w) and
    // dm/dw = 1 / (1 - conj(a) w)^2.
    const Complex one_minus = 1.0 - std::conj(a) * w;
    const Complex mprime = 1.0 / (one_minus * one_minus);
    BubbleArg r;
    r.f = m * m + prm.p.c();
    r.fz = 2.0 * m * mprime / prm.mu;
    return r;
}

} // namespace detail

/// Q delta_{mu,xi,a,p}(z); a unit vector for all admissible parameters.
inline Vec3 bubble_eval(const BubbleParams& prm, PlanePoint z) {
    const auto arg = detail::bubble_arg(prm, z);
    return prm.rot.matrix() * stereo(arg.f);
}

/// Same map through the alternate Moebius closed form w/(1 - conj(a) w);
/// kept as an independent route for cross-checks.
inline Vec3 bubble_eval_moebius_alt(const BubbleParams& prm, PlanePoint z) {
    const Complex w = (z.c() - prm.xi.c()) / prm.mu;
    const Complex one_minus = 1.0 - std::conj(prm.a.c()) * w;
    if (std::abs(one_minus) < 1e-150)
        throw DegenerateMoebius("bubble_eval_moebius_alt: pole of the reparameterization");
    const Complex m = w / one_minus;
    return prm.rot.matrix() * stereo(m * m + prm.p.c());
}

/// Value and analytic partial derivatives of the bubble at z.
inline MapSample bubble_grad(const BubbleParams& prm, PlanePoint z) {
    const auto arg = detail::bubble_arg(prm, z);
    const auto jet = PiJet::at(arg.f, 1);
    const Mat3 q = prm.rot.matrix();
    MapSample s;
    s.value = q * stereo(arg.f);
    s.grad_x = q * jet.d1(arg.fz);
    s.grad_y = q * jet.d1(Complex(0, 1) * arg.fz);
    return s;
}

/// Sample of the degree-1 bubble (the projection itself).
inline MapSample stereo_sample(PlanePoint z) {
    const auto jet = PiJet::at(z.c(), 1);
    MapSample s;
    s.value = stereo(z);
    s.grad_x = jet.d1(1.0);
    s.grad_y = jet.d1(Complex(0, 1));
    return s;
}

/// Sample of the canonical degree-2 bubble with analytic gradients.
inline MapSample bubble_w_sample(PlanePoint z) {
    const Complex zc = z.c();
    const auto jet = PiJet::at(zc * zc, 1);
    MapSample s;
    s.value = bubble_w(z);
    s.grad_x = jet.d1(2.0 * zc);
    s.grad_y = jet.d1(Complex(0, 2) * zc);
    return s;
}

// ---------------------------------------------------------------------------
// H-system diagnostics

/// Finite-difference residual  Delta u - 2 u_x ^ u_y  of the free H-system.
inline Vec3 hsystem_residual(const std::function<Vec3(PlanePoint)>& map, PlanePoint z, double h) {
    const Vec3 c = map(z);
    const Vec3 xp = map({z.x + h, z.y}), xm = map({z.x - h, z.y});
    const Vec3 yp = map({z.x, z.y + h}), ym = map({z.x, z.y - h});
    const Vec3 lap = (1.0 / (h * h)) * (xp + xm + yp + ym - 4.0 * c);
    const Vec3 ux = (0.5 / h) * (xp - xm);
    const Vec3 uy = (0.5 / h) * (yp - ym);
    return lap - 2.0 * cross(ux, uy);
}

/// Numerical degree (1/4pi) \int u . (u_y ^ u_x); the paper's ordering.
inline double degree_numeric(const std::function<MapSample(PlanePoint)>& map,
                             int n_radial = 200, int n_angular = 256) {
    auto run = [&](const QuadratureRule& rule) {
        return integrate(rule, [&](PlanePoint p) {
            const MapSample s = map(p);
            return dot(s.value, cross(s.grad_y, s.grad_x));
        }) / (4.0 * M_PI);
    };
    const double coarse = run(plane_rule(n_radial, n_angular));
    const double fine = run(plane_rule(2 * n_radial, 2 * n_angular));
    if (std::abs(fine - coarse) > 1e-3)
        throw QuadratureNotConverged("degree_numeric: successive resolutions differ by > 1e-3");
    return fine;
}

} // namespace hbubble
