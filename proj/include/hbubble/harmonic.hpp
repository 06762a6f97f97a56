#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "hbubble/bubble.hpp"
#include "hbubble/errors.hpp"
#include "hbubble/fourier.hpp"
#include "hbubble/geometry.hpp"

namespace hbubble {

// ---------------------------------------------------------------------------
// closed-form harmonic extensions
//
// The boundary-value families pair into boundary traces of holomorphic
// functions once z-bar is eliminated through z-bar = 1/z on the circle:
//
//   h^(1)  pair:  z^2 / (1 - conj(xi) z)^2
//   h^(-1,1) pair: -2z / (1 - conj(xi) z),      h^(-1,2) pair = i * that
//   h^(2,1) pair: -z^4 / (1 - conj(xi) z)^4,    h^(2,2) pair = -i * that
//
// m-th z-derivatives stay closed form, which is what the reduced energy needs
// at (xi, omega) with omega != xi.

namespace pairext {

/// m-th z-derivative of z^2/(1-bz)^2, b = conj(xi); smooth at b = 0.
inline Complex h1(Complex z, Complex xi, int m = 0) {
    const Complex b = std::conj(xi);
    const Complex s = 1.0 - b * z;
    switch (m) {
        case 0: return z * z / (s * s);
        case 1: return 2.0 * z / (s * s * s);
        case 2: return (2.0 + 4.0 * b * z) / (s * s * s * s);
        case 3: return (12.0 * b + 12.0 * b * b * z) / std::pow(s, 5);
        default: throw OutOfRange("pairext::h1: derivative order not implemented");
    }
}

/// m-th z-derivative of -2z/(1-bz).
inline Complex hm1(Complex z, Complex xi, int m = 0) {
    const Complex b = std::conj(xi);
    const Complex s = 1.0 - b * z;
    switch (m) {
        case 0: return -2.0 * z / s;
        case 1: return -2.0 / (s * s);
        case 2: return -4.0 * b / (s * s * s);
        default: throw OutOfRange("pairext::hm1: derivative order not implemented");
    }
}

/// m-th z-derivative of -z^4/(1-bz)^4.
inline Complex h21(Complex z, Complex xi, int m = 0) {
    const Complex b = std::conj(xi);
    const Complex s = 1.0 - b * z;
    switch (m) {
        case 0: return -z * z * z * z / std::pow(s, 4);
        case 1: return -4.0 * z * z * z / std::pow(s, 5);
        default: throw OutOfRange("pairext::h21: derivative order not implemented");
    }
}

} // namespace pairext

/// Closed-form harmonic extension of the h-family boundary trace (third
/// component zero), exactly as displayed.
inline Vec3 closed_extension_h(PlanePoint zp, PlanePoint xip) {
    const double x = zp.x, y = zp.y, x1 = xip.x, x2 = xip.y;
    const double r2 = x * x + y * y;
    const double den = (x1 * x1 + x2 * x2) * r2 - 2 * x1 * x - 2 * x2 * y + 1;
    const double h1 = ((x1 - x2) * r2 - x + y) * ((x1 + x2) * r2 - x - y) / (den * den);
    const double h2 = 2 * (x1 * r2 - x) * (x2 * r2 - y) / (den * den);
    return {h1, h2, 0};
}

/// Closed-form harmonic extension of the boundary datum g~_rho.
inline Vec3 closed_extension_g_rho(PlanePoint zp, double rho) {
    const double x = zp.x, y = zp.y;
    const double r2 = x * x + y * y;
    const double den = rho * rho * r2 - 2 * rho * x + 1;
    return {2 * (rho * r2 - x + y) * (rho * r2 - x - y) / (den * den),
            4 * (x - rho * r2) * y / (den * den), 0};
}

/// Boundary datum of the per-bubble boundary function
/// g(., omega) = (2 h1^(1), 2 h2^(1), -2 eps h3^(1)).
inline BoundaryDatum g_datum(PlanePoint omega, double eps, std::size_t n = 2048) {
    if (omega.norm() >= 1.0) throw OutOfRange("g_datum: omega must be interior");
    if (eps < 0) throw OutOfRange("g_datum: eps must be >= 0");
    return BoundaryDatum(
        [omega, eps](double t) -> Vec3 {
            const double x = std::cos(t) - omega.x;
            const double y = std::sin(t) - omega.y;
            const double r2 = x * x + y * y;
            return {2 * (x * x - y * y) / (r2 * r2), 4 * x * y / (r2 * r2),
                    -2 * eps / (r2 * r2)};
        },
        n);
}

// ---------------------------------------------------------------------------
// Robin values: the tabulated closed forms

enum class RobinTag { h1, hm1_1, hm1_2, h2_1, h2_2 };

inline const char* to_string(RobinTag t) {
    switch (t) {
        case RobinTag::h1: return "h1";
        case RobinTag::hm1_1: return "hm1_1";
        case RobinTag::hm1_2: return "hm1_2";
        case RobinTag::h2_1: return "h2_1";
        case RobinTag::h2_2: return "h2_2";
    }
    return "?";
}

/// Tabulated Robin value/derivative at (xi, xi). Pairs the lemma omits raise
/// NotInTable; the dy^3 entry of h^(1) carries the sign fixed against the
/// Poisson-integral closed form.
inline double robin_closed(RobinTag tag, int comp, int jx, int jy, PlanePoint xi) {
    if (xi.norm() >= 1.0) throw OutOfRange("robin_closed: xi must be interior");
    const double x1 = xi.x, x2 = xi.y;
    const double s = xi.norm2();
    const double d = 1.0 - s;
    auto nope = [&]() -> double {
        throw NotInTable(std::string("robin_closed: no tabulated entry for tag ") + to_string(tag)
                         + " comp " + std::to_string(comp) + " beta (" + std::to_string(jx) + ","
                         + std::to_string(jy) + ")");
    };
    if (comp == 3) return nope();
    if (comp != 1 && comp != 2) throw OutOfRange("robin_closed: component must be 1..3");
    const int b = 10 * jx + jy;

    switch (tag) {
        case RobinTag::hm1_1:
            switch (b) {
                case 0: return comp == 1 ? -2 * x1 / d : -2 * x2 / d;
                case 10: return comp == 1 ? -2 / (d * d) : 0.0;
                case 1: return comp == 1 ? 0.0 : -2 / (d * d);
                case 20: return comp == 1 ? -4 * x1 / (d * d * d) : 4 * x2 / (d * d * d);
                case 2: return comp == 1 ? 4 * x1 / (d * d * d) : -4 * x2 / (d * d * d);
                default: return nope();
            }
        case RobinTag::hm1_2:
            switch (b) {
                case 0: return comp == 1 ? 2 * x2 / d : -2 * x1 / d;
                case 10: return comp == 1 ? 0.0 : -2 / (d * d);
                case 1: return comp == 1 ? 2 / (d * d) : 0.0;
                case 20: return comp == 1 ? -4 * x2 / (d * d * d) : -4 * x1 / (d * d * d);
                case 2: return comp == 1 ? 4 * x2 / (d * d * d) : 4 * x1 / (d * d * d);
                default: return nope();
            }
        case RobinTag::h1: {
            const double d3 = d * d * d, d4 = d3 * d, d5 = d4 * d, d6 = d5 * d, d8 = d6 * d * d;
            const double A1 = 1 + s;     // third order
            const double A2 = 3 + 2 * s; // fourth order
            switch (b) {
                case 0: return comp == 1 ? (x1 * x1 - x2 * x2) / (d * d) : 2 * x1 * x2 / (d * d);
                case 10: return comp == 1 ? 2 * x1 / d3 : 2 * x2 / d3;
                case 1: return comp == 1 ? -2 * x2 / d3 : 2 * x1 / d3;
                case 20: return comp == 1 ? 2 * (1 + 2 * s) / d4 : 0.0;
                case 11: return comp == 1 ? 0.0 : 2 * (1 + 2 * s) / d4;
                case 2: return comp == 1 ? -2 * (1 + 2 * s) / d4 : 0.0;
                case 30: return comp == 1 ? 12 * x1 * A1 / d5 : -12 * x2 * A1 / d5;
                case 21: return comp == 1 ? 12 * x2 * A1 / d5 : 12 * x1 * A1 / d5;
                case 12: return comp == 1 ? -12 * x1 * A1 / d5 : 12 * x2 * A1 / d5;
                case 3: return comp == 1 ? -12 * x2 * A1 / d5 : -12 * x1 * A1 / d5;
                case 40: return comp == 1 ? 24 * (x1 * x1 - x2 * x2) * A2 / d6
                                          : -48 * x1 * x2 * A2 / d6;
                case 31: return comp == 1 ? 48 * x1 * x2 * A2 / d6
                                          : 24 * (x1 * x1 - x2 * x2) * A2 / d6;
                case 22: return comp == 1 ? -24 * (x1 * x1 - x2 * x2) * A2 / d6
                                          : 48 * x1 * x2 * A2 / d6;
                case 13: return comp == 1 ? -48 * x1 * x2 * A2 / d6
                                          : -24 * (x1 * x1 - x2 * x2) * A2 / d6;
                case 4: return comp == 1 ? 24 * (x1 * x1 - x2 * x2) * A2 / d6
                                         : -48 * x1 * x2 * A2 / d6;
                case 60:
                    if (comp != 1) return nope();
                    return 720
                           * (2 * std::pow(x1, 6) + (5 - 10 * x2 * x2) * std::pow(x1, 4)
                              - 10 * x2 * x2 * (x2 * x2 + 3) * x1 * x1
                              + std::pow(x2, 4) * (2 * x2 * x2 + 5))
                           / d8;
                case 6:
                    if (comp != 1) return nope();
                    return -720
                           * (2 * std::pow(x1, 6) + (5 - 10 * x2 * x2) * std::pow(x1, 4)
                              - 10 * x2 * x2 * (x2 * x2 + 3) * x1 * x1
                              + std::pow(x2, 4) * (2 * x2 * x2 + 5))
                           / d8;
                default: return nope();
            }
        }
        case RobinTag::h2_1: {
            const double d5 = std::pow(d, 5), d8 = std::pow(d, 8);
            const double t = s - 1;
            const double A = 35 + 4 * t * t * t + 30 * t * t + 60 * t;
            switch (b) {
                case 10: return comp == 1 ? -4 * x1 * (x1 * x1 - 3 * x2 * x2) / d5
                                          : 4 * x2 * (-3 * x1 * x1 + x2 * x2) / d5;
                case 1: return comp == 1 ? -4 * x2 * (-3 * x1 * x1 + x2 * x2) / d5
                                         : -4 * x1 * (x1 * x1 - 3 * x2 * x2) / d5;
                case 40: return comp == 1 ? -24 * A / d8 : 0.0;
                case 4: return comp == 1 ? -24 * A / d8 : 0.0;
                default: return nope();
            }
        }
        case RobinTag::h2_2: {
            const double d5 = std::pow(d, 5), d8 = std::pow(d, 8);
            const double t = s - 1;
            const double A = 35 + 4 * t * t * t + 30 * t * t + 60 * t;
            switch (b) {
                case 10: return comp == 1 ? 4 * x2 * (-3 * x1 * x1 + x2 * x2) / d5
                                          : 4 * x1 * (x1 * x1 - 3 * x2 * x2) / d5;
                case 1: return comp == 1 ? -4 * x1 * (x1 * x1 - 3 * x2 * x2) / d5
                                         : 4 * x2 * (-3 * x1 * x1 + x2 * x2) / d5;
                case 40: return comp == 1 ? 0.0 : 24 * A / d8;
                case 4: return comp == 1 ? 0.0 : 24 * A / d8;
                default: return nope();
            }
        }
    }
    return nope();
}

// ---------------------------------------------------------------------------
// Robin values: spectral route (the Poisson-integral procedure)

namespace detail {

/// Boundary trace of a tag family at center xi, as a function of the angle.
inline Vec3 robin_datum(RobinTag tag, PlanePoint xi, double t) {
    const double x = std::cos(t) - xi.x;
    const double y = std::sin(t) - xi.y;
    const double r2 = x * x + y * y;
    switch (tag) {
        case RobinTag::h1:
            return {(x * x - y * y) / (r2 * r2), 2 * x * y / (r2 * r2), 1.0 / (r2 * r2)};
        case RobinTag::hm1_1:
            return {-2 * x / r2, -2 * y / r2, -4 * x / (r2 * r2)};
        case RobinTag::hm1_2:
            return {2 * y / r2, -2 * x / r2, -4 * y / (r2 * r2)};
        case RobinTag::h2_1: {
            const double q = r2 * r2 * r2 * r2;
            return {-(std::pow(x, 4) - 6 * x * x * y * y + std::pow(y, 4)) / q,
                    -4 * x * y * (x * x - y * y) / q, -2 * (x * x - y * y) / q};
        }
        case RobinTag::h2_2: {
            const double q = r2 * r2 * r2 * r2;
            return {-4 * x * y * (x * x - y * y) / q,
                    (std::pow(x, 4) - 6 * x * x * y * y + std::pow(y, 4)) / q,
                    -4 * x * y / q};
        }
    }
    return {};
}

/// Rotation phase of the (comp1, comp2) pair under xi -> e^{i t0} xi.
inline int pair_phase(RobinTag tag) {
    switch (tag) {
        case RobinTag::h1: return 2;
        case RobinTag::hm1_1:
        case RobinTag::hm1_2: return 1;
        case RobinTag::h2_1:
        case RobinTag::h2_2: return 4;
    }
    return 0;
}

struct PairSelection {
    RobinTag tag_a, tag_b; // pair = comp_a of tag_a + i comp_b of tag_b
    int comp_a, comp_b;
    int phase;
    bool take_real;
    bool scalar; // no imaginary partner
};

/// How a requested (tag, comp) embeds into a rotation-covariant complex pair.
inline PairSelection pair_for(RobinTag tag, int comp) {
    if (comp == 1 || comp == 2)
        return {tag, tag, 1, 2, pair_phase(tag), comp == 1, false};
    switch (tag) {
        case RobinTag::h1: return {tag, tag, 3, 3, 0, true, true};
        case RobinTag::hm1_1: return {RobinTag::hm1_1, RobinTag::hm1_2, 3, 3, 1, true, false};
        case RobinTag::hm1_2: return {RobinTag::hm1_1, RobinTag::hm1_2, 3, 3, 1, false, false};
        case RobinTag::h2_1: return {RobinTag::h2_1, RobinTag::h2_2, 3, 3, 2, true, false};
        case RobinTag::h2_2: return {RobinTag::h2_1, RobinTag::h2_2, 3, 3, 2, false, false};
    }
    throw OutOfRange("robin_numeric: component must be 1..3");
}

inline HarmonicScalar extend_component(RobinTag tag, PlanePoint xi, int comp, std::size_t n) {
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        samples[i] = robin_datum(tag, xi, t)[comp - 1];
    }
    return HarmonicScalar::fit(samples);
}

inline double robin_numeric_once(RobinTag tag, int comp, int jx, int jy, PlanePoint xi,
                                 std::size_t n) {
    const int m = jx + jy;
    if (m < 3) {
        // direct: extend at xi and differentiate termwise
        return extend_component(tag, xi, comp, n).deriv(jx, jy, xi.c());
    }
    // rotation reduction: move xi to the positive real axis, differentiate
    // there, map back through the pair structure
    const PairSelection sel = pair_for(tag, comp);
    const double r = xi.norm();
    const double t0 = (r > 0) ? std::atan2(xi.y, xi.x) : 0.0;
    const PlanePoint xi0{r, 0.0};
    const Complex gam =
        extend_component(sel.tag_a, xi0, sel.comp_a, n).holo_deriv(m, Complex(r, 0));
    const Complex gbm =
        sel.scalar ? Complex(0, 0)
                   : extend_component(sel.tag_b, xi0, sel.comp_b, n).holo_deriv(m, Complex(r, 0));
    const Complex A0 = 0.5 * (gam + Complex(0, 1) * gbm);
    const Complex C0 = 0.5 * (gam - Complex(0, 1) * gbm);
    const Complex irot = std::pow(Complex(0, 1), jy);
    const Complex back = std::polar(1.0, sel.phase * t0);
    const Complex down = std::polar(1.0, -static_cast<double>(m) * t0);
    const Complex val = back * (down * irot * A0 + std::conj(down * irot * C0));
    return sel.take_real ? val.real() : val.imag();
}

} // namespace detail

/// Spectral Robin value/derivative at z = xi; relative target 1e-6 for
/// |beta| <= 2 and 1e-3 above, enforced by doubling the truncation.
inline double robin_numeric(RobinTag tag, int comp, int jx, int jy, PlanePoint xi,
                            std::size_t n = 2048) {
    if (1.0 - xi.norm() < 1e-2)
        throw NearBoundary("robin_numeric: 1 - |xi| < 1e-2, spectral truncation insufficient");
    if (jx + jy > 6) throw OutOfRange("robin_numeric: |beta| <= 6");
    const double v1 = detail::robin_numeric_once(tag, comp, jx, jy, xi, n);
    const double v2 = detail::robin_numeric_once(tag, comp, jx, jy, xi, 2 * n);
    const double target = (jx + jy <= 2) ? 1e-6 : 1e-3;
    if (std::abs(v1 - v2) > target * std::max(1.0, std::abs(v2)))
        throw TruncationNotConverged("robin_numeric: doubling N moved the value beyond target");
    return v2;
}

// ---------------------------------------------------------------------------
// projection of a bubble onto zero boundary values

/// P delta = delta - phi with phi the harmonic extension of the boundary
/// trace; the evaluator keeps analytic bubble gradients and term-wise
/// differentiated spectral gradients for phi.
class ProjectedBubble {
public:
    ProjectedBubble(const BubbleParams& prm, std::size_t n = 2048) : prm_(prm) {
        if (1.0 - prm.xi.norm() < 1e-2)
            throw NearBoundary("project_bubble: 1 - |xi| < 1e-2");
        phi_ = poisson_extend(BoundaryDatum(
            [&prm](double t) { return bubble_eval(prm, {std::cos(t), std::sin(t)}); }, n));
    }

    const BubbleParams& params() const { return prm_; }
    const HarmonicField& phi() const { return phi_; }

    Vec3 value(PlanePoint z) const { return bubble_eval(prm_, z) - phi_.value(z.c()); }

    MapSample sample(PlanePoint z) const {
        const MapSample b = bubble_grad(prm_, z);
        MapSample s;
        s.value = b.value - phi_.value(z.c());
        s.grad_x = b.grad_x - phi_.deriv(1, 0, z.c());
        s.grad_y = b.grad_y - phi_.deriv(0, 1, z.c());
        return s;
    }

private:
    BubbleParams prm_;
    HarmonicField phi_;
};

inline ProjectedBubble project_bubble(const BubbleParams& prm, std::size_t n = 2048) {
    return ProjectedBubble(prm, n);
}

} // namespace hbubble
