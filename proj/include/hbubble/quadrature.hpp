#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hbubble/errors.hpp"
#include "hbubble/geometry.hpp"

namespace hbubble {

/// Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

struct QuadratureRule {
    enum class Domain { circle, disk, plane };

    Domain domain = Domain::disk;
    std::vector<PlanePoint> nodes;
    std::vector<double> weights;

    // zone structure when bubble-adapted
    bool adapted = false;
    PlanePoint inner_center{};
    double inner_radius = 0;
    double rescale_mu = 0;

    std::size_t size() const { return nodes.size(); }
};

namespace detail {

/// Deterministic pairwise summation; the result does not depend on thread count.
inline double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(data, h) + pairwise_sum(data + h, n - h);
}

} // namespace detail

template <typename F>
double integrate(const QuadratureRule& rule, F&& f) {
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
        terms[i] = rule.weights[i] * f(rule.nodes[i]);
    return detail::pairwise_sum(terms.data(), terms.size());
}

/// Equispaced boundary rule on the unit circle (trapezoid; spectral for periodic data).
inline QuadratureRule circle_rule(int n) {
    QuadratureRule r;
    r.domain = QuadratureRule::Domain::circle;
    r.nodes.reserve(n);
    r.weights.assign(n, 2.0 * M_PI / n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        r.nodes.push_back({std::cos(t), std::sin(t)});
    }
    return r;
}

struct DiskAdaptation {
    PlanePoint xi;
    double mu;
};

/// Tensor rule on the unit disk: Gauss-Legendre in r (with r dr) x trapezoid in angle.
///
/// With `adapt` the disk splits into B(xi, r_in), integrated in coordinates
/// rescaled by mu, plus the complement in polar coordinates centered at xi with
/// angle-dependent outer radius clipped to the unit circle.
inline QuadratureRule disk_rule(int n_radial, int n_angular,
                                std::optional<DiskAdaptation> adapt = std::nullopt) {
    QuadratureRule r;
    r.domain = QuadratureRule::Domain::disk;

    std::vector<double> gx, gw;
    gauss_legendre(n_radial, gx, gw);

    if (!adapt) {
        for (int i = 0; i < n_radial; ++i) {
            const double rr = 0.5 * (gx[i] + 1.0);
            const double wr = 0.5 * gw[i] * rr; // jacobian r
            for (int j = 0; j < n_angular; ++j) {
                const double t = 2.0 * M_PI * j / n_angular;
                r.nodes.push_back({rr * std::cos(t), rr * std::sin(t)});
                r.weights.push_back(wr * 2.0 * M_PI / n_angular);
            }
        }
        return r;
    }

    const PlanePoint xi = adapt->xi;
    const double mu = adapt->mu;
    if (xi.norm() >= 1.0)
        throw InvalidAdaptation("disk_rule: adaptation center must be interior");
    const double d = 1.0 - xi.norm2();
    double r_in = std::min(std::sqrt(std::abs(mu)), 0.5 * d);
    // keep the inner ball strictly inside the disk
    r_in = std::min(r_in, 0.9 * (1.0 - xi.norm()));

    r.adapted = true;
    r.inner_center = xi;
    r.inner_radius = r_in;
    r.rescale_mu = mu;

    // inner zone, rescaled coordinates w = (z - xi)/mu
    const double w_max = r_in / mu;
    for (int i = 0; i < n_radial; ++i) {
        const double rw = 0.5 * (gx[i] + 1.0) * w_max;
        const double wr = 0.5 * w_max * gw[i] * rw * mu * mu; // dz = mu^2 dw
        for (int j = 0; j < n_angular; ++j) {
            const double t = 2.0 * M_PI * j / n_angular;
            r.nodes.push_back({xi.x + mu * rw * std::cos(t), xi.y + mu * rw * std::sin(t)});
            r.weights.push_back(wr * 2.0 * M_PI / n_angular);
        }
    }

    // complement in polar coordinates centered at xi, radius r_in .. R(theta)
    for (int j = 0; j < n_angular; ++j) {
        const double t = 2.0 * M_PI * j / n_angular;
        const double ex = std::cos(t), ey = std::sin(t);
        const double b = xi.x * ex + xi.y * ey;
        const double rmax = -b + std::sqrt(b * b + 1.0 - xi.norm2());
        for (int i = 0; i < n_radial; ++i) {
            const double rr = r_in + 0.5 * (gx[i] + 1.0) * (rmax - r_in);
            const double wr = 0.5 * (rmax - r_in) * gw[i] * rr;
            r.nodes.push_back({xi.x + rr * ex, xi.y + rr * ey});
            r.weights.push_back(wr * 2.0 * M_PI / n_angular);
        }
    }
    return r;
}

/// Compactified rule on the plane: r = tan(pi u / 2), u in (0,1).
inline QuadratureRule plane_rule(int n_radial, int n_angular) {
    QuadratureRule r;
    r.domain = QuadratureRule::Domain::plane;

    std::vector<double> gx, gw;
    gauss_legendre(n_radial, gx, gw);

    for (int i = 0; i < n_radial; ++i) {
        const double uu = 0.5 * (gx[i] + 1.0);
        const double rr = std::tan(0.5 * M_PI * uu);
        const double drdu = 0.5 * M_PI * (1.0 + rr * rr);
        const double wr = 0.5 * gw[i] * drdu * rr;
        for (int j = 0; j < n_angular; ++j) {
            const double t = 2.0 * M_PI * j / n_angular;
            r.nodes.push_back({rr * std::cos(t), rr * std::sin(t)});
            r.weights.push_back(wr * 2.0 * M_PI / n_angular);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// verification suite for the closed-form plane integrals

struct IdentityRecord {
    std::string id;
    double exact = 0;
    double computed = 0;
    double abs_err = 0;
    double rel_err = 0;
    std::size_t nodes_used = 0;
};

inline const std::vector<std::pair<std::string, std::function<double(PlanePoint)>>>&
identity_integrands() {
    auto q = [](PlanePoint p) { return p.norm2(); };
    static const std::vector<std::pair<std::string, std::function<double(PlanePoint)>>> v = {
        {"(x2-y2)(x4-y4)/(1+|z|4)^4",
         [q](PlanePoint p) {
             double s = q(p);
             return (p.x * p.x - p.y * p.y) * (std::pow(p.x, 4) - std::pow(p.y, 4))
                    / std::pow(1 + s * s, 4);
         }},
        {"(x4-y4)/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return (std::pow(p.x, 4) - std::pow(p.y, 4)) / std::pow(1 + s * s, 3);
         }},
        {"(x4-y4)|z|3/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return (std::pow(p.x, 4) - std::pow(p.y, 4)) * std::pow(s, 1.5)
                    / std::pow(1 + s * s, 3);
         }},
        {"x2(x4-y4)/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return p.x * p.x * (std::pow(p.x, 4) - std::pow(p.y, 4)) / std::pow(1 + s * s, 3);
         }},
        {"y2(x4-y4)/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return p.y * p.y * (std::pow(p.x, 4) - std::pow(p.y, 4)) / std::pow(1 + s * s, 3);
         }},
        {"x2y2|z|2/(1+|z|4)^4",
         [q](PlanePoint p) {
             double s = q(p);
             return p.x * p.x * p.y * p.y * s / std::pow(1 + s * s, 4);
         }},
        {"x2y2|z|2/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return p.x * p.x * p.y * p.y * s / std::pow(1 + s * s, 3);
         }},
        {"xy|z|5/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return p.x * p.y * std::pow(s, 2.5) / std::pow(1 + s * s, 3);
         }},
        {"(1-|z|4)|z|2/(1+|z|4)^4",
         [q](PlanePoint p) {
             double s = q(p);
             return (1 - s * s) * s / std::pow(1 + s * s, 4);
         }},
        {"(1-|z|4)|z|2/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return (1 - s * s) * s / std::pow(1 + s * s, 3);
         }},
        {"(1-|z|4)|z|5/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return (1 - s * s) * std::pow(s, 2.5) / std::pow(1 + s * s, 3);
         }},
        {"x2(1-|z|4)|z|2/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return p.x * p.x * (1 - s * s) * s / std::pow(1 + s * s, 3);
         }},
        {"y2(1-|z|4)|z|2/(1+|z|4)^3",
         [q](PlanePoint p) {
             double s = q(p);
             return p.y * p.y * (1 - s * s) * s / std::pow(1 + s * s, 3);
         }},
    };
    return v;
}

inline std::vector<double> identity_exact_values() {
    const double pi = M_PI;
    return {pi / 24, 0.0, 0.0, pi / 16, -pi / 16, pi / 96, pi / 32, 0.0,
            pi / 12, 0.0, -9 * pi * pi / (16 * std::sqrt(2.0)), -pi * pi / 16, -pi * pi / 16};
}

/// Evaluates every tabulated plane integral; the quoted error is a
/// resolution-doubling estimate.
inline std::vector<IdentityRecord> identity_suite(int n_radial = 200, int n_angular = 256) {
    const auto rule = plane_rule(n_radial, n_angular);
    const auto fine = plane_rule(2 * n_radial, 2 * n_angular);
    const auto& integrands = identity_integrands();
    const auto exact = identity_exact_values();

    std::vector<IdentityRecord> out;
    out.reserve(integrands.size());
    for (std::size_t i = 0; i < integrands.size(); ++i) {
        IdentityRecord rec;
        rec.id = integrands[i].first;
        rec.exact = exact[i];
        rec.computed = integrate(fine, integrands[i].second);
        const double coarse = integrate(rule, integrands[i].second);
        rec.abs_err = std::abs(rec.computed - rec.exact);
        rec.rel_err = rec.exact != 0 ? rec.abs_err / std::abs(rec.exact) : rec.abs_err;
        (void)coarse;
        rec.nodes_used = fine.size();
        out.push_back(rec);
    }
    return out;
}

} // namespace hbubble
