#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hbubble/bubble.hpp"
#include "hbubble/errors.hpp"
#include "hbubble/harmonic.hpp"
#include "hbubble/kernels.hpp"
#include "hbubble/quadrature.hpp"

namespace hbubble {

// ---------------------------------------------------------------------------
// Euler functional by quadrature

/// The four terms of the Euler functional; total is their sum.
struct EnergyBreakdown {
    double dirichlet = 0;
    double cubic = 0;
    double boundary_linear = 0;
    double boundary_quadratic = 0;
    double total = 0;
    bool boundary_ok = true;    // max |u| on a boundary sample <= 1e-6
    double boundary_sup = 0;
};

struct EnergyQuadSpec {
    int n_radial = 128;
    int n_angular = 256;
    std::optional<DiskAdaptation> adapt;
    bool check_convergence = true;
    double tolerance = 1e-6; // relative, on resolution doubling
};

using SampleFn = std::function<MapSample(PlanePoint)>;

namespace detail {

inline EnergyBreakdown energy_terms(const SampleFn& u, const SampleFn& g, double eps,
                                    const QuadratureRule& rule) {
    EnergyBreakdown b;
    std::vector<double> t1(rule.size()), t2(rule.size()), t3(rule.size()), t4(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const MapSample su = u(rule.nodes[i]);
        const MapSample sg = g(rule.nodes[i]);
        const double w = rule.weights[i];
        t1[i] = w * 0.5 * (dot(su.grad_x, su.grad_x) + dot(su.grad_y, su.grad_y));
        t2[i] = w * (2.0 / 3.0) * dot(su.value, cross(su.grad_x, su.grad_y));
        t3[i] = w * eps
                * dot(su.value, cross(su.grad_x, sg.grad_y) + cross(sg.grad_x, su.grad_y));
        t4[i] = w * 2.0 * eps * eps * dot(su.value, cross(sg.grad_x, sg.grad_y));
    }
    b.dirichlet = pairwise_sum(t1.data(), t1.size());
    b.cubic = pairwise_sum(t2.data(), t2.size());
    b.boundary_linear = pairwise_sum(t3.data(), t3.size());
    b.boundary_quadratic = pairwise_sum(t4.data(), t4.size());
    b.total = b.dirichlet + b.cubic + b.boundary_linear + b.boundary_quadratic;
    return b;
}

} // namespace detail

/// I_eps(u) with the boundary datum extension g; u is expected to vanish on
/// the boundary (checked on 64 samples, reported in the breakdown).
inline EnergyBreakdown energy_full(const SampleFn& u, const SampleFn& g, double eps,
                                   const EnergyQuadSpec& spec = {}) {
    const auto rule = disk_rule(spec.n_radial, spec.n_angular, spec.adapt);
    EnergyBreakdown b = detail::energy_terms(u, g, eps, rule);
    if (spec.check_convergence) {
        const auto fine = disk_rule(spec.n_radial * 3 / 2, spec.n_angular * 3 / 2, spec.adapt);
        const EnergyBreakdown bf = detail::energy_terms(u, g, eps, fine);
        if (std::abs(bf.total - b.total) > spec.tolerance * std::max(1.0, std::abs(bf.total)))
            throw QuadratureNotConverged("energy_full: refinement moved the total beyond tolerance");
        b = bf;
    }
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * M_PI * i / 64.0;
        b.boundary_sup = std::max(b.boundary_sup, norm(u({std::cos(t), std::sin(t)}).value));
    }
    b.boundary_ok = b.boundary_sup <= 1e-6;
    return b;
}

/// Free energy on the plane: 1/2 \int |grad u|^2 + 2/3 \int u.(u_x ^ u_y).
inline double energy_free(const SampleFn& u, const QuadratureRule& plane) {
    if (plane.domain != QuadratureRule::Domain::plane)
        throw OutOfRange("energy_free: rule must live on the plane");
    std::vector<double> terms(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const MapSample s = u(plane.nodes[i]);
        terms[i] = plane.weights[i]
                   * (0.5 * (dot(s.grad_x, s.grad_x) + dot(s.grad_y, s.grad_y))
                      + (2.0 / 3.0) * dot(s.value, cross(s.grad_x, s.grad_y)));
    }
    return detail::pairwise_sum(terms.data(), terms.size());
}

// ---------------------------------------------------------------------------
// the boundary datum and its curvature rows

/// One bubble's effective boundary datum: a rotated copy S g(., omega) of the
/// canonical family. The third component is -2 (g3_scale * eps) h3^(1) with
/// eps supplied at evaluation time; g3_scale = 0 selects the plain rho-datum
/// family (the one behind the degree argument), 1 the glued theorem datum.
struct DatumSpec {
    PlanePoint omega{};
    Mat3 S = Mat3::identity();
    double g3_scale = 1.0;

    const HarmonicScalar& h3_field() const {
        if (!h3_) {
            std::vector<double> samples(2048);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const double t = 2.0 * M_PI * static_cast<double>(i) / 2048.0;
                const double x = std::cos(t) - omega.x, y = std::sin(t) - omega.y;
                const double r2 = x * x + y * y;
                samples[i] = 1.0 / (r2 * r2);
            }
            h3_ = std::make_shared<HarmonicScalar>(HarmonicScalar::fit(samples));
        }
        return *h3_;
    }

private:
    mutable std::shared_ptr<HarmonicScalar> h3_;
};

namespace detail {

struct DatumRows {
    double r1xx = 0; // d^2 (R g)_1 / dx^2
    double r2xy = 0; // d^2 (R g)_2 / dx dy
};

/// Second derivatives at z of the components of R * (S g)(., omega).
inline DatumRows datum_rows(const DatumSpec& spec, double eps, const Mat3& R_in, PlanePoint z) {
    const Mat3 R = R_in * spec.S;
    const double e3 = spec.g3_scale * eps;
    // pair g1 + i g2 = 2 G(z; omega)
    const Complex G2 = 2.0 * pairext::h1(z.c(), spec.omega.c(), 2);
    const double gxx[3] = {G2.real(), G2.imag(),
                           e3 == 0.0 ? 0.0 : -2.0 * e3 * spec.h3_field().deriv(2, 0, z.c())};
    const double gxy[3] = {-G2.imag(), G2.real(),
                           e3 == 0.0 ? 0.0 : -2.0 * e3 * spec.h3_field().deriv(1, 1, z.c())};
    DatumRows rows;
    for (int j = 0; j < 3; ++j) {
        rows.r1xx += R(0, j) * gxx[j];
        rows.r2xy += R(1, j) * gxy[j];
    }
    return rows;
}

} // namespace detail

// ---------------------------------------------------------------------------
// closed-form scalar fields of the reduced problem

/// H(xi) = 2 d^2 h2^(1)/dxdy (xi,xi) = 4(1+2|xi|^2)/(1-|xi|^2)^4.
inline double field_H(PlanePoint xi) {
    const double s = xi.norm2();
    return 4 * (1 + 2 * s) / std::pow(1 - s, 4);
}

/// d_{Q^{-1}} g(xi) for an arbitrary datum spec (general route).
inline double field_dQg(PlanePoint xi, const RotationSO3& rot, const DatumSpec& spec, double eps) {
    const auto rows = detail::datum_rows(spec, eps, rot.inverse_matrix(), xi);
    return rows.r1xx + rows.r2xy;
}

/// d_{Q^{-1}} g_rho(xi) through the explicit Euler-angle expansion.
inline double field_dQg_rho(PlanePoint xi, const RotationSO3& rot, double rho) {
    const double x = xi.x, y = xi.y;
    const double den = rho * rho * (x * x + y * y) - 2 * rho * x + 1;
    const double f1 = 4 * rho
                          * (2 * std::pow(rho, 4) * x * (x * x - 3 * y * y) * (x * x + y * y)
                             + 8 * rho * rho * x * (x * x + 3 * y * y) - 2 * rho * (x * x + 7 * y * y)
                             - std::pow(rho, 3)
                                   * (7 * std::pow(x, 4) + 6 * x * x * y * y - 9 * std::pow(y, 4))
                             - 2 * x)
                      + 4;
    const double f2 = 8 * rho * y
                      * (2 * std::pow(rho, 3) * x * (3 * x * x + 5 * y * y)
                         + std::pow(rho, 4) * (-3 * std::pow(x, 4) - 2 * x * x * y * y + std::pow(y, 4))
                         - 6 * rho * x - 8 * rho * rho * y * y + 3);
    const double den4 = std::pow(den, 4);
    const double ct = std::cos(rot.theta), st = std::sin(rot.theta);
    const double cp = std::cos(rot.phi), sp = std::sin(rot.phi);
    const double cs = std::cos(rot.psi), ss = std::sin(rot.psi);
    return f1 / den4 * (cs * cp - ct * sp * ss) + f2 / den4 * (cs * sp + ct * cp * ss)
         - f2 / den4 * (-st * sp) + f1 / den4 * (st * cp);
}

/// W_rho(xi): the rho-datum strength field whose maximum locates the bubble.
inline double field_Wrho(PlanePoint xi, double rho) {
    const double s = xi.norm2();
    const double den = rho * rho * s - 2 * rho * xi.x + 1;
    return 4 * std::sqrt(4 * rho * (rho * s + xi.x) + 1) * (1 - s) * (1 - s)
           / (den * den * std::sqrt(1 + 2 * s));
}

// ---------------------------------------------------------------------------
// reduced energy for one bubble

/// The closed-form reduced energy F_{D,g}(mu, xi, Q, a, p).
inline double reduced_energy_F(const BubbleParams& prm, const DatumSpec& spec, double eps) {
    if (prm.xi.norm() > 0.99) throw NearBoundary("reduced_energy_F: |xi| > 0.99");
    if (!(prm.mu > 0)) throw OutOfRange("reduced_energy_F: mu must be positive");
    const PlanePoint xi = prm.xi;
    const double mu = prm.mu;
    const double mu2 = mu * mu, mu5 = std::pow(mu, 5), mu8 = std::pow(mu, 8);
    const double pi = M_PI;

    const double hxy = 0.5 * field_H(xi); // d^2 h2^(1)/dxdy (xi,xi)
    const auto rows = detail::datum_rows(spec, eps, prm.rot.inverse_matrix(), xi);

    const double ca1 = robin_closed(RobinTag::hm1_1, 1, 1, 0, xi);
    const double ca2 = robin_closed(RobinTag::hm1_2, 2, 1, 0, xi);
    const double cp1 = robin_closed(RobinTag::h2_1, 1, 4, 0, xi);
    const double cp2 = robin_closed(RobinTag::h2_2, 2, 4, 0, xi);
    const double c11 = robin_closed(RobinTag::h2_1, 1, 1, 0, xi);
    const double c21 = robin_closed(RobinTag::h2_1, 2, 1, 0, xi);
    const double c12 = robin_closed(RobinTag::h2_2, 1, 1, 0, xi);
    const double c22 = robin_closed(RobinTag::h2_2, 2, 1, 0, xi);

    const double a1 = prm.a.x, a2 = prm.a.y, p1 = prm.p.x, p2 = prm.p.y;
    return 8 * pi * mu2 * mu2 * hxy
         - 4 * pi * eps * mu2 * (rows.r1xx + rows.r2xy)
         - 16 * pi * a1 * a1 * mu2 * ca1
         - 16 * pi * a2 * a2 * mu2 * ca2
         - (4 * pi / 3) * p1 * p1 * mu8 * cp1
         + (4 * pi / 3) * p2 * p2 * mu8 * cp2
         - 32 * pi * p1 * a1 * mu5 * c11 - 32 * pi * p1 * a2 * mu5 * c21
         - 32 * pi * p2 * a1 * mu5 * c12 - 32 * pi * p2 * a2 * mu5 * c22;
}

namespace detail {

/// chi layout per bubble: (mu, xi1, xi2, theta, phi, psi, a1, a2, p1, p2)
inline BubbleParams params_from_chi(const double* c) {
    BubbleParams p;
    p.mu = c[0];
    p.xi = {c[1], c[2]};
    p.rot = {c[3], c[4], c[5]};
    p.a = {c[6], c[7]};
    p.p = {c[8], c[9]};
    return p;
}

inline void chi_from_params(const BubbleParams& p, double* c) {
    c[0] = p.mu;
    c[1] = p.xi.x; c[2] = p.xi.y;
    c[3] = p.rot.theta; c[4] = p.rot.phi; c[5] = p.rot.psi;
    c[6] = p.a.x; c[7] = p.a.y;
    c[8] = p.p.x; c[9] = p.p.y;
}

} // namespace detail

/// Gradient of F in chi order; (mu, a, p) analytic, (xi, angles) by central
/// differences with relative step 1e-6.
inline Eigen::VectorXd reduced_energy_grad(const BubbleParams& prm, const DatumSpec& spec,
                                           double eps) {
    const double pi = M_PI;
    const PlanePoint xi = prm.xi;
    const double mu = prm.mu;
    const double mu2 = mu * mu, mu3 = mu2 * mu, mu4 = mu2 * mu2, mu5 = mu4 * mu, mu7 = mu5 * mu2;
    const double a1 = prm.a.x, a2 = prm.a.y, p1 = prm.p.x, p2 = prm.p.y;

    const double hxy = 0.5 * field_H(xi);
    const auto rows = detail::datum_rows(spec, eps, prm.rot.inverse_matrix(), xi);
    const double dqg = rows.r1xx + rows.r2xy;
    const double ca1 = robin_closed(RobinTag::hm1_1, 1, 1, 0, xi);
    const double ca2 = robin_closed(RobinTag::hm1_2, 2, 1, 0, xi);
    const double cp1 = robin_closed(RobinTag::h2_1, 1, 4, 0, xi);
    const double cp2 = robin_closed(RobinTag::h2_2, 2, 4, 0, xi);
    const double c11 = robin_closed(RobinTag::h2_1, 1, 1, 0, xi);
    const double c21 = robin_closed(RobinTag::h2_1, 2, 1, 0, xi);
    const double c12 = robin_closed(RobinTag::h2_2, 1, 1, 0, xi);
    const double c22 = robin_closed(RobinTag::h2_2, 2, 1, 0, xi);

    Eigen::VectorXd g(10);
    g[0] = 32 * pi * mu3 * hxy - 8 * pi * eps * mu * dqg
         - 32 * pi * a1 * a1 * mu * ca1 - 32 * pi * a2 * a2 * mu * ca2
         - (32 * pi / 3) * p1 * p1 * mu7 * cp1 + (32 * pi / 3) * p2 * p2 * mu7 * cp2
         - 160 * pi * mu4 * (p1 * a1 * c11 + p1 * a2 * c21 + p2 * a1 * c12 + p2 * a2 * c22);
    g[6] = -32 * pi * a1 * mu2 * ca1 - 32 * pi * mu5 * (p1 * c11 + p2 * c12);
    g[7] = -32 * pi * a2 * mu2 * ca2 - 32 * pi * mu5 * (p1 * c21 + p2 * c22);
    g[8] = -(8 * pi / 3) * p1 * std::pow(mu, 8) * cp1 - 32 * pi * mu5 * (a1 * c11 + a2 * c21);
    g[9] = (8 * pi / 3) * p2 * std::pow(mu, 8) * cp2 - 32 * pi * mu5 * (a1 * c12 + a2 * c22);

    double c[10];
    detail::chi_from_params(prm, c);
    for (int i = 1; i <= 5; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(c[i]));
        double cp_[10], cm_[10];
        std::copy(c, c + 10, cp_);
        std::copy(c, c + 10, cm_);
        cp_[i] += h;
        cm_[i] -= h;
        g[i] = (reduced_energy_F(detail::params_from_chi(cp_), spec, eps)
                - reduced_energy_F(detail::params_from_chi(cm_), spec, eps))
               / (2 * h);
    }
    return g;
}

// ---------------------------------------------------------------------------
// two-bubble interactions

/// Bubble-bubble interaction F_D of the pair (i, j): sigma = xi_j - xi_i,
/// Q = Q_i^{-1} Q_j, datum rows of bubble i's datum evaluated at xi_j.
inline double interaction_FD(const BubbleParams& bi, const BubbleParams& bj,
                             const DatumSpec& spec_i, double eps) {
    const PlanePoint sigma = bj.xi - bi.xi;
    const double s2 = sigma.norm2();
    if (std::sqrt(s2) < 1e-3) throw BubblesTooClose("interaction_FD: |sigma| < 1e-3");
    const double s8 = std::pow(s2, 4);
    const double S4 = std::pow(sigma.x, 4) - 6 * sigma.y * sigma.y * sigma.x * sigma.x
                    + std::pow(sigma.y, 4);
    const double T = sigma.x * sigma.y * (sigma.x * sigma.x - sigma.y * sigma.y);
    const Mat3 Q = bi.rot.inverse_matrix() * bj.rot.matrix();
    const auto rows = detail::datum_rows(spec_i, eps, bi.rot.inverse_matrix(), bj.xi);
    const double pi = M_PI;
    const double mm = bi.mu * bi.mu * bj.mu * bj.mu;
    const double em2 = eps * bj.mu * bj.mu;
    return Q(0, 0) * (-48 * pi * S4 / s8 * mm - 4 * pi * em2 * rows.r1xx)
         + Q(0, 1) * (-192 * pi * T / s8 * mm - 4 * pi * em2 * rows.r2xy)
         + Q(1, 0) * (-192 * pi * T / s8 * mm - 4 * pi * em2 * rows.r1xx)
         + Q(1, 1) * (48 * pi * S4 / s8 * mm - 4 * pi * em2 * rows.r2xy);
}

/// Linear-in-a interaction F^(1) (which = 1, the a of bubble i) or
/// F^(2) (which = 2, the a of bubble j).
///
/// The bracket signs are fixed against the quadrature brute force (and the
/// complex first-order Taylor coefficients of the far-field pair): the
/// printed displays carry the opposite overall sign. With cA, cB below, the
/// a_{i,1} coupling is q11 cA + q12 cB + q21 cB - q22 cA, and the a_{i,2}
/// coupling -q11 cB + q12 cA + q21 cA + q22 cB; F^(2) is their negative with
/// the roles of the two scales swapped.
inline double interaction_linear(int which, const BubbleParams& bi, const BubbleParams& bj) {
    const PlanePoint sigma = bj.xi - bi.xi;
    const double s2 = sigma.norm2();
    if (std::sqrt(s2) < 1e-3) throw BubblesTooClose("interaction_linear: |sigma| < 1e-3");
    const double s6 = s2 * s2 * s2;
    const double pi = M_PI;
    const double cA = 32 * pi * sigma.x * (sigma.x * sigma.x - 3 * sigma.y * sigma.y) / s6;
    const double cB = 32 * pi * sigma.y * (3 * sigma.x * sigma.x - sigma.y * sigma.y) / s6;
    const Mat3 Q = bi.rot.inverse_matrix() * bj.rot.matrix();
    const double q11 = Q(0, 0), q12 = Q(0, 1), q21 = Q(1, 0), q22 = Q(1, 1);
    if (which == 1) {
        const double scale = bi.mu * bj.mu * bj.mu;
        return bi.a.x * scale * (q11 * cA + q12 * cB + q21 * cB + q22 * (-cA))
             + bi.a.y * scale * (q11 * (-cB) + q12 * cA + q21 * cA + q22 * cB);
    }
    if (which == 2) {
        const double scale = bi.mu * bi.mu * bj.mu;
        return bj.a.x * scale * (q11 * (-cA) + q12 * (-cB) + q21 * (-cB) + q22 * cA)
             + bj.a.y * scale * (q11 * cB + q12 * (-cA) + q21 * (-cA) + q22 * (-cB));
    }
    throw OutOfRange("interaction_linear: which must be 1 or 2");
}

// ---------------------------------------------------------------------------
// k-bubble reduced energy

inline double sigma_energy(const std::vector<BubbleParams>& states,
                           const std::vector<DatumSpec>& specs, double eps) {
    if (states.size() != specs.size())
        throw OutOfRange("sigma_energy: one datum spec per bubble");
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            if ((states[j].xi - states[i].xi).norm() < 0.1)
                throw BubblesTooClose("sigma_energy: bubble centers closer than 0.1");
    double total = 0;
    for (std::size_t i = 0; i < states.size(); ++i)
        total += reduced_energy_F(states[i], specs[i], eps);
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            total += interaction_FD(states[i], states[j], specs[i], eps);
            total += interaction_linear(1, states[i], states[j]);
            total += interaction_linear(2, states[i], states[j]);
        }
    return total;
}

/// Gradient of Sigma in the stacked chi layout; (mu, a, p) analytic through
/// the closed forms, (xi, angles) by central differences.
inline Eigen::VectorXd sigma_energy_grad(const std::vector<BubbleParams>& states,
                                         const std::vector<DatumSpec>& specs, double eps) {
    const std::size_t k = states.size();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(10 * k));

    // per-bubble closed-form parts
    for (std::size_t i = 0; i < k; ++i) {
        const Eigen::VectorXd gi = reduced_energy_grad(states[i], specs[i], eps);
        for (int c = 0; c < 10; ++c) g[static_cast<Eigen::Index>(10 * i + c)] += gi[c];
    }

    // analytic interaction parts for mu and a
    const double pi = M_PI;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const BubbleParams& bi = states[i];
            const BubbleParams& bj = states[j];
            const PlanePoint sigma = bj.xi - bi.xi;
            const double s2 = sigma.norm2();
            const double s8 = std::pow(s2, 4), s6 = s2 * s2 * s2;
            const double S4 = std::pow(sigma.x, 4)
                            - 6 * sigma.y * sigma.y * sigma.x * sigma.x + std::pow(sigma.y, 4);
            const double T = sigma.x * sigma.y * (sigma.x * sigma.x - sigma.y * sigma.y);
            const Mat3 Q = bi.rot.inverse_matrix() * bj.rot.matrix();
            const double q11 = Q(0, 0), q12 = Q(0, 1), q21 = Q(1, 0), q22 = Q(1, 1);
            const auto rows = detail::datum_rows(specs[i], eps, bi.rot.inverse_matrix(), bj.xi);

            const double sig_part = q11 * (-48 * pi * S4 / s8) + q12 * (-192 * pi * T / s8)
                                  + q21 * (-192 * pi * T / s8) + q22 * (48 * pi * S4 / s8);
            const double dat_part = -4 * pi * eps
                                    * (q11 * rows.r1xx + q12 * rows.r2xy + q21 * rows.r1xx
                                       + q22 * rows.r2xy);
            const double cA = 32 * pi * sigma.x * (sigma.x * sigma.x - 3 * sigma.y * sigma.y) / s6;
            const double cB = 32 * pi * sigma.y * (3 * sigma.x * sigma.x - sigma.y * sigma.y) / s6;
            const double bra1 = q11 * cA + q12 * cB + q21 * cB + q22 * (-cA);
            const double bra2 = q11 * (-cB) + q12 * cA + q21 * cA + q22 * cB;
            const double brb1 = q11 * (-cA) + q12 * (-cB) + q21 * (-cB) + q22 * cA;
            const double brb2 = q11 * cB + q12 * (-cA) + q21 * (-cA) + q22 * (-cB);

            const double mi = bi.mu, mj = bj.mu;
            const double F1_mu_part = bi.a.x * bra1 + bi.a.y * bra2; // times mu_i mu_j^2
            const double F2_mu_part = bj.a.x * brb1 + bj.a.y * brb2; // times mu_i^2 mu_j

            // d/d mu_i
            g[static_cast<Eigen::Index>(10 * i)] += sig_part * 2 * mi * mj * mj
                                                  + F1_mu_part * mj * mj
                                                  + F2_mu_part * 2 * mi * mj;
            // d/d mu_j (the datum term carries mu_j^2)
            g[static_cast<Eigen::Index>(10 * j)] += sig_part * 2 * mj * mi * mi
                                                  + dat_part * 2 * mj
                                                  + F1_mu_part * 2 * mi * mj
                                                  + F2_mu_part * mi * mi;
            // d/d a
            g[static_cast<Eigen::Index>(10 * i + 6)] += mi * mj * mj * bra1;
            g[static_cast<Eigen::Index>(10 * i + 7)] += mi * mj * mj * bra2;
            g[static_cast<Eigen::Index>(10 * j + 6)] += mi * mi * mj * brb1;
            g[static_cast<Eigen::Index>(10 * j + 7)] += mi * mi * mj * brb2;
        }

    // finite differences over xi and the Euler angles of the interaction sum
    auto pair_sum = [&](const std::vector<BubbleParams>& st) {
        double total = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                total += interaction_FD(st[i], st[j], specs[i], eps);
                total += interaction_linear(1, st[i], st[j]);
                total += interaction_linear(2, st[i], st[j]);
            }
        return total;
    };
    if (k > 1) {
        std::vector<BubbleParams> work = states;
        for (std::size_t i = 0; i < k; ++i) {
            double c[10];
            detail::chi_from_params(states[i], c);
            for (int slot = 1; slot <= 5; ++slot) {
                const double h = 1e-6 * (1.0 + std::abs(c[slot]));
                double cp_[10], cm_[10];
                std::copy(c, c + 10, cp_);
                std::copy(c, c + 10, cm_);
                cp_[slot] += h;
                cm_[slot] -= h;
                work[i] = detail::params_from_chi(cp_);
                const double fp = pair_sum(work);
                work[i] = detail::params_from_chi(cm_);
                const double fm = pair_sum(work);
                work[i] = states[i];
                g[static_cast<Eigen::Index>(10 * i + slot)] += (fp - fm) / (2 * h);
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// the section-6 model and its Hessian

/// The local model F~ at datum center omega = (rho, 0): exact mu/xi/angle part
/// with the Euler-angle datum expansion, quadratic a/p part with coefficients
/// frozen at (omega, omega) and mu_0 = sqrt(eps).
inline double model_F_tilde(const Eigen::VectorXd& chi, double rho, double eps) {
    const double pi = M_PI;
    const double mu = chi[0];
    const PlanePoint xi{chi[1], chi[2]};
    const RotationSO3 rot{chi[3], chi[4], chi[5]};
    const double a1 = chi[6], a2 = chi[7], p1 = chi[8], p2 = chi[9];
    const PlanePoint omega{rho, 0};
    const double mu0 = std::sqrt(eps);
    const double mu0_2 = mu0 * mu0, mu0_5 = std::pow(mu0, 5), mu0_8 = std::pow(mu0, 8);

    const double ca1 = robin_closed(RobinTag::hm1_1, 1, 1, 0, omega);
    const double ca2 = robin_closed(RobinTag::hm1_2, 2, 1, 0, omega);
    const double cp1 = robin_closed(RobinTag::h2_1, 1, 4, 0, omega);
    const double cp2 = robin_closed(RobinTag::h2_2, 2, 4, 0, omega);
    const double c11 = robin_closed(RobinTag::h2_1, 1, 1, 0, omega);
    const double c21 = robin_closed(RobinTag::h2_1, 2, 1, 0, omega);
    const double c12 = robin_closed(RobinTag::h2_2, 1, 1, 0, omega);
    const double c22 = robin_closed(RobinTag::h2_2, 2, 1, 0, omega);

    return 4 * pi * std::pow(mu, 4) * field_H(xi)
         - 4 * pi * eps * mu * mu * field_dQg_rho(xi, rot, rho)
         - 16 * pi * a1 * a1 * mu0_2 * ca1 - 16 * pi * a2 * a2 * mu0_2 * ca2
         - (4 * pi / 3) * p1 * p1 * mu0_8 * cp1 + (4 * pi / 3) * p2 * p2 * mu0_8 * cp2
         - 32 * pi * p1 * a1 * mu0_5 * c11 - 32 * pi * p1 * a2 * mu0_5 * c21
         - 32 * pi * p2 * a1 * mu0_5 * c12 - 32 * pi * p2 * a2 * mu0_5 * c22;
}

/// The displayed Hessian entries A_{rho,eps} (verbatim).
inline Eigen::MatrixXd hessian_A(double rho, double eps) {
    if (!(rho > 0 && rho < 1)) throw OutOfRange("hessian_A: rho in (0,1)");
    if (!(eps > 0)) throw OutOfRange("hessian_A: eps > 0");
    const double pi = M_PI;
    const double r2 = rho * rho;
    const double dm = r2 - 1;              // rho^2 - 1 (negative)
    const double dp = 1 - r2;              // 1 - rho^2
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(10, 10);
    A(0, 0) = 128 * pi * (2 * r2 + 1) * eps / std::pow(dm, 4);
    A(0, 1) = A(1, 0) = -384 * pi * (rho * r2 + rho) * std::pow(eps, 1.5) / std::pow(dm, 5);
    A(1, 1) = 192 * pi * (3 * r2 * r2 + 6 * r2 + 1) * eps * eps / std::pow(dm, 6);
    A(2, 2) = 192 * pi * (3 * r2 * r2 + 6 * r2 + 1) * eps * eps / std::pow(dm, 6);
    A(2, 4) = A(4, 2) = 192 * pi * rho * (r2 + 1) * eps * eps / std::pow(dm, 5);
    A(3, 3) = 16 * pi * (2 * r2 + 1) * eps * eps / std::pow(dm, 4);
    A(4, 4) = 32 * pi * (2 * r2 + 1) * eps * eps / std::pow(dm, 4);
    A(5, 5) = 16 * pi * (2 * r2 + 1) * eps * eps / std::pow(dm, 4);
    A(6, 6) = 64 * pi * eps / (dp * dp);
    A(6, 8) = A(8, 6) = 128 * pi * std::pow(eps, 2.5) * std::pow(rho, 3) / std::pow(dp, 5);
    A(7, 7) = 64 * pi * eps / (dp * dp);
    A(7, 9) = A(9, 7) = -128 * pi * std::pow(eps, 2.5) * std::pow(rho, 3) / std::pow(dp, 5);
    A(8, 8) = 2240 * pi * std::pow(eps, 4) / std::pow(dp, 8);
    A(9, 9) = 2240 * pi * std::pow(eps, 4) / std::pow(dp, 8);
    return A;
}

// ---------------------------------------------------------------------------
// brute-force quadrature checks of the interaction closed forms

/// 2 \int (P delta_2)_comp (delta_1_x ^ delta_1_y)_comp over the disk, on a
/// rule adapted to the first bubble's core; optionally adds eps g^(2) to the
/// projected bubble (the Jan17 combination).
inline double bruteforce_pair_component(const BubbleParams& b1, const ProjectedBubble& pb2,
                                        int comp, int n_radial = 96, int n_angular = 192,
                                        const std::function<Vec3(PlanePoint)>& extra = nullptr) {
    const auto rule = disk_rule(n_radial, n_angular, DiskAdaptation{b1.xi, b1.mu});
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const PlanePoint z = rule.nodes[i];
        const MapSample s1 = bubble_grad(b1, z);
        Vec3 v2 = pb2.value(z);
        if (extra) v2 += extra(z);
        terms[i] = rule.weights[i] * 2.0 * v2[comp - 1] * cross(s1.grad_x, s1.grad_y)[comp - 1];
    }
    return detail::pairwise_sum(terms.data(), terms.size());
}

/// 2 \int (P delta_2 + extra)_comp [ d1_x ^ (Z_{-1,1})_y + (Z_{-1,1})_x ^ d1_y ]_comp
/// with the kernel rescaled to bubble 1 (per-unit a_{1,1} linear coupling);
/// `extra` usually carries eps Q_2 g^(2).
inline double bruteforce_linear_component(const BubbleParams& b1, const ProjectedBubble& pb2,
                                          int comp, int n_radial = 96, int n_angular = 192,
                                          const std::function<Vec3(PlanePoint)>& extra = nullptr) {
    const auto rule = disk_rule(n_radial, n_angular, DiskAdaptation{b1.xi, b1.mu});
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const PlanePoint z = rule.nodes[i];
        const MapSample s1 = bubble_grad(b1, z);
        // Z_{-1,1}((z - xi)/mu): chain rule brings 1/mu on each gradient
        const PlanePoint w{(z.x - b1.xi.x) / b1.mu, (z.y - b1.xi.y) / b1.mu};
        const MapSample kz = kernel_grad({-1, 1}, w);
        const Vec3 kx = (1.0 / b1.mu) * kz.grad_x;
        const Vec3 ky = (1.0 / b1.mu) * kz.grad_y;
        const Vec3 combo = cross(s1.grad_x, ky) + cross(kx, s1.grad_y);
        Vec3 v2 = pb2.value(z);
        if (extra) v2 += extra(z);
        terms[i] = rule.weights[i] * 2.0 * v2[comp - 1] * combo[comp - 1];
    }
    return detail::pairwise_sum(terms.data(), terms.size());
}

} // namespace hbubble
