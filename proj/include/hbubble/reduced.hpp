#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "hbubble/energy.hpp"
#include "hbubble/errors.hpp"

namespace hbubble {

// ---------------------------------------------------------------------------
// parameter box and state

/// Admissible box T_lambda around the main-order parameters, stored as
/// per-coordinate center/halfwidth; the a/p faces form the second boundary
/// part of the degree argument.
struct ParameterBox {
    Eigen::VectorXd center;
    Eigen::VectorXd halfwidth;

    int dim() const { return static_cast<int>(center.size()); }

    bool contains(const Eigen::VectorXd& x, double slack = 0.0) const {
        for (int i = 0; i < dim(); ++i)
            if (std::abs(x[i] - center[i]) > halfwidth[i] * (1.0 + slack)) return false;
        return true;
    }

    Eigen::VectorXd clamp_interior(const Eigen::VectorXd& x, double margin = 1e-12) const {
        Eigen::VectorXd y = x;
        for (int i = 0; i < dim(); ++i) {
            const double lo = center[i] - halfwidth[i] * (1.0 - margin);
            const double hi = center[i] + halfwidth[i] * (1.0 - margin);
            y[i] = std::min(std::max(y[i], lo), hi);
        }
        return y;
    }

    /// true if coordinate i belongs to the a/p block of its bubble
    static bool is_second_part(int i) {
        const int slot = i % 10;
        return slot >= 6;
    }
};

/// The full reduced state: k bubbles of 10 parameters plus the globals.
struct ReducedState {
    int k = 1;
    double eps = 1e-4;
    double rho = 0.95;
    double lambda = 10.0;
    Eigen::VectorXd chi; // 10k entries: (mu, xi1, xi2, theta, phi, psi, a1, a2, p1, p2) per bubble

    BubbleParams bubble(int j) const {
        return detail::params_from_chi(chi.data() + 10 * j);
    }

    std::vector<BubbleParams> bubbles() const {
        std::vector<BubbleParams> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) out.push_back(bubble(j));
        return out;
    }
};

/// Box bounds of the degree argument: |mu - mu0| <= lambda (1-rho)^4 mu0 and
/// companions, per coordinate.
inline ParameterBox make_box(double eps, double rho, int k, double lambda) {
    const double mu0 = std::sqrt(eps);
    const double w = 1.0 - rho;
    ParameterBox box;
    box.center.resize(10 * k);
    box.halfwidth.resize(10 * k);
    for (int j = 0; j < k; ++j) {
        const double ang = 2.0 * M_PI * (j + 1) / k;
        double* c = box.center.data() + 10 * j;
        double* h = box.halfwidth.data() + 10 * j;
        c[0] = mu0;
        c[1] = rho * std::cos(ang);
        c[2] = rho * std::sin(ang);
        c[3] = M_PI / 2;
        c[4] = 0;
        c[5] = 0;
        c[6] = c[7] = c[8] = c[9] = 0;
        h[0] = lambda * std::pow(w, 4) * mu0;
        h[1] = h[2] = lambda * std::pow(w, 5);
        h[3] = h[4] = h[5] = lambda * std::pow(w, 4);
        h[6] = h[7] = lambda * std::pow(w, 2) * mu0;
        h[8] = h[9] = lambda * std::pow(w, 5) / (mu0 * mu0);
    }
    return box;
}

/// Main-order initial state chi_0: mu = sqrt(eps), centers equidistributed
/// on the circle of radius rho, identity rotations, a = p = 0.
inline ReducedState init_state(double eps, double rho, int k, double lambda) {
    if (!(eps > 0) || eps > 1e-2) throw OutOfRange("init_state: eps in (0, 1e-2]");
    if (rho < 0.8 || rho > 0.99) throw OutOfRange("init_state: rho in [0.8, 0.99]");
    if (k < 1) throw OutOfRange("init_state: k >= 1");
    if (lambda <= 0) throw OutOfRange("init_state: lambda > 0");
    ReducedState st;
    st.k = k;
    st.eps = eps;
    st.rho = rho;
    st.lambda = lambda;
    st.chi = make_box(eps, rho, k, lambda).center;
    return st;
}

// ---------------------------------------------------------------------------
// sphere configurations and the glued boundary datum

struct SphereConfiguration {
    std::vector<Vec3> centers;   // unit vectors v_j
    std::vector<Mat3> rotations; // R_j with R_j (0,0,-1) = v_j
};

/// Minimal geodesic rotation taking (0,0,-1) to v; the antipodal direction
/// uses the x-axis half-turn so the choice stays deterministic.
inline Mat3 rotation_to(const Vec3& v) {
    const Vec3 s{0, 0, -1};
    const double c = dot(s, v);
    if (c > 1.0 - 1e-14) return Mat3::identity();
    if (c < -1.0 + 1e-14) {
        Mat3 r;
        r(0, 0) = 1; r(0, 1) = 0;  r(0, 2) = 0;
        r(1, 0) = 0; r(1, 1) = -1; r(1, 2) = 0;
        r(2, 0) = 0; r(2, 1) = 0;  r(2, 2) = -1;
        return r;
    }
    const Vec3 axis = cross(s, v);
    const double na = norm(axis);
    const Vec3 u = (1.0 / na) * axis;
    const double st = na, ct = c;
    Mat3 r;
    const double o = 1 - ct;
    r(0, 0) = ct + u.x * u.x * o;
    r(0, 1) = u.x * u.y * o - u.z * st;
    r(0, 2) = u.x * u.z * o + u.y * st;
    r(1, 0) = u.y * u.x * o + u.z * st;
    r(1, 1) = ct + u.y * u.y * o;
    r(1, 2) = u.y * u.z * o - u.x * st;
    r(2, 0) = u.z * u.x * o - u.y * st;
    r(2, 1) = u.z * u.y * o + u.x * st;
    r(2, 2) = ct + u.z * u.z * o;
    return r;
}

inline SphereConfiguration build_configuration(const std::vector<Vec3>& spheres) {
    SphereConfiguration cfg;
    for (const Vec3& v : spheres) {
        if (std::abs(norm(v) - 1.0) > 1e-10)
            throw OutOfRange("build_configuration: sphere centers must be unit vectors");
        cfg.centers.push_back(v);
        cfg.rotations.push_back(rotation_to(v));
    }
    return cfg;
}

/// Boundary datum G_{k,rho} = sum_j R_j g~_{eps,rho}(e^{-i 2 pi j/k} z); the
/// summand j carries the datum center omega_j = rho e^{i 2 pi j / k}.
inline BoundaryDatum build_datum_G(const SphereConfiguration& cfg, double rho, double eps,
                                   std::size_t n = 2048) {
    const int k = static_cast<int>(cfg.centers.size());
    if (k < 1) throw OutOfRange("build_datum_G: empty configuration");
    return BoundaryDatum(
        [cfg, rho, eps, k](double t) {
            Vec3 acc{};
            for (int j = 0; j < k; ++j) {
                const double ang = 2.0 * M_PI * (j + 1) / k;
                // rotate the argument backwards by ang
                const double x = std::cos(t - ang), y = std::sin(t - ang);
                const double xr = x - rho;
                const double r2 = xr * xr + y * y;
                const Vec3 g{2 * (xr * xr - y * y) / (r2 * r2), 4 * xr * y / (r2 * r2),
                             -2 * eps / (r2 * r2)};
                acc += cfg.rotations[static_cast<std::size_t>(j)] * g;
            }
            return acc;
        },
        n);
}

/// Per-bubble effective data for the reduced energy of the glued problem:
/// the angle shift moves the center to omega_j and rotates the first two
/// target components by -2 ang_j, so S_j = R_j Rz(-2 ang_j).
inline std::vector<DatumSpec> datum_specs_G(const SphereConfiguration& cfg, double rho,
                                            bool eps_third = true) {
    const int k = static_cast<int>(cfg.centers.size());
    std::vector<DatumSpec> specs(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const double ang = 2.0 * M_PI * (j + 1) / k;
        specs[static_cast<std::size_t>(j)].omega = {rho * std::cos(ang), rho * std::sin(ang)};
        specs[static_cast<std::size_t>(j)].S =
            cfg.rotations[static_cast<std::size_t>(j)] * rotation_about_z(-2.0 * ang);
        specs[static_cast<std::size_t>(j)].g3_scale = eps_third ? 1.0 : 0.0;
    }
    return specs;
}

// ---------------------------------------------------------------------------
// safeguarded Newton on the reduced energy

enum class SolveStatus { Converged, MaxIterations, SingularHessian, LeftBox };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max-iterations";
        case SolveStatus::SingularHessian: return "singular-hessian";
        case SolveStatus::LeftBox: return "left-box";
    }
    return "?";
}

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIterations;
    bool converged = false;
    int iterations = 0;
    double grad_norm = std::numeric_limits<double>::infinity();
    Eigen::VectorXd state;
    std::vector<bool> box_active; // coordinate pinned at a face on exit
};

struct Objective {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
};

inline Objective make_reduced_objective(const std::vector<DatumSpec>& specs, double eps) {
    Objective obj;
    obj.value = [specs, eps](const Eigen::VectorXd& chi) {
        std::vector<BubbleParams> st;
        for (Eigen::Index j = 0; j + 10 <= chi.size(); j += 10)
            st.push_back(detail::params_from_chi(chi.data() + j));
        return sigma_energy(st, specs, eps);
    };
    obj.grad = [specs, eps](const Eigen::VectorXd& chi) {
        std::vector<BubbleParams> st;
        for (Eigen::Index j = 0; j + 10 <= chi.size(); j += 10)
            st.push_back(detail::params_from_chi(chi.data() + j));
        return sigma_energy_grad(st, specs, eps);
    };
    return obj;
}

/// Damped Newton with a finite-difference Hessian of the supplied gradient;
/// backtracking on |grad|^2, iterates clamped to the box interior.
inline SolveReport newton_solve(const Objective& obj, const Eigen::VectorXd& state0,
                                const ParameterBox& box, double tol = 1e-11,
                                int max_iterations = 200) {
    if (tol < 1e-13) throw OutOfRange("newton_solve: tol >= 1e-13");
    const int n = static_cast<int>(state0.size());
    SolveReport rep;
    rep.state = box.clamp_interior(state0);
    if (!box.contains(state0, 1e-9)) {
        rep.status = SolveStatus::LeftBox;
        return rep;
    }

    Eigen::VectorXd g = obj.grad(rep.state);
    rep.grad_norm = g.norm();

    for (int it = 0; it < max_iterations; ++it) {
        rep.iterations = it;
        if (rep.grad_norm <= tol) {
            rep.status = SolveStatus::Converged;
            rep.converged = true;
            break;
        }

        // FD Hessian of the gradient, steps scaled by the box halfwidths
        Eigen::MatrixXd H(n, n);
        for (int i = 0; i < n; ++i) {
            const double h = std::max(1e-9, 1e-6 * box.halfwidth[i]);
            Eigen::VectorXd xp = rep.state, xm = rep.state;
            xp[i] += h;
            xm[i] -= h;
            H.col(i) = (obj.grad(xp) - obj.grad(xm)) / (2 * h);
        }
        H = 0.5 * (H + H.transpose()).eval();

        Eigen::VectorXd step;
        bool solved = false;
        double shift = 0.0;
        const double hscale = H.cwiseAbs().maxCoeff();
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::MatrixXd Hs = H + shift * Eigen::MatrixXd::Identity(n, n);
            Eigen::LDLT<Eigen::MatrixXd> ldlt(Hs);
            if (ldlt.info() == Eigen::Success) {
                step = ldlt.solve(-g);
                if (step.allFinite() && (Hs * step + g).norm() <= 1e-6 * g.norm() + 1e-300) {
                    solved = true;
                    break;
                }
            }
            shift = (shift == 0.0) ? 1e-10 * std::max(hscale, 1.0) : 10 * shift;
        }
        if (!solved) {
            rep.status = SolveStatus::SingularHessian;
            break;
        }

        // backtracking on the squared gradient norm
        const double m0 = 0.5 * rep.grad_norm * rep.grad_norm;
        double alpha = 1.0;
        bool accepted = false;
        bool clamped_any = false;
        for (int bt = 0; bt < 40; ++bt) {
            const Eigen::VectorXd trial_raw = rep.state + alpha * step;
            const Eigen::VectorXd trial = box.clamp_interior(trial_raw);
            clamped_any = (trial - trial_raw).norm() > 0;
            const Eigen::VectorXd gt = obj.grad(trial);
            const double mt = 0.5 * gt.squaredNorm();
            if (mt < m0 * (1.0 - 1e-4 * alpha) || mt <= 0.5 * tol * tol) {
                rep.state = trial;
                g = gt;
                rep.grad_norm = g.norm();
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            rep.status = clamped_any ? SolveStatus::LeftBox : SolveStatus::MaxIterations;
            break;
        }
    }
    if (!rep.converged && rep.grad_norm <= tol && box.contains(rep.state, 1e-9)) {
        rep.status = SolveStatus::Converged;
        rep.converged = true;
    }
    if (rep.converged && !box.contains(rep.state, 1e-9)) {
        rep.status = SolveStatus::LeftBox;
        rep.converged = false;
    }
    rep.box_active.assign(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i)
        rep.box_active[static_cast<std::size_t>(i)] =
            std::abs(std::abs(rep.state[i] - box.center[i]) - box.halfwidth[i])
            <= 1e-9 * box.halfwidth[i];
    return rep;
}

// ---------------------------------------------------------------------------
// boundary sign check (desk-scale surrogate of the degree argument)

struct BoundarySignReport {
    double min_part1 = std::numeric_limits<double>::infinity();
    double min_part2 = std::numeric_limits<double>::infinity();
    int samples_part1 = 0;
    int samples_part2 = 0;
};

/// Samples every face of the box and reports the minimum of
/// grad F . (chi^(i) - chi_0) over the two boundary parts: for faces of the
/// first part the test vector zeroes the a/p block, on the second part it is
/// chi - chi_0 itself.
inline BoundarySignReport boundary_sign_check(const Objective& obj, const ParameterBox& box,
                                              int n_samples = 1000, std::uint64_t seed = 42) {
    if (n_samples < 1000) throw OutOfRange("boundary_sign_check: n_samples >= 1000");
    const int n = box.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    BoundarySignReport rep;
    const int per_face = std::max(1, n_samples / (2 * n));
    for (int face = 0; face < n; ++face)
        for (int side = -1; side <= 1; side += 2)
            for (int s = 0; s < per_face; ++s) {
                Eigen::VectorXd x = box.center;
                for (int i = 0; i < n; ++i) x[i] += U(rng) * box.halfwidth[i];
                x[face] = box.center[face] + side * box.halfwidth[face];
                const Eigen::VectorXd g = obj.grad(x);
                const bool part2 = ParameterBox::is_second_part(face);
                Eigen::VectorXd test = x - box.center;
                if (!part2)
                    for (int i = 0; i < n; ++i)
                        if (ParameterBox::is_second_part(i)) test[i] = 0.0;
                const double val = g.dot(test);
                if (part2) {
                    rep.min_part2 = std::min(rep.min_part2, val);
                    ++rep.samples_part2;
                } else {
                    rep.min_part1 = std::min(rep.min_part1, val);
                    ++rep.samples_part1;
                }
            }
    return rep;
}

// ---------------------------------------------------------------------------
// asymptotics of the solved parameters

struct AsymptoticsRow {
    double eps = 0;
    double rho = 0;
    double d = 0;        // 1 - rho^2
    double mu_dev = 0;   // max_j |mu_j / sqrt(eps) - 1|
    double xi_dev = 0;   // max_j |xi_j - omega_j|
    bool converged = false;
};

struct AsymptoticsReport {
    std::vector<AsymptoticsRow> rows;
    double mu_exponent = 0;
    double xi_exponent = 0;
};

/// Least-squares slope of log y against log x (the observed power).
inline double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InsufficientData("fit_exponent: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) throw InsufficientData("fit_exponent: fewer than two usable points");
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-14) return 0.0;
    return (m * sxy - sx * sy) / denom;
}

/// Solves the k-bubble reduced problem over a (rho, eps) grid with the pure
/// rho-datum copies (datum eps = 0, so interactions drive the deviations) and
/// fits |mu*/sqrt(eps) - 1| and |xi* - omega| against d = 1 - rho^2.
inline AsymptoticsReport asymptotics_check(const std::vector<double>& eps_grid,
                                           const std::vector<double>& rho_grid, int k,
                                           double lambda = 10.0) {
    if (eps_grid.size() < 3)
        throw InsufficientData("asymptotics_check: need >= 3 eps values");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i) {
        const double q0 = eps_grid[i + 1] / eps_grid[i];
        const double q1 = eps_grid[1] / eps_grid[0];
        if (std::abs(q0 - q1) > 1e-9 * std::abs(q1))
            throw InsufficientData("asymptotics_check: eps values must be geometric");
    }
    if (k < 2) throw OutOfRange("asymptotics_check: k >= 2 (interaction-driven deviations)");

    AsymptoticsReport rep;
    std::vector<double> ds, mus, xis;
    for (double rho : rho_grid)
        for (double eps : eps_grid) {
            std::vector<Vec3> centers(static_cast<std::size_t>(k), Vec3{0, 0, -1});
            const SphereConfiguration cfg = build_configuration(centers);
            const std::vector<DatumSpec> specs = datum_specs_G(cfg, rho, false);
            const Objective obj = make_reduced_objective(specs, eps);
            const ParameterBox box = make_box(eps, rho, k, lambda);
            const ReducedState st0 = init_state(eps, rho, k, lambda);
            const SolveReport sol = newton_solve(obj, st0.chi, box, 1e-11);
            AsymptoticsRow row;
            row.eps = eps;
            row.rho = rho;
            row.d = 1 - rho * rho;
            row.converged = sol.converged;
            if (sol.converged) {
                for (int j = 0; j < k; ++j) {
                    const double mu = sol.state[10 * j];
                    row.mu_dev = std::max(row.mu_dev, std::abs(mu / std::sqrt(eps) - 1.0));
                    const PlanePoint xi{sol.state[10 * j + 1], sol.state[10 * j + 2]};
                    row.xi_dev = std::max(row.xi_dev,
                                          (xi - specs[static_cast<std::size_t>(j)].omega).norm());
                }
                ds.push_back(row.d);
                mus.push_back(row.mu_dev);
                xis.push_back(row.xi_dev);
            }
            rep.rows.push_back(row);
        }
    if (ds.size() >= 2) {
        rep.mu_exponent = fit_exponent(ds, mus);
        rep.xi_exponent = fit_exponent(ds, xis);
    }
    return rep;
}

} // namespace hbubble
