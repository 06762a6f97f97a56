#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "hbubble/errors.hpp"

namespace hbubble {

using Complex = std::complex<double>;

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm_inf(const Vec3& a) {
    return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

/// A point of the parameter plane, read as z = x + iy when convenient.
struct PlanePoint {
    double x = 0, y = 0;

    Complex c() const { return {x, y}; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }

    static PlanePoint from(Complex z) { return {z.real(), z.imag()}; }
};

inline PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.x + b.x, a.y + b.y}; }
inline PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
inline PlanePoint operator*(double s, PlanePoint a) { return {s * a.x, s * a.y}; }

struct Mat3 {
    // row-major
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int i, int j) const { return m[3 * i + j]; }
    double& operator()(int i, int j) { return m[3 * i + j]; }

    static Mat3 identity() { return {}; }

    Mat3 transpose() const {
        Mat3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
        return t;
    }

    double det() const {
        const auto& a = *this;
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
             - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
             + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    }
};

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

inline double orthogonality_defect(const Mat3& q) {
    Mat3 qtq = q.transpose() * q;
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            worst = std::max(worst, std::abs(qtq(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

/// Rotation about the u3-axis by angle b; (v1 + i v2) -> e^{ib}(v1 + i v2).
inline Mat3 rotation_about_z(double b) {
    Mat3 r;
    r(0, 0) = std::cos(b); r(0, 1) = -std::sin(b); r(0, 2) = 0;
    r(1, 0) = std::sin(b); r(1, 1) = std::cos(b);  r(1, 2) = 0;
    r(2, 0) = 0;           r(2, 1) = 0;            r(2, 2) = 1;
    return r;
}

inline Mat3 rotation_about_x(double b) {
    Mat3 r;
    r(0, 0) = 1; r(0, 1) = 0;            r(0, 2) = 0;
    r(1, 0) = 0; r(1, 1) = std::cos(b);  r(1, 2) = -std::sin(b);
    r(2, 0) = 0; r(2, 1) = std::sin(b);  r(2, 2) = std::cos(b);
    return r;
}

inline Mat3 rotation_about_y(double b) {
    Mat3 r;
    r(0, 0) = std::cos(b);  r(0, 1) = 0; r(0, 2) = std::sin(b);
    r(1, 0) = 0;            r(1, 1) = 1; r(1, 2) = 0;
    r(2, 0) = -std::sin(b); r(2, 1) = 0; r(2, 2) = std::cos(b);
    return r;
}

/// Euler-angle rotation with identity at (theta, phi, psi) = (pi/2, 0, 0).
///
/// The matrix is the canonical parameterization used by the reduced energy;
/// the z-x-y product below is kept only as a conversion utility.
struct RotationSO3 {
    double theta = M_PI / 2, phi = 0, psi = 0;

    static RotationSO3 identity() { return {}; }

    Mat3 matrix() const {
        const double ct = std::cos(theta), st = std::sin(theta);
        const double cp = std::cos(phi), sp = std::sin(phi);
        const double cs = std::cos(psi), ss = std::sin(psi);
        Mat3 q;
        q(0, 0) = cs * cp - ct * sp * ss;
        q(0, 1) = -st * sp;
        q(0, 2) = -ss * cp - ct * sp * cs;
        q(1, 0) = cs * sp + ct * cp * ss;
        q(1, 1) = st * cp;
        q(1, 2) = -ss * sp + ct * cp * cs;
        q(2, 0) = ss * st;
        q(2, 1) = -ct;
        q(2, 2) = cs * st;
        return q;
    }

    Mat3 inverse_matrix() const { return matrix().transpose(); }
};

/// z-x-y rotation product Q_gamma Q_beta Q_alpha (conversion utility only).
inline Mat3 rotation_product(double alpha, double beta, double gamma) {
    return rotation_about_y(gamma) * rotation_about_x(beta) * rotation_about_z(alpha);
}

/// Map value together with its partial derivatives at one plane point.
struct MapSample {
    Vec3 value;
    Vec3 grad_x;
    Vec3 grad_y;
};

} // namespace hbubble
