#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "hbubble/errors.hpp"
#include "hbubble/geometry.hpp"

namespace hbubble {

namespace detail {

/// In-place iterative radix-2 FFT (n a power of two).
inline void fft_pow2(std::vector<Complex>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw OutOfRange("fft_pow2: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace detail

/// Boundary values on the unit circle: N equispaced samples (N a power of
/// two) or an analytic closure in the angle.
struct BoundaryDatum {
    std::vector<Vec3> samples;

    BoundaryDatum() = default;

    explicit BoundaryDatum(std::vector<Vec3> s) : samples(std::move(s)) {
        if (samples.size() < 256 || (samples.size() & (samples.size() - 1)) != 0)
            throw OutOfRange("BoundaryDatum: need >= 256 samples, power of two");
    }

    BoundaryDatum(const std::function<Vec3(double)>& f, std::size_t n = 2048) {
        if (n < 256 || (n & (n - 1)) != 0)
            throw OutOfRange("BoundaryDatum: need >= 256 samples, power of two");
        samples.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            samples.push_back(f(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n)));
    }

    std::size_t size() const { return samples.size(); }
};

/// One real harmonic component on the disk in trigonometric form:
/// u(z) = Re c_0 + 2 Re sum_{n>=1} c_n z^n. Term-wise differentiation gives
/// derivatives of every order as Re(i^{jy} g^{(m)}(z)).
class HarmonicScalar {
public:
    HarmonicScalar() = default;

    explicit HarmonicScalar(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {}

    /// Fit from equispaced boundary samples (truncation at the Nyquist mode).
    static HarmonicScalar fit(const std::vector<double>& samples) {
        const std::size_t n = samples.size();
        std::vector<Complex> buf(samples.begin(), samples.end());
        detail::fft_pow2(buf);
        std::vector<Complex> c(n / 2 + 1);
        for (std::size_t k = 0; k <= n / 2; ++k) c[k] = buf[k] / static_cast<double>(n);
        c[n / 2] *= 0.5; // split the Nyquist mode between +N/2 and -N/2
        return HarmonicScalar(std::move(c));
    }

    std::size_t modes() const { return c_.empty() ? 0 : c_.size() - 1; }

    /// m-th complex derivative of g(z) = c_0 + 2 sum_{n>=1} c_n z^n.
    Complex holo_deriv(int m, Complex z) const {
        if (c_.empty()) return 0.0;
        const int top = static_cast<int>(c_.size()) - 1;
        if (m > top) return 0.0;
        // Horner from the top mode down, carrying the falling factorial
        Complex acc = 0.0;
        for (int n = top; n >= std::max(m, 1); --n) {
            double fall = 1.0;
            for (int t = 0; t < m; ++t) fall *= static_cast<double>(n - t);
            acc = acc * z + 2.0 * fall * c_[static_cast<std::size_t>(n)];
        }
        if (m == 0) acc = acc * z + c_[0];
        return acc;
    }

    double value(Complex z) const { return holo_deriv(0, z).real(); }

    /// d^{jx+jy} u / dx^{jx} dy^{jy}.
    double deriv(int jx, int jy, Complex z) const {
        const Complex g = holo_deriv(jx + jy, z);
        const Complex rot = std::pow(Complex(0, 1), jy);
        return (rot * g).real();
    }

    const std::vector<Complex>& coefficients() const { return c_; }

private:
    std::vector<Complex> c_;
};

/// R^3-valued harmonic extension: three independent scalar components.
struct HarmonicField {
    std::array<HarmonicScalar, 3> comp;
    std::size_t boundary_samples = 0;

    Vec3 value(Complex z) const {
        return {comp[0].value(z), comp[1].value(z), comp[2].value(z)};
    }
    Vec3 value(PlanePoint p) const { return value(p.c()); }

    Vec3 deriv(int jx, int jy, Complex z) const {
        return {comp[0].deriv(jx, jy, z), comp[1].deriv(jx, jy, z), comp[2].deriv(jx, jy, z)};
    }

    MapSample sample(PlanePoint p) const {
        MapSample s;
        s.value = value(p.c());
        s.grad_x = deriv(1, 0, p.c());
        s.grad_y = deriv(0, 1, p.c());
        return s;
    }
};

/// Harmonic extension of boundary data by discrete Fourier transform.
inline HarmonicField poisson_extend(const BoundaryDatum& datum) {
    const std::size_t n = datum.size();
    HarmonicField f;
    f.boundary_samples = n;
    std::vector<double> scratch(n);
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < n; ++i) scratch[i] = datum.samples[i][k];
        f.comp[static_cast<std::size_t>(k)] = HarmonicScalar::fit(scratch);
    }
    return f;
}

} // namespace hbubble
