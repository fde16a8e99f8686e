#pragma once

// Independent reference computations used by the tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "henneberg/algebra.hpp"
#include "henneberg/weierstrass.hpp"

namespace oracle {

using henneberg::Complex;
using henneberg::Point3;

constexpr std::uint64_t kSeed = 0;

/// Coefficients (ascending) of prod (z - root), by repeated multiplication
/// with the roots taken directly from std::polar.
inline std::vector<Complex> expand_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{1.0};
    for (const Complex& root : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= root * c[k];
        }
        c = std::move(next);
    }
    return c;
}

inline std::vector<Complex> branch_roots(const std::vector<std::pair<double, double>>& polar) {
    std::vector<Complex> roots;
    for (const auto& [r, t] : polar) {
        const Complex a = std::polar(r, t);
        roots.push_back(a);
        roots.push_back(-1.0 / std::conj(a));
    }
    return roots;
}

/// Composite Simpson rule for int_a^b f(z) dz along the straight segment.
inline Complex simpson(const std::function<Complex(Complex)>& f, Complex a, Complex b, int n = 2000) {
    const Complex h = (b - a) / static_cast<double>(n);
    Complex s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
    return s * h / 3.0;
}

/// The three Weierstrass forms evaluated directly from c and the roots.
inline std::array<Complex, 3> phi_direct(Complex c, int m, const std::vector<Complex>& roots, Complex z) {
    Complex p = 1.0;
    for (const Complex& r : roots) p *= z - r;
    const Complex f = c * std::pow(z, -(m + 3)) * p;
    return {0.5 * (1.0 - z * z) * f, Complex(0, 0.5) * (1.0 + z * z) * f, z * f};
}

struct Rng {
    std::mt19937_64 engine{kSeed};
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(engine); }
};

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex x = k < a.size() ? a[k] : 0.0;
        const Complex y = k < b.size() ? b[k] : 0.0;
        d = std::max(d, std::abs(x - y));
    }
    return d;
}

inline std::vector<Complex> dense(const henneberg::LaurentPoly& p) {
    std::vector<Complex> out;
    if (p.is_zero()) return out;
    for (int k = 0; k <= p.highest(); ++k) out.push_back(p.coeff(k));
    return out;
}

}  // namespace oracle
