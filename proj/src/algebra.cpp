#include "henneberg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "henneberg/errors.hpp"

namespace henneberg {

namespace {

using LComplex = std::complex<long double>;

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr long long kMaxSnapDenominator = 720;

struct RationalAngle {
    long long p;  // angle = pi * p / q
    long long q;
};

// Continued-fraction search for theta = pi p/q with small q.
std::optional<RationalAngle> snap_to_rational(double theta) {
    if (!std::isfinite(theta)) return std::nullopt;
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(theta));
    if (std::abs(theta) <= tol) return RationalAngle{0, 1};
    const long double x = static_cast<long double>(theta) / kPiL;
    if (std::abs(x) > 1e9L) return std::nullopt;

    long double rest = x;
    long long p_prev = 1, q_prev = 0;
    long long p_cur = static_cast<long long>(std::floor(rest)), q_cur = 1;
    for (int iter = 0; iter < 40; ++iter) {
        if (q_cur > kMaxSnapDenominator) break;
        const double approx = std::numbers::pi * static_cast<double>(p_cur) / static_cast<double>(q_cur);
        if (std::abs(theta - approx) <= tol) return RationalAngle{p_cur, q_cur};
        const long double frac = rest - std::floor(rest);
        if (frac < 1e-30L) break;
        rest = 1.0L / frac;
        const auto a = static_cast<long long>(std::floor(rest));
        const long long p_next = a * p_cur + p_prev;
        const long long q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    return std::nullopt;
}

// e^{i pi p/q}, evaluated by quadrant reduction so that mirror angles give
// mirror values bit for bit.
LComplex rational_phase(RationalAngle a) {
    const long long two_q = 2 * a.q;
    long long p = a.p % two_q;
    if (p < 0) p += two_q;
    // angle / (pi/2) = 2p/q = quadrant + rho/q
    const long long quadrant = (2 * p) / a.q;
    const long long rho = 2 * p - quadrant * a.q;
    long double c = 1.0L, s = 0.0L;
    if (rho != 0) {
        if (2 * rho <= a.q) {
            const long double phi = kPiL * static_cast<long double>(rho) / static_cast<long double>(2 * a.q);
            c = std::cos(phi);
            s = std::sin(phi);
        } else {
            const long double psi = kPiL * static_cast<long double>(a.q - rho) / static_cast<long double>(2 * a.q);
            c = std::sin(psi);
            s = std::cos(psi);
        }
    }
    switch (quadrant) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

LComplex unit_phase_ld(double theta) {
    if (auto snapped = snap_to_rational(theta)) return rational_phase(*snapped);
    const auto t = static_cast<long double>(theta);
    return {std::cos(t), std::sin(t)};
}

long double R_ld(double r) {
    const auto x = static_cast<long double>(r);
    return x - 1.0L / x;
}

LaurentPoly from_long_double(int lowest, const std::vector<LComplex>& coeffs) {
    std::vector<Complex> out(coeffs.size());
    std::transform(coeffs.begin(), coeffs.end(), out.begin(), [](const LComplex& c) {
        return Complex(static_cast<double>(c.real()), static_cast<double>(c.imag()));
    });
    return LaurentPoly(lowest, std::move(out));
}

}  // namespace

double R(double r) { return r - 1.0 / r; }

double inverse_R(double value) {
    if (!std::isfinite(value)) throw DomainError("inverse_R: non-finite argument");
    const double root = std::sqrt(value * value + 4.0);
    // Avoid cancellation for large negative values.
    return value >= 0.0 ? 0.5 * (value + root) : 2.0 / (root - value);
}

Complex unit_phase(double theta) {
    const LComplex w = unit_phase_ld(theta);
    return {static_cast<double>(w.real()), static_cast<double>(w.imag())};
}

// ---------------------------------------------------------------------------
// LaurentPoly

LaurentPoly::LaurentPoly(int lowest, std::vector<Complex> coeffs) : lowest_(lowest), coeffs_(std::move(coeffs)) {
    double biggest = 0.0;
    for (const Complex& c : coeffs_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw DomainError("LaurentPoly: non-finite coefficient");
        biggest = std::max(biggest, std::abs(c));
    }
    const double cutoff = kDropTolerance * biggest;
    for (Complex& c : coeffs_) {
        if (std::abs(c.real()) <= cutoff) c.real(0.0);
        if (std::abs(c.imag()) <= cutoff) c.imag(0.0);
    }

    auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c != 0.0; });
    if (first == coeffs_.end()) {
        coeffs_.clear();
        lowest_ = 0;
        return;
    }
    auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), [](const Complex& c) { return c != 0.0; }).base();
    lowest_ += static_cast<int>(first - coeffs_.begin());
    coeffs_ = std::vector<Complex>(first, last);
}

LaurentPoly LaurentPoly::monomial(Complex coeff, int exponent) { return LaurentPoly(exponent, {coeff}); }

Complex LaurentPoly::coeff(int k) const {
    if (coeffs_.empty() || k < lowest_ || k > highest()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k - lowest_)];
}

double LaurentPoly::max_abs_coeff() const {
    double biggest = 0.0;
    for (const Complex& c : coeffs_) biggest = std::max(biggest, std::abs(c));
    return biggest;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    if (is_zero()) return {};
    return LaurentPoly(lowest_ + k, coeffs_);
}

LaurentPoly LaurentPoly::scaled(Complex s) const {
    std::vector<Complex> out(coeffs_);
    for (Complex& c : out) c *= s;
    return LaurentPoly(lowest_, std::move(out));
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    const int lo = std::min(lowest_, other.lowest_);
    const int hi = std::max(highest(), other.highest());
    std::vector<Complex> out(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k) out[static_cast<std::size_t>(k - lo)] = coeff(k) + other.coeff(k);
    return LaurentPoly(lo, std::move(out));
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& other) const { return *this + other.scaled(-1.0); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& other) const {
    if (is_zero() || other.is_zero()) return {};
    std::vector<LComplex> acc(coeffs_.size() + other.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
            acc[i + j] += LComplex(coeffs_[i]) * LComplex(other.coeffs_[j]);
    return from_long_double(lowest_ + other.lowest_, acc);
}

Complex LaurentPoly::operator()(Complex z) const {
    if (is_zero()) return 0.0;
    if (lowest_ < 0 && z == 0.0) throw DomainError("LaurentPoly: evaluation at z = 0 with a principal part");

    // Polynomial part: Horner in z over exponents max(lowest,0)..highest.
    Complex poly = 0.0;
    if (highest() >= 0) {
        const int start = std::max(lowest_, 0);
        for (int k = highest(); k >= start; --k) poly = poly * z + coeff(k);
        if (start > 0) poly *= std::pow(z, start);
    }
    // Principal part: Horner in w = 1/z over exponents lowest..min(highest,-1).
    Complex principal = 0.0;
    if (lowest_ < 0) {
        const Complex w = 1.0 / z;
        const int stop = std::min(highest(), -1);
        for (int k = lowest_; k <= stop; ++k) principal = principal * w + coeff(k);
        principal *= std::pow(w, -stop);
    }
    return poly + principal;
}

LaurentPoly operator*(Complex s, const LaurentPoly& p) { return p.scaled(s); }

// ---------------------------------------------------------------------------
// BranchConfiguration

BranchConfiguration::BranchConfiguration(std::vector<PolarPoint> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw DomainError("BranchConfiguration: need m + 1 >= 2 branch values");
    for (const PolarPoint& a : points_) {
        if (!std::isfinite(a.r) || !(a.r > 0.0)) throw DomainError("BranchConfiguration: every modulus must be positive");
        if (!std::isfinite(a.theta)) throw DomainError("BranchConfiguration: non-finite angle");
    }
}

BranchConfiguration BranchConfiguration::extended(PolarPoint a_new) const {
    std::vector<PolarPoint> pts(points_.begin(), points_.end());
    pts.push_back(a_new);
    return BranchConfiguration(std::move(pts));
}

std::vector<Complex> BranchConfiguration::all_roots() const {
    std::vector<Complex> roots;
    roots.reserve(2 * points_.size());
    for (const PolarPoint& a : points_) {
        roots.push_back(a.value());
        roots.push_back(a.antipode());
    }
    return roots;
}

// ---------------------------------------------------------------------------

LaurentPoly expand_product(const BranchConfiguration& config) {
    // Each antipodal pair contributes z^2 - R(r) e^{i theta} z - e^{2 i theta}.
    std::vector<LComplex> acc{1.0L};
    for (const PolarPoint& a : config.points()) {
        const LComplex phase = unit_phase_ld(a.theta);
        const LComplex phase2 = unit_phase_ld(2.0 * a.theta);
        const LComplex q0 = -phase2;
        const LComplex q1 = -R_ld(a.r) * phase;
        std::vector<LComplex> next(acc.size() + 2);
        for (std::size_t h = 0; h < acc.size(); ++h) {
            next[h] += acc[h] * q0;
            next[h + 1] += acc[h] * q1;
            next[h + 2] += acc[h];
        }
        acc = std::move(next);
    }
    return from_long_double(0, acc);
}

LaurentPoly extend_by_pair(const LaurentPoly& P_m, PolarPoint a_new) {
    if (!(a_new.r > 0.0) || !std::isfinite(a_new.r)) throw DomainError("extend_by_pair: a_new must be nonzero");
    if (P_m.is_zero()) return {};
    if (P_m.lowest() < 0) throw DomainError("extend_by_pair: P_m must be a polynomial");

    const LComplex phase = unit_phase_ld(a_new.theta);
    const LComplex phase2 = unit_phase_ld(2.0 * a_new.theta);
    const long double Rr = R_ld(a_new.r);
    const int top = P_m.highest() + 2;
    auto A = [&](int h) { return LComplex(P_m.coeff(h)); };
    std::vector<LComplex> out(static_cast<std::size_t>(top + 1));
    for (int h = 0; h <= top; ++h) out[static_cast<std::size_t>(h)] = A(h - 2) - A(h - 1) * Rr * phase - A(h) * phase2;
    return from_long_double(0, out);
}

LaurentPoly extend_by_pair(const LaurentPoly& P_m, Complex a_new) {
    if (a_new == 0.0) throw DomainError("extend_by_pair: a_new must be nonzero");
    return extend_by_pair(P_m, PolarPoint{std::abs(a_new), std::arg(a_new)});
}

Complex residue_at_zero(const LaurentPoly& L) { return L.coeff(-1); }

Complex evaluate(const LaurentPoly& L, Complex z) { return L(z); }

}  // namespace henneberg
