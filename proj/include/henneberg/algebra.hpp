#pragma once

#include <complex>
#include <span>
#include <vector>

namespace henneberg {

using Complex = std::complex<double>;

/// R(r) = r - 1/r. Bijective from (0, inf) onto the real line.
double R(double r);

/// Unique positive r with R(r) = value.
double inverse_R(double value);

/// e^{i theta}. Angles that are (to within 4 ulp) a rational multiple
/// p*pi/q with q <= 720 are evaluated at the exact rational angle, so that
/// e.g. the roots of unity are exactly closed under conjugation and the
/// quadrant values are exact. Other angles go through std::polar.
Complex unit_phase(double theta);

/// Finite Laurent polynomial sum_k c_k z^k with complex coefficients.
///
/// Coefficients are held densely from lowest() to highest(). On
/// construction every real or imaginary part below 1e-15 times the
/// largest magnitude is set to zero and the exponent range is trimmed to
/// the outermost nonzero coefficients. The zero polynomial has an empty
/// range.
class LaurentPoly {
public:
    static constexpr double kDropTolerance = 1e-15;

    LaurentPoly() = default;
    LaurentPoly(int lowest, std::vector<Complex> coeffs);

    static LaurentPoly monomial(Complex coeff, int exponent);

    bool is_zero() const { return coeffs_.empty(); }
    int lowest() const { return lowest_; }
    int highest() const { return lowest_ + static_cast<int>(coeffs_.size()) - 1; }
    std::span<const Complex> coefficients() const { return coeffs_; }

    /// Coefficient of z^k; zero outside the stored range.
    Complex coeff(int k) const;
    double max_abs_coeff() const;

    /// Multiplication by z^k.
    LaurentPoly shifted(int k) const;
    LaurentPoly scaled(Complex s) const;

    LaurentPoly operator+(const LaurentPoly& other) const;
    LaurentPoly operator-(const LaurentPoly& other) const;
    LaurentPoly operator*(const LaurentPoly& other) const;

    /// Evaluation at z; throws DomainError for z = 0 when a principal part
    /// is present.
    Complex operator()(Complex z) const;

private:
    int lowest_ = 0;
    std::vector<Complex> coeffs_;
};

LaurentPoly operator*(Complex s, const LaurentPoly& p);

/// Branch value a_j = r e^{i theta} stored in polar form.
struct PolarPoint {
    double r = 1.0;
    double theta = 0.0;

    Complex value() const { return r * unit_phase(theta); }
    /// Antipodal point -1/conj(a).
    Complex antipode() const { return -unit_phase(theta) / r; }
};

/// Complexity m together with the m+1 branch values a_1..a_{m+1}.
class BranchConfiguration {
public:
    /// Throws DomainError unless every r_j is finite and positive, every
    /// angle is finite, and there are at least two points (m >= 1).
    explicit BranchConfiguration(std::vector<PolarPoint> points);

    int m() const { return static_cast<int>(points_.size()) - 1; }
    std::span<const PolarPoint> points() const { return points_; }
    const PolarPoint& operator[](std::size_t j) const { return points_[j]; }

    /// Configuration with one more pair appended.
    BranchConfiguration extended(PolarPoint a_new) const;

    /// The 2m+2 zeros a_j and -1/conj(a_j) of the branch polynomial.
    std::vector<Complex> all_roots() const;

private:
    std::vector<PolarPoint> points_;
};

/// prod_j (z - a_j)(z + 1/conj(a_j)) = sum_{h=0}^{2m+2} A_h z^h, monic.
LaurentPoly expand_product(const BranchConfiguration& config);

/// P_{m+1} from P_m through the coefficient recursion
///   A_{m+1,h} = A_{m,h-2} - A_{m,h-1} R(r) e^{i theta} - A_{m,h} e^{2 i theta},
/// applied at every exponent h (out-of-range coefficients read as zero).
/// Throws DomainError if P_m has negative exponents or a_new = 0.
LaurentPoly extend_by_pair(const LaurentPoly& P_m, PolarPoint a_new);
LaurentPoly extend_by_pair(const LaurentPoly& P_m, Complex a_new);

/// Coefficient of z^{-1}.
Complex residue_at_zero(const LaurentPoly& L);

/// Same as L(z).
Complex evaluate(const LaurentPoly& L, Complex z);

}  // namespace henneberg
