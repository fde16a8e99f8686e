#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "henneberg/algebra.hpp"

namespace henneberg {

using Point3 = Eigen::Vector3d;

/// Weierstrass data on C* with Gauss map g(z) = z and
///   omega = f(z) dz,  f(z) = c z^{-m-3} prod_j (z - a_j)(z + 1/conj(a_j)).
///
/// The leading constant is normalized to |c| = 1 on construction; the
/// discarded positive factor is kept in c_scale() (it only rescales the
/// surface by a homothety).
class WeierstrassData {
public:
    /// Throws DomainError if c is zero or non-finite.
    WeierstrassData(Complex c, BranchConfiguration config);

    Complex c() const { return c_; }
    double c_scale() const { return c_scale_; }
    int m() const { return config_.m(); }
    const BranchConfiguration& config() const { return config_; }

    /// The branch polynomial P = expand_product(config).
    const LaurentPoly& P() const { return P_; }
    const LaurentPoly& f() const { return f_; }

private:
    Complex c_;
    double c_scale_ = 1.0;
    BranchConfiguration config_;
    LaurentPoly P_;
    LaurentPoly f_;
};

/// phi_1 = (1 - z^2) f / 2, phi_2 = i (1 + z^2) f / 2, phi_3 = z f.
std::array<LaurentPoly, 3> phi_forms(const WeierstrassData& data);

/// Conformal factor lambda(z) = (1 + |z|^2) |f(z)| / 2 with ds = lambda |dz|.
/// Throws DomainError at z = 0.
double metric_density(const WeierstrassData& data, Complex z);

/// |conj(c)/c + prod_j a_j/conj(a_j)|; zero exactly when f descends to the
/// quotient by z -> -1/conj(z).
double check_one_sided(const WeierstrassData& data);

/// Termwise antiderivatives of phi_1..phi_3. The z^{-1} terms are kept
/// aside as real multipliers of ln|z|.
struct IntegratedForms {
    std::array<LaurentPoly, 3> poly_part;
    std::array<double, 3> log_coeff{};
    std::array<Complex, 3> residues{};
};

/// Tolerance applied to |Im Res_0(phi_j)| (scaled by max(1, max |A_h|)).
inline constexpr double kResidueTolerance = 1e-10;

/// Throws PeriodError (carrying the largest |Im Res_0(phi_j)|) when some
/// residue is not real, i.e. the immersion would not be single-valued.
IntegratedForms integrate_phi(const WeierstrassData& data);

/// Re of the termwise antiderivative, without additive constant:
/// X(z) = Re(poly_part(z)) + log_coeff ln|z|.
Point3 evaluate_forms(const IntegratedForms& forms, Complex z);

/// The conformal harmonic map X = Re int (phi_1, phi_2, phi_3).
///
/// operator() uses the constant-free antiderivative. For the symmetric
/// examples with odd m this frame satisfies X(e^{i pi/(2(m+1))}) = 0; for
/// even m it is the frame in which the branch images sit at the hypocycloid
/// cusps.
class Immersion {
public:
    explicit Immersion(const WeierstrassData& data);

    Point3 operator()(Complex z) const;
    /// X(z) - X(base).
    Point3 relative(Complex z, Complex base) const;

    const IntegratedForms& forms() const { return forms_; }
    int m() const { return m_; }

private:
    IntegratedForms forms_;
    int m_;
};

/// X(z) - X(base); base defaults to e^{i pi/(2(m+1))}.
Point3 immersion(const WeierstrassData& data, Complex z, std::optional<Complex> base = std::nullopt);

/// Default base point e^{i pi/(2(m+1))}.
Complex default_base(int m);

struct BranchImage {
    Complex parameter;
    Point3 image;
};

struct StabilityReport {
    bool one_sided = false;
    bool periods_closed = false;
    // g(z) = z induces the identity of P^2, so the extended unoriented
    // Gauss map is always a diffeomorphism here.
    bool gauss_map_diffeomorphism = true;
    std::vector<BranchImage> branch_images;  // a_j and -1/conj(a_j), j = 1..m+1
    std::vector<Point3> distinct_images;
    bool stable = false;
};

/// Structural stability check: one-sided quotient, closed periods, Gauss
/// map diffeomorphism of P^2, and more than one branch image in R^3.
StabilityReport gauss_structural_stability(const WeierstrassData& data);

}  // namespace henneberg
