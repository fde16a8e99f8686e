#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "henneberg/weierstrass.hpp"

namespace henneberg {

/// Residuals of the period problem with complexity m:
///   horizontal = conj(c A_m) + c A_{m+2},  vertical = Im(c A_{m+1}),
///   onesided   = |conj(c)/c + prod a_j/conj(a_j)|.
struct PeriodResiduals {
    Complex horizontal;
    double vertical = 0.0;
    double onesided = 0.0;

    double max_abs() const;
    bool solved(double tol = 1e-10) const { return max_abs() < tol; }
};

PeriodResiduals period_residuals(const WeierstrassData& data);

// ---------------------------------------------------------------------------
// Complexity 1

/// |RHS of the horizontal equation|^2 + Im(c A_2)^2 + |e^{2i(beta+theta_2)} + 1|^2
/// for the list (e^{i beta}, r_1, r_2 e^{i theta_2}). Zero iff the list
/// solves the one-sided period problem.
double m1_residual(double r1, double r2, double theta2, double beta);

/// The five real components whose squared norm is m1_residual.
std::array<double, 5> m1_residual_components(double r1, double r2, double theta2, double beta);

struct SearchGrid {
    double L = 4.0;  // radii in [1/L, L] unless overridden below
    double r1_min = 0.0, r1_max = 0.0;  // 0 = use [1/L, L]
    double r2_min = 0.0, r2_max = 0.0;
    std::size_t n_radial = 33;   // log-spaced
    std::size_t n_angular = 48;  // theta_2, beta in [0, 2 pi)
    int refine_steps = 50;
    double accept = 1e-8;
    double merge = 1e-4;
};

struct M1Minimizer {
    double r1, r2, theta2, beta;
    double residual;
};

struct M1SearchResult {
    std::vector<M1Minimizer> minimizers;  // accepted, merged, sorted
    std::size_t grid_points = 0;
    std::size_t candidates = 0;  // discrete local minima refined
    std::size_t rejected = 0;    // refined candidates above the acceptance threshold
};

/// Grid scan for local minima of m1_residual, each refined by damped
/// Gauss-Newton inside the grid box.
M1SearchResult brute_search_m1(const SearchGrid& grid = {});

/// r_1 = r_2 = 1 and theta_2 = pi/2 or 3 pi/2 (mod 2 pi), within tol.
bool is_henneberg_list(const M1Minimizer& x, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Complexity 2

/// List (c = e^{i beta}, a_1 = r_1, a_2 = r_2 e^{i theta_2}, a_3 = r_3 e^{i theta_3}).
struct ModuliPoint {
    double r1 = 1.0, r2 = 1.0, r3 = 1.0;
    double theta2 = 0.0, theta3 = 0.0;
    double beta = 0.0;

    /// Throws DomainError if some modulus is not positive.
    void validate() const;
    WeierstrassData to_data() const;
};

/// The H_2 list (i, 1, e^{i pi/3}, e^{2 i pi/3}).
ModuliPoint h2_point();

/// Horizontal period function in its symmetric form
///   F = 1 + e^{2i t2} + e^{2i t3} - R1 (R2 e^{i t2} + R3 e^{i t3}) - R2 R3 e^{i(t2+t3)}.
Complex F_m2(const ModuliPoint& p);
/// The same function in the asymmetric form
///   e^{2i t3} + (2 cos t2 - R1 R2) e^{i t2} - R3 (R1 + R2 e^{i t2}) e^{i t3}.
Complex F_m2_asymmetric(const ModuliPoint& p);
/// Vertical period function (real).
double G_m2(const ModuliPoint& p);

/// (Re F, Im F, G).
Eigen::Vector3d period_map(const ModuliPoint& p);

/// d(Re F, Im F, G) / d(r_3, theta_2, theta_3), analytic.
Eigen::Matrix3d jacobian_P(const ModuliPoint& p);
/// Central finite-difference variant.
Eigen::Matrix3d jacobian_P_fd(const ModuliPoint& p, double step = 1e-6);

/// beta solving e^{2i(beta + theta_2 + theta_3)} = -1, in [0, pi).
double beta_from_angles(double theta2, double theta3);

enum class FamilyBranch { Plus, Minus };

/// Which representative of theta_2 + theta_3 = 0 (mod pi) to report.
enum class ThirdPoint {
    Conjugate,  // a_3 = r_2 e^{-i theta_2}
    Antipodal,  // a_3 = (1/r_2) e^{i(pi - theta_2)}, the antipode of the above
};

/// Member H(theta_2) of the explicit one-parameter family of complexity 2.
struct FamilyPoint {
    double theta2;
    FamilyBranch branch;
    double R1, R2;  // R(r_1), R(r_2)
    double r1, r2;

    ModuliPoint moduli(ThirdPoint third = ThirdPoint::Conjugate) const;
    WeierstrassData data() const { return moduli().to_data(); }
};

/// f(theta) = sqrt(1 - 8 cos 2 theta - 8 cos 4 theta); DomainError where the
/// radicand is negative.
double family_f(double theta2);

/// Closed-form family member for theta_2 in (pi/4, pi/3] U [2pi/3, 3pi/4).
/// Throws DomainError outside that set. The construction is checked:
/// |F| + |G| must be below 1e-9 or a ConvergenceError is raised.
FamilyPoint family_theta2(double theta2, FamilyBranch branch = FamilyBranch::Plus);

struct ContinuationOptions {
    double max_step = 0.02;  // in (log r_1, log r_2)
    int max_iterations = 50;
    int max_halvings = 20;
    double tolerance = 1e-12;
    double singular_det = 1e-6;
};

/// Newton continuation in (r_3, theta_2, theta_3) with (r_1, r_2) moved
/// along a straight path in log coordinates from p0 to the target. beta is
/// recovered from the one-sidedness condition at the end.
ModuliPoint continue_from(const ModuliPoint& p0, double r1_target, double r2_target,
                          const ContinuationOptions& options = {});

/// The most symmetric example of complexity m: c = i^{m-1},
/// a_j = e^{i pi (j-1)/(m+1)}. Throws DomainError for m < 1.
WeierstrassData symmetric_example(int m);

/// The constant theta_{2,0} ~ 0.499841 where family_f vanishes (reported
/// only; the family domain is determined by f >= 3).
double family_theta20();

}  // namespace henneberg
