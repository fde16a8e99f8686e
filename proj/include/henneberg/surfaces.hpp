#pragma once

#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "henneberg/weierstrass.hpp"

namespace henneberg {

enum class SurfaceKind { H1, HmOdd, HmEven, Associated, LimitM2, Integrated, Bjorling };

std::string to_string(SurfaceKind kind);

/// A surface given as a map (r, theta) -> R^3 in polar coordinates z = r e^{i theta}.
struct SurfaceMap {
    SurfaceKind kind;
    double m = 0.0;      // complexity (may be 1/(2k) for HmEven)
    double phi = 0.0;    // associated-family angle
    double theta_period = 2.0 * std::numbers::pi;  // closing period in theta
    std::function<Point3(double r, double theta)> evaluate;

    Point3 operator()(double r, double theta) const { return evaluate(r, theta); }
};

// Closed forms. All throw DomainError for r <= 0.

/// Henneberg's surface H_1.
Point3 eval_H1(double r, double theta);

/// H_m for odd m >= 1, translated so that the branch points sit on the x_3-axis.
Point3 eval_Hm_odd(int m, double r, double theta);

/// H_m for even m, or m = 1/(2k). For odd integer m this is the conjugate H_m*.
/// Throws DomainError for any other m.
Point3 eval_Hm_even(double m, double r, double theta);

/// True for positive even integers, odd integers (conjugate case) and 1/(2k).
bool is_supported_even_formula_m(double m);

/// The limit surface of r_1(theta_2) H(theta_2) as theta_2 -> pi/4.
Point3 eval_limit_m2(double r, double theta);

/// Weierstrass data of the limit surface: g = z, f = i (z^4 + 1) / z^4.
WeierstrassData limit_m2_data();

/// X_phi = Re(e^{i phi} int Phi), defined only for exact forms.
class AssociatedSurface {
public:
    /// Throws PeriodError if some residue of phi_j is nonzero.
    AssociatedSurface(const WeierstrassData& data, double phi);
    Point3 operator()(Complex z) const;
    double phi() const { return phi_; }

private:
    IntegratedForms forms_;
    double phi_;
};

Point3 eval_associated(const WeierstrassData& data, double phi, Complex z);

/// max over sample points of |f_phi(-1/conj z) + conj(z^4 f_phi(z))| / |z^4 f_phi(z)|
/// with f_phi = e^{i phi} f. Vanishes iff e^{i phi} omega descends to the quotient.
double one_sided_descent_residual(const WeierstrassData& data, double phi);

SurfaceMap h1_surface();
SurfaceMap hm_odd_surface(int m);
SurfaceMap hm_even_surface(double m);
/// H_m for any integer m >= 1 (odd or even formula as appropriate).
SurfaceMap hm_surface(int m);
SurfaceMap limit_m2_surface();
SurfaceMap associated_surface(const WeierstrassData& data, double phi);
SurfaceMap integrated_surface(const WeierstrassData& data);

struct Hypocycloid {
    double r_inner;
    double R_outer;

    /// Throws DomainError unless 0 < r_inner < R_outer.
    void validate() const;
    /// Numerator of R/r in lowest terms (within 1e-9), or 0 if not rational
    /// with denominator <= 1000.
    int cusp_count() const;
};

/// Hypocycloid whose reparametrization by t = m theta is X_m(e^{i theta}).
Hypocycloid hypocycloid_for(double m);

/// (x(t), y(t)).
Eigen::Vector2d hypocycloid_point(const Hypocycloid& h, double t);

}  // namespace henneberg
