#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "henneberg/surfaces.hpp"

namespace henneberg {

// ---------------------------------------------------------------------------
// Planar curves

/// amplitude * cos(frequency * t + phase)
struct TrigTerm {
    double amplitude;
    double frequency;
    double phase;
};

/// Finite trigonometric sum (x(t), y(t)), extended to complex t.
class AnalyticPlanarCurve {
public:
    AnalyticPlanarCurve(std::vector<TrigTerm> x, std::vector<TrigTerm> y, double t_min, double t_max,
                        bool closed = true);

    Eigen::Vector2d point(double t) const;
    Eigen::Vector2d derivative(double t) const;
    std::array<Complex, 2> point(Complex w) const;
    std::array<Complex, 2> derivative(Complex w) const;

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    double period() const { return t_max_ - t_min_; }
    bool closed() const { return closed_; }

private:
    std::vector<TrigTerm> x_, y_;
    double t_min_, t_max_;
    bool closed_;
};

/// theta -> planar part of X_m(e^{i theta}) for the even-m formula:
/// (-sin(m t)/m + sin((m+2)t)/(m+2), -cos(m t)/m - cos((m+2)t)/(m+2)).
AnalyticPlanarCurve hypocycloid_curve(double m);
/// The 4-cusp case (m = 1).
AnalyticPlanarCurve astroid();
AnalyticPlanarCurve circle(double radius = 1.0);

/// m whose hypocycloid_curve has n cusps: n odd -> n - 1, n = 0 mod 4 -> (n-2)/2,
/// n = 2 mod 4 -> 1/(2k) with n = 4k + 2. DomainError for n < 3.
double m_for_cusps(int n);

// ---------------------------------------------------------------------------
// Bjorling problem

enum class NormalSide {
    Left,   // (-y', x') / |gamma'|
    Right,  // (y', -x') / |gamma'|
};

struct BjorlingOptions {
    NormalSide side = NormalSide::Right;  // on the first regular arc
    // Flip the side at every cusp so that the normal continues analytically.
    bool continue_through_cusps = true;
    int quad_order = 8;
    double tolerance = 1e-10;
    int max_panels = 1 << 14;
    // Real base point w0 of the integration segment; defaults to Re(w).
    std::optional<double> base;
    std::size_t cusp_samples = 4096;
};

/// X(u, v) = Re(gamma(w) - i int_{w0}^{w} eta(s) x gamma'(s) ds), w = u + i v.
/// The surface meets the curve along v = 0. Polar coordinates correspond to
/// z = e^{i w}, i.e. theta = u and r = e^{-v}.
class BjorlingSurface {
public:
    BjorlingSurface(AnalyticPlanarCurve curve, BjorlingOptions options);

    /// Throws DomainError on a cusp line or outside a non-closed domain, and
    /// ConvergenceError when the quadrature does not settle.
    Point3 operator()(double u, double v) const;
    Point3 at_polar(double r, double theta) const;

    /// Unit normal along the curve as used by the solver.
    Eigen::Vector2d normal(double t) const;

    const AnalyticPlanarCurve& curve() const { return curve_; }
    const std::vector<double>& cusps() const { return cusps_; }
    const BjorlingOptions& options() const { return options_; }

    SurfaceMap as_surface_map() const;

private:
    double reduce(double u) const;
    double arc_sign(double t) const;
    Complex speed(Complex w) const;

    AnalyticPlanarCurve curve_;
    BjorlingOptions options_;
    std::vector<double> cusps_;  // in [t_min, t_max)
};

BjorlingSurface bjorling_solve(const AnalyticPlanarCurve& curve, const BjorlingOptions& options = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int order);

/// int_a^b f along the straight segment, panels doubled until two successive
/// estimates differ by less than tol.
Complex integrate_segment(const std::function<Complex(Complex)>& f, Complex a, Complex b, int order, double tol,
                          int max_panels);

// ---------------------------------------------------------------------------
// Isometries

struct RigidMotion {
    Eigen::Matrix3d Q = Eigen::Matrix3d::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();

    Point3 apply(const Point3& p) const { return Q * p + t; }
    bool is_orthogonal(double tol = 1e-12) const;
    static RigidMotion rotation_z(double angle);
    /// Diagonal reflection diag(s1, s2, s3), each +-1.
    static RigidMotion diagonal(double s1, double s2, double s3);
};

/// Least-squares rigid motion (reflections allowed) taking from[i] to to[i].
RigidMotion fit_motion(const std::vector<Point3>& from, const std::vector<Point3>& to);

/// (r, theta) -> (r or 1/r, sign * theta + pi * num / den), shift taken mod 2 pi.
class ParameterMap {
public:
    ParameterMap() = default;
    ParameterMap(bool invert_r, int theta_sign, long shift_num, long shift_den);

    static ParameterMap identity() { return {}; }
    static ParameterMap shift(long num, long den) { return {false, 1, num, den}; }
    static ParameterMap reflection(long num = 0, long den = 1) { return {false, -1, num, den}; }
    static ParameterMap inversion() { return {true, 1, 0, 1}; }

    /// (this after first)(p) = this(first(p)).
    ParameterMap after(const ParameterMap& first) const;
    std::pair<double, double> operator()(double r, double theta) const;

    bool invert_r() const { return invert_r_; }
    int theta_sign() const { return theta_sign_; }
    long shift_num() const { return num_; }
    long shift_den() const { return den_; }
    double shift_angle() const;
    std::string describe() const;

    bool operator==(const ParameterMap& other) const = default;

private:
    void normalize();

    bool invert_r_ = false;
    int theta_sign_ = 1;
    long num_ = 0;  // in [0, 2 den)
    long den_ = 1;
};

struct IsometryCertificate {
    ParameterMap sigma;
    RigidMotion motion;
    double residual = 0.0;
    double tolerance = 0.0;  // 1e-9 * sample diameter
    bool passed = false;
};

struct SampleSpec {
    std::size_t count = 200;
    double r_min = 0.5, r_max = 2.0;
    std::uint64_t seed = 0;
};

IsometryCertificate verify_isometry(const SurfaceMap& S, const ParameterMap& sigma, const RigidMotion& motion,
                                    const SampleSpec& samples = {});
/// As above with the motion fitted by Procrustes.
IsometryCertificate fit_isometry(const SurfaceMap& S, const ParameterMap& sigma, const SampleSpec& samples = {});

/// (O1), (O2) for odd m; (E1), (E2), (E3) for even m.
std::vector<ParameterMap> isometry_generators(int m);

struct IsometryGroup {
    int m = 0;
    std::vector<IsometryCertificate> elements;
    bool closed = false;  // every product of two elements is an element
    bool all_passed() const;
};

/// Closes the generators under composition, verifies every element against
/// the closed form of H_m, and checks the Cayley table. Throws StructuralError
/// if closure needs more than 4m + 4 elements.
IsometryGroup enumerate_isometries(int m, const SampleSpec& samples = {});

// ---------------------------------------------------------------------------
// Flux and curves

/// |Res_0(phi_j)|, j = 1..3.
std::array<double, 3> flux_exactness(const WeierstrassData& data);

using CurveFn = std::function<Point3(double)>;

/// Parameters in [t0, t0 + period) where the curve has a cusp: a reversal of
/// direction with speed below 1e-8 of the maximal speed. Marks closer than
/// 1e-3 are merged.
std::vector<double> find_cusps(const CurveFn& curve, double t0, double period, std::size_t samples = 4096);

/// Number of distinct cusp points on a closed curve over one period
/// (cusps with the same image are counted once).
int cusp_count(const CurveFn& curve, double period, std::size_t samples = 4096);

}  // namespace henneberg
