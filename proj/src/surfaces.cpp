#include "henneberg/surfaces.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "henneberg/errors.hpp"

namespace henneberg {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_radius(double r, const char* where) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        std::ostringstream msg;
        msg << where << ": r must be positive and finite, got " << r;
        throw DomainError(msg.str());
    }
}

// k with m = 1/(2k), or 0.
int reciprocal_even_index(double m) {
    if (!(m > 0.0) || m >= 1.0) return 0;
    const double k = std::round(1.0 / (2.0 * m));
    if (k < 1.0 || std::abs(m - 1.0 / (2.0 * k)) > 1e-12) return 0;
    return static_cast<int>(k);
}

bool is_positive_integer(double m) { return m >= 1.0 && m == std::floor(m); }

}  // namespace

std::string to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::H1: return "H1";
        case SurfaceKind::HmOdd: return "HmOdd";
        case SurfaceKind::HmEven: return "HmEven";
        case SurfaceKind::Associated: return "Associated";
        case SurfaceKind::LimitM2: return "LimitM2";
        case SurfaceKind::Integrated: return "Integrated";
        case SurfaceKind::Bjorling: return "Bjorling";
    }
    return "unknown";
}

Point3 eval_H1(double r, double theta) {
    require_positive_radius(r, "eval_H1");
    const double a = r - 1.0 / r;
    const double b = r * r * r - 1.0 / (r * r * r);
    const double c = r * r + 1.0 / (r * r);
    return {std::cos(theta) / 2 * a - std::cos(3 * theta) / 6 * b,
            -std::sin(theta) / 2 * a - std::sin(3 * theta) / 6 * b,
            std::cos(2 * theta) / 2 * c};
}

Point3 eval_Hm_odd(int m, double r, double theta) {
    if (m < 1 || m % 2 == 0) {
        std::ostringstream msg;
        msg << "eval_Hm_odd: m must be odd and positive, got " << m;
        throw DomainError(msg.str());
    }
    require_positive_radius(r, "eval_Hm_odd");
    const double md = m;
    const double a = std::pow(r, md) - std::pow(r, -md);
    const double b = std::pow(r, md + 2) - std::pow(r, -md - 2);
    const double c = std::pow(r, md + 1) + std::pow(r, -md - 1);
    return {std::cos(md * theta) / (2 * md) * a - std::cos((md + 2) * theta) / (2 * (md + 2)) * b,
            -std::sin(md * theta) / (2 * md) * a - std::sin((md + 2) * theta) / (2 * (md + 2)) * b,
            std::cos((md + 1) * theta) / (md + 1) * c};
}

bool is_supported_even_formula_m(double m) { return is_positive_integer(m) || reciprocal_even_index(m) > 0; }

Point3 eval_Hm_even(double m, double r, double theta) {
    if (!is_supported_even_formula_m(m)) {
        std::ostringstream msg;
        msg << "eval_Hm_even: m must be a positive integer or 1/(2k), got " << m;
        throw DomainError(msg.str());
    }
    require_positive_radius(r, "eval_Hm_even");
    const double a = std::pow(r, m) + std::pow(r, -m);
    const double b = std::pow(r, m + 2) + std::pow(r, -m - 2);
    const double c = std::pow(r, -m - 1) - std::pow(r, m + 1);
    return {-std::sin(m * theta) / (2 * m) * a + std::sin((m + 2) * theta) / (2 * (m + 2)) * b,
            -std::cos(m * theta) / (2 * m) * a - std::cos((m + 2) * theta) / (2 * (m + 2)) * b,
            std::sin((m + 1) * theta) / (m + 1) * c};
}

Point3 eval_limit_m2(double r, double theta) {
    require_positive_radius(r, "eval_limit_m2");
    const double a = r - 1.0 / r;
    const double b = r * r * r - 1.0 / (r * r * r);
    const double c = r * r + 1.0 / (r * r);
    return {-std::sin(theta) / 2 * a + std::sin(3 * theta) / 6 * b,
            -std::cos(theta) / 2 * a - std::cos(3 * theta) / 6 * b,
            -std::cos(theta) * std::sin(theta) * c};
}

WeierstrassData limit_m2_data() {
    return WeierstrassData({0.0, 1.0}, BranchConfiguration({{1.0, kPi / 4}, {1.0, 3 * kPi / 4}}));
}

AssociatedSurface::AssociatedSurface(const WeierstrassData& data, double phi) : forms_(integrate_phi(data)), phi_(phi) {
    const double tol = kResidueTolerance * std::max(1.0, data.P().max_abs_coeff());
    for (const Complex& res : forms_.residues) {
        if (std::abs(res) > tol) {
            std::ostringstream msg;
            msg << "associated family needs an exact Weierstrass form, |Res| = " << std::abs(res);
            throw PeriodError(msg.str(), std::abs(res));
        }
    }
}

Point3 AssociatedSurface::operator()(Complex z) const {
    if (z == 0.0) throw DomainError("associated surface: z = 0 is an end");
    const Complex rot = unit_phase(phi_);
    Point3 x;
    for (int j = 0; j < 3; ++j) x[j] = (rot * forms_.poly_part[j](z)).real();
    return x;
}

Point3 eval_associated(const WeierstrassData& data, double phi, Complex z) { return AssociatedSurface(data, phi)(z); }

double one_sided_descent_residual(const WeierstrassData& data, double phi) {
    const LaurentPoly f = data.f().scaled(unit_phase(phi));
    static const double radii[] = {0.37, 0.61, 0.93, 1.27, 1.9};
    constexpr int n_angles = 23;
    double worst = 0.0;
    for (double r : radii) {
        for (int k = 0; k < n_angles; ++k) {
            const Complex z = std::polar(r, 0.113 + 2 * kPi * k / n_angles);
            const Complex z4f = z * z * z * z * f(z);
            const double scale = std::abs(z4f);
            if (scale < 1e-8) continue;  // too close to a branch point
            const Complex image = -1.0 / std::conj(z);
            worst = std::max(worst, std::abs(f(image) + std::conj(z4f)) / scale);
        }
    }
    return worst;
}

SurfaceMap h1_surface() { return {SurfaceKind::H1, 1.0, 0.0, 2 * kPi, eval_H1}; }

SurfaceMap hm_odd_surface(int m) {
    eval_Hm_odd(m, 1.0, 0.0);  // validates m
    return {SurfaceKind::HmOdd, static_cast<double>(m), 0.0, 2 * kPi,
            [m](double r, double t) { return eval_Hm_odd(m, r, t); }};
}

SurfaceMap hm_even_surface(double m) {
    eval_Hm_even(m, 1.0, 0.0);
    const int k = reciprocal_even_index(m);
    const double period = k > 0 ? 4.0 * k * kPi : 2 * kPi;
    return {SurfaceKind::HmEven, m, 0.0, period, [m](double r, double t) { return eval_Hm_even(m, r, t); }};
}

SurfaceMap hm_surface(int m) { return m % 2 == 1 ? hm_odd_surface(m) : hm_even_surface(m); }

SurfaceMap limit_m2_surface() { return {SurfaceKind::LimitM2, 2.0, 0.0, 2 * kPi, eval_limit_m2}; }

SurfaceMap associated_surface(const WeierstrassData& data, double phi) {
    auto surface = std::make_shared<const AssociatedSurface>(data, phi);
    return {SurfaceKind::Associated, static_cast<double>(data.m()), phi, 2 * kPi,
            [surface](double r, double t) {
                require_positive_radius(r, "associated surface");
                return (*surface)(std::polar(r, t));
            }};
}

SurfaceMap integrated_surface(const WeierstrassData& data) {
    auto surface = std::make_shared<const Immersion>(data);
    return {SurfaceKind::Integrated, static_cast<double>(data.m()), 0.0, 2 * kPi,
            [surface](double r, double t) {
                require_positive_radius(r, "integrated surface");
                return (*surface)(std::polar(r, t));
            }};
}

void Hypocycloid::validate() const {
    if (!(r_inner > 0.0) || !(R_outer > r_inner) || !std::isfinite(R_outer))
        throw DomainError("Hypocycloid: need 0 < r_inner < R_outer");
}

int Hypocycloid::cusp_count() const {
    validate();
    const double ratio = R_outer / r_inner;
    for (int q = 1; q <= 1000; ++q) {
        const double p = std::round(ratio * q);
        if (std::abs(ratio * q - p) < 1e-9 * q) {
            const long num = static_cast<long>(p);
            return static_cast<int>(num / std::gcd(num, static_cast<long>(q)));
        }
    }
    return 0;
}

Hypocycloid hypocycloid_for(double m) {
    if (!(m > 0.0)) throw DomainError("hypocycloid_for: m must be positive");
    return {1.0 / (m + 2), (2 * m + 2) / (m * (m + 2))};
}

Eigen::Vector2d hypocycloid_point(const Hypocycloid& h, double t) {
    h.validate();
    const double d = h.R_outer - h.r_inner;
    return {-d * std::sin(t) + h.r_inner * std::sin(d / h.r_inner * t),
            -d * std::cos(t) - h.r_inner * std::cos(d / h.r_inner * t)};
}

}  // namespace henneberg
