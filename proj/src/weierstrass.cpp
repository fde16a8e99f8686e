#include "henneberg/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "henneberg/errors.hpp"

namespace henneberg {

namespace {

constexpr Complex kI{0.0, 1.0};

LaurentPoly antiderivative_without_log(const LaurentPoly& phi) {
    if (phi.is_zero()) return {};
    const int lo = phi.lowest() + 1;
    const int hi = phi.highest() + 1;
    std::vector<Complex> out(static_cast<std::size_t>(hi - lo + 1));
    for (int k = phi.lowest(); k <= phi.highest(); ++k) {
        if (k == -1) continue;
        out[static_cast<std::size_t>(k + 1 - lo)] = phi.coeff(k) / static_cast<double>(k + 1);
    }
    return LaurentPoly(lo, std::move(out));
}

}  // namespace

WeierstrassData::WeierstrassData(Complex c, BranchConfiguration config) : config_(std::move(config)) {
    const double mod = std::abs(c);
    if (!std::isfinite(mod) || mod == 0.0) throw DomainError("WeierstrassData: c must be finite and nonzero");
    c_scale_ = mod;
    c_ = c / mod;
    // Keep exact unit values exact (c = +-1, +-i).
    if (std::abs(c_.real()) < 1e-15) c_ = {0.0, c_.imag() > 0 ? 1.0 : -1.0};
    else if (std::abs(c_.imag()) < 1e-15) c_ = {c_.real() > 0 ? 1.0 : -1.0, 0.0};
    P_ = expand_product(config_);
    f_ = P_.shifted(-m() - 3).scaled(c_);
}

std::array<LaurentPoly, 3> phi_forms(const WeierstrassData& data) {
    const LaurentPoly& f = data.f();
    const LaurentPoly one_minus_z2(0, {1.0, 0.0, -1.0});
    const LaurentPoly one_plus_z2(0, {1.0, 0.0, 1.0});
    return {(one_minus_z2 * f).scaled(0.5), (one_plus_z2 * f).scaled(0.5 * kI), f.shifted(1)};
}

double metric_density(const WeierstrassData& data, Complex z) {
    if (z == 0.0) throw DomainError("metric_density: z = 0 is an end");
    return 0.5 * (1.0 + std::norm(z)) * std::abs(data.f()(z));
}

double check_one_sided(const WeierstrassData& data) {
    // Summing the angles first keeps rational multiples of pi exact.
    double angle = 0.0;
    for (const PolarPoint& a : data.config().points()) angle += a.theta;
    return std::abs(std::conj(data.c()) / data.c() + unit_phase(2.0 * angle));
}

IntegratedForms integrate_phi(const WeierstrassData& data) {
    IntegratedForms forms;
    const auto phis = phi_forms(data);
    const double tol = kResidueTolerance * std::max(1.0, data.P().max_abs_coeff());
    double worst = 0.0;
    int worst_j = 0;
    for (std::size_t j = 0; j < 3; ++j) {
        const Complex res = residue_at_zero(phis[j]);
        forms.residues[j] = res;
        if (std::abs(res.imag()) > worst) {
            worst = std::abs(res.imag());
            worst_j = static_cast<int>(j);
        }
        forms.log_coeff[j] = res.real();
        forms.poly_part[j] = antiderivative_without_log(phis[j]);
    }
    if (worst > tol) {
        std::ostringstream msg;
        msg << "integrate_phi: periods do not close, |Im Res_0(phi_" << (worst_j + 1) << ")| = " << worst;
        throw PeriodError(msg.str(), worst);
    }
    return forms;
}

Point3 evaluate_forms(const IntegratedForms& forms, Complex z) {
    if (z == 0.0) throw DomainError("immersion: z = 0 is an end");
    const double log_r = std::log(std::abs(z));
    Point3 x;
    for (int j = 0; j < 3; ++j) x[j] = forms.poly_part[j](z).real() + forms.log_coeff[j] * log_r;
    return x;
}

Immersion::Immersion(const WeierstrassData& data) : forms_(integrate_phi(data)), m_(data.m()) {}

Point3 Immersion::operator()(Complex z) const { return evaluate_forms(forms_, z); }

Point3 Immersion::relative(Complex z, Complex base) const {
    if (base == 0.0) throw DomainError("immersion: base point must be nonzero");
    return evaluate_forms(forms_, z) - evaluate_forms(forms_, base);
}

Complex default_base(int m) { return unit_phase(std::numbers::pi / (2.0 * (m + 1))); }

Point3 immersion(const WeierstrassData& data, Complex z, std::optional<Complex> base) {
    return Immersion(data).relative(z, base.value_or(default_base(data.m())));
}

StabilityReport gauss_structural_stability(const WeierstrassData& data) {
    StabilityReport report;
    report.one_sided = check_one_sided(data) <= 1e-10;
    IntegratedForms forms;
    try {
        forms = integrate_phi(data);
        report.periods_closed = true;
    } catch (const PeriodError&) {
        report.periods_closed = false;
        return report;
    }

    double extent = 0.0;
    for (const PolarPoint& a : data.config().points()) {
        for (const Complex z : {a.value(), a.antipode()}) {
            const Point3 x = evaluate_forms(forms, z);
            report.branch_images.push_back({z, x});
            extent = std::max(extent, x.norm());
        }
    }
    const double merge = 1e-9 * (1.0 + extent);
    for (const BranchImage& b : report.branch_images) {
        const bool seen = std::any_of(report.distinct_images.begin(), report.distinct_images.end(),
                                      [&](const Point3& p) { return (p - b.image).norm() <= merge; });
        if (!seen) report.distinct_images.push_back(b.image);
    }
    report.stable = report.one_sided && report.periods_closed && report.gauss_map_diffeomorphism &&
                    report.distinct_images.size() >= 2;
    return report;
}

}  // namespace henneberg
