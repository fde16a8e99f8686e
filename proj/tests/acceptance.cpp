// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "henneberg/algebra.hpp"
#include "henneberg/geometry.hpp"
#include "henneberg/period.hpp"
#include "henneberg/surfaces.hpp"
#include "henneberg/weierstrass.hpp"
#include "oracles.hpp"

using namespace henneberg;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2 * pi)); }

bool near_cusp(const BjorlingSurface& s, double u) {
    for (double c : s.cusps())
        if (std::abs(std::remainder(u - c, s.curve().period())) < 1e-3) return true;
    return false;
}

Complex closed_form_c(int m) { return m % 2 ? Complex(1.0, 0.0) : Complex(0.0, 1.0); }

Point3 closed_form(int m, double r, double t) { return m % 2 ? eval_Hm_odd(m, r, t) : eval_Hm_even(m, r, t); }

Outcome symmetric_periods() {
    const auto t0 = Clock::now();
    bool exact = true;
    for (int m = 1; m <= 8; ++m) {
        const PeriodResiduals r = period_residuals(symmetric_example(m));
        exact = exact && r.horizontal == Complex(0.0, 0.0) && r.vertical == 0.0 && r.onesided == 0.0;
    }
    const double t = seconds_since(t0);
    return {exact && t < 1.0,
            std::string("m = 1..8 residuals exactly zero: ") + (exact ? "yes" : "no") + fmt(", %.3f s", t)};
}

Outcome closed_form_equivalence() {
    const auto t0 = Clock::now();
    oracle::Rng rng;
    double worst = 0.0;
    for (int m = 1; m <= 6; ++m) {
        const WeierstrassData d = symmetric_example(m);
        const double s = (d.c() / closed_form_c(m)).real();
        const Immersion X(d);
        for (int i = 0; i < 1000; ++i) {
            const double r = rng.log_uniform(1.0 / 3.0, 3.0), t = rng.uniform(0, 2 * pi);
            worst = std::max(worst, (X(std::polar(r, t)) - s * closed_form(m, r, t)).norm());
        }
    }
    const double t = seconds_since(t0);
    return {worst < 1e-10 && t < 10.0, fmt("max error %.3e over 6000 points (tol 1e-10), %.2f s", worst, t)};
}

Outcome m1_uniqueness() {
    const auto t0 = Clock::now();
    const M1SearchResult result = brute_search_m1();
    bool ok = !result.minimizers.empty();
    for (const M1Minimizer& x : result.minimizers) {
        const bool henneberg = std::abs(x.r1 - 1) < 1e-6 && std::abs(x.r2 - 1) < 1e-6 &&
                               (angle_gap(x.theta2, pi / 2) < 1e-6 || angle_gap(x.theta2, -pi / 2) < 1e-6);
        ok = ok && henneberg && x.residual < 1e-8;
    }
    const double t = seconds_since(t0);
    return {ok && t < 60.0, fmt("%.0f minimizers, all Henneberg lists; %.0f candidates above 1e-8; %.2f s",
                                static_cast<double>(result.minimizers.size()),
                                static_cast<double>(result.rejected), t)};
}

Outcome family_residuals() {
    double worst = 0.0;
    const double lo = pi / 4 + 1e-3, hi = pi / 3;
    for (int k = 0; k < 50; ++k) {
        const double t2 = lo + (hi - lo) * k / 49.0;
        for (auto b : {FamilyBranch::Plus, FamilyBranch::Minus}) {
            const ModuliPoint p = family_theta2(t2, b).moduli();
            worst = std::max(worst, std::abs(F_m2(p)) + std::abs(G_m2(p)));
        }
    }
    return {worst < 1e-9, fmt("max |F| + |G| = %.3e over 50 values and both branches (tol 1e-9)", worst)};
}

Outcome jacobian() {
    const double det = jacobian_P(h2_point()).determinant();
    const double det_err = std::abs(det - 2 * std::sqrt(3.0));
    oracle::Rng rng;
    double fd = 0.0;
    for (int i = 0; i < 100; ++i) {
        ModuliPoint p;
        p.r1 = rng.log_uniform(0.3, 3.0);
        p.r2 = rng.log_uniform(0.3, 3.0);
        p.r3 = rng.log_uniform(0.3, 3.0);
        p.theta2 = rng.uniform(0, 2 * pi);
        p.theta3 = rng.uniform(0, 2 * pi);
        fd = std::max(fd, (jacobian_P(p) - jacobian_P_fd(p, 1e-6)).cwiseAbs().maxCoeff());
    }
    return {det_err < 1e-9 && fd < 1e-5,
            fmt("det at H_2 = %.15f (|det - 2 sqrt 3| = %.1e); max FD gap %.1e (tol 1e-5)", det, det_err, fd)};
}

Outcome continuation() {
    double worst = 0.0;
    const double lo = 0.9, hi = pi / 3;
    for (int k = 0; k < 12; ++k) {
        const double t2 = lo + (hi - lo) * k / 11.0;
        const FamilyPoint fam = family_theta2(t2);
        const ModuliPoint c = continue_from(h2_point(), fam.r1, fam.r2);
        // The path from H_2 stays on the antipodal representative a_3 = (1/r_2) e^{i(pi - theta_2)}.
        const ModuliPoint ref = fam.moduli(ThirdPoint::Antipodal);
        worst = std::max({worst, std::abs(c.r3 - ref.r3), angle_gap(c.theta2, ref.theta2),
                          angle_gap(c.theta3, ref.theta3)});
    }
    return {worst < 1e-8, fmt("max gap in (r3, theta2, theta3) = %.3e over 12 values in [0.9, pi/3] (tol 1e-8)", worst)};
}

Outcome limit_identification() {
    const Immersion limit(limit_m2_data());
    std::vector<double> sups;
    for (double t2 : {0.79, 0.786, 0.7855}) {
        const FamilyPoint fam = family_theta2(t2);
        const WeierstrassData d = fam.data();
        const Immersion X(d);
        const double scale = fam.r1 * d.c_scale();
        double sup = 0.0;
        for (int i = 0; i < 25; ++i) {
            const double r = std::exp(std::log(0.5) + std::log(4.0) * i / 24.0);
            for (int j = 0; j < 64; ++j) {
                const Complex z = std::polar(r, 2 * pi * j / 64);
                sup = std::max(sup, (scale * X(z) - limit(z)).norm());
            }
        }
        sups.push_back(sup);
    }
    const bool decreasing = sups[1] < sups[0] && sups[2] < sups[1];

    const double c = std::cos(pi / 4), s = std::sin(pi / 4);
    Eigen::Matrix3d rot;
    rot << c, s, 0, -s, c, 0, 0, 0, 1;
    oracle::Rng rng;
    double identity = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r = rng.log_uniform(0.5, 2.0), t = rng.uniform(0, 2 * pi);
        identity = std::max(identity, (rot * eval_limit_m2(r, t + pi / 4) + eval_H1(r, t)).norm());
    }
    return {decreasing && identity < 1e-12,
            fmt("sup on 1/2 <= |z| <= 2: %.3e, ", sups[0]) + fmt("%.3e, %.3e", sups[1], sups[2]) +
                fmt("; rotation identity gap %.1e (tol 1e-12)", identity)};
}

Outcome hypocycloids() {
    bool ok = true;
    double worst = 0.0;
    for (int m = 2; m <= 8; m += 2) {
        const Hypocycloid h = hypocycloid_for(m);
        for (int k = 0; k < 720; ++k) {
            const double t = 2 * pi * k / 720;
            const Point3 x = eval_Hm_even(m, 1.0, t);
            const Eigen::Vector2d y = hypocycloid_point(h, m * t);
            worst = std::max({worst, std::abs(x.x() - y.x()), std::abs(x.y() - y.y()), std::abs(x.z())});
        }
        const SurfaceMap S = hm_surface(m);
        ok = ok && cusp_count([&](double t) { return S(1.0, t); }, 2 * pi) == m + 1;
    }
    for (int m = 1; m <= 7; m += 2) {
        const SurfaceMap S = hm_even_surface(m);
        ok = ok && cusp_count([&](double t) { return S(1.0, t); }, 2 * pi) == 2 * m + 2;
    }
    const double a = 3 * std::sqrt(3.0) / 8;
    const std::vector<Point3> cusps{{0, -0.75, 0}, {-a, 0.375, 0}, {a, 0.375, 0}};
    const StabilityReport h2 = gauss_structural_stability(symmetric_example(2));
    double cusp_gap = h2.distinct_images.size() == 3 ? 0.0 : 1.0;
    for (const Point3& c : cusps) {
        double nearest = 1e300;
        for (const Point3& p : h2.distinct_images) nearest = std::min(nearest, (p - c).norm());
        cusp_gap = std::max(cusp_gap, nearest);
    }
    return {ok && worst < 1e-12 && cusp_gap < 1e-12, fmt("hypocycloid gap %.1e; cusp counts ", worst) +
                                                         (ok ? "m + 1 and 2m + 2" : "wrong") +
                                                         fmt("; H_2 cusp gap %.1e", cusp_gap)};
}

Outcome isometries() {
    bool ok = true;
    std::string sizes;
    for (int m = 1; m <= 6; ++m) {
        const IsometryGroup g = enumerate_isometries(m);
        ok = ok && g.closed && g.all_passed() && g.elements.size() == static_cast<std::size_t>(4 * m + 4);
        sizes += (m > 1 ? "," : "") + std::to_string(g.elements.size());
    }
    const IsometryCertificate wrong =
        verify_isometry(h1_surface(), ParameterMap::shift(1, 2), RigidMotion::rotation_z(pi / 2));
    ok = ok && !wrong.passed;
    return {ok, "group orders " + sizes + " (closed, all certified); wrong motion residual " +
                    fmt("%.3g vs tol %.1e", wrong.residual, wrong.tolerance)};
}

Outcome bjorling() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int n : {3, 4, 5, 6}) {
        const double m = m_for_cusps(n);
        const BjorlingSurface s = bjorling_solve(hypocycloid_curve(m));
        const SurfaceMap ref = hm_even_surface(m);
        const double u0 = s.curve().t_min(), period = s.curve().period();
        const int n_u = 400, n_v = 11;
        for (int j = 0; j < n_u; ++j) {
            const double u = u0 + period * (j + 0.5) / n_u;
            if (near_cusp(s, u)) continue;
            for (int i = 0; i < n_v; ++i) {
                const double v = -0.05 + 0.1 * i / (n_v - 1);
                worst = std::max(worst, (s(u, v) - ref(std::exp(-v), u)).norm());
            }
        }
    }
    const double t = seconds_since(t0);
    return {worst < 1e-6 && t < 30.0, fmt("sup error %.3e on |v| <= 0.05 for 3, 4, 5, 6 cusps (tol 1e-6), %.2f s", worst, t)};
}

Outcome recursion() {
    oracle::Rng rng;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = rng.integer(1, 5);
        std::vector<PolarPoint> pts;
        for (int j = 0; j <= m; ++j) pts.push_back({rng.log_uniform(0.2, 5.0), rng.uniform(0, 2 * pi)});
        LaurentPoly P = expand_product(BranchConfiguration({pts[0], pts[1]}));
        for (std::size_t j = 2; j < pts.size(); ++j) P = extend_by_pair(P, pts[j]);
        const LaurentPoly Q = expand_product(BranchConfiguration(pts));
        worst = std::max(worst, oracle::max_abs_diff(oracle::dense(P), oracle::dense(Q)) / Q.max_abs_coeff());
    }
    return {worst < 1e-12, fmt("max relative gap %.3e over 1000 configurations (tol 1e-12)", worst)};
}

Outcome properties() {
    oracle::Rng rng;
    std::vector<WeierstrassData> solved;
    for (int m = 1; m <= 6; ++m) solved.push_back(symmetric_example(m));
    for (double t2 : {0.8, 0.9, 1.0, 2.2}) solved.push_back(family_theta2(t2).data());
    solved.push_back(continue_from(h2_point(), 1.05, 1.0).to_data());

    double conformal = 0.0, antipodal = 0.0;
    for (const WeierstrassData& d : solved) {
        const Immersion X(d);
        Point3 lo = Point3::Constant(1e300), hi = Point3::Constant(-1e300);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Complex z = std::polar(rng.log_uniform(0.2, 5.0), rng.uniform(0, 2 * pi));
            const Point3 x = X(z);
            lo = lo.cwiseMin(x);
            hi = hi.cwiseMax(x);
            worst = std::max(worst, (X(-1.0 / std::conj(z)) - x).norm());
            if (i % 10) continue;
            const double lambda = metric_density(d, z);
            if (lambda < 1e-3) continue;
            const double h = 1e-6 * std::abs(z);
            const Point3 xu = (X(z + h) - X(z - h)) / (2 * h);
            const Point3 xv = (X(z + Complex(0, h)) - X(z - Complex(0, h))) / (2 * h);
            conformal = std::max({conformal, std::abs(xu.norm() - lambda) / lambda,
                                  std::abs(xv.norm() - lambda) / lambda, std::abs(xu.dot(xv)) / (lambda * lambda)});
        }
        antipodal = std::max(antipodal, worst / (hi - lo).norm());
    }

    double symmetry = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ModuliPoint p;
        p.r1 = rng.log_uniform(0.3, 3.0);
        p.r2 = rng.log_uniform(0.3, 3.0);
        p.r3 = rng.log_uniform(0.3, 3.0);
        p.theta2 = rng.uniform(0, 2 * pi);
        p.theta3 = rng.uniform(0, 2 * pi);
        ModuliPoint q = p;
        std::swap(q.r2, q.r3);
        std::swap(q.theta2, q.theta3);
        symmetry = std::max(symmetry, std::abs(F_m2(p) - F_m2(q)) / (1.0 + std::abs(F_m2(p))));
    }

    // Coefficient of R(r_1) on solutions other than H_2 itself, where R(r_2) = R(r_3) = 0.
    double coefficient = 1e300;
    for (int k = 0; k < 40; ++k) {
        const double t2 = pi / 4 + 1e-3 + (pi / 3 - pi / 4 - 2e-3) * k / 39.0;
        for (auto third : {ThirdPoint::Conjugate, ThirdPoint::Antipodal}) {
            const ModuliPoint p = family_theta2(t2).moduli(third);
            if (std::abs(F_m2(p)) >= 1e-12) continue;
            coefficient = std::min(coefficient, std::abs(R(p.r2) * std::polar(1.0, p.theta2) +
                                                         R(p.r3) * std::polar(1.0, p.theta3)));
        }
    }

    double congruence = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t2 = rng.uniform(pi / 4 + 1e-3, pi / 3);
        auto a = family_theta2(t2).data().config().all_roots();
        auto b = family_theta2(pi - t2).data().config().all_roots();
        for (const Complex& x : a) {
            auto it = std::min_element(b.begin(), b.end(),
                                       [&](Complex u, Complex v) { return std::abs(u + x) < std::abs(v + x); });
            congruence = std::max(congruence, std::abs(*it + x) / (1.0 + std::abs(x)));
            b.erase(it);
        }
    }

    const bool ok = conformal < 1e-4 && antipodal < 1e-9 && symmetry < 1e-12 && coefficient > 1e-8 &&
                    congruence < 1e-10;
    return {ok, fmt("conformality %.1e, antipodal %.1e, ", conformal, antipodal) +
                    fmt("F-symmetry %.1e, min R(r_1) coefficient %.3g, ", symmetry, coefficient) +
                    fmt("congruence %.1e (seed %.0f)", congruence, static_cast<double>(oracle::kSeed))};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"symmetric-example periods vanish exactly", symmetric_periods},
        {"closed forms equal the integrated immersion", closed_form_equivalence},
        {"complexity-1 search finds only Henneberg lists", m1_uniqueness},
        {"family residuals", family_residuals},
        {"Jacobian determinant and finite differences", jacobian},
        {"continuation reproduces the family", continuation},
        {"limit surface identification", limit_identification},
        {"hypocycloid geometry and cusps", hypocycloids},
        {"isometry groups", isometries},
        {"Bjorling reproduction", bjorling},
        {"recursion law", recursion},
        {"property suites", properties},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
