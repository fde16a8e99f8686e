#include <doctest.h>

#include <numbers>

#include "henneberg/errors.hpp"
#include "henneberg/period.hpp"
#include "henneberg/surfaces.hpp"
#include "henneberg/weierstrass.hpp"
#include "oracles.hpp"

using namespace henneberg;
using std::numbers::pi;

namespace {

WeierstrassData h1_data() { return WeierstrassData(1.0, BranchConfiguration({{1.0, 0.0}, {1.0, pi / 2}})); }

WeierstrassData h2_data() {
    return WeierstrassData(Complex(0, 1), BranchConfiguration({{1.0, 0.0}, {1.0, pi / 3}, {1.0, 2 * pi / 3}}));
}

std::vector<Complex> roots_of(const WeierstrassData& d) { return d.config().all_roots(); }

// Period-solved one-sided data used by the property tests.
std::vector<WeierstrassData> solved_examples() {
    std::vector<WeierstrassData> out;
    for (int m = 1; m <= 6; ++m) out.push_back(symmetric_example(m));
    out.push_back(family_theta2(0.83).data());
    out.push_back(family_theta2(2.2, FamilyBranch::Minus).data());
    out.push_back(limit_m2_data());
    return out;
}

}  // namespace

TEST_CASE("WeierstrassData normalizes c") {
    const WeierstrassData d(Complex(0, 3), BranchConfiguration({{1.0, 0.0}, {1.0, pi / 2}}));
    CHECK(std::abs(std::abs(d.c()) - 1.0) < 1e-12);
    CHECK(d.c_scale() == doctest::Approx(3.0));
    CHECK_THROWS_AS(WeierstrassData(0.0, BranchConfiguration({{1.0, 0.0}, {1.0, 1.0}})), DomainError);
    CHECK(d.f().lowest() == -4);
    CHECK(d.f().highest() == 0);
}

TEST_CASE("phi_forms examples") {
    const auto h1 = phi_forms(h1_data());
    CHECK(residue_at_zero(h1[2]) == Complex(0.0, 0.0));
    CHECK(std::abs(h1[1](Complex(0, 1))) < 1e-15);
    CHECK(std::abs(h1[1](Complex(0, -1))) < 1e-15);
    for (const auto& phi : phi_forms(h2_data())) CHECK(std::abs(residue_at_zero(phi)) < 1e-15);

    oracle::Rng rng;
    const WeierstrassData d(std::polar(1.0, 0.4), BranchConfiguration({{0.7, 0.2}, {1.9, 2.0}, {1.2, -1.1}}));
    const auto phi = phi_forms(d);
    for (int i = 0; i < 50; ++i) {
        const Complex z = std::polar(rng.log_uniform(0.3, 3.0), rng.uniform(0, 2 * pi));
        const auto ref = oracle::phi_direct(d.c(), d.m(), roots_of(d), z);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(phi[j](z) - ref[j]) < 1e-11 * (1.0 + std::abs(ref[j])));
    }
}

TEST_CASE("metric_density examples") {
    CHECK(metric_density(h1_data(), 1.0) == 0.0);
    CHECK(metric_density(h1_data(), unit_phase(pi / 4)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(metric_density(h1_data(), 0.0), DomainError);
    const WeierstrassData d = family_theta2(0.9).data();
    for (const Complex& a : roots_of(d)) CHECK(metric_density(d, a) < 1e-12);
}

TEST_CASE("check_one_sided examples") {
    CHECK(check_one_sided(h1_data()) == 0.0);
    CHECK(check_one_sided(h2_data()) == 0.0);
    const WeierstrassData bad(1.0, BranchConfiguration({{1.0, 0.0}, {1.0, 0.0}}));
    CHECK(check_one_sided(bad) == doctest::Approx(2.0));
}

TEST_CASE("integrate_phi examples") {
    for (int m = 1; m <= 8; ++m) {
        const IntegratedForms forms = integrate_phi(symmetric_example(m));
        for (double l : forms.log_coeff) CHECK(l == 0.0);
    }

    // On the family the horizontal period vanishes but phi_1 keeps a real residue.
    for (double t2 : {0.79, 0.83, 0.9, 1.0, 2.2}) {
        const WeierstrassData d = family_theta2(t2).data();
        const IntegratedForms forms = integrate_phi(d);
        const double expected = -(d.c() * d.P().coeff(2)).real();
        CAPTURE(t2);
        CHECK(std::abs(forms.log_coeff[0] - expected) < 1e-12);
        CHECK(std::abs(forms.residues[0] - residue_at_zero(phi_forms(d)[0])) < 1e-15);
    }

    // Im(c A_2) != 0
    const WeierstrassData vertical(1.0, BranchConfiguration({{1.0, 0.0}, {1.0, pi / 4}}));
    CHECK_THROWS_AS(integrate_phi(vertical), PeriodError);
    // horizontal period -3
    const WeierstrassData horizontal(1.0, BranchConfiguration({{2.0, 0.0}, {1.0, pi / 2}}));
    try {
        integrate_phi(horizontal);
        FAIL("expected PeriodError");
    } catch (const PeriodError& e) {
        CHECK(e.residual() == doctest::Approx(1.5));
    }
}

TEST_CASE("immersion examples") {
    const WeierstrassData h1 = h1_data();
    const Complex base = unit_phase(pi / 4);
    for (int k = 0; k < 64; ++k) {
        const double t = 2 * pi * k / 64;
        const Point3 x = immersion(h1, std::polar(1.0, t), base);
        CHECK(std::abs(x.x()) < 1e-14);
        CHECK(std::abs(x.y()) < 1e-14);
        CHECK(std::abs(x.z() - std::cos(2 * t)) < 1e-14);
    }
    CHECK_THROWS_AS(immersion(h1, 0.0, base), DomainError);
    CHECK_THROWS_AS(immersion(h1, 1.0, Complex(0.0)), DomainError);

    // Odd m against the closed form; symmetric_example uses c = i^{m-1} = +-1.
    oracle::Rng rng;
    for (int m : {1, 3, 5, 7}) {
        const WeierstrassData d = symmetric_example(m);
        const double s = d.c().real();
        double err = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double r = rng.log_uniform(0.25, 4.0), t = rng.uniform(0, 2 * pi);
            const Point3 x = immersion(d, std::polar(r, t), default_base(m));
            err = std::max(err, (x - s * eval_Hm_odd(m, r, t)).norm());
        }
        CAPTURE(m);
        CHECK(err < 1e-10);
    }
}

TEST_CASE("relative immersion agrees with a quadrature of the forms") {
    oracle::Rng rng;
    for (const WeierstrassData& d : solved_examples()) {
        const Immersion X(d);
        for (int i = 0; i < 10; ++i) {
            const Complex z0 = std::polar(rng.log_uniform(0.5, 2.0), rng.uniform(0, 2 * pi));
            const Complex z1 = z0 * std::polar(rng.log_uniform(0.7, 1.4), rng.uniform(-0.5, 0.5));
            Point3 ref;
            for (int j = 0; j < 3; ++j) {
                auto phi_j = [&](Complex z) { return oracle::phi_direct(d.c(), d.m(), roots_of(d), z)[j]; };
                ref[j] = oracle::simpson(phi_j, z0, z1).real();
            }
            CHECK((X.relative(z1, z0) - ref).norm() < 1e-9 * (1.0 + ref.norm()));
        }
    }
}

TEST_CASE("property: the immersion is conformal with density lambda") {
    oracle::Rng rng;
    for (const WeierstrassData& d : solved_examples()) {
        const Immersion X(d);
        for (int i = 0; i < 100; ++i) {
            const Complex z = std::polar(rng.log_uniform(0.3, 3.0), rng.uniform(0, 2 * pi));
            const double lambda = metric_density(d, z);
            if (lambda < 1e-3) continue;
            const double h = 1e-6 * std::abs(z);
            const Point3 xu = (X(z + h) - X(z - h)) / (2 * h);
            const Point3 xv = (X(z + Complex(0, h)) - X(z - Complex(0, h))) / (2 * h);
            CHECK(std::abs(xu.norm() - lambda) < 1e-4 * lambda);
            CHECK(std::abs(xv.norm() - lambda) < 1e-4 * lambda);
            CHECK(std::abs(xu.dot(xv)) < 1e-4 * lambda * lambda);
        }
    }
}

TEST_CASE("property: antipodal invariance") {
    oracle::Rng rng;
    for (const WeierstrassData& d : solved_examples()) {
        REQUIRE(check_one_sided(d) < 1e-10);
        const Immersion X(d);
        double worst = 0.0;
        Point3 lo = Point3::Constant(1e300), hi = Point3::Constant(-1e300);
        for (int i = 0; i < 1000; ++i) {
            const Complex z = std::polar(rng.log_uniform(0.2, 5.0), rng.uniform(0, 2 * pi));
            const Point3 x = X(z);
            lo = lo.cwiseMin(x);
            hi = hi.cwiseMax(x);
            worst = std::max(worst, (X(-1.0 / std::conj(z)) - x).norm());
        }
        CHECK(worst < 1e-9 * (hi - lo).norm());
    }
}

TEST_CASE("property: branch values and their antipodes share an image") {
    for (const WeierstrassData& d : solved_examples()) {
        const Immersion X(d);
        for (const PolarPoint& a : d.config().points())
            CHECK((X(a.value()) - X(a.antipode())).norm() < 1e-10 * (1.0 + X(a.value()).norm()));
    }
}

TEST_CASE("gauss_structural_stability examples") {
    const StabilityReport h1 = gauss_structural_stability(h1_data());
    CHECK(h1.stable);
    REQUIRE(h1.distinct_images.size() == 2);
    std::vector<double> heights{h1.distinct_images[0].z(), h1.distinct_images[1].z()};
    std::sort(heights.begin(), heights.end());
    CHECK(heights[0] == doctest::Approx(-1.0));
    CHECK(heights[1] == doctest::Approx(1.0));
    for (const Point3& p : h1.distinct_images) CHECK(std::hypot(p.x(), p.y()) < 1e-14);

    const StabilityReport h2 = gauss_structural_stability(h2_data());
    CHECK(h2.stable);
    REQUIRE(h2.distinct_images.size() == 3);
    const double a = 3 * std::sqrt(3.0) / 8;
    const std::vector<Point3> cusps{{0, -0.75, 0}, {-a, 0.375, 0}, {a, 0.375, 0}};
    for (const Point3& c : cusps) {
        double nearest = 1e300;
        for (const Point3& p : h2.distinct_images) nearest = std::min(nearest, (p - c).norm());
        CHECK(nearest < 1e-12);
    }

    for (int m : {3, 5, 7}) {
        const StabilityReport r = gauss_structural_stability(symmetric_example(m));
        CHECK(r.stable);
        CHECK(r.distinct_images.size() == 2);
        CHECK(r.branch_images.size() == static_cast<std::size_t>(2 * (m + 1)));
    }

    const StabilityReport bad =
        gauss_structural_stability(WeierstrassData(1.0, BranchConfiguration({{1.0, 0.0}, {1.0, 0.0}})));
    CHECK_FALSE(bad.one_sided);
    CHECK_FALSE(bad.stable);
    CHECK(bad.gauss_map_diffeomorphism);
}
