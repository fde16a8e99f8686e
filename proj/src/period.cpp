#include "henneberg/period.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "henneberg/errors.hpp"
#include "henneberg/parallel.hpp"

namespace henneberg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double wrap_angle(double t) {
    double w = std::fmod(t, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

double angle_distance(double a, double b) {
    const double d = wrap_angle(a - b);
    return std::min(d, kTwoPi - d);
}

double dR(double r) { return 1.0 + 1.0 / (r * r); }

// Shared core of the m = 1 residual; phases supplied by the caller.
std::array<double, 5> m1_components(double R1, double R2, Complex e_t2, Complex e_sum, Complex e_2sum) {
    const Complex rhs18 = -2.0 * kI * (R1 * std::conj(e_t2) + R2) * e_sum.imag();
    const Complex rhs19 = -(2.0 * e_t2.real() - R1 * R2) * e_sum;
    const Complex one_sided = e_2sum + 1.0;
    return {rhs18.real(), rhs18.imag(), rhs19.imag(), one_sided.real(), one_sided.imag()};
}

double squared_norm(const std::array<double, 5>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

struct Box {
    double lo1, hi1, lo2, hi2;  // log radii
};

// Levenberg-Marquardt on the 5 components in (log r1, log r2, theta2, beta),
// clamped to the search box in the radial directions.
M1Minimizer refine_m1(Eigen::Vector4d x, const Box& box, int steps) {
    auto components = [](const Eigen::Vector4d& v) {
        return m1_residual_components(std::exp(v[0]), std::exp(v[1]), v[2], v[3]);
    };
    auto clamp = [&box](Eigen::Vector4d v) {
        v[0] = std::clamp(v[0], box.lo1, box.hi1);
        v[1] = std::clamp(v[1], box.lo2, box.hi2);
        return v;
    };
    auto as_vec = [](const std::array<double, 5>& a) {
        Eigen::Matrix<double, 5, 1> v;
        for (int i = 0; i < 5; ++i) v[i] = a[static_cast<std::size_t>(i)];
        return v;
    };

    Eigen::Matrix<double, 5, 1> r = as_vec(components(x));
    double cost = r.squaredNorm();
    double mu = 1e-3;
    for (int it = 0; it < steps && cost > 1e-30; ++it) {
        Eigen::Matrix<double, 5, 4> J;
        const double h = 1e-7;
        for (int j = 0; j < 4; ++j) {
            Eigen::Vector4d xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            J.col(j) = (as_vec(components(xp)) - as_vec(components(xm))) / (2.0 * h);
        }
        const Eigen::Matrix4d JtJ = J.transpose() * J;
        const Eigen::Vector4d g = J.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 20; ++tries) {
            Eigen::Matrix4d A = JtJ;
            A.diagonal().array() += mu * (1.0 + JtJ.diagonal().array());
            const Eigen::Vector4d step = A.ldlt().solve(-g);
            const Eigen::Vector4d trial = clamp(x + step);
            const auto r_trial = as_vec(components(trial));
            const double c_trial = r_trial.squaredNorm();
            if (c_trial < cost) {
                x = trial;
                r = r_trial;
                cost = c_trial;
                mu = std::max(mu * 0.3, 1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if (!improved) break;
    }
    return {std::exp(x[0]), std::exp(x[1]), wrap_angle(x[2]), wrap_angle(x[3]), cost};
}

}  // namespace

// ---------------------------------------------------------------------------

double PeriodResiduals::max_abs() const { return std::max({std::abs(horizontal), std::abs(vertical), onesided}); }

PeriodResiduals period_residuals(const WeierstrassData& data) {
    const int m = data.m();
    const LaurentPoly& P = data.P();
    const Complex c = data.c();
    PeriodResiduals res;
    res.horizontal = std::conj(c * P.coeff(m)) + c * P.coeff(m + 2);
    res.vertical = (c * P.coeff(m + 1)).imag();
    res.onesided = check_one_sided(data);
    return res;
}

// ---------------------------------------------------------------------------
// m = 1

std::array<double, 5> m1_residual_components(double r1, double r2, double theta2, double beta) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("m1_residual: moduli must be positive");
    return m1_components(R(r1), R(r2), unit_phase(theta2), unit_phase(beta + theta2), unit_phase(2.0 * (beta + theta2)));
}

double m1_residual(double r1, double r2, double theta2, double beta) {
    return squared_norm(m1_residual_components(r1, r2, theta2, beta));
}

M1SearchResult brute_search_m1(const SearchGrid& grid) {
    if (grid.n_radial < 2 || grid.n_angular < 3) throw DomainError("brute_search_m1: grid too coarse");
    if (!(grid.L > 1.0)) throw DomainError("brute_search_m1: L must exceed 1");
    const double r1_lo = grid.r1_min > 0.0 ? grid.r1_min : 1.0 / grid.L;
    const double r1_hi = grid.r1_max > 0.0 ? grid.r1_max : grid.L;
    const double r2_lo = grid.r2_min > 0.0 ? grid.r2_min : 1.0 / grid.L;
    const double r2_hi = grid.r2_max > 0.0 ? grid.r2_max : grid.L;
    if (!(r1_lo < r1_hi) || !(r2_lo < r2_hi)) throw DomainError("brute_search_m1: empty radial range");

    const Box box{std::log(r1_lo), std::log(r1_hi), std::log(r2_lo), std::log(r2_hi)};
    const std::size_t nr = grid.n_radial;
    const std::size_t na = grid.n_angular;

    auto log_radius = [nr](double lo, double hi, std::size_t i) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nr - 1);
    };
    std::vector<double> R1s(nr), R2s(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        R1s[i] = R(std::exp(log_radius(box.lo1, box.hi1, i)));
        R2s[i] = R(std::exp(log_radius(box.lo2, box.hi2, i)));
    }
    // Angles k * 2pi/na; sums of grid angles are again grid angles.
    std::vector<Complex> phase(na), phase2(na);
    for (std::size_t k = 0; k < na; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(na);
        phase[k] = unit_phase(t);
        phase2[k] = unit_phase(2.0 * t);
    }

    const std::size_t total = nr * nr * na * na;
    auto index = [&](std::size_t i1, std::size_t i2, std::size_t k, std::size_t l) {
        return ((i1 * nr + i2) * na + k) * na + l;
    };
    std::vector<double> values(total);
    parallel_for(nr, [&](std::size_t i1) {
        for (std::size_t i2 = 0; i2 < nr; ++i2)
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < na; ++l) {
                    const std::size_t s = (k + l) % na;
                    values[index(i1, i2, k, l)] =
                        squared_norm(m1_components(R1s[i1], R2s[i2], phase[k], phase[s], phase2[s]));
                }
    });

    // Discrete local minima (ties broken by linear index); the angular axes wrap.
    std::vector<std::vector<std::size_t>> per_row(nr);
    parallel_for(nr, [&](std::size_t i1) {
        for (std::size_t i2 = 0; i2 < nr; ++i2)
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < na; ++l) {
                    const std::size_t here = index(i1, i2, k, l);
                    const double v = values[here];
                    bool minimum = true;
                    for (int d1 = -1; d1 <= 1 && minimum; ++d1) {
                        const auto j1 = static_cast<long>(i1) + d1;
                        if (j1 < 0 || j1 >= static_cast<long>(nr)) continue;
                        for (int d2 = -1; d2 <= 1 && minimum; ++d2) {
                            const auto j2 = static_cast<long>(i2) + d2;
                            if (j2 < 0 || j2 >= static_cast<long>(nr)) continue;
                            for (int dk = -1; dk <= 1 && minimum; ++dk)
                                for (int dl = -1; dl <= 1 && minimum; ++dl) {
                                    if (d1 == 0 && d2 == 0 && dk == 0 && dl == 0) continue;
                                    const std::size_t kk = (k + na + static_cast<std::size_t>(dk + 1) - 1) % na;
                                    const std::size_t ll = (l + na + static_cast<std::size_t>(dl + 1) - 1) % na;
                                    const std::size_t there = index(static_cast<std::size_t>(j1),
                                                                    static_cast<std::size_t>(j2), kk, ll);
                                    const double w = values[there];
                                    if (w < v || (w == v && there < here)) minimum = false;
                                }
                        }
                    }
                    if (minimum) per_row[i1].push_back(here);
                }
    });
    std::vector<std::size_t> candidates;
    for (const auto& row : per_row) candidates.insert(candidates.end(), row.begin(), row.end());

    std::vector<M1Minimizer> refined(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t c) {
        std::size_t rest = candidates[c];
        const std::size_t l = rest % na;
        rest /= na;
        const std::size_t k = rest % na;
        rest /= na;
        const std::size_t i2 = rest % nr;
        const std::size_t i1 = rest / nr;
        Eigen::Vector4d x(log_radius(box.lo1, box.hi1, i1), log_radius(box.lo2, box.hi2, i2),
                          kTwoPi * static_cast<double>(k) / static_cast<double>(na),
                          kTwoPi * static_cast<double>(l) / static_cast<double>(na));
        refined[c] = refine_m1(x, box, grid.refine_steps);
    });

    M1SearchResult result;
    result.grid_points = total;
    result.candidates = candidates.size();
    auto distance = [](const M1Minimizer& a, const M1Minimizer& b) {
        return std::max({std::abs(a.r1 - b.r1), std::abs(a.r2 - b.r2), angle_distance(a.theta2, b.theta2),
                         angle_distance(a.beta, b.beta)});
    };
    for (const M1Minimizer& x : refined) {
        if (!(x.residual < grid.accept)) {
            ++result.rejected;
            continue;
        }
        auto same = std::find_if(result.minimizers.begin(), result.minimizers.end(),
                                 [&](const M1Minimizer& y) { return distance(x, y) < grid.merge; });
        if (same == result.minimizers.end()) result.minimizers.push_back(x);
        else if (x.residual < same->residual) *same = x;
    }
    std::sort(result.minimizers.begin(), result.minimizers.end(), [](const M1Minimizer& a, const M1Minimizer& b) {
        return std::tie(a.r1, a.r2, a.theta2, a.beta) < std::tie(b.r1, b.r2, b.theta2, b.beta);
    });
    return result;
}

bool is_henneberg_list(const M1Minimizer& x, double tol) {
    return std::abs(x.r1 - 1.0) < tol && std::abs(x.r2 - 1.0) < tol &&
           (angle_distance(x.theta2, kPi / 2) < tol || angle_distance(x.theta2, 3 * kPi / 2) < tol);
}

// ---------------------------------------------------------------------------
// m = 2

void ModuliPoint::validate() const {
    for (double r : {r1, r2, r3})
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("ModuliPoint: moduli must be positive");
    for (double t : {theta2, theta3, beta})
        if (!std::isfinite(t)) throw DomainError("ModuliPoint: non-finite angle");
}

WeierstrassData ModuliPoint::to_data() const {
    validate();
    return WeierstrassData(unit_phase(beta), BranchConfiguration({{r1, 0.0}, {r2, theta2}, {r3, theta3}}));
}

ModuliPoint h2_point() { return {1.0, 1.0, 1.0, kPi / 3, 2 * kPi / 3, kPi / 2}; }

Complex F_m2(const ModuliPoint& p) {
    const double R1 = R(p.r1), R2 = R(p.r2), R3 = R(p.r3);
    const Complex e2 = unit_phase(p.theta2), e3 = unit_phase(p.theta3);
    return 1.0 + unit_phase(2 * p.theta2) + unit_phase(2 * p.theta3) - R1 * (R2 * e2 + R3 * e3) -
           R2 * R3 * unit_phase(p.theta2 + p.theta3);
}

Complex F_m2_asymmetric(const ModuliPoint& p) {
    const double R1 = R(p.r1), R2 = R(p.r2), R3 = R(p.r3);
    const Complex e2 = unit_phase(p.theta2), e3 = unit_phase(p.theta3);
    return unit_phase(2 * p.theta3) + (2.0 * std::cos(p.theta2) - R1 * R2) * e2 - R3 * (R1 + R2 * e2) * e3;
}

double G_m2(const ModuliPoint& p) {
    const double R1 = R(p.r1), R2 = R(p.r2), R3 = R(p.r3);
    return R2 * std::cos(p.theta3) + R3 * std::cos(p.theta2) + R1 * std::cos(p.theta2 - p.theta3) -
           0.5 * R1 * R2 * R3;
}

Eigen::Vector3d period_map(const ModuliPoint& p) {
    const Complex F = F_m2(p);
    return {F.real(), F.imag(), G_m2(p)};
}

Eigen::Matrix3d jacobian_P(const ModuliPoint& p) {
    const double R1 = R(p.r1), R2 = R(p.r2), R3 = R(p.r3);
    const double dR3 = dR(p.r3);
    const Complex e2 = unit_phase(p.theta2), e3 = unit_phase(p.theta3), e23 = unit_phase(p.theta2 + p.theta3);

    const Complex dF_dr3 = -dR3 * (R1 * e3 + R2 * e23);
    const Complex dF_dt2 = kI * (2.0 * unit_phase(2 * p.theta2) - R1 * R2 * e2 - R2 * R3 * e23);
    const Complex dF_dt3 = kI * (2.0 * unit_phase(2 * p.theta3) - R1 * R3 * e3 - R2 * R3 * e23);

    const double dG_dr3 = dR3 * (std::cos(p.theta2) - 0.5 * R1 * R2);
    const double dG_dt2 = -R3 * std::sin(p.theta2) - R1 * std::sin(p.theta2 - p.theta3);
    const double dG_dt3 = -R2 * std::sin(p.theta3) + R1 * std::sin(p.theta2 - p.theta3);

    Eigen::Matrix3d J;
    J << dF_dr3.real(), dF_dt2.real(), dF_dt3.real(),  //
        dF_dr3.imag(), dF_dt2.imag(), dF_dt3.imag(),   //
        dG_dr3, dG_dt2, dG_dt3;
    return J;
}

Eigen::Matrix3d jacobian_P_fd(const ModuliPoint& p, double step) {
    Eigen::Matrix3d J;
    for (int j = 0; j < 3; ++j) {
        ModuliPoint plus = p, minus = p;
        double* fp = j == 0 ? &plus.r3 : j == 1 ? &plus.theta2 : &plus.theta3;
        double* fm = j == 0 ? &minus.r3 : j == 1 ? &minus.theta2 : &minus.theta3;
        *fp += step;
        *fm -= step;
        J.col(j) = (period_map(plus) - period_map(minus)) / (2.0 * step);
    }
    return J;
}

double beta_from_angles(double theta2, double theta3) {
    double b = std::fmod(kPi / 2 - theta2 - theta3, kPi);
    if (b < 0.0) b += kPi;
    return b;
}

ModuliPoint FamilyPoint::moduli(ThirdPoint third) const {
    ModuliPoint p;
    p.r1 = r1;
    p.r2 = r2;
    p.theta2 = theta2;
    if (third == ThirdPoint::Conjugate) {
        p.r3 = r2;
        p.theta3 = -theta2;
    } else {
        p.r3 = 1.0 / r2;
        p.theta3 = kPi - theta2;
    }
    p.beta = beta_from_angles(p.theta2, p.theta3);
    return p;
}

double family_f(double theta2) {
    const double radicand = 1.0 - 8.0 * std::cos(2 * theta2) - 8.0 * std::cos(4 * theta2);
    if (radicand < 0.0) throw DomainError("family_f: theta_2 outside the domain of f");
    return std::sqrt(radicand);
}

FamilyPoint family_theta2(double theta2, FamilyBranch branch) {
    constexpr double edge = 1e-12;
    const bool lower = theta2 > kPi / 4 && theta2 <= kPi / 3 + edge;
    const bool upper = theta2 >= 2 * kPi / 3 - edge && theta2 < 3 * kPi / 4;
    if (!lower && !upper) {
        std::ostringstream msg;
        msg << "family_theta2: theta_2 = " << theta2 << " outside (pi/4, pi/3] U [2pi/3, 3pi/4)";
        throw DomainError(msg.str());
    }
    const double f = family_f(theta2);
    // f - 3 = (f^2 - 9)/(f + 3) = -8 cos 2t (1 + 2 cos 2t)/(f + 3), with 1 + 2 cos 2t = sin 3t / sin t
    const double c2 = std::cos(2 * theta2);
    double excess = -8.0 * c2 * (std::sin(3 * theta2) / std::sin(theta2)) / (f + 3.0);
    // The rounded pi/3 and 2pi/3 stand for the exact endpoints, where R(r_1) = R(r_2) = 0.
    if (std::abs(theta2 - kPi / 3) < 1e-15 || std::abs(theta2 - 2 * kPi / 3) < 1e-15) excess = 0.0;
    if (excess < 0.0) {
        if (excess < -1e-12) throw DomainError("family_theta2: f(theta_2) < 3");
        excess = 0.0;
    }
    const double root = std::sqrt(excess);
    double R1 = root / (8.0 * std::numbers::sqrt2 * std::cos(theta2) * c2) * (f + 3.0 + 4.0 * c2);
    double R2 = -root / std::numbers::sqrt2;
    if (branch == FamilyBranch::Minus) {
        R1 = -R1;
        R2 = -R2;
    }
    FamilyPoint point{theta2, branch, R1, R2, inverse_R(R1), inverse_R(R2)};

    const ModuliPoint p = point.moduli();
    const double residual = std::abs(F_m2(p)) + std::abs(G_m2(p));
    if (!(residual < 1e-9 * std::max(1.0, std::abs(R1)))) {
        std::ostringstream msg;
        msg << "family_theta2: closed form leaves |F| + |G| = " << residual;
        throw ConvergenceError(msg.str(), residual);
    }
    return point;
}

ModuliPoint continue_from(const ModuliPoint& p0, double r1_target, double r2_target,
                          const ContinuationOptions& options) {
    p0.validate();
    if (!(r1_target > 0.0) || !(r2_target > 0.0)) throw DomainError("continue_from: target moduli must be positive");
    if (period_map(p0).norm() > 1e-9) throw DomainError("continue_from: start point does not solve F = G = 0");

    const double l1a = std::log(p0.r1), l2a = std::log(p0.r2);
    const double l1b = std::log(r1_target), l2b = std::log(r2_target);
    const double length = std::hypot(l1b - l1a, l2b - l2a);
    const int n_steps = std::max(1, static_cast<int>(std::ceil(length / options.max_step)));

    ModuliPoint p = p0;
    for (int s = 1; s <= n_steps; ++s) {
        const double t = static_cast<double>(s) / n_steps;
        p.r1 = s == n_steps ? r1_target : std::exp(l1a + t * (l1b - l1a));
        p.r2 = s == n_steps ? r2_target : std::exp(l2a + t * (l2b - l2a));

        Eigen::Vector3d res = period_map(p);
        int it = 0;
        for (; it < options.max_iterations && res.norm() >= options.tolerance; ++it) {
            const Eigen::Matrix3d J = jacobian_P(p);
            const double det = J.determinant();
            if (std::abs(det) < options.singular_det)
                throw ConvergenceError("continue_from: singular Jacobian along the path", res.norm());
            const Eigen::Vector3d delta = J.partialPivLu().solve(-res);
            double lambda = 1.0;
            bool accepted = false;
            for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
                ModuliPoint trial = p;
                trial.r3 += lambda * delta[0];
                trial.theta2 += lambda * delta[1];
                trial.theta3 += lambda * delta[2];
                if (!(trial.r3 > 0.0)) continue;
                const Eigen::Vector3d r_trial = period_map(trial);
                if (r_trial.norm() < res.norm()) {
                    p = trial;
                    res = r_trial;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        if (!(res.norm() < options.tolerance)) {
            std::ostringstream msg;
            msg << "continue_from: Newton stalled at step " << s << "/" << n_steps << " with |(F,G)| = " << res.norm();
            throw ConvergenceError(msg.str(), res.norm());
        }
    }
    p.beta = beta_from_angles(p.theta2, p.theta3);
    return p;
}

WeierstrassData symmetric_example(int m) {
    if (m < 1) throw DomainError("symmetric_example: m must be positive");
    std::vector<PolarPoint> pts;
    for (int j = 1; j <= m + 1; ++j) pts.push_back({1.0, kPi * (j - 1) / (m + 1)});
    static const Complex powers_of_i[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return WeierstrassData(powers_of_i[(m - 1) % 4], BranchConfiguration(std::move(pts)));
}

double family_theta20() { return 0.5 * std::atan(std::sqrt(32.0 * std::sqrt(10.0) + 95.0) / 9.0); }

}  // namespace henneberg
