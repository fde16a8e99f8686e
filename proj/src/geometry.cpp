#include "henneberg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "henneberg/errors.hpp"

namespace henneberg {

namespace {

constexpr double kPi = std::numbers::pi;
double eval_terms(const std::vector<TrigTerm>& terms, double t) {
    double s = 0.0;
    for (const TrigTerm& a : terms) s += a.amplitude * std::cos(a.frequency * t + a.phase);
    return s;
}

double eval_terms_d(const std::vector<TrigTerm>& terms, double t) {
    double s = 0.0;
    for (const TrigTerm& a : terms) s -= a.amplitude * a.frequency * std::sin(a.frequency * t + a.phase);
    return s;
}

Complex eval_terms(const std::vector<TrigTerm>& terms, Complex w) {
    Complex s = 0.0;
    for (const TrigTerm& a : terms) s += a.amplitude * std::cos(a.frequency * w + a.phase);
    return s;
}

Complex eval_terms_d(const std::vector<TrigTerm>& terms, Complex w) {
    Complex s = 0.0;
    for (const TrigTerm& a : terms) s -= a.amplitude * a.frequency * std::sin(a.frequency * w + a.phase);
    return s;
}

double positive_mod(double x, double p) {
    double r = std::fmod(x, p);
    if (r < 0.0) r += p;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Curves

AnalyticPlanarCurve::AnalyticPlanarCurve(std::vector<TrigTerm> x, std::vector<TrigTerm> y, double t_min,
                                         double t_max, bool closed)
    : x_(std::move(x)), y_(std::move(y)), t_min_(t_min), t_max_(t_max), closed_(closed) {
    if (!(t_max > t_min) || !std::isfinite(t_min) || !std::isfinite(t_max))
        throw DomainError("AnalyticPlanarCurve: empty parameter interval");
    for (const auto* terms : {&x_, &y_})
        for (const TrigTerm& a : *terms)
            if (!std::isfinite(a.amplitude) || !std::isfinite(a.frequency) || !std::isfinite(a.phase))
                throw DomainError("AnalyticPlanarCurve: non-finite term");
}

Eigen::Vector2d AnalyticPlanarCurve::point(double t) const { return {eval_terms(x_, t), eval_terms(y_, t)}; }

Eigen::Vector2d AnalyticPlanarCurve::derivative(double t) const {
    return {eval_terms_d(x_, t), eval_terms_d(y_, t)};
}

std::array<Complex, 2> AnalyticPlanarCurve::point(Complex w) const { return {eval_terms(x_, w), eval_terms(y_, w)}; }

std::array<Complex, 2> AnalyticPlanarCurve::derivative(Complex w) const {
    return {eval_terms_d(x_, w), eval_terms_d(y_, w)};
}

AnalyticPlanarCurve hypocycloid_curve(double m) {
    if (!is_supported_even_formula_m(m)) throw DomainError("hypocycloid_curve: unsupported m");
    const double half_pi = kPi / 2;
    // sin(a) = cos(a - pi/2)
    std::vector<TrigTerm> x{{-1.0 / m, m, -half_pi}, {1.0 / (m + 2), m + 2, -half_pi}};
    std::vector<TrigTerm> y{{-1.0 / m, m, 0.0}, {-1.0 / (m + 2), m + 2, 0.0}};
    return {std::move(x), std::move(y), 0.0, hm_even_surface(m).theta_period, true};
}

AnalyticPlanarCurve astroid() { return hypocycloid_curve(1.0); }

AnalyticPlanarCurve circle(double radius) {
    if (!(radius > 0.0)) throw DomainError("circle: radius must be positive");
    return {{{radius, 1.0, 0.0}}, {{radius, 1.0, -kPi / 2}}, 0.0, 2 * kPi, true};
}

double m_for_cusps(int n) {
    if (n < 3) throw DomainError("m_for_cusps: need at least 3 cusps");
    if (n % 2 == 1) return n - 1;
    if (n % 4 == 0) return (n - 2) / 2;
    return 1.0 / (2.0 * ((n - 2) / 4));
}

// ---------------------------------------------------------------------------
// Quadrature

GaussLegendre gauss_legendre(int order) {
    if (order < 1) throw DomainError("gauss_legendre: order must be positive");
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(order));
    gl.weights.resize(static_cast<std::size_t>(order));
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
        gl.nodes[lo] = -x;
        gl.nodes[hi] = x;
        gl.weights[lo] = w;
        gl.weights[hi] = w;
    }
    return gl;
}

Complex integrate_segment(const std::function<Complex(Complex)>& f, Complex a, Complex b, int order, double tol,
                          int max_panels) {
    const GaussLegendre gl = gauss_legendre(order);
    auto estimate = [&](int panels) {
        const Complex h = (b - a) / static_cast<double>(panels);
        Complex total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const Complex mid = a + h * (p + 0.5);
            Complex sum = 0.0;
            for (std::size_t k = 0; k < gl.nodes.size(); ++k) sum += gl.weights[k] * f(mid + 0.5 * h * gl.nodes[k]);
            total += 0.5 * h * sum;
        }
        return total;
    };
    if (a == b) return 0.0;
    Complex previous = estimate(1);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        const Complex next = estimate(panels);
        if (std::abs(next - previous) < tol) return next;
        previous = next;
    }
    throw ConvergenceError("integrate_segment: quadrature did not converge", 0.0);
}

// ---------------------------------------------------------------------------
// Bjorling

BjorlingSurface::BjorlingSurface(AnalyticPlanarCurve curve, BjorlingOptions options)
    : curve_(std::move(curve)), options_(options) {
    const AnalyticPlanarCurve& c = curve_;
    cusps_ = find_cusps(
        [&c](double t) {
            const Eigen::Vector2d p = c.point(t);
            return Point3(p.x(), p.y(), 0.0);
        },
        c.t_min(), c.period(), options_.cusp_samples);
    for (double& t : cusps_)
        if (c.t_max() - t < 1e-12 * std::max(1.0, c.period()) || t - c.t_min() < 1e-12 * std::max(1.0, c.period()))
            t = c.t_min();
    std::sort(cusps_.begin(), cusps_.end());
    if (options_.base && !std::isfinite(*options_.base)) throw DomainError("bjorling: base must be finite");
}

double BjorlingSurface::reduce(double u) const {
    if (curve_.closed()) return curve_.t_min() + positive_mod(u - curve_.t_min(), curve_.period());
    if (u < curve_.t_min() || u > curve_.t_max()) {
        std::ostringstream msg;
        msg << "bjorling: u = " << u << " outside the curve domain";
        throw DomainError(msg.str());
    }
    return u;
}

double BjorlingSurface::arc_sign(double t) const {
    const double base = options_.side == NormalSide::Right ? 1.0 : -1.0;
    if (!options_.continue_through_cusps) return base;
    // Arc 0 is the one starting at t_min (or at a cusp sitting there).
    long arc = std::upper_bound(cusps_.begin(), cusps_.end(), t) - cusps_.begin();
    if (!cusps_.empty() && cusps_.front() <= curve_.t_min()) --arc;
    return arc % 2 == 0 ? base : -base;
}

Eigen::Vector2d BjorlingSurface::normal(double t) const {
    const double tr = reduce(t);
    const Eigen::Vector2d d = curve_.derivative(tr);
    const double s = d.norm();
    if (s == 0.0) throw DomainError("bjorling: normal undefined at a cusp");
    return arc_sign(tr) * Eigen::Vector2d(d.y(), -d.x()) / s;
}

Complex BjorlingSurface::speed(Complex w) const {
    const auto d = curve_.derivative(w);
    return std::sqrt(d[0] * d[0] + d[1] * d[1]);
}

Point3 BjorlingSurface::operator()(double u, double v) const {
    if (!std::isfinite(u) || !std::isfinite(v)) throw DomainError("bjorling: non-finite argument");
    const double tr = reduce(u);
    const double cusp_gap = 1e-9 * std::max(1.0, curve_.period());
    for (double c : cusps_) {
        for (double shift : {0.0, curve_.period(), -curve_.period()}) {
            if (std::abs(tr - (c + shift)) < cusp_gap) {
                std::ostringstream msg;
                msg << "bjorling: u = " << u << " lies on a cusp line";
                throw DomainError(msg.str());
            }
        }
    }
    double w0 = tr;
    if (options_.base) {
        w0 = reduce(*options_.base);
        if (arc_sign(w0) != arc_sign(tr) ||
            std::any_of(cusps_.begin(), cusps_.end(),
                        [&](double c) { return (c - w0) * (c - tr) < 0.0; }))
            throw DomainError("bjorling: integration segment crosses a cusp line");
    }
    const Complex w(tr, v);
    const auto g = curve_.point(w);
    const Complex integral = integrate_segment([this](Complex s) { return speed(s); }, Complex(w0, 0.0), w,
                                               options_.quad_order, options_.tolerance, options_.max_panels);
    // eta x gamma' = (0, 0, sign * |gamma'|) for a planar curve.
    return {g[0].real(), g[1].real(), arc_sign(tr) * integral.imag()};
}

Point3 BjorlingSurface::at_polar(double r, double theta) const {
    if (!(r > 0.0)) throw DomainError("bjorling: r must be positive");
    return (*this)(theta, -std::log(r));
}

SurfaceMap BjorlingSurface::as_surface_map() const {
    auto self = std::make_shared<const BjorlingSurface>(*this);
    return {SurfaceKind::Bjorling, 0.0, 0.0, curve_.period(),
            [self](double r, double t) { return self->at_polar(r, t); }};
}

BjorlingSurface bjorling_solve(const AnalyticPlanarCurve& curve, const BjorlingOptions& options) {
    return BjorlingSurface(curve, options);
}

// ---------------------------------------------------------------------------
// Isometries

bool RigidMotion::is_orthogonal(double tol) const {
    return (Q.transpose() * Q - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < tol;
}

RigidMotion RigidMotion::rotation_z(double angle) {
    RigidMotion m;
    m.Q << std::cos(angle), -std::sin(angle), 0, std::sin(angle), std::cos(angle), 0, 0, 0, 1;
    return m;
}

RigidMotion RigidMotion::diagonal(double s1, double s2, double s3) {
    RigidMotion m;
    m.Q = Eigen::Vector3d(s1, s2, s3).asDiagonal();
    return m;
}

RigidMotion fit_motion(const std::vector<Point3>& from, const std::vector<Point3>& to) {
    if (from.size() != to.size() || from.size() < 3) throw DomainError("fit_motion: need matching point sets");
    Point3 ca = Point3::Zero(), cb = Point3::Zero();
    for (std::size_t i = 0; i < from.size(); ++i) {
        ca += from[i];
        cb += to[i];
    }
    ca /= static_cast<double>(from.size());
    cb /= static_cast<double>(from.size());
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < from.size(); ++i) H += (from[i] - ca) * (to[i] - cb).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RigidMotion m;
    m.Q = svd.matrixV() * svd.matrixU().transpose();
    m.t = cb - m.Q * ca;
    return m;
}

ParameterMap::ParameterMap(bool invert_r, int theta_sign, long shift_num, long shift_den)
    : invert_r_(invert_r), theta_sign_(theta_sign), num_(shift_num), den_(shift_den) {
    if (theta_sign != 1 && theta_sign != -1) throw DomainError("ParameterMap: theta sign must be +-1");
    if (shift_den <= 0) throw DomainError("ParameterMap: shift denominator must be positive");
    normalize();
}

void ParameterMap::normalize() {
    const long g = std::gcd(std::abs(num_), den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    num_ %= 2 * den_;
    if (num_ < 0) num_ += 2 * den_;
}

ParameterMap ParameterMap::after(const ParameterMap& first) const {
    // sign2 (sign1 t + a1) + a2
    const long den = std::lcm(den_, first.den_);
    const long num = theta_sign_ * first.num_ * (den / first.den_) + num_ * (den / den_);
    return {invert_r_ != first.invert_r_, theta_sign_ * first.theta_sign_, num, den};
}

double ParameterMap::shift_angle() const { return kPi * static_cast<double>(num_) / static_cast<double>(den_); }

std::pair<double, double> ParameterMap::operator()(double r, double theta) const {
    return {invert_r_ ? 1.0 / r : r, theta_sign_ * theta + shift_angle()};
}

std::string ParameterMap::describe() const {
    std::ostringstream s;
    s << "(r, t) -> (" << (invert_r_ ? "1/r" : "r") << ", " << (theta_sign_ < 0 ? "-t" : "t");
    if (num_ != 0) s << " + " << num_ << "pi/" << den_;
    s << ")";
    return s.str();
}

namespace {

struct Samples {
    std::vector<std::pair<double, double>> params;
    std::vector<Point3> images;
    double diameter = 0.0;
};

Samples draw_samples(const SurfaceMap& S, const SampleSpec& spec) {
    if (spec.count < 3 || !(spec.r_min > 0.0) || !(spec.r_max > spec.r_min))
        throw DomainError("isometry samples: need count >= 3 and 0 < r_min < r_max");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> log_r(std::log(spec.r_min), std::log(spec.r_max));
    std::uniform_real_distribution<double> angle(0.0, S.theta_period);
    Samples out;
    for (std::size_t i = 0; i < spec.count; ++i) {
        const double r = std::exp(log_r(rng));
        const double t = angle(rng);
        out.params.emplace_back(r, t);
        out.images.push_back(S(r, t));
    }
    for (std::size_t i = 0; i < out.images.size(); ++i)
        for (std::size_t j = i + 1; j < out.images.size(); ++j)
            out.diameter = std::max(out.diameter, (out.images[i] - out.images[j]).norm());
    return out;
}

IsometryCertificate certify(const SurfaceMap& S, const ParameterMap& sigma, const Samples& samples,
                            std::optional<RigidMotion> motion) {
    std::vector<Point3> moved;
    moved.reserve(samples.params.size());
    for (const auto& [r, t] : samples.params) {
        const auto [r2, t2] = sigma(r, t);
        moved.push_back(S(r2, t2));
    }
    IsometryCertificate cert;
    cert.sigma = sigma;
    cert.motion = motion ? *motion : fit_motion(samples.images, moved);
    for (std::size_t i = 0; i < moved.size(); ++i)
        cert.residual = std::max(cert.residual, (moved[i] - cert.motion.apply(samples.images[i])).norm());
    cert.tolerance = 1e-9 * samples.diameter;
    cert.passed = cert.residual < cert.tolerance && cert.motion.is_orthogonal();
    return cert;
}

}  // namespace

IsometryCertificate verify_isometry(const SurfaceMap& S, const ParameterMap& sigma, const RigidMotion& motion,
                                    const SampleSpec& samples) {
    return certify(S, sigma, draw_samples(S, samples), motion);
}

IsometryCertificate fit_isometry(const SurfaceMap& S, const ParameterMap& sigma, const SampleSpec& samples) {
    return certify(S, sigma, draw_samples(S, samples), std::nullopt);
}

std::vector<ParameterMap> isometry_generators(int m) {
    if (m < 1) throw DomainError("isometry_generators: m must be positive");
    const long n = m + 1;
    if (m % 2 == 1) {
        return {ParameterMap::reflection(1, 1),                   // O1: t -> pi - t
                ParameterMap::shift(static_cast<long>(m) + 2, n)};  // O2: t -> t + pi (m+2)/(m+1)
    }
    return {ParameterMap::reflection(1, 1),  // E1: t -> pi - t
            ParameterMap::shift(2, n),       // E2: t -> t + 2 pi/(m+1)
            ParameterMap::shift(1, 1)};      // E3: z -> -z
}

bool IsometryGroup::all_passed() const {
    return std::all_of(elements.begin(), elements.end(), [](const IsometryCertificate& c) { return c.passed; });
}

IsometryGroup enumerate_isometries(int m, const SampleSpec& samples) {
    const std::vector<ParameterMap> gens = isometry_generators(m);
    const std::size_t bound = 4 * static_cast<std::size_t>(m) + 4;

    std::vector<ParameterMap> group{ParameterMap::identity()};
    std::deque<ParameterMap> queue{ParameterMap::identity()};
    while (!queue.empty()) {
        const ParameterMap g = queue.front();
        queue.pop_front();
        for (const ParameterMap& s : gens) {
            const ParameterMap h = s.after(g);
            if (std::find(group.begin(), group.end(), h) != group.end()) continue;
            group.push_back(h);
            queue.push_back(h);
            if (group.size() > bound) {
                std::ostringstream msg;
                msg << "enumerate_isometries: generators for m = " << m << " do not close within " << bound
                    << " elements";
                throw StructuralError(msg.str());
            }
        }
    }

    IsometryGroup result;
    result.m = m;
    result.closed = true;
    for (const ParameterMap& a : group)
        for (const ParameterMap& b : group)
            if (std::find(group.begin(), group.end(), a.after(b)) == group.end()) result.closed = false;

    const SurfaceMap S = hm_surface(m);
    const Samples drawn = draw_samples(S, samples);
    for (const ParameterMap& g : group) result.elements.push_back(certify(S, g, drawn, std::nullopt));
    return result;
}

// ---------------------------------------------------------------------------
// Flux and cusps

std::array<double, 3> flux_exactness(const WeierstrassData& data) {
    const auto phis = phi_forms(data);
    return {std::abs(residue_at_zero(phis[0])), std::abs(residue_at_zero(phis[1])),
            std::abs(residue_at_zero(phis[2]))};
}

std::vector<double> find_cusps(const CurveFn& curve, double t0, double period, std::size_t samples) {
    if (samples < 16 || !(period > 0.0)) throw DomainError("find_cusps: need a positive period and >= 16 samples");
    const double dt = period / static_cast<double>(samples);
    std::vector<Point3> p(samples);
    for (std::size_t i = 0; i < samples; ++i) p[i] = curve(t0 + dt * static_cast<double>(i));

    const double h = 1e-6 * period;
    auto velocity = [&](double t) -> Point3 { return (curve(t + h) - curve(t - h)) / (2.0 * h); };

    double max_speed = 0.0;
    for (std::size_t i = 0; i < samples; ++i) max_speed = std::max(max_speed, velocity(t0 + dt * i).norm());
    if (max_speed == 0.0) return {};

    std::vector<double> found;
    for (std::size_t i = 0; i < samples; ++i) {
        const Point3& prev = p[(i + samples - 1) % samples];
        const Point3& next = p[(i + 1) % samples];
        const Point3 d_prev = p[i] - prev;
        const Point3 d_next = next - p[i];
        if (d_prev.dot(d_next) >= 0.0 || d_prev.norm() == 0.0) continue;

        // Tangential velocity along the incoming direction changes sign at the cusp.
        const Point3 dir = d_prev.normalized();
        double a = t0 + dt * (static_cast<double>(i) - 1.0);
        double b = t0 + dt * (static_cast<double>(i) + 1.0);
        double fa = velocity(a).dot(dir);
        const double fb = velocity(b).dot(dir);
        if (!(fa > 0.0 && fb < 0.0)) continue;
        for (int it = 0; it < 200 && b - a > 4e-16 * std::max(1.0, std::abs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = velocity(mid).dot(dir);
            if (fm > 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        const double tc = 0.5 * (a + b);
        if (velocity(tc).norm() >= 1e-8 * max_speed) continue;
        found.push_back(t0 + positive_mod(tc - t0, period));
    }
    std::sort(found.begin(), found.end());
    std::vector<double> merged;
    for (double t : found)
        if (merged.empty() || t - merged.back() > 1e-3) merged.push_back(t);
    if (merged.size() > 1 && merged.front() + period - merged.back() <= 1e-3) merged.pop_back();
    return merged;
}

int cusp_count(const CurveFn& curve, double period, std::size_t samples) {
    const std::vector<double> ts = find_cusps(curve, 0.0, period, samples);
    std::vector<Point3> images;
    double extent = 0.0;
    for (double t : ts) {
        images.push_back(curve(t));
        extent = std::max(extent, images.back().norm());
    }
    std::vector<Point3> distinct;
    for (const Point3& x : images)
        if (std::none_of(distinct.begin(), distinct.end(),
                         [&](const Point3& y) { return (x - y).norm() <= 1e-7 * (1.0 + extent); }))
            distinct.push_back(x);
    return static_cast<int>(distinct.size());
}

}  // namespace henneberg
