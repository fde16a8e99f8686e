#include "henneberg/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "henneberg/errors.hpp"

namespace henneberg {

namespace {

constexpr double kPi = std::numbers::pi;

int integer_m(double m, const std::string& kind) {
    if (!(m >= 1.0) || m != std::floor(m) || m > 1000.0)
        throw ParseError(kind + ": --m must be a positive integer");
    return static_cast<int>(m);
}

WeierstrassData load_custom(const SurfaceSelector& s) {
    if (!s.data_path.empty()) return data_from_json(read_json_file(s.data_path));
    if (s.config) return data_from_json(*s.config);
    throw ParseError("custom: --data or a --config file with Weierstrass data is required");
}

FamilyPoint family_point(const SurfaceSelector& s) {
    FamilyBranch branch;
    if (s.sign == "+" || s.sign == "plus") branch = FamilyBranch::Plus;
    else if (s.sign == "-" || s.sign == "minus") branch = FamilyBranch::Minus;
    else throw ParseError("family: --sign must be + or -");
    return family_theta2(s.theta2, branch);
}

ThirdPoint third_point(const std::string& third) {
    if (third == "conjugate") return ThirdPoint::Conjugate;
    if (third == "antipodal") return ThirdPoint::Antipodal;
    throw ParseError("family: --third must be conjugate or antipodal");
}

WeierstrassData rotated(const WeierstrassData& data, double phi) {
    return WeierstrassData(data.c() * unit_phase(phi), data.config());
}

void write_report_file(const json& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << report.dump(2) << "\n";
}

// Shared handling of the error taxonomy.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PeriodError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (last residual " << e.last_residual() << ")\n";
        return kExitFail;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

ResolvedSurface resolve_surface(const SurfaceSelector& s) {
    const std::string& k = s.kind;
    if (k == "h1") return {"H1", h1_surface(), symmetric_example(1), 1};
    if (k == "hm" || k == "hm-odd" || k == "hm-even") {
        if (k == "hm-even" && s.m < 1.0) {
            if (!is_supported_even_formula_m(s.m)) throw ParseError("hm-even: --m must be an integer or 1/(2k)");
            return {"H_m (m = " + std::to_string(s.m) + ")", hm_even_surface(s.m), std::nullopt, std::nullopt};
        }
        const int m = integer_m(s.m, k);
        if (k == "hm-odd" && m % 2 == 0) throw ParseError("hm-odd: --m must be odd");
        if (k == "hm-even" && m % 2 == 1) throw ParseError("hm-even: --m must be even (or 1/(2k))");
        return {"H_" + std::to_string(m), hm_surface(m), symmetric_example(m), m};
    }
    if (k == "conjugate") {
        const int m = integer_m(s.m, k);
        const WeierstrassData data = rotated(symmetric_example(m), kPi / 2);
        if (m % 2 == 1) return {"H_" + std::to_string(m) + "*", hm_even_surface(m), data, std::nullopt};
        return {"H_" + std::to_string(m) + "*", associated_surface(symmetric_example(m), kPi / 2), data,
                std::nullopt};
    }
    if (k == "associated") {
        const int m = integer_m(s.m, k);
        return {"H_" + std::to_string(m) + "(phi = " + std::to_string(s.phi) + ")",
                associated_surface(symmetric_example(m), s.phi), rotated(symmetric_example(m), s.phi),
                std::nullopt};
    }
    if (k == "limit-m2") return {"limit of r1 H(theta2)", limit_m2_surface(), limit_m2_data(), std::nullopt};
    if (k == "family") {
        const FamilyPoint fp = family_point(s);
        const WeierstrassData data = fp.moduli(third_point(s.third)).to_data();
        return {"H(theta2 = " + std::to_string(s.theta2) + ")", integrated_surface(data), data, std::nullopt};
    }
    if (k == "custom") {
        const WeierstrassData data = load_custom(s);
        const PeriodResiduals res = period_residuals(data);
        if (!res.solved()) {
            throw PeriodError("custom data does not solve the period problem (max residual " +
                                  std::to_string(res.max_abs()) + ")",
                              res.max_abs());
        }
        return {"custom", integrated_surface(data), data, std::nullopt};
    }
    throw ParseError("unknown surface selector '" + k + "'");
}

int cmd_generate(const GenerateOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (options.out.empty()) throw ParseError("generate: --out is required");
        if (options.selector.kind == "custom") {
            // Refuse unsolved data with the full residual report.
            const WeierstrassData data = load_custom(options.selector);
            if (!period_residuals(data).solved()) {
                const VerificationReport report = verify_data(data, "custom");
                out << report.to_json().dump(2) << "\n";
                err << "error: custom data does not solve the period problem; no mesh written\n";
                return static_cast<int>(kExitFail);
            }
        }
        const ResolvedSurface resolved = resolve_surface(options.selector);
        Mesh mesh = build_mesh(resolved.surface, options.sampling,
                               resolved.gauss_normals ? NormalFn(gauss_normal) : NormalFn());
        mesh.metadata["subject"] = resolved.subject;
        if (resolved.data) mesh.metadata["data"] = data_to_json(*resolved.data);
        save_mesh(mesh, options.out, options.format);
        const MeshFormat fmt = options.format.value_or(format_for_path(options.out));
        json summary = {{"schema", 1},
                        {"subject", resolved.subject},
                        {"out", options.out},
                        {"format", fmt == MeshFormat::Ply ? "ply" : "obj"},
                        {"vertices", mesh.vertices.size()},
                        {"faces", mesh.faces.size()},
                        {"sampling", sampling_to_json(options.sampling)}};
        if (resolved.data) summary["data"] = data_to_json(*resolved.data);
        out << summary.dump(2) << "\n";
        return static_cast<int>(kExitPass);
    });
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SurfaceSelector& s = options.selector;
        std::optional<WeierstrassData> data;
        std::optional<int> symmetric_m;
        std::string subject;
        if (s.kind == "custom") {
            data = load_custom(s);
            subject = "custom";
        } else {
            ResolvedSurface resolved = resolve_surface(s);
            if (!resolved.data) throw ParseError("verify: selector '" + s.kind + "' has no Weierstrass data");
            data = resolved.data;
            symmetric_m = resolved.symmetric_m;
            subject = resolved.subject;
        }
        const VerificationReport report = verify_data(*data, subject, symmetric_m, options.seed);
        const json j = report.to_json();
        out << j.dump(2) << "\n";
        write_report_file(j, options.report_path);
        return static_cast<int>(report.passed() ? kExitPass : kExitFail);
    });
}

int cmd_search_m1(const SearchOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const M1SearchResult result = brute_search_m1(options.grid);
        json list = json::array();
        bool all = true;
        for (const M1Minimizer& x : result.minimizers) {
            const bool h = is_henneberg_list(x);
            all = all && h;
            list.push_back({{"r1", x.r1},
                            {"r2", x.r2},
                            {"theta2", x.theta2},
                            {"beta", x.beta},
                            {"residual", x.residual},
                            {"henneberg", h}});
        }
        const SearchGrid& g = options.grid;
        out << json{{"schema", 1},
                    {"grid",
                     {{"L", g.L},
                      {"r1", {g.r1_min > 0 ? g.r1_min : 1 / g.L, g.r1_max > 0 ? g.r1_max : g.L}},
                      {"r2", {g.r2_min > 0 ? g.r2_min : 1 / g.L, g.r2_max > 0 ? g.r2_max : g.L}},
                      {"n_radial", g.n_radial},
                      {"n_angular", g.n_angular},
                      {"accept", g.accept}}},
                    {"grid_points", result.grid_points},
                    {"candidates", result.candidates},
                    {"rejected", result.rejected},
                    {"minimizers", list},
                    {"all_henneberg", all}}
                   .dump(2)
            << "\n";
        return static_cast<int>(all ? kExitPass : kExitFail);
    });
}

int cmd_continue(const ContinueOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ModuliPoint start = options.from.empty() ? h2_point() : moduli_from_json(read_json_file(options.from));
        const ModuliPoint p = continue_from(start, options.r1, options.r2, options.continuation);
        out << json{{"schema", 1},
                    {"start", moduli_to_json(start)},
                    {"solution", moduli_to_json(p)},
                    {"residual", period_map(p).norm()},
                    {"jacobian_det", jacobian_P(p).determinant()},
                    {"theta2_plus_theta3", p.theta2 + p.theta3}}
                   .dump(2)
            << "\n";
        return static_cast<int>(kExitPass);
    });
}

int cmd_bjorling(const BjorlingCommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(options.strip > 0.0)) throw ParseError("bjorling: --strip must be positive");
        std::optional<AnalyticPlanarCurve> curve;
        std::optional<SurfaceMap> reference;
        std::string label;
        if (options.curve == "circle") {
            curve = circle(options.radius);
            label = "circle";
        } else {
            const int n = options.curve == "astroid" ? 4 : options.cusps;
            if (options.curve != "astroid" && options.curve != "hypocycloid")
                throw ParseError("bjorling: unknown curve '" + options.curve + "'");
            if (n < 3) throw ParseError("bjorling: --cusps must be at least 3");
            const double m = m_for_cusps(n);
            curve = hypocycloid_curve(m);
            reference = hm_even_surface(m);
            label = "hypocycloid with " + std::to_string(n) + " cusps";
        }
        BjorlingOptions bo;
        bo.quad_order = options.quad_order;
        bo.tolerance = options.tolerance;
        if (options.curve == "circle") bo.side = NormalSide::Left;
        const BjorlingSurface surface = bjorling_solve(*curve, bo);

        const double u0 = curve->t_min(), u1 = curve->t_max();
        const Mesh mesh = build_uv_mesh([&](double u, double v) { return surface(u, v); }, u0, u1, options.n_u,
                                        -options.strip, options.strip, options.n_v);
        json report = {{"schema", 1},
                       {"curve", label},
                       {"cusps_found", cusp_count(
                                           [&](double t) {
                                               const Eigen::Vector2d p = curve->point(t);
                                               return Point3(p.x(), p.y(), 0.0);
                                           },
                                           curve->period())},
                       {"cusp_parameters", surface.cusps().size()},
                       {"strip", options.strip},
                       {"quad_order", options.quad_order},
                       {"vertices", mesh.vertices.size()}};
        bool pass = true;
        const double du = (u1 - u0) / static_cast<double>(options.n_u);
        const double dv = 2 * options.strip / static_cast<double>(options.n_v - 1);
        if (reference) {
            double sup = 0.0;
            for (std::size_t i = 0; i < options.n_v; ++i)
                for (std::size_t j = 0; j < options.n_u; ++j) {
                    const double u = u0 + du * (static_cast<double>(j) + 0.5);
                    const double v = -options.strip + dv * static_cast<double>(i);
                    sup = std::max(sup, (mesh.vertices[i * options.n_u + j] - (*reference)(std::exp(-v), u)).norm());
                }
            pass = sup < 1e-6;
            report["closed_form_sup_error"] = sup;
            report["tolerance"] = 1e-6;
        } else {
            // No closed form: compare against the solver at twice the order.
            BjorlingOptions fine = bo;
            fine.quad_order = 2 * bo.quad_order;
            const BjorlingSurface check = bjorling_solve(*curve, fine);
            double sup = 0.0;
            for (std::size_t j = 0; j < options.n_u; j += 7) {
                const double u = u0 + du * (static_cast<double>(j) + 0.5);
                sup = std::max(sup, (surface(u, options.strip) - check(u, options.strip)).norm());
            }
            pass = sup < 1e-10;
            report["order_doubling_sup_difference"] = sup;
            report["tolerance"] = 1e-10;
        }
        report["pass"] = pass;
        if (!options.out.empty()) {
            Mesh saved = mesh;
            saved.metadata = {{"surface", "Bjorling"}, {"curve", label}, {"strip", options.strip}};
            save_mesh(saved, options.out);
            report["out"] = options.out;
        }
        out << report.dump(2) << "\n";
        return static_cast<int>(pass ? kExitPass : kExitFail);
    });
}

}  // namespace henneberg
