#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "henneberg/commands.hpp"
#include "henneberg/errors.hpp"

using namespace henneberg;

namespace {

const char* kSelectors = "h1|hm|hm-odd|hm-even|conjugate|associated|limit-m2|family|custom";

void add_selector(CLI::App* cmd, SurfaceSelector& s) {
    cmd->add_option("selector", s.kind, kSelectors)->required();
    cmd->add_option("--m", s.m, "complexity (hm-even also accepts 1/(2k), e.g. 0.5)");
    cmd->add_option("--phi", s.phi, "associated-family angle in radians");
    cmd->add_option("--theta2", s.theta2, "family parameter in (pi/4, pi/3] or [2pi/3, 3pi/4)");
    cmd->add_option("--sign", s.sign, "family branch: + or -");
    cmd->add_option("--third", s.third, "family representative: conjugate or antipodal");
    cmd->add_option("--data", s.data_path, "Weierstrass data file (JSON)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Henneberg minimal surfaces: meshes, period checks and solvers"};
    app.require_subcommand(1);

    GenerateOptions gen;
    std::string gen_config, gen_format;
    auto* generate = app.add_subcommand("generate", "sample a surface and write an OBJ or PLY mesh");
    add_selector(generate, gen.selector);
    generate->add_option("--out,-o", gen.out, "output mesh path")->required();
    generate->add_option("--format", gen_format, "obj or ply (default: from extension)")
        ->check(CLI::IsMember({"obj", "ply"}));
    generate->add_option("--config", gen_config, "JSON config: Weierstrass data plus a 'sampling' block");
    auto* r_min = generate->add_option("--r-min", gen.sampling.r_min, "smallest radius");
    auto* r_max = generate->add_option("--r-max", gen.sampling.r_max, "largest radius");
    auto* n_r = generate->add_option("--n-r", gen.sampling.n_r, "radial samples");
    auto* n_theta = generate->add_option("--n-theta", gen.sampling.n_theta, "angular samples");
    auto* quotient = generate->add_flag("--quotient", gen.sampling.quotient, "mesh the one-sided quotient only");
    bool no_wrap = false;
    auto* no_wrap_flag = generate->add_flag("--no-wrap", no_wrap, "do not close the theta seam");

    VerifyOptions ver;
    auto* verify = app.add_subcommand("verify", "period, flux, stability and isometry report (JSON)");
    add_selector(verify, ver.selector);
    verify->add_option("--seed", ver.seed, "seed for sampled checks");
    verify->add_option("--report", ver.report_path, "also write the report to this file");

    SearchOptions search;
    auto* search_m1 = app.add_subcommand("search-m1", "grid search for complexity-1 solutions");
    search_m1->add_option("--L", search.grid.L, "radii in [1/L, L]");
    search_m1->add_option("--r1-min", search.grid.r1_min);
    search_m1->add_option("--r1-max", search.grid.r1_max);
    search_m1->add_option("--r2-min", search.grid.r2_min);
    search_m1->add_option("--r2-max", search.grid.r2_max);
    search_m1->add_option("--n-radial", search.grid.n_radial, "log-radial grid points");
    search_m1->add_option("--n-angular", search.grid.n_angular, "grid points per angle");
    search_m1->add_option("--refine-steps", search.grid.refine_steps, "damped Gauss-Newton steps");

    ContinueOptions cont;
    auto* continue_cmd = app.add_subcommand("continue", "follow the complexity-2 moduli from H_2 (or --from)");
    continue_cmd->add_option("--r1", cont.r1, "target r_1")->required();
    continue_cmd->add_option("--r2", cont.r2, "target r_2")->required();
    continue_cmd->add_option("--from", cont.from, "start point JSON {r1, r2, r3, theta2, theta3[, beta]}");
    continue_cmd->add_option("--max-step", cont.continuation.max_step, "path step in (log r1, log r2)");

    BjorlingCommandOptions bj;
    bool use_astroid = false, use_circle = false;
    auto* bjorling = app.add_subcommand("bjorling", "solve the Bjorling problem for a planar curve");
    bjorling->add_option("--cusps", bj.cusps, "hypocycloid with this many cusps (>= 3)");
    bjorling->add_flag("--astroid", use_astroid, "the 4-cusp hypocycloid");
    bjorling->add_flag("--circle", use_circle, "a circle (no closed form to compare with)");
    bjorling->add_option("--radius", bj.radius, "circle radius");
    bjorling->add_option("--quad-order", bj.quad_order, "Gauss-Legendre order");
    bjorling->add_option("--tol", bj.tolerance, "quadrature tolerance");
    bjorling->add_option("--strip", bj.strip, "half width of the strip |v| <= strip");
    bjorling->add_option("--n-u", bj.n_u, "samples along the curve");
    bjorling->add_option("--n-v", bj.n_v, "samples across the strip");
    bjorling->add_option("--out,-o", bj.out, "output mesh path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (generate->parsed()) {
        if (!gen_config.empty()) {
            // Config first; explicit flags win.
            try {
                const json config = read_json_file(gen_config);
                SamplingSpec flags = gen.sampling;
                if (config.contains("sampling")) gen.sampling = sampling_from_json(config["sampling"]);
                if (r_min->count()) gen.sampling.r_min = flags.r_min;
                if (r_max->count()) gen.sampling.r_max = flags.r_max;
                if (n_r->count()) gen.sampling.n_r = flags.n_r;
                if (n_theta->count()) gen.sampling.n_theta = flags.n_theta;
                if (quotient->count()) gen.sampling.quotient = true;
                if (config.contains("c")) gen.selector.config = config;
            } catch (const ParseError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }
        if (no_wrap_flag->count()) gen.sampling.wrap = false;
        if (gen_format == "obj") gen.format = MeshFormat::Obj;
        if (gen_format == "ply") gen.format = MeshFormat::Ply;
        return cmd_generate(gen, std::cout, std::cerr);
    }
    if (verify->parsed()) return cmd_verify(ver, std::cout, std::cerr);
    if (search_m1->parsed()) return cmd_search_m1(search, std::cout, std::cerr);
    if (continue_cmd->parsed()) return cmd_continue(cont, std::cout, std::cerr);
    if (bjorling->parsed()) {
        if (use_astroid + use_circle + (bj.cusps > 0) != 1) {
            std::cerr << "error: bjorling needs exactly one of --cusps, --astroid, --circle\n";
            return kExitUsage;
        }
        bj.curve = use_astroid ? "astroid" : use_circle ? "circle" : "hypocycloid";
        return cmd_bjorling(bj, std::cout, std::cerr);
    }
    return kExitUsage;
}
