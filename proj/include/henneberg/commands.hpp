#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "henneberg/io.hpp"

namespace henneberg {

/// Exit codes shared by every command.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

/// Surface selection shared by generate and verify.
///   h1 | hm | hm-odd | hm-even | conjugate | associated | limit-m2 | family | custom
struct SurfaceSelector {
    std::string kind = "h1";
    double m = 1.0;
    double phi = 0.0;
    double theta2 = 0.0;
    std::string sign = "+";           // family branch
    std::string third = "conjugate";  // family representative: conjugate | antipodal
    std::string data_path;            // custom
    std::optional<json> config;       // custom data taken from a config file
};

struct ResolvedSurface {
    std::string subject;
    SurfaceMap surface;
    std::optional<WeierstrassData> data;
    std::optional<int> symmetric_m;  // set for H_m itself
    bool gauss_normals = true;
};

/// Throws ParseError / DomainError for bad selectors and PeriodError for
/// custom data whose periods do not close.
ResolvedSurface resolve_surface(const SurfaceSelector& selector);

struct GenerateOptions {
    SurfaceSelector selector;
    SamplingSpec sampling;
    std::string out;
    std::optional<MeshFormat> format;
};

struct VerifyOptions {
    SurfaceSelector selector;
    std::uint64_t seed = 0;
    std::string report_path;  // also write the report here when set
};

struct SearchOptions {
    SearchGrid grid;
};

struct ContinueOptions {
    double r1 = 1.0;
    double r2 = 1.0;
    std::string from;  // ModuliPoint JSON; H_2 when empty
    ContinuationOptions continuation;
};

struct BjorlingCommandOptions {
    std::string curve = "hypocycloid";  // hypocycloid | astroid | circle
    int cusps = 0;
    double radius = 1.0;
    int quad_order = 8;
    double tolerance = 1e-10;
    double strip = 0.05;
    std::size_t n_u = 512;
    std::size_t n_v = 21;
    std::string out;
};

// Each command prints a JSON document to `out`, diagnostics to `err`, and
// returns an ExitCode.
int cmd_generate(const GenerateOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);
int cmd_search_m1(const SearchOptions& options, std::ostream& out, std::ostream& err);
int cmd_continue(const ContinueOptions& options, std::ostream& out, std::ostream& err);
int cmd_bjorling(const BjorlingCommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace henneberg
