#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "henneberg/errors.hpp"
#include "henneberg/geometry.hpp"
#include "henneberg/period.hpp"
#include "henneberg/surfaces.hpp"

namespace henneberg {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Meshes

struct SamplingSpec {
    double r_min = 1.0 / 8.0;
    double r_max = 8.0;
    std::size_t n_r = 129;      // log-spaced
    std::size_t n_theta = 256;
    bool quotient = false;      // keep theta in [0, P/2), glue the seam by z ~ -1/conj(z)
    bool wrap = true;           // theta periodic

    /// Throws DomainError on an invalid spec.
    void validate() const;
};

struct Mesh {
    std::vector<Point3> vertices;
    std::vector<Point3> normals;
    std::vector<std::array<std::uint32_t, 3>> faces;
    json metadata = json::object();

    /// Throws StructuralError if some index is out of range, a normal is not
    /// unit, or a coordinate is not finite.
    void validate() const;
};

using NormalFn = std::function<Point3(double r, double theta)>;

/// Unit normal of a surface with Gauss map g(z) = z.
Point3 gauss_normal(double r, double theta);

/// Polar grid mesh of S. Normals come from `normal` when given, otherwise
/// from central differences of S.
Mesh build_mesh(const SurfaceMap& S, const SamplingSpec& spec, const NormalFn& normal = nullptr);

/// Mesh over the rectangle u in [u0, u1), v in [v0, v1] of a map (u, v) -> R^3.
Mesh build_uv_mesh(const std::function<Point3(double u, double v)>& X, double u0, double u1, std::size_t n_u,
                   double v0, double v1, std::size_t n_v);

void write_obj(const Mesh& mesh, std::ostream& out);
void write_ply(const Mesh& mesh, std::ostream& out);
Mesh read_obj(std::istream& in);
Mesh read_ply(std::istream& in);

enum class MeshFormat { Obj, Ply };
/// Ply for a ".ply" extension, Obj otherwise.
MeshFormat format_for_path(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path, std::optional<MeshFormat> format = std::nullopt);
Mesh load_mesh(const std::string& path);

// ---------------------------------------------------------------------------
// Data files

/// {"c": [re, im], "m": m, "a": [[r, theta], ...]}.
WeierstrassData data_from_json(const json& j);
json data_to_json(const WeierstrassData& data);

/// Parses text, reporting line and column of syntax errors.
json parse_json_text(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);

/// The "sampling" block of a config file, starting from `base`.
SamplingSpec sampling_from_json(const json& j, SamplingSpec base = {});
json sampling_to_json(const SamplingSpec& spec);

ModuliPoint moduli_from_json(const json& j);
json moduli_to_json(const ModuliPoint& p);

// ---------------------------------------------------------------------------
// Reports

struct VerificationReport {
    std::string subject;
    json data;
    PeriodResiduals periods;
    double period_tolerance = 1e-10;
    std::array<double, 3> flux{};
    double flux_tolerance = 1e-12;
    StabilityReport stability;
    std::optional<IsometryGroup> isometries;
    std::optional<std::pair<Complex, double>> m2_functions;  // (F, G) for m = 2 lists with a_1 > 0

    bool periods_pass() const { return periods.solved(period_tolerance); }
    bool flux_pass() const;
    bool passed() const;
    json to_json() const;
};

VerificationReport verify_data(const WeierstrassData& data, const std::string& subject,
                               std::optional<int> symmetric_m = std::nullopt, std::uint64_t seed = 0);

json certificate_to_json(const IsometryCertificate& c);
json complex_to_json(Complex z);
json point_to_json(const Point3& p);

}  // namespace henneberg
