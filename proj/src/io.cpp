#include "henneberg/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "henneberg/errors.hpp"
#include "henneberg/parallel.hpp"

namespace henneberg {

namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY output assumes a little-endian host");

double number_at(const json& j, const std::string& field) {
    if (!j.is_number()) throw ParseError("field '" + field + "': expected a number, got " + std::string(j.type_name()));
    return j.get<double>();
}

const json& member(const json& j, const std::string& key, const std::string& field) {
    if (!j.is_object()) throw ParseError("field '" + field + "': expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError("missing field '" + (field.empty() ? key : field + "." + key) + "'");
    return *it;
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Point3 fd_normal(const SurfaceMap& S, double r, double theta) {
    const double h = 1e-6;
    const Point3 d_logr = (S(r * std::exp(h), theta) - S(r * std::exp(-h), theta)) / (2 * h);
    const Point3 d_theta = (S(r, theta + h) - S(r, theta - h)) / (2 * h);
    const Point3 n = d_logr.cross(d_theta);
    const double len = n.norm();
    if (!(len > 1e-14) || !std::isfinite(len)) return Point3::UnitZ();
    return n / len;
}

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw ParseError("ply: unexpected end of binary data");
    return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Meshes

void SamplingSpec::validate() const {
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
        throw DomainError("sampling: need 0 < r_min < r_max");
    if (n_r < 2 || n_theta < 2) throw DomainError("sampling: resolutions must be at least 2");
    if (quotient) {
        if (n_theta % 2 != 0 || n_theta < 4) throw DomainError("sampling: quotient needs an even n_theta >= 4");
        if (wrap && std::abs(std::log(r_min * r_max)) > 1e-12)
            throw DomainError("sampling: quotient seam needs r_min * r_max = 1");
    }
}

void Mesh::validate() const {
    if (!normals.empty() && normals.size() != vertices.size())
        throw StructuralError("mesh: normal count differs from vertex count");
    for (const Point3& v : vertices)
        if (!v.allFinite()) throw StructuralError("mesh: non-finite vertex");
    for (const Point3& n : normals)
        if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-6) throw StructuralError("mesh: normal is not unit");
    for (const auto& f : faces)
        for (std::uint32_t i : f)
            if (i >= vertices.size()) throw StructuralError("mesh: face index out of range");
}

Point3 gauss_normal(double r, double theta) {
    const double x = r * std::cos(theta), y = r * std::sin(theta);
    const double q = r * r;
    return Point3(2 * x, 2 * y, q - 1.0) / (1.0 + q);
}

Mesh build_mesh(const SurfaceMap& S, const SamplingSpec& spec, const NormalFn& normal) {
    spec.validate();
    const double period = S.theta_period;
    const std::size_t cols = spec.quotient ? spec.n_theta / 2 : spec.n_theta;
    const double span = spec.quotient ? period / 2 : period;
    const double step = spec.wrap ? span / static_cast<double>(cols) : span / static_cast<double>(cols - 1);
    const double lr0 = std::log(spec.r_min), lr1 = std::log(spec.r_max);

    Mesh mesh;
    mesh.vertices.resize(spec.n_r * cols);
    mesh.normals.resize(spec.n_r * cols);
    parallel_for(spec.n_r, [&](std::size_t i) {
        const double r = std::exp(lr0 + (lr1 - lr0) * static_cast<double>(i) / static_cast<double>(spec.n_r - 1));
        for (std::size_t j = 0; j < cols; ++j) {
            const double t = step * static_cast<double>(j);
            mesh.vertices[i * cols + j] = S(r, t);
            mesh.normals[i * cols + j] = normal ? normal(r, t) : fd_normal(S, r, t);
        }
    });

    auto index = [cols](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(i * cols + j); };
    auto quad = [&mesh](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
        mesh.faces.push_back({a, b, c});
        mesh.faces.push_back({a, c, d});
    };
    const std::size_t last = spec.n_r - 1;
    for (std::size_t i = 0; i < last; ++i) {
        for (std::size_t j = 0; j + 1 < cols; ++j) quad(index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1));
        if (!spec.wrap) continue;
        if (spec.quotient) {
            // (r, theta + P/2) is identified with (1/r, theta).
            quad(index(i, cols - 1), index(i + 1, cols - 1), index(last - i - 1, 0), index(last - i, 0));
        } else {
            quad(index(i, cols - 1), index(i + 1, cols - 1), index(i + 1, 0), index(i, 0));
        }
    }
    mesh.metadata = {{"surface", to_string(S.kind)},
                     {"m", S.m},
                     {"phi", S.phi},
                     {"theta_period", S.theta_period},
                     {"sampling", sampling_to_json(spec)}};
    mesh.validate();
    return mesh;
}

Mesh build_uv_mesh(const std::function<Point3(double, double)>& X, double u0, double u1, std::size_t n_u, double v0,
                   double v1, std::size_t n_v) {
    if (n_u < 2 || n_v < 2 || !(u1 > u0) || !(v1 > v0)) throw DomainError("build_uv_mesh: empty grid");
    Mesh mesh;
    mesh.vertices.resize(n_u * n_v);
    mesh.normals.resize(n_u * n_v);
    const double du = (u1 - u0) / static_cast<double>(n_u), dv = (v1 - v0) / static_cast<double>(n_v - 1);
    parallel_for(n_v, [&](std::size_t i) {
        const double v = v0 + dv * static_cast<double>(i);
        for (std::size_t j = 0; j < n_u; ++j) {
            const double u = u0 + du * (static_cast<double>(j) + 0.5);
            mesh.vertices[i * n_u + j] = X(u, v);
        }
    });
    for (std::size_t i = 0; i < n_v; ++i) {
        for (std::size_t j = 0; j < n_u; ++j) {
            const std::size_t jp = std::min(j + 1, n_u - 1), jm = j == 0 ? 0 : j - 1;
            const std::size_t ip = std::min(i + 1, n_v - 1), im = i == 0 ? 0 : i - 1;
            const Point3 xu = mesh.vertices[i * n_u + jp] - mesh.vertices[i * n_u + jm];
            const Point3 xv = mesh.vertices[ip * n_u + j] - mesh.vertices[im * n_u + j];
            const Point3 n = xu.cross(xv);
            mesh.normals[i * n_u + j] = n.norm() > 1e-300 ? Point3(n.normalized()) : Point3(Point3::UnitZ());
        }
    }
    for (std::size_t i = 0; i + 1 < n_v; ++i)
        for (std::size_t j = 0; j + 1 < n_u; ++j) {
            const auto a = static_cast<std::uint32_t>(i * n_u + j);
            const auto b = static_cast<std::uint32_t>((i + 1) * n_u + j);
            mesh.faces.push_back({a, b, b + 1});
            mesh.faces.push_back({a, b + 1, a + 1});
        }
    mesh.validate();
    return mesh;
}

void write_obj(const Mesh& mesh, std::ostream& out) {
    mesh.validate();
    out << "# " << mesh.metadata.dump() << "\n";
    for (const Point3& v : mesh.vertices)
        out << "v " << format_g17(v.x()) << ' ' << format_g17(v.y()) << ' ' << format_g17(v.z()) << '\n';
    for (const Point3& n : mesh.normals)
        out << "vn " << format_g17(n.x()) << ' ' << format_g17(n.y()) << ' ' << format_g17(n.z()) << '\n';
    const bool with_normals = !mesh.normals.empty();
    for (const auto& f : mesh.faces) {
        out << 'f';
        for (std::uint32_t i : f) {
            out << ' ' << i + 1;
            if (with_normals) out << "//" << i + 1;
        }
        out << '\n';
    }
}

Mesh read_obj(std::istream& in) {
    Mesh mesh;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream s(line);
        std::string tag;
        if (!(s >> tag)) continue;
        if (tag == "#") {
            const auto brace = line.find('{');
            if (line_no == 1 && brace != std::string::npos) mesh.metadata = json::parse(line.substr(brace), nullptr, false);
            if (mesh.metadata.is_discarded()) mesh.metadata = json::object();
            continue;
        }
        auto fail = [&](const std::string& what) {
            throw ParseError("obj line " + std::to_string(line_no) + ": " + what);
        };
        if (tag == "v" || tag == "vn") {
            std::string a, b, c;
            if (!(s >> a >> b >> c)) fail("expected three coordinates");
            Point3 p;
            try {
                p = {std::stod(a), std::stod(b), std::stod(c)};
            } catch (const std::exception&) {
                fail("invalid number");
            }
            (tag == "v" ? mesh.vertices : mesh.normals).push_back(p);
        } else if (tag == "f") {
            std::array<std::uint32_t, 3> face{};
            for (auto& idx : face) {
                std::string item;
                if (!(s >> item)) fail("expected three face indices");
                const long k = std::strtol(item.c_str(), nullptr, 10);
                if (k < 1) fail("face index must be positive");
                idx = static_cast<std::uint32_t>(k - 1);
            }
            mesh.faces.push_back(face);
        }
    }
    mesh.validate();
    return mesh;
}

void write_ply(const Mesh& mesh, std::ostream& out) {
    mesh.validate();
    const bool with_normals = !mesh.normals.empty();
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "comment " << mesh.metadata.dump() << "\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    if (with_normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
    out << "element face " << mesh.faces.size() << "\n";
    out << "property list uchar uint vertex_indices\nend_header\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        for (int k = 0; k < 3; ++k) put(out, mesh.vertices[i][k]);
        if (with_normals)
            for (int k = 0; k < 3; ++k) put(out, mesh.normals[i][k]);
    }
    for (const auto& f : mesh.faces) {
        put<std::uint8_t>(out, 3);
        for (std::uint32_t idx : f) put(out, idx);
    }
}

Mesh read_ply(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "ply") throw ParseError("ply: missing magic line");
    std::size_t n_vertices = 0, n_faces = 0;
    int vertex_props = 0;
    Mesh mesh;
    bool binary_le = false;
    std::string element;
    while (std::getline(in, line)) {
        std::istringstream s(line);
        std::string tag;
        s >> tag;
        if (tag == "format") {
            std::string kind;
            s >> kind;
            binary_le = kind == "binary_little_endian";
        } else if (tag == "comment") {
            const auto brace = line.find('{');
            if (brace != std::string::npos) {
                mesh.metadata = json::parse(line.substr(brace), nullptr, false);
                if (mesh.metadata.is_discarded()) mesh.metadata = json::object();
            }
        } else if (tag == "element") {
            std::size_t count = 0;
            s >> element >> count;
            if (element == "vertex") n_vertices = count;
            else if (element == "face") n_faces = count;
        } else if (tag == "property") {
            std::string type;
            s >> type;
            if (element == "vertex") {
                if (type != "double") throw ParseError("ply: only double vertex properties are supported");
                ++vertex_props;
            }
        } else if (tag == "end_header") {
            break;
        }
    }
    if (!binary_le) throw ParseError("ply: only binary_little_endian is supported");
    if (vertex_props != 3 && vertex_props != 6) throw ParseError("ply: expected 3 or 6 vertex properties");
    for (std::size_t i = 0; i < n_vertices; ++i) {
        Point3 v;
        for (int k = 0; k < 3; ++k) v[k] = get<double>(in);
        mesh.vertices.push_back(v);
        if (vertex_props == 6) {
            Point3 n;
            for (int k = 0; k < 3; ++k) n[k] = get<double>(in);
            mesh.normals.push_back(n);
        }
    }
    for (std::size_t i = 0; i < n_faces; ++i) {
        if (get<std::uint8_t>(in) != 3) throw ParseError("ply: only triangles are supported");
        std::array<std::uint32_t, 3> f{};
        for (auto& idx : f) idx = get<std::uint32_t>(in);
        mesh.faces.push_back(f);
    }
    mesh.validate();
    return mesh;
}

MeshFormat format_for_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return MeshFormat::Obj;
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == "ply" ? MeshFormat::Ply : MeshFormat::Obj;
}

void save_mesh(const Mesh& mesh, const std::string& path, std::optional<MeshFormat> format) {
    const MeshFormat fmt = format.value_or(format_for_path(path));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    if (fmt == MeshFormat::Ply) write_ply(mesh, out);
    else write_obj(mesh, out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return format_for_path(path) == MeshFormat::Ply ? read_ply(in) : read_obj(in);
}

// ---------------------------------------------------------------------------
// Data files

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << source << ":" << line << ":" << column << ": JSON syntax error";
        const std::string what = e.what();
        const auto colon = what.rfind(": ");
        if (colon != std::string::npos) msg << " (" << what.substr(colon + 2) << ")";
        throw ParseError(msg.str());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str(), path);
}

WeierstrassData data_from_json(const json& j) {
    const json& c = member(j, "c", "");
    if (!c.is_array() || c.size() != 2) throw ParseError("field 'c': expected [re, im]");
    const Complex cval(number_at(c[0], "c[0]"), number_at(c[1], "c[1]"));

    const json& a = member(j, "a", "");
    if (!a.is_array()) throw ParseError("field 'a': expected a list of [r, theta] pairs");
    std::vector<PolarPoint> points;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const std::string field = "a[" + std::to_string(k) + "]";
        if (!a[k].is_array() || a[k].size() != 2) throw ParseError("field '" + field + "': expected [r, theta]");
        points.push_back({number_at(a[k][0], field + "[0]"), number_at(a[k][1], field + "[1]")});
    }
    if (j.contains("m")) {
        const json& m = j["m"];
        if (!m.is_number_integer()) throw ParseError("field 'm': expected an integer");
        if (m.get<long>() + 1 != static_cast<long>(points.size()))
            throw ParseError("field 'm': m = " + std::to_string(m.get<long>()) + " needs " +
                             std::to_string(m.get<long>() + 1) + " entries in 'a', found " +
                             std::to_string(points.size()));
    }
    try {
        return WeierstrassData(cval, BranchConfiguration(std::move(points)));
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid data: ") + e.what());
    }
}

json data_to_json(const WeierstrassData& data) {
    json a = json::array();
    for (const PolarPoint& p : data.config().points()) a.push_back({p.r, p.theta});
    return {{"c", {data.c().real(), data.c().imag()}}, {"c_scale", data.c_scale()}, {"m", data.m()}, {"a", a}};
}

SamplingSpec sampling_from_json(const json& j, SamplingSpec base) {
    if (!j.is_object()) throw ParseError("field 'sampling': expected an object");
    for (const auto& [key, value] : j.items()) {
        const std::string field = join("sampling", key);
        if (key == "r_min") base.r_min = number_at(value, field);
        else if (key == "r_max") base.r_max = number_at(value, field);
        else if (key == "n_r" || key == "n_theta") {
            if (!value.is_number_unsigned()) throw ParseError("field '" + field + "': expected a positive integer");
            (key == "n_r" ? base.n_r : base.n_theta) = value.get<std::size_t>();
        } else if (key == "quotient" || key == "wrap") {
            if (!value.is_boolean()) throw ParseError("field '" + field + "': expected true or false");
            (key == "quotient" ? base.quotient : base.wrap) = value.get<bool>();
        } else {
            throw ParseError("field '" + field + "': unknown key");
        }
    }
    return base;
}

json sampling_to_json(const SamplingSpec& spec) {
    return {{"r_min", spec.r_min}, {"r_max", spec.r_max},       {"n_r", spec.n_r},
            {"n_theta", spec.n_theta}, {"quotient", spec.quotient}, {"wrap", spec.wrap}};
}

ModuliPoint moduli_from_json(const json& j) {
    ModuliPoint p;
    p.r1 = number_at(member(j, "r1", ""), "r1");
    p.r2 = number_at(member(j, "r2", ""), "r2");
    p.r3 = number_at(member(j, "r3", ""), "r3");
    p.theta2 = number_at(member(j, "theta2", ""), "theta2");
    p.theta3 = number_at(member(j, "theta3", ""), "theta3");
    p.beta = j.contains("beta") ? number_at(j["beta"], "beta") : beta_from_angles(p.theta2, p.theta3);
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return p;
}

json moduli_to_json(const ModuliPoint& p) {
    return {{"r1", p.r1}, {"r2", p.r2}, {"r3", p.r3}, {"theta2", p.theta2}, {"theta3", p.theta3}, {"beta", p.beta}};
}

// ---------------------------------------------------------------------------
// Reports

json complex_to_json(Complex z) { return {z.real(), z.imag()}; }
json point_to_json(const Point3& p) { return {p.x(), p.y(), p.z()}; }

json certificate_to_json(const IsometryCertificate& c) {
    json q = json::array();
    for (int i = 0; i < 3; ++i) q.push_back({c.motion.Q(i, 0), c.motion.Q(i, 1), c.motion.Q(i, 2)});
    return {{"sigma", c.sigma.describe()},
            {"Q", q},
            {"det", c.motion.Q.determinant()},
            {"t", point_to_json(c.motion.t)},
            {"residual", c.residual},
            {"tolerance", c.tolerance},
            {"pass", c.passed}};
}

bool VerificationReport::flux_pass() const {
    return std::all_of(flux.begin(), flux.end(), [this](double f) { return f < flux_tolerance; });
}

bool VerificationReport::passed() const {
    return periods_pass() && stability.stable && (!isometries || (isometries->all_passed() && isometries->closed));
}

json VerificationReport::to_json() const {
    json j;
    j["schema"] = 1;
    j["subject"] = subject;
    j["data"] = data;
    j["period"] = {{"horizontal", complex_to_json(periods.horizontal)},
                   {"horizontal_abs", std::abs(periods.horizontal)},
                   {"vertical", periods.vertical},
                   {"max_abs", periods.max_abs()},
                   {"tolerance", period_tolerance},
                   {"pass", periods_pass()}};
    j["one_sided"] = {{"residual", periods.onesided}, {"tolerance", period_tolerance},
                      {"pass", periods.onesided < period_tolerance}};
    j["flux"] = {{"residues_abs", flux}, {"tolerance", flux_tolerance}, {"exact", flux_pass()}};
    if (m2_functions) j["m2"] = {{"F", complex_to_json(m2_functions->first)}, {"F_abs", std::abs(m2_functions->first)},
                                 {"G", m2_functions->second}};
    json branch = json::array();
    for (const BranchImage& b : stability.branch_images)
        branch.push_back({{"parameter", complex_to_json(b.parameter)}, {"image", point_to_json(b.image)}});
    json distinct = json::array();
    for (const Point3& p : stability.distinct_images) distinct.push_back(point_to_json(p));
    j["stability"] = {{"one_sided", stability.one_sided},
                      {"periods_closed", stability.periods_closed},
                      {"gauss_map_diffeomorphism", stability.gauss_map_diffeomorphism},
                      {"distinct_branch_images", stability.distinct_images.size()},
                      {"stable", stability.stable}};
    j["branch_points"] = branch;
    j["distinct_branch_images"] = distinct;
    if (isometries) {
        json certs = json::array();
        for (const auto& c : isometries->elements) certs.push_back(certificate_to_json(c));
        j["isometries"] = {{"count", isometries->elements.size()},
                           {"expected", 4 * isometries->m + 4},
                           {"closed", isometries->closed},
                           {"all_pass", isometries->all_passed()},
                           {"certificates", certs}};
    }
    j["pass"] = passed();
    return j;
}

VerificationReport verify_data(const WeierstrassData& data, const std::string& subject, std::optional<int> symmetric_m,
                               std::uint64_t seed) {
    VerificationReport report;
    report.subject = subject;
    report.data = data_to_json(data);
    report.periods = period_residuals(data);
    report.flux = flux_exactness(data);
    report.stability = gauss_structural_stability(data);
    if (data.m() == 2 && data.config()[0].theta == 0.0) {
        const auto pts = data.config().points();
        const ModuliPoint p{pts[0].r, pts[1].r, pts[2].r, pts[1].theta, pts[2].theta, std::arg(data.c())};
        report.m2_functions = std::make_pair(F_m2(p), G_m2(p));
    }
    if (symmetric_m) {
        SampleSpec samples;
        samples.seed = seed;
        report.isometries = enumerate_isometries(*symmetric_m, samples);
    }
    return report;
}

}  // namespace henneberg
