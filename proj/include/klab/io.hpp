#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dynamics.hpp"
#include "line_census.hpp"
#include "pencils.hpp"

namespace klab::io {

using json = nlohmann::ordered_json;

// Reports list at most this many lines (points) per family; the counts are always
// complete and the omitted tail is recorded.
inline constexpr std::size_t kReportItemCap = 5000;

// Adding 0.0 turns -0.0 into 0.0 so that reports do not depend on signed zeros.
inline json cplx_json(cplx z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

inline cplx cplx_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorKind::InputError, "expected a number or a [re, im] pair, got " + j.dump());
}

inline json vec_json(const Vec3& v) { return json::array({cplx_json(v[0]), cplx_json(v[1]), cplx_json(v[2])}); }

inline Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::InputError, "expected 3 homogeneous coordinates");
    return {cplx_from_json(j[0]), cplx_from_json(j[1]), cplx_from_json(j[2])};
}

// Row-major list of nine [re, im] pairs.
inline json mat_json(const Mat3& m) {
    json a = json::array();
    for (const auto& x : m.a) a.push_back(cplx_json(x));
    return a;
}

// Accepts nine entries (row-major) or three rows of three; entries are numbers or
// [re, im] pairs.  An object with a "matrix" key is unwrapped.
inline Mat3 mat_from_json(const json& j) {
    if (j.is_object()) {
        if (!j.contains("matrix")) throw Error(ErrorKind::InputError, "matrix object needs a \"matrix\" key");
        return mat_from_json(j["matrix"]);
    }
    if (!j.is_array()) throw Error(ErrorKind::InputError, "a matrix must be a JSON array");
    Mat3 m;
    if (j.size() == 9) {
        for (int k = 0; k < 9; ++k) m.a[k] = cplx_from_json(j[k]);
    } else if (j.size() == 3) {
        for (int i = 0; i < 3; ++i) {
            if (!j[i].is_array() || j[i].size() != 3) throw Error(ErrorKind::InputError, "matrix rows need 3 entries");
            for (int c = 0; c < 3; ++c) m(i, c) = cplx_from_json(j[i][c]);
        }
    } else {
        throw Error(ErrorKind::InputError, "a matrix needs 9 entries or 3 rows");
    }
    for (const auto& x : m.a)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw Error(ErrorKind::InputError, "matrix entries must be finite");
    return m;
}

inline json group_json(const GroupSpec& s) {
    json j;
    j["name"] = s.name;
    j["generators"] = json::array();
    for (const auto& g : s.generators) j["generators"].push_back(mat_json(g.lift));
    j["metadata"] = json::object();
    for (const auto& [k, v] : s.metadata) j["metadata"][k] = v;
    return j;
}

inline GroupSpec group_from_json(const json& j) {
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
        throw Error(ErrorKind::InputError, "group spec needs a \"generators\" array");
    GroupSpec s;
    s.name = j.value("name", std::string("unnamed"));
    for (const auto& g : j["generators"]) {
        GroupElement e;
        try {
            e = element_new(mat_from_json(g));
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::InputError) throw;
            throw Error(ErrorKind::InputError, std::string("bad generator: ") + err.what());
        }
        if (is_identity(e)) throw Error(ErrorKind::InputError, "generator equals the identity");
        s.generators.push_back(e);
    }
    if (s.generators.empty()) throw Error(ErrorKind::InputError, "group spec has no generators");
    if (j.contains("metadata") && j["metadata"].is_object())
        for (const auto& [k, v] : j["metadata"].items()) s.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return s;
}

inline json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InputError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InputError, path.string() + ": " + e.what());
    }
}

// A file path, or inline JSON text.
inline json read_json_arg(const std::string& arg) {
    if (std::filesystem::exists(arg)) return read_json(arg);
    try {
        return json::parse(arg);
    } catch (const json::parse_error&) {
        throw Error(ErrorKind::InputError, "'" + arg + "' is neither a file nor valid JSON");
    }
}

inline GroupSpec read_group(const std::filesystem::path& path) { return group_from_json(read_json(path)); }

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

namespace detail {
// Nesting depth of arrays made only of numbers (1 for [x, y], 2 for [[x, y], ...]); 0 otherwise.
inline int numeric_depth(const json& j) {
    if (j.is_number()) return 0;
    if (!j.is_array() || j.empty()) return -1;
    int d = numeric_depth(j[0]);
    if (d < 0) return -1;
    for (const auto& x : j)
        if (numeric_depth(x) != d) return -1;
    return d + 1;
}

inline void dump_to(std::string& out, const json& j, int indent) {
    std::string pad(std::size_t(indent + 2), ' '), close(std::size_t(indent), ' ');
    int nd = numeric_depth(j);
    if (j.is_primitive() || j.empty() || (nd >= 1 && nd <= 2)) {
        // Numeric leaves stay on one line: coordinates and matrices read as rows.
        std::string s = j.dump();
        if (nd >= 1)
            for (std::size_t k = 0; k + 1 < s.size(); ++k)
                if (s[k] == ',') s.insert(++k, " ");
        out += s;
        return;
    }
    bool obj = j.is_object();
    if (obj && j.size() <= 4) {
        // Small records of leaves, such as {"v": [...], "cost": 2}, also stay on one line.
        bool flat = true;
        for (const auto& x : j) flat = flat && (x.is_primitive() || (numeric_depth(x) >= 1 && numeric_depth(x) <= 2));
        if (flat) {
            std::string line = "{";
            std::size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                line += json(it.key()).dump() + ": ";
                dump_to(line, *it, 0);
                if (k + 1 < j.size()) line += ", ";
            }
            out += line + "}";
            return;
        }
    }
    out += obj ? "{\n" : "[\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad;
        if (obj) out += json(it.key()).dump() + ": ";
        dump_to(out, *it, indent + 2);
        out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + (obj ? "}" : "]");
}
}  // namespace detail

// Deterministic pretty printing with numeric vectors and matrices kept on one line.
inline std::string dump(const json& j) {
    std::string out;
    detail::dump_to(out, j, 0);
    return out + "\n";
}

// Line families in files: {"lines": [[c0, c1, c2], ...]}.
inline std::vector<ProjLine> lines_from_json(const json& j) {
    const json& a = j.is_object() ? j.at("lines") : j;
    if (!a.is_array()) throw Error(ErrorKind::InputError, "\"lines\" must be an array");
    std::vector<ProjLine> out;
    for (const auto& l : a) {
        Vec3 v = vec_from_json(l.is_object() ? l.at("v") : l);
        if (norm(v) == 0) throw Error(ErrorKind::InputError, "zero line vector");
        out.push_back(line_new(v));
    }
    return out;
}

inline json estimate_json(const LimitEstimate& e, std::size_t cap = kReportItemCap) {
    json j;
    j["provenance"] = e.provenance;
    j["truncated"] = e.truncated;
    j["line_count"] = e.lines.size();
    j["point_count"] = e.points.size();
    j["lines"] = json::array();
    for (std::size_t i = 0; i < std::min(cap, e.lines.size()); ++i)
        j["lines"].push_back({{"v", vec_json(e.lines[i].v)}, {"cost", e.line_cost[i]}});
    j["points"] = json::array();
    for (std::size_t i = 0; i < std::min(cap, e.points.size()); ++i)
        j["points"].push_back({{"v", vec_json(e.points[i].v)}, {"cost", e.point_cost[i]}});
    j["omitted_lines"] = e.lines.size() - std::min(cap, e.lines.size());
    j["omitted_points"] = e.points.size() - std::min(cap, e.points.size());
    j["pencils"] = json::array();
    for (const auto& p : e.pencils)
        j["pencils"].push_back({{"point", vec_json(p.point.v)}, {"count", p.count}, {"space_filling", p.space_filling}});
    return j;
}

inline json bucket_json(int b) { return b == kInfinite ? json("inf") : json(b); }

inline json census_json(const CensusReport& r, const LimitEstimate& est) {
    json j;
    j["raw_count"] = r.raw_count;
    j["pencil_flags"] = r.pencil_flags;
    j["li"] = bucket_json(r.li_bucket);
    j["lig"] = bucket_json(r.lig_bucket);
    j["lig_value"] = r.lig_value;
    j["lig_exact"] = r.lig_exact;
    j["lig_upper"] = r.lig_upper;
    j["ambiguous"] = r.ambiguous;
    j["lig_alt"] = r.lig_bucket_alt ? bucket_json(*r.lig_bucket_alt) : json(nullptr);
    j["witness"] = json::array();
    for (auto i : r.witness) j["witness"].push_back({{"index", i}, {"v", vec_json(est.lines[i].v)}});
    j["vertices"] = json::array();
    for (const auto& v : r.vertices) j["vertices"].push_back(vec_json(v.v));
    j["diagnostics"] = r.diagnostics;
    return j;
}

// CSV flat table: one row per line or point of each family.
inline std::string estimates_csv(const std::vector<std::pair<std::string, const LimitEstimate*>>& families) {
    std::ostringstream os;
    os.precision(17);
    os << "family,kind,index,cost,re0,im0,re1,im1,re2,im2\n";
    auto row = [&](const std::string& fam, const char* kind, std::size_t i, int cost, const Vec3& v) {
        os << fam << ',' << kind << ',' << i << ',' << cost;
        for (const auto& z : v) os << ',' << z.real() << ',' << z.imag();
        os << '\n';
    };
    for (const auto& [name, e] : families) {
        for (std::size_t i = 0; i < e->lines.size(); ++i) row(name, "line", i, e->line_cost[i], e->lines[i].v);
        for (std::size_t i = 0; i < e->points.size(); ++i) row(name, "point", i, e->point_cost[i], e->points[i].v);
    }
    return os.str();
}

}  // namespace klab::io
