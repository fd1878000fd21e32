#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"

namespace klab {

// Dual chart used by the plots: a line [v] goes to (v0 / s, v1 / s) with
// s = v . (1, 1.1, 1.3), so the coordinate lines land on a visible triangle.
inline std::optional<std::array<cplx, 2>> dual_chart(const Vec3& v) {
    cplx s = v[0] + 1.1 * v[1] + 1.3 * v[2];
    if (std::abs(s) < 1e-9 * norm(v)) return std::nullopt;
    return std::array<cplx, 2>{v[0] / s, v[1] / s};
}

namespace detail {

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

// Lines whose coefficients are real up to a common phase, as (a, b, c) with a x + b y + c = 0.
inline std::optional<std::array<double, 3>> real_line(const Vec3& v) {
    std::size_t k = dominant_index(v);
    cplx ph = std::abs(v[k]) / v[k];
    std::array<double, 3> r;
    for (int i = 0; i < 3; ++i) {
        cplx w = v[i] * ph;
        if (std::abs(w.imag()) > 1e-9) return std::nullopt;
        r[i] = w.real();
    }
    return r;
}

struct Panel {
    double x0, y0, size, lo, hi;  // screen box and the data window [lo, hi]^2
    double sx(double x) const { return x0 + (x - lo) / (hi - lo) * size; }
    double sy(double y) const { return y0 + size - (y - lo) / (hi - lo) * size; }
    bool inside(double x, double y) const { return x >= lo && x <= hi && y >= lo && y <= hi; }
};

// Clip a x + b y + c = 0 to the panel window.
inline std::optional<std::array<double, 4>> clip_line(const std::array<double, 3>& l, const Panel& p) {
    std::vector<std::array<double, 2>> hits;
    auto add = [&](double x, double y) {
        if (x >= p.lo - 1e-12 && x <= p.hi + 1e-12 && y >= p.lo - 1e-12 && y <= p.hi + 1e-12) hits.push_back({x, y});
    };
    const auto [a, b, c] = l;
    if (std::abs(b) > 1e-12)
        for (double x : {p.lo, p.hi}) add(x, -(a * x + c) / b);
    if (std::abs(a) > 1e-12)
        for (double y : {p.lo, p.hi}) add(-(b * y + c) / a, y);
    if (hits.size() < 2) return std::nullopt;
    return std::array<double, 4>{hits[0][0], hits[0][1], hits.back()[0], hits.back()[1]};
}

inline std::vector<Vec3> vectors_at(const io::json& arr, bool nested) {
    std::vector<Vec3> out;
    if (!arr.is_array()) return out;
    for (const auto& x : arr) out.push_back(io::vec_from_json(nested ? x.at("v") : x));
    return out;
}

}  // namespace detail

// SVG rendering of a report: the detected lines as dual points (witness lines
// highlighted, vertex pencils drawn as their dual lines) and the real slice of the
// primal chart z = 1.
inline std::string emit_plot(const io::json& report) {
    using detail::fmt;
    std::vector<Vec3> lines, witness, vertices;
    try {
        const io::json& est = report.at("estimates").at("lambda");
        lines = detail::vectors_at(est.at("lines"), true);
        if (report.contains("census")) {
            witness = detail::vectors_at(report["census"].value("witness", io::json::array()), true);
            vertices = detail::vectors_at(report["census"].value("vertices", io::json::array()), false);
        }
    } catch (const io::json::exception& e) {
        throw Error(ErrorKind::InputError, std::string("report is missing plot data: ") + e.what());
    }

    std::ostringstream os;
    const double W = 860, H = 460;
    detail::Panel dual{20, 50, 390, -1.5, 2.0}, primal{450, 50, 390, -3.0, 3.0};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::string title = report.value("id", std::string("report"));
    os << "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << title << ": " << lines.size()
       << " lines shown</text>\n";
    for (const auto* p : {&dual, &primal})
        os << "<rect x=\"" << p->x0 << "\" y=\"" << p->y0 << "\" width=\"" << p->size << "\" height=\"" << p->size
           << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << dual.x0 << "\" y=\"" << dual.y0 + dual.size + 20
       << "\" font-family=\"sans-serif\" font-size=\"12\">dual chart (real parts)</text>\n";
    os << "<text x=\"" << primal.x0 << "\" y=\"" << primal.y0 + primal.size + 20
       << "\" font-family=\"sans-serif\" font-size=\"12\">primal chart z = 1, real slice</text>\n";

    if (lines.empty()) {
        os << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"20\">no lines detected</text>\n";
        os << "</svg>\n";
        return os.str();
    }

    auto dot = [&](const Vec3& v, const char* colour, double r) {
        auto c = dual_chart(v);
        if (!c) return;
        double x = (*c)[0].real(), y = (*c)[1].real();
        if (!dual.inside(x, y)) return;
        os << "<circle cx=\"" << fmt(dual.sx(x)) << "\" cy=\"" << fmt(dual.sy(y)) << "\" r=\"" << r << "\" fill=\""
           << colour << "\"/>\n";
    };
    auto segment = [&](const detail::Panel& p, const std::array<double, 3>& l, const char* colour, double w) {
        auto s = detail::clip_line(l, p);
        if (!s) return;
        os << "<line x1=\"" << fmt(p.sx((*s)[0])) << "\" y1=\"" << fmt(p.sy((*s)[1])) << "\" x2=\"" << fmt(p.sx((*s)[2]))
           << "\" y2=\"" << fmt(p.sy((*s)[3])) << "\" stroke=\"" << colour << "\" stroke-width=\"" << w << "\"/>\n";
    };

    os << "<g id=\"dual\">\n";
    for (const auto& v : lines) dot(v, "#1f77b4", 1.5);
    for (const auto& v : witness) dot(v, "#d62728", 4);
    // A vertex p is the pencil of lines through p, a line in the dual chart: lines
    // through p satisfy v . p = 0, i.e. (x, y) with x p0 + y p1 + (1 - x - 1.1 y) p2 / 1.3 = 0.
    for (const auto& p : vertices) {
        if (auto r = detail::real_line(p)) {
            std::array<double, 3> d{(*r)[0] - (*r)[2] / 1.3, (*r)[1] - 1.1 * (*r)[2] / 1.3, (*r)[2] / 1.3};
            segment(dual, d, "#2ca02c", 1.5);
        }
    }
    os << "</g>\n<g id=\"primal\">\n";
    std::size_t complex_lines = 0;
    for (const auto& v : lines) {
        if (auto r = detail::real_line(v)) segment(primal, *r, "#1f77b4", 0.6);
        else ++complex_lines;
    }
    for (const auto& v : witness)
        if (auto r = detail::real_line(v)) segment(primal, *r, "#d62728", 2);
    for (const auto& p : vertices) {
        if (std::abs(p[2]) < 1e-9) continue;
        cplx x = p[0] / p[2], y = p[1] / p[2];
        if (!primal.inside(x.real(), y.real())) continue;
        os << "<circle cx=\"" << fmt(primal.sx(x.real())) << "\" cy=\"" << fmt(primal.sy(y.real()))
           << "\" r=\"5\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
    }
    os << "</g>\n";
    if (complex_lines)
        os << "<text x=\"" << primal.x0 << "\" y=\"" << primal.y0 + primal.size + 36
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << complex_lines
           << " non-real lines have no real slice</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace klab
