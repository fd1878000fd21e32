// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "census_oracle.hpp"
#include "klab/run.hpp"
#include "test_util.hpp"

using namespace klab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;  // printed on indented lines below the verdict
};

int failures = 0;

void report(int n, const std::string& title, const Outcome& o) {
    std::printf("criterion %d [%s] %s: %s\n", n, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
    for (const auto& s : o.notes) std::printf("    %s\n", s.c_str());
    std::fflush(stdout);
    failures += !o.pass;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ProjLine span(int i, int j) { return line_through(point_e(i), point_e(j)); }

std::vector<ProjPoint> isolated(const LimitEstimate& e) {
    std::vector<ProjPoint> out;
    for (auto i : isolated_points(e)) out.push_back(e.points[i]);
    return out;
}

// ---------------------------------------------------------------------------
// 1. Cyclic limit sets: closed form and dynamical estimate against the table.

Outcome cyclic_table() {
    struct Case {
        const char* name;
        Mat3 m;
        std::vector<ProjLine> lines;
        std::vector<ProjPoint> points;
    };
    const cplx u = std::polar(1.0, 0.7);
    const std::vector<Case> table = {
        {"|l2|=1", Mat3::diag(0.5, u, 1.0), {span(1, 2)}, {point_e(0)}},
        {"|l1|=1", Mat3::diag(u, 3.0, 1.0), {span(0, 2)}, {point_e(1)}},
        {"|l2|<1", Mat3::diag(0.25, 0.5, 1.0), {span(0, 1), span(1, 2)}, {}},
        {"|l1|<1<|l2|", Mat3::diag(0.5, 2.0, 1.0), {span(0, 2), span(1, 2)}, {}},
        {"|l1|>1", Mat3::diag(2.0, 4.0, 1.0), {span(0, 2), span(0, 1)}, {}},
        {"jordan", Mat3::rows({3.0, 0.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0}), {span(0, 1), span(1, 2)}, {}},
        {"unipotent", Mat3::rows({1.0, 2.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}), {span(0, 2)}, {}},
    };
    Outcome o;
    int ok = 0;
    for (const auto& c : table) {
        auto t0 = Clock::now();
        GroupSpec s;
        s.name = c.name;
        s.generators = {element_new(c.m)};
        auto closed = cyclic_limit_set(s.generators[0]);
        auto dyn = eq_complement(s, 14);
        double secs = seconds_since(t0);
        double cl = hausdorff(closed.lines, c.lines), cp = hausdorff(isolated(closed), c.points);
        double dl = hausdorff(dyn.lines, c.lines), dp = hausdorff(isolated(dyn), c.points);
        bool pass = cl < 1e-6 && cp < 1e-6 && dl < 1e-6 && dp < 1e-6 && secs < 1.0;
        ok += pass;
        o.notes.push_back(fmt("%-12s closed form %.1e/%.1e  radius-14 estimate %.1e/%.1e  %.3fs  %s", c.name, cl, cp,
                              dl, dp, secs, pass ? "ok" : "FAIL"));
    }
    o.pass = ok == int(table.size());
    o.detail = fmt("%d/%zu regimes match (line/point Hausdorff < 1e-6, < 1 s each)", ok, table.size());
    return o;
}

// ---------------------------------------------------------------------------
// 2, 3, 8, 9 share the gallery runs.

struct GalleryRuns {
    std::map<std::string, RunResult> first;
    std::map<std::string, double> secs;
    double total = 0;
};

GalleryRuns run_all() {
    GalleryRuns g;
    for (const auto& id : gallery::ids()) {
        RunConfig cfg;
        cfg.dyn.radius = gallery::build(id).default_radius;
        auto t0 = Clock::now();
        g.first.emplace(id, run_gallery(id, cfg));
        g.secs[id] = seconds_since(t0);
        g.total += g.secs[id];
    }
    return g;
}

Outcome buckets(const GalleryRuns& g) {
    Outcome o;
    int ok = 0;
    for (const auto& id : gallery::ids()) {
        const auto& r = g.first.at(id);
        auto e = gallery::build(id);
        bool pass = r.census.li_bucket == e.expected_li && r.census.lig_bucket == e.expected_lig;
        ok += pass;
        o.notes.push_back(fmt("%-20s radius %2d  (Li, LiG) = (%s, %s), expected (%s, %s)  %zu lines  %.1fs  %s",
                              id.c_str(), e.default_radius, bucket_name(r.census.li_bucket).c_str(),
                              bucket_name(r.census.lig_bucket).c_str(), bucket_name(e.expected_li).c_str(),
                              bucket_name(e.expected_lig).c_str(), r.census.raw_count, g.secs.at(id),
                              pass ? "ok" : "FAIL"));
    }
    o.pass = ok == int(gallery::ids().size()) && g.total < 60.0;
    o.detail = fmt("%d/%zu groups match, total %.1fs (limit 60s)", ok, gallery::ids().size(), g.total);
    return o;
}

Outcome torus_vertices(const GalleryRuns& g) {
    const auto& rep = g.first.at("torus_bundle").report;
    std::size_t on_eq = rep["census_eq_complement"]["vertices"].size();
    std::size_t on_lambda = rep["census"]["vertices"].size();
    Outcome o;
    o.pass = on_eq == 2;
    o.detail = fmt("%zu vertices on the Eq-complement line family (radius 12, pencil threshold 10)", on_eq);
    o.notes.push_back(fmt("the Kulkarni estimate, with its space-filling pencil removed, has %zu vertex", on_lambda));
    return o;
}

// ---------------------------------------------------------------------------

Outcome general_position_oracle() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(3, 12);
    int agree = 0;
    for (int t = 0; t < 200; ++t) {
        auto lines = testutil::structured_family(rng, size(rng));
        agree += max_general_position(lines).size == testutil::brute_force_gp(lines);
    }
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = agree == 200 && secs < 10.0;
    o.detail = fmt("%d/200 families agree with the exhaustive oracle, %.2fs", agree, secs);
    return o;
}

Outcome eigen_residuals() {
    std::mt19937_64 rng(2025);
    int flagged = 0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        Mat3 m = testutil::random_disk_matrix(rng);
        auto e = eigen3(m);
        if (e.ill_conditioned) {
            ++flagged;
            continue;
        }
        for (int k = 0; k < 3; ++k) {
            Vec3 r = sub(m * e.vectors[k], scale(e.vectors[k], e.values[k]));
            worst = std::max(worst, norm(r) / norm(e.vectors[k]) / frob(m));
        }
    }
    Outcome o;
    o.pass = worst < 1e-8 && flagged < 10;
    o.detail = fmt("max ||Mv - lv|| / ||M|| = %.2e over 1000 matrices, %d flagged ill-conditioned", worst, flagged);
    return o;
}

Outcome rank_duality() {
    auto outer = [](const Vec3& a, const Vec3& b) {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = a[i] * b[j];
        return m;
    };
    std::mt19937_64 rng(2026);
    int agree = 0, flagged = 0, total = 0;
    for (int i = 0; i < 1000; ++i) {
        int rank = 1 + i % 3;
        Vec3 u1 = testutil::random_vec(rng), u2 = testutil::random_vec(rng);
        Vec3 v1 = testutil::random_vec(rng), v2 = testutil::random_vec(rng);
        Mat3 m = rank == 1 ? outer(u1, v1) : rank == 2 ? outer(u1, v1) + outer(u2, v2) : testutil::random_matrix(rng);
        Mat3 h = testutil::random_conjugator(rng);
        m = h * m * adjugate(testutil::random_conjugator(rng)) * testutil::random_scalar(rng);
        auto p = psp_new(m);
        if (p.borderline) {
            ++flagged;
            continue;
        }
        ++total;
        bool ok = p.rank == rank;
        if (ok && rank == 1) {
            ok = p.kernel_line.has_value();
            if (ok)
                for (const auto& x : line_basis(*p.kernel_line)) ok = ok && norm(m * x) < 1e-8 * frob(m);
        }
        if (ok && rank == 2) ok = p.kernel_point && norm(m * p.kernel_point->v) < 1e-8 * frob(m);
        if (ok && rank == 3) ok = !p.kernel_line && !p.kernel_point;
        agree += ok;
    }
    Outcome o;
    o.pass = agree == total;
    o.detail = fmt("%d/%d unflagged constructions agree on rank and kernel (%d borderline)", agree, total, flagged);
    return o;
}

// ---------------------------------------------------------------------------
// 7. Generator invariance of the detected lines and the containment chain.  The
// Kulkarni set misses the equicontinuity region, so Lambda lies inside the
// Eq-complement; the reverse inclusion is printed but only holds when Eq(G) is the
// whole Kulkarni region.  C in Lambda is printed too: it needs three lines in
// general position in the complement, which the torus bundle lacks.

Outcome invariance_and_containment() {
    const int r = 6;
    Outcome o;
    bool inv_ok = true, c_ok = true, l_ok = true;
    std::vector<std::string> reverse_fails;
    for (const auto& id : gallery::ids()) {
        auto spec = gallery::build(id).spec;
        DynamicsConfig cfg;
        cfg.radius = r;
        auto a = analyze(spec, cfg);
        cfg.radius = r + 1;
        auto b = analyze(spec, cfg);
        std::vector<ProjLine> moved;
        for (const auto& l : a.eq_complement.lines)
            for (const auto& g : spec.generators) moved.push_back(act(g.lift, l));
        double inv = directed_hausdorff(moved, b.eq_complement.lines, 1e-3);
        double ce = std::max(directed_hausdorff(a.c_gamma.lines, a.eq_complement.lines, 1e-3),
                             directed_hausdorff(isolated(a.c_gamma), a.eq_complement.points, 1e-3));
        double cl = directed_hausdorff(a.c_gamma.lines, a.lambda.lines, 1e-3);
        double le = std::max(directed_hausdorff(a.lambda.lines, a.eq_complement.lines, 1e-3),
                             directed_hausdorff(isolated(a.lambda), a.eq_complement.points, 1e-3));
        double el = std::max(directed_hausdorff(a.eq_complement.lines, a.lambda.lines, 1e-3),
                             directed_hausdorff(isolated(a.eq_complement), a.lambda.points, 1e-3));
        inv_ok = inv_ok && inv < 1e-5;
        c_ok = c_ok && ce < 1e-4;
        l_ok = l_ok && le < 1e-4;
        if (el >= 1e-4) reverse_fails.push_back(id);
        o.notes.push_back(fmt("%-20s invariance %.1e  C in Eq^c %.1e  Lambda in Eq^c %.1e  "
                              "[Eq^c in Lambda %.1e]  [C in Lambda %.1e]",
                              id.c_str(), inv, ce, le, el, cl));
    }
    std::string rev = "none";
    if (!reverse_fails.empty()) {
        rev.clear();
        for (const auto& id : reverse_fails) rev += (rev.empty() ? "" : ", ") + id;
    }
    o.notes.push_back("[Eq^c in Lambda] fails for: " + rev +
                      " (expected where Eq(G) is smaller than the Kulkarni region, e.g. Eq empty for the torus bundle)");
    o.pass = inv_ok && c_ok && l_ok;
    o.detail = fmt("radius %d: invariance %s, C in Eq^c %s, Lambda in Eq^c %s", r, inv_ok ? "ok" : "FAIL",
                   c_ok ? "ok" : "FAIL", l_ok ? "ok" : "FAIL");
    return o;
}

Outcome union_check(const GalleryRuns& g) {
    Outcome o;
    o.pass = true;
    for (const char* id : {"coordinate_triangle", "schottky_susp"}) {
        const auto& u = g.first.at(id).report["union_check"];
        bool pass = u["pass"].get<bool>();
        o.pass = o.pass && pass;
        o.notes.push_back(fmt("%-20s line distance %.1e  point distance %.1e  %s", id,
                              u["line_distance"].get<double>(), u["point_distance"].get<double>(),
                              pass ? "ok" : "FAIL"));
    }
    o.detail = "Kulkarni estimate equals the closure of the union of cyclic limit sets within 1e-4";
    return o;
}

Outcome determinism(const GalleryRuns& g) {
    Outcome o;
    int same = 0;
    for (const auto& id : gallery::ids()) {
        RunConfig cfg;
        cfg.dyn.radius = gallery::build(id).default_radius;
        bool eq = io::dump(run_gallery(id, cfg).report) == io::dump(g.first.at(id).report);
        same += eq;
        if (!eq) o.notes.push_back(id + " differs between runs");
    }
    o.pass = same == int(gallery::ids().size());
    o.detail = fmt("%d/%zu gallery reports byte-identical across two runs", same, gallery::ids().size());
    return o;
}

}  // namespace

int main() {
    auto t0 = Clock::now();
    report(1, "cyclic case table", cyclic_table());
    GalleryRuns g = run_all();
    report(2, "gallery buckets", buckets(g));
    report(3, "torus bundle vertices", torus_vertices(g));
    report(4, "general-position oracle", general_position_oracle());
    report(5, "eigensolver residuals", eigen_residuals());
    report(6, "kernel/rank duality", rank_duality());
    report(7, "invariance and containment", invariance_and_containment());
    report(8, "closure-of-union check", union_check(g));
    report(9, "determinism", determinism(g));
    std::printf("%d of 9 criteria failed, %.1fs\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
