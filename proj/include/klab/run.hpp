#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "gallery.hpp"
#include "io.hpp"
#include "svg.hpp"

namespace klab {

enum ExitCode { kExitPass = 0, kExitMismatch = 1, kExitInput = 2, kExitAmbiguous = 3 };

struct RunConfig {
    DynamicsConfig dyn;
    std::filesystem::path out_dir;  // empty: nothing is written
    bool emit_json = true;
    bool emit_csv = false;
    bool emit_svg = false;

    void validate() const {
        if (dyn.radius < 2) throw Error(ErrorKind::BadParameters, "radius must be at least 2");
        if (dyn.cap < 1) throw Error(ErrorKind::BadParameters, "cap must be positive");
        if (!(dyn.eps_cluster > 0) || !(dyn.tol > 0)) throw Error(ErrorKind::BadParameters, "tolerances must be positive");
    }
};

// KLAB_SEED, when set, overrides the sampling seed.
inline void apply_seed_env(RunConfig& cfg) {
    const char* s = std::getenv("KLAB_SEED");
    if (!s || !*s) return;
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos, 0);
        if (pos != std::string(s).size()) throw std::invalid_argument("trailing characters");
        cfg.dyn.seed = v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::InputError, std::string("KLAB_SEED must be an integer, got '") + s + "'");
    }
}

struct Expectation {
    int li = 0;
    int lig = 0;
};

struct RunResult {
    io::json report;
    CensusReport census;
    int exit_code = kExitPass;
    std::string summary;  // one line
};

inline std::string outcome_name(int code) {
    switch (code) {
        case kExitPass: return "pass";
        case kExitMismatch: return "mismatch";
        case kExitAmbiguous: return "ambiguous";
        default: return "input-error";
    }
}

inline RunResult run_group(const GroupSpec& spec, const RunConfig& cfg, std::optional<Expectation> expected = {},
                           const std::string& id = "") {
    cfg.validate();
    Analysis a = analyze(spec, cfg.dyn);
    CensusConfig cc;
    cc.pencil_threshold = cfg.dyn.pencil_threshold;
    cc.previous_count = a.lambda.up_to_cost(cfg.dyn.radius - 1).lines.size();
    RunResult r;
    r.census = classify_census(a.lambda, cc);
    CensusReport eq = classify_census(a.eq_complement, cc);
    UnionCheck uc = lambda_union_check(a);

    io::json& j = r.report;
    j["id"] = id.empty() ? spec.name : id;
    j["group"] = io::group_json(spec);
    j["config"] = {{"radius", cfg.dyn.radius},     {"cap", cfg.dyn.cap}, {"eps_cluster", cfg.dyn.eps_cluster},
                   {"tol", cfg.dyn.tol},           {"seed", cfg.dyn.seed},
                   {"pencil_threshold", cfg.dyn.pencil_threshold}};
    j["ball"] = {{"elements", a.ball.elements.size()},
                 {"max_length", a.ball.max_length()},
                 {"truncated", a.ball.truncated},
                 {"finite_group", a.ball.exhausted()},
                 {"discreteness_warning", a.ball.discreteness_warning}};
    j["census"] = io::census_json(r.census, a.lambda);
    j["census_eq_complement"] = io::census_json(eq, a.eq_complement);
    j["union_check"] = {{"pass", uc.pass}, {"line_distance", uc.line_distance}, {"point_distance", uc.point_distance}};

    r.exit_code = kExitPass;
    if (r.census.ambiguous) r.exit_code = kExitAmbiguous;
    if (expected) {
        j["expected"] = {{"li", io::bucket_json(expected->li)}, {"lig", io::bucket_json(expected->lig)}};
        bool match = r.census.li_bucket == expected->li && r.census.lig_bucket == expected->lig;
        if (!match) r.exit_code = kExitMismatch;
    } else {
        j["expected"] = nullptr;
    }
    j["outcome"] = expected || r.exit_code != kExitPass ? outcome_name(r.exit_code) : "no-expectation";
    j["diagnostics"] = a.diagnostics;
    j["estimates"] = {{"lambda", io::estimate_json(a.lambda)},
                      {"eq_complement", io::estimate_json(a.eq_complement)},
                      {"c_gamma", io::estimate_json(a.c_gamma)}};

    r.summary = j["id"].get<std::string>() + ": Li=" + bucket_name(r.census.li_bucket) +
                " LiG=" + bucket_name(r.census.lig_bucket);
    if (expected)
        r.summary += " (expected " + bucket_name(expected->li) + ", " + bucket_name(expected->lig) + ")";
    r.summary += " " + j["outcome"].get<std::string>();

    if (!cfg.out_dir.empty()) {
        std::string stem = j["id"].get<std::string>();
        if (cfg.emit_json) io::write_text(cfg.out_dir / (stem + ".json"), io::dump(j));
        if (cfg.emit_csv)
            io::write_text(cfg.out_dir / (stem + ".csv"),
                           io::estimates_csv({{"lambda", &a.lambda},
                                              {"eq_complement", &a.eq_complement},
                                              {"c_gamma", &a.c_gamma}}));
        if (cfg.emit_svg) io::write_text(cfg.out_dir / (stem + ".svg"), emit_plot(j));
    }
    return r;
}

inline RunResult run_gallery(const std::string& id, const RunConfig& cfg) {
    GalleryEntry e = gallery::build(id);
    return run_group(e.spec, cfg, Expectation{e.expected_li, e.expected_lig}, id);
}

// Worst outcome over several runs: input errors, then mismatches, then ambiguity.
inline int combine_exit(int a, int b) {
    auto rank = [](int c) { return c == kExitInput ? 3 : c == kExitMismatch ? 2 : c == kExitAmbiguous ? 1 : 0; };
    return rank(a) >= rank(b) ? a : b;
}

}  // namespace klab
