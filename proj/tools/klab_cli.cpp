// klab: command-line front end for the discrete-group lab.
#include <iostream>

#include "CLI11.hpp"

#include "klab/run.hpp"

using namespace klab;
namespace fs = std::filesystem;

namespace {

struct Options {
    int radius = 10;
    std::size_t cap = 200000;
    double eps_cluster = 1e-3;
    double tol = 1e-9;
    std::string out;
    std::vector<std::string> formats;
};

RunConfig make_config(const Options& o, bool radius_given, int fallback_radius) {
    RunConfig cfg;
    cfg.dyn.radius = radius_given ? o.radius : fallback_radius;
    cfg.dyn.cap = o.cap;
    cfg.dyn.eps_cluster = o.eps_cluster;
    cfg.dyn.tol = o.tol;
    cfg.out_dir = o.out;
    if (!o.formats.empty()) {
        cfg.emit_json = cfg.emit_csv = cfg.emit_svg = false;
        for (const auto& f : o.formats) {
            if (f == "json") cfg.emit_json = true;
            else if (f == "csv") cfg.emit_csv = true;
            else if (f == "svg") cfg.emit_svg = true;
        }
    }
    apply_seed_env(cfg);
    cfg.validate();
    return cfg;
}

void print_estimate_counts(const io::json& report) {
    for (const auto& [name, e] : report["estimates"].items())
        std::cout << "  " << name << ": " << e["line_count"] << " lines, " << e["point_count"] << " points\n";
}

int cmd_classify(const std::string& arg) {
    Mat3 m = io::mat_from_json(io::read_json_arg(arg));
    GroupElement g;
    try {
        g = element_new(m);
    } catch (const Error& e) {
        throw Error(ErrorKind::InputError, e.what());
    }
    if (is_identity(g)) throw Error(ErrorKind::InputError, "the matrix represents the identity");
    io::json j;
    j["matrix"] = io::mat_json(g.lift);
    j["class"] = class_name(classify(g));
    auto e = eigen3(g.lift);
    j["eigenvalues"] = io::json::array();
    for (const auto& v : e.values) j["eigenvalues"].push_back(io::cplx_json(v));
    j["diagonalizable"] = e.diagonalizable;
    j["ill_conditioned"] = e.ill_conditioned;
    auto ord = order_of(g);
    j["order"] = ord ? io::json(*ord) : io::json(nullptr);
    auto fp = fixed_points(g);
    j["fixed_points"] = io::json::array();
    for (const auto& p : fp.points) j["fixed_points"].push_back(io::vec_json(p.v));
    j["fixed_lines"] = io::json::array();
    for (const auto& l : fp.lines) j["fixed_lines"].push_back(io::vec_json(l.v));
    try {
        auto c = cyclic_limit_set(g);
        j["cyclic_limit_set"] = {{"lines", io::json::array()}, {"points", io::json::array()}};
        for (const auto& l : c.lines) j["cyclic_limit_set"]["lines"].push_back(io::vec_json(l.v));
        for (const auto& p : c.points) j["cyclic_limit_set"]["points"].push_back(io::vec_json(p.v));
    } catch (const Error& err) {
        j["cyclic_limit_set"] = nullptr;
        j["note"] = err.what();
    }
    std::cout << io::dump(j);
    return kExitPass;
}

int report_run(const RunResult& r, bool print_json) {
    std::cout << r.summary << "\n";
    print_estimate_counts(r.report);
    for (const auto& d : r.report["diagnostics"]) std::cout << "  note: " << d.get<std::string>() << "\n";
    for (const auto& d : r.report["census"]["diagnostics"]) std::cout << "  census: " << d.get<std::string>() << "\n";
    if (print_json) std::cout << io::dump(r.report);
    return r.exit_code;
}

int cmd_limit_set(const std::string& path, const Options& o, bool radius_given) {
    RunConfig cfg = make_config(o, radius_given, 10);
    GroupSpec spec = io::read_group(path);
    return report_run(run_group(spec, cfg, {}, fs::path(path).stem().string()), false);
}

int cmd_census(const std::string& path, const Options& o, bool radius_given) {
    RunConfig cfg = make_config(o, radius_given, 10);
    io::json in = io::read_json(path);
    std::string id = fs::path(path).stem().string();
    if (in.is_object() && in.contains("generators"))
        return report_run(run_group(io::group_from_json(in), cfg, {}, id), false);

    LimitEstimate est;
    est.provenance = "input";
    for (const auto& l : io::lines_from_json(in)) est.add_line(l);
    est.pencils = find_pencils(est.lines, cfg.dyn.pencil_threshold);
    CensusConfig cc;
    cc.pencil_threshold = cfg.dyn.pencil_threshold;
    CensusReport r = classify_census(est, cc);
    io::json j;
    j["id"] = id;
    j["census"] = io::census_json(r, est);
    j["estimates"] = {{"lambda", io::estimate_json(est)}};
    j["outcome"] = r.ambiguous ? "ambiguous" : "no-expectation";
    std::cout << id << ": Li=" << bucket_name(r.li_bucket) << " LiG=" << bucket_name(r.lig_bucket) << " ("
              << r.raw_count << " lines)\n";
    for (const auto& d : r.diagnostics) std::cout << "  census: " << d << "\n";
    if (!cfg.out_dir.empty()) {
        if (cfg.emit_json) io::write_text(cfg.out_dir / (id + ".json"), io::dump(j));
        if (cfg.emit_csv) io::write_text(cfg.out_dir / (id + ".csv"), io::estimates_csv({{"input", &est}}));
        if (cfg.emit_svg) io::write_text(cfg.out_dir / (id + ".svg"), emit_plot(j));
    }
    return r.ambiguous ? kExitAmbiguous : kExitPass;
}

int cmd_gallery_run(const std::string& id, const Options& o, bool radius_given) {
    std::vector<std::string> ids = id.empty() ? gallery::ids() : std::vector<std::string>{id};
    int code = kExitPass;
    for (const auto& g : ids) {
        GalleryEntry e = gallery::build(g);
        RunConfig cfg = make_config(o, radius_given, e.default_radius);
        RunResult r = run_group(e.spec, cfg, Expectation{e.expected_li, e.expected_lig}, g);
        code = combine_exit(code, report_run(r, false));
    }
    return code;
}

int cmd_plot(const std::string& path, const Options& o) {
    io::json report = io::read_json(path);
    std::string svg = emit_plot(report);
    if (o.out.empty()) {
        std::cout << svg;
    } else {
        fs::path dst = fs::path(o.out) / (fs::path(path).stem().string() + ".svg");
        io::write_text(dst, svg);
        std::cout << "wrote " << dst.string() << "\n";
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"klab: limit sets and line censuses of discrete subgroups of PSL(3,C)"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--radius", o.radius, "word-ball radius (default 10)");
        sub->add_option("--cap", o.cap, "maximum number of ball elements")->capture_default_str();
        sub->add_option("--eps-cluster", o.eps_cluster, "clustering radius for limit maps")->capture_default_str();
        sub->add_option("--tol", o.tol, "distinctness tolerance")->capture_default_str();
        sub->add_option("--out", o.out, "output directory for reports");
        sub->add_option("--format", o.formats, "json, csv or svg (repeatable)")
            ->check(CLI::IsMember({"json", "csv", "svg"}))
            ->take_all();
    };

    std::string matrix_arg, group_path, census_path, plot_path, gallery_id;
    auto* classify_cmd = app.add_subcommand("classify", "classify one element given as JSON (file or inline)");
    classify_cmd->add_option("matrix", matrix_arg, "matrix JSON")->required();
    auto* limit_cmd = app.add_subcommand("limit-set", "estimate the limit sets of a group");
    limit_cmd->add_option("group", group_path, "group JSON")->required();
    add_common(limit_cmd);
    auto* census_cmd = app.add_subcommand("census", "line census of a group or of a list of lines");
    census_cmd->add_option("input", census_path, "group or lines JSON")->required();
    add_common(census_cmd);
    auto* gallery_cmd = app.add_subcommand("gallery", "built-in example groups");
    gallery_cmd->require_subcommand(1);
    auto* gallery_run = gallery_cmd->add_subcommand("run", "run the gallery and compare with the expected counts");
    gallery_run->add_option("--id", gallery_id, "one gallery id")->check(CLI::IsMember(gallery::ids()));
    add_common(gallery_run);
    auto* plot_cmd = app.add_subcommand("plot", "render a report as SVG");
    plot_cmd->add_option("report", plot_path, "report JSON")->required();
    plot_cmd->add_option("--out", o.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    auto radius_given = [&](CLI::App* sub) { return sub->count("--radius") > 0; };
    try {
        if (*classify_cmd) return cmd_classify(matrix_arg);
        if (*limit_cmd) return cmd_limit_set(group_path, o, radius_given(limit_cmd));
        if (*census_cmd) return cmd_census(census_path, o, radius_given(census_cmd));
        if (*gallery_run) return cmd_gallery_run(gallery_id, o, radius_given(gallery_run));
        if (*plot_cmd) return cmd_plot(plot_path, o);
    } catch (const Error& e) {
        std::cerr << "klab: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "klab: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
