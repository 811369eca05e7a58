#include "app.hpp"

#include "viscograd/error.hpp"
#include "viscograd/io.hpp"
#include "viscograd/parallel.hpp"
#include "viscograd/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

namespace viscograd::cli {

namespace {

/// JSON config files: nested objects address subcommands, arrays give
/// multi-value options. Command-line flags take precedence.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j = nlohmann::json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
            const auto results = opt->reduced_results();
            if (!results.empty())
                j[opt->get_lnames().front()] = results.size() == 1 ? nlohmann::json(results.front()) : nlohmann::json(results);
            else if (default_also && !opt->get_default_str().empty())
                j[opt->get_lnames().front()] = opt->get_default_str();
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(input);
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError("config", e.what());
        }
        if (!doc.is_object()) throw CLI::ConversionError("config", "the config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        collect(doc, {}, items);
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void collect(const nlohmann::json& obj, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, value] : obj.items()) {
            if (value.is_object()) {
                auto next = parents;
                next.push_back(key);
                collect(value, next, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array())
                for (const auto& e : value) item.inputs.push_back(scalar(e));
            else
                item.inputs.push_back(scalar(value));
            out.push_back(std::move(item));
        }
    }
};

nlohmann::json report_header(const std::string& command, const CommonOptions& common) {
    nlohmann::json r;
    r["schema_version"] = kReportSchemaVersion;
    r["tool"] = "viscograd";
    r["version"] = std::string(kVersion);
    r["command"] = command;
    r["seed"] = common.seed;
    return r;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Viscosity-solution toolkit: regularisation, jets, infinity-Laplacian solvers and checks",
                 "viscograd"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file (command-line flags win)");
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--seed", common.seed, "Seed recorded in the report and used by sampled checks");
    app.add_option("--report", common.report, "Write a JSON report here");
    app.add_flag("--no-timing", common.no_timing, "Omit wall-clock time from the report");

    SolveOptions solve;
    auto* s = app.add_subcommand("solve", "Solve the Dirichlet problem for the infinity-Laplacian");
    s->add_option("--method", solve.method)->check(CLI::IsMember({"continuation", "tugofwar", "both"}));
    s->add_option("--boundary", solve.boundary)->check(CLI::IsMember({"file", "cone", "linear", "aronsson"}));
    s->add_option("--boundary-file", solve.boundary_file, "CSV grid function whose boundary values are b");
    s->add_option("--box", solve.box, "lo0,hi0[,lo1,hi1[,lo2,hi2]]")->delimiter(',');
    s->add_option("--mask", solve.mask)->check(CLI::IsMember({"box", "lshape"}));
    s->add_option("--h", solve.h, "Grid spacing");
    s->add_option("--eps", solve.eps, "Tug-of-war radius (0: 2h)");
    s->add_option("--m", solve.m_values, "Exponent schedule")->delimiter(',');
    s->add_option("--inner-tol", solve.inner_tol);
    s->add_option("--max-inner-iters", solve.max_inner_iters);
    s->add_option("--tow-tol", solve.tow_tol);
    s->add_option("--tow-max-iters", solve.tow_max_iters);
    s->add_flag("--jacobi", solve.jacobi, "Parallel Jacobi sweeps for tug-of-war");
    s->add_option("--linear", solve.linear, "a0,...,a(n-1),c for b = a.x + c")->delimiter(',');
    s->add_option("--vertex", solve.vertex, "Cone vertex")->delimiter(',');
    s->add_option("--cone-slope", solve.cone_slope);
    s->add_option("--cone-offset", solve.cone_offset);
    s->add_option("--out", solve.out, "Solution CSV (method name inserted when both run)");
    s->add_option("--heatmap", solve.heatmap, "PGM heatmap of the solution (2-D)");

    RegularizeOptions reg;
    auto* r = app.add_subcommand("regularize", "Sup- or inf-convolution of a grid function");
    r->add_option("--eps", reg.eps);
    r->add_option("--mode", reg.mode)->check(CLI::IsMember({"sup", "inf"}));
    r->add_option("--in", reg.in)->required();
    r->add_option("--out", reg.out);
    r->add_option("--argpoints", reg.argpoints, "CSV of optimising points");

    EvolveOptions evo;
    auto* e = app.add_subcommand("evolve", "Hopf-Lax evolution u_t = +-|Du|^2/2");
    e->add_option("--t", evo.t);
    e->add_option("--sign", evo.sign)->check(CLI::IsMember({"plus", "minus"}));
    e->add_option("--in", evo.in)->required();
    e->add_option("--out", evo.out);

    JetsOptions jets;
    auto* j = app.add_subcommand("jets", "Jet membership tests");
    j->require_subcommand(1);
    auto* jt = j->add_subcommand("test", "Test a candidate (p, X) for super/sub-jet membership");
    jt->add_option("--func", jets.func)->check(CLI::IsMember({"cone", "aronsson", "file"}));
    jt->add_option("--in", jets.in, "CSV grid function for --func file");
    jt->add_option("--vertex", jets.vertex)->delimiter(',');
    jt->add_option("--cone-slope", jets.cone_slope);
    jt->add_option("--at", jets.at, "Point x")->delimiter(',')->required();
    jt->add_option("--jet", jets.jet, "p then the upper triangle of X, row by row")->delimiter(',')->required();
    jt->add_option("--radii", jets.radii, "Decreasing radii (default 0.25 * 2^-k, k < 7)")->delimiter(',');
    jt->add_option("--side", jets.side)->check(CLI::IsMember({"super", "sub", "both"}));
    jt->add_option("--slack", jets.slack, "Remainder slack (negative: default)");

    VerifyOptions ver;
    auto* v = app.add_subcommand("verify", "Residual, cone-comparison and penalisation checks");
    v->add_option("--in", ver.in)->required();
    v->add_option("--against", ver.against, "Second function for the penalisation check");
    v->add_option("--checks", ver.checks)->delimiter(',')->check(CLI::IsMember({"dinf", "eikonal", "cones", "penalize"}));
    v->add_option("--cones", ver.cones);
    v->add_option("--subdomains", ver.subdomains);
    v->add_option("--alphas", ver.alphas)->delimiter(',');
    v->add_option("--dinf-max", ver.dinf_max, "Fail when the max residual exceeds this (negative: report only)");

    DemoOptions demo;
    auto* d = app.add_subcommand("demo", "Worked examples");
    d->add_option("name", demo.name)->check(CLI::IsMember({"eikonal-1d"}))->required();
    d->add_option("--h", demo.h);
    d->add_option("--out-dir", demo.out_dir);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::Success&) {
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kUsage;
    }

    apply_thread_limit();
    std::string command;
    for (const CLI::App* sub : app.get_subcommands()) command = sub->get_name();
    if (command == "jets") command = "jets test";

    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    int code = kOk;
    nlohmann::json report = report_header(command, common);
    try {
        if (command == "solve") run_solve(solve, common, outcome, out);
        else if (command == "regularize") run_regularize(reg, common, outcome, out);
        else if (command == "evolve") run_evolve(evo, common, outcome, out);
        else if (command == "jets test") run_jets(jets, common, outcome, out);
        else if (command == "verify") run_verify(ver, common, outcome, out);
        else run_demo(demo, common, outcome, out);
        report["status"] = outcome.violation ? "violation" : "ok";
        code = outcome.violation ? kFailure : kOk;
    } catch (const Error& ex) {
        code = ex.code() == ErrorCode::ConfigError ? kUsage : kFailure;
        report["status"] = "error";
        report["error"] = {{"code", std::string(to_string(ex.code()))}, {"message", ex.what()}};
        err << "error: " << ex.what() << "\n";
    } catch (const std::exception& ex) {
        code = kFailure;
        report["status"] = "error";
        report["error"] = {{"code", "Internal"}, {"message", ex.what()}};
        err << "error: " << ex.what() << "\n";
    }

    report["config"] = outcome.config;
    for (auto& [key, value] : outcome.results.items()) report[key] = value;
    if (!common.no_timing)
        report["wall_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (!common.report.empty()) {
        try {
            io::atomic_write(common.report, report.dump(2) + "\n");
        } catch (const Error& ex) {
            err << "error: " << ex.what() << "\n";
            if (code == kOk) code = kFailure;
        }
    }
    return code;
}

} // namespace viscograd::cli
