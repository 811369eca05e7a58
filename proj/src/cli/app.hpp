#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace viscograd::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct CommonOptions {
    std::string config;
    std::string report;
    std::uint64_t seed = 0;
    bool no_timing = false;
};

struct SolveOptions {
    std::string method = "both";
    std::string boundary = "cone";
    std::string boundary_file;
    std::vector<double> box;
    std::string mask = "box";
    double h = 1.0 / 32;
    double eps = 0.0;
    std::vector<double> m_values{4, 8, 16, 32, 64};
    double inner_tol = 1e-9;
    std::size_t max_inner_iters = 20000;
    double tow_tol = 1e-15;
    std::size_t tow_max_iters = 200000;
    bool jacobi = false;
    std::vector<double> linear;
    std::vector<double> vertex;
    double cone_slope = 1.0;
    double cone_offset = 0.0;
    std::string out;
    std::string heatmap;
};

struct RegularizeOptions {
    double eps = 0.05;
    std::string mode = "sup";
    std::string in;
    std::string out;
    std::string argpoints;
};

struct EvolveOptions {
    double t = 0.05;
    std::string sign = "plus";
    std::string in;
    std::string out;
};

struct JetsOptions {
    std::string func = "cone";
    std::string in;
    std::vector<double> vertex;
    double cone_slope = -1.0;
    std::vector<double> at;
    std::vector<double> jet;
    std::vector<double> radii;
    std::string side = "both";
    double slack = -1.0;
};

struct VerifyOptions {
    std::string in;
    std::string against;
    std::vector<std::string> checks{"dinf", "cones"};
    std::size_t cones = 64;
    std::size_t subdomains = 16;
    std::vector<double> alphas{1, 4, 16, 64, 256};
    double dinf_max = -1.0;
};

struct DemoOptions {
    std::string name = "eikonal-1d";
    double h = 1.0 / 64;
    std::string out_dir;
};

/// Results of a command, filled as it runs so a failure still leaves a
/// partial report.
struct Outcome {
    nlohmann::json results = nlohmann::json::object();
    nlohmann::json config = nlohmann::json::object();
    bool violation = false;
};

void run_solve(SolveOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out);
void run_regularize(RegularizeOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out);
void run_evolve(EvolveOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out);
void run_jets(JetsOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out);
void run_verify(VerifyOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out);
void run_demo(DemoOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out);

/// Parses the arguments (argv[0] excluded), runs the command, writes the
/// report if requested and returns 0, 1 (numerical failure or hard
/// violation) or 2 (usage, configuration or input error).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace viscograd::cli
