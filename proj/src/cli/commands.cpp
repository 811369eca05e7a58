#include "app.hpp"

#include "viscograd/error.hpp"
#include "viscograd/io.hpp"
#include "viscograd/jets.hpp"
#include "viscograd/regularize.hpp"
#include "viscograd/solver.hpp"
#include "viscograd/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <set>

namespace viscograd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::ConfigError, what); }

GridFunction load(const std::string& path) {
    if (path.empty()) config_error("an input file is required");
    try {
        return io::read_csv(path);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::IoError || e.code() == ErrorCode::EmptyDomain)
            config_error(std::string("cannot read ") + path + ": " + e.what());
        throw;
    }
}

void require_distinct(std::initializer_list<std::string> paths) {
    std::set<fs::path> seen;
    for (const auto& p : paths) {
        if (p.empty()) continue;
        if (!seen.insert(fs::absolute(p).lexically_normal()).second) config_error("input/output paths must be distinct: " + p);
    }
}

void write_field(const GridFunction& u, const std::string& path) {
    if (path.empty()) return;
    io::write_csv(u, path);
    io::write_sidecar(u, path + ".json");
}

std::string with_tag(const std::string& path, const std::string& tag) {
    if (path.empty()) return path;
    fs::path p(path);
    return (p.parent_path() / (p.stem().string() + "." + tag + p.extension().string())).string();
}

json point_json(const Point& x, int dim) { return std::vector<double>(x.begin(), x.begin() + dim); }

json verdict_json(const JetVerdict& v) {
    return {{"status", to_string(v.status)},
            {"worst_remainder_ratio", v.worst_remainder_ratio},
            {"radii", v.radii_tested},
            {"ratios", v.ratios}};
}

GridPtr make_grid(const std::vector<double>& box, double h, const std::string& mask) {
    if (box.empty() || box.size() % 2 != 0 || box.size() > 2 * kMaxDim)
        config_error("--box needs 2, 4 or 6 values");
    Box b;
    b.dim = static_cast<int>(box.size() / 2);
    for (int a = 0; a < b.dim; ++a) {
        b.lo[a] = box[2 * static_cast<std::size_t>(a)];
        b.hi[a] = box[2 * static_cast<std::size_t>(a) + 1];
    }
    GridPtr g;
    try {
        g = build_grid(b, h);
    } catch (const Error& e) {
        config_error(e.what());
    }
    if (mask == "lshape") {
        if (b.dim != 2) config_error("--mask lshape needs a two-dimensional box");
        const double mx = 0.5 * (b.lo[0] + b.hi[0]), my = 0.5 * (b.lo[1] + b.hi[1]);
        g = g->with_mask([=](const Point& x) { return !(x[0] > mx && x[1] > my); });
    }
    return g;
}

} // namespace

// -- solve -------------------------------------------------------------------

void run_solve(SolveOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out) {
    require_distinct({opts.boundary_file, opts.out, opts.heatmap, common.report, common.config});

    GridPtr grid;
    BoundaryData b;
    if (opts.boundary == "file") {
        GridFunction trace = load(opts.boundary_file);
        grid = trace.grid_ptr();
        opts.h = grid->h();
        const Box bounds = grid->bounds();
        opts.box.clear();
        for (int a = 0; a < grid->dim(); ++a) {
            opts.box.push_back(bounds.lo[a]);
            opts.box.push_back(bounds.hi[a]);
        }
        b = BoundaryData::from_trace(std::move(trace), opts.boundary_file);
    } else {
        if (opts.box.empty()) opts.box = opts.boundary == "aronsson" ? std::vector<double>{1, 2, 1, 2} : std::vector<double>{0, 1, 0, 1};
        grid = make_grid(opts.box, opts.h, opts.mask);
        const int n = grid->dim();
        if (opts.boundary == "linear") {
            if (opts.linear.empty()) {
                const double defaults[] = {0.3, -0.7, 0.5};
                opts.linear.assign(defaults, defaults + n);
                opts.linear.push_back(0.2);
            }
            if (opts.linear.size() != static_cast<std::size_t>(n) + 1) config_error("--linear needs dim + 1 values");
            const auto coef = opts.linear;
            b = BoundaryData::from_function(
                [coef, n](const Point& x) {
                    double s = coef[static_cast<std::size_t>(n)];
                    for (int a = 0; a < n; ++a) s += coef[static_cast<std::size_t>(a)] * x[a];
                    return s;
                },
                "linear");
        } else if (opts.boundary == "cone") {
            if (opts.vertex.empty())
                for (int a = 0; a < n; ++a) opts.vertex.push_back(opts.box[2 * static_cast<std::size_t>(a)] - 0.5 + 0.2 * a);
            if (opts.vertex.size() != static_cast<std::size_t>(n)) config_error("--vertex needs dim values");
            const auto v = opts.vertex;
            const double L = opts.cone_slope, c0 = opts.cone_offset;
            b = BoundaryData::from_function(
                [v, L, c0, n](const Point& x) {
                    double d2 = 0.0;
                    for (int a = 0; a < n; ++a) d2 += (x[a] - v[static_cast<std::size_t>(a)]) * (x[a] - v[static_cast<std::size_t>(a)]);
                    return c0 + L * std::sqrt(d2);
                },
                "cone");
        } else {
            if (n != 2) config_error("the Aronsson trace needs a two-dimensional box");
            b = BoundaryData::from_function(
                [](const Point& x) { return std::cbrt(std::pow(std::abs(x[0]), 4.0)) - std::cbrt(std::pow(std::abs(x[1]), 4.0)); },
                "aronsson");
        }
    }
    if (opts.eps <= 0.0) opts.eps = 2.0 * grid->h();

    outcome.config = {{"method", opts.method},
                      {"boundary", opts.boundary},
                      {"boundary_file", opts.boundary_file},
                      {"box", opts.box},
                      {"mask", opts.mask},
                      {"h", opts.h},
                      {"eps", opts.eps},
                      {"m", opts.m_values},
                      {"inner_tol", opts.inner_tol},
                      {"max_inner_iters", opts.max_inner_iters},
                      {"tow_tol", opts.tow_tol},
                      {"tow_max_iters", opts.tow_max_iters},
                      {"jacobi", opts.jacobi},
                      {"linear", opts.linear},
                      {"vertex", opts.vertex},
                      {"cone_slope", opts.cone_slope},
                      {"cone_offset", opts.cone_offset},
                      {"out", opts.out},
                      {"heatmap", opts.heatmap},
                      {"report", common.report},
                      {"seed", common.seed}};

    std::vector<std::string> methods;
    if (opts.method != "tugofwar") methods.push_back("continuation");
    if (opts.method != "continuation") methods.push_back("tugofwar");

    auto& results = outcome.results;
    results["method"] = opts.method;
    results["grid"] = {{"dim", grid->dim()}, {"nodes", grid->size()}, {"interior", grid->interior_nodes().size()}};
    results["solutions"] = json::array();
    std::vector<GridFunction> finals;
    for (const auto& method : methods) {
        SolveReport rep;
        if (method == "continuation") {
            ContinuationSchedule schedule;
            schedule.m_values = opts.m_values;
            schedule.inner_tol = opts.inner_tol;
            schedule.max_inner_iters = opts.max_inner_iters;
            try {
                schedule.validate(grid->dim());
            } catch (const Error& e) {
                config_error(e.what());
            }
            rep = solve_by_continuation(grid, b, schedule);
        } else {
            TugOfWarOptions t;
            t.tol = opts.tow_tol;
            t.max_iters = opts.tow_max_iters;
            t.jacobi = opts.jacobi;
            if (opts.eps < grid->h()) config_error("--eps must be at least h");
            rep = solve_by_tug_of_war(grid, b, opts.eps, t);
        }

        json sol = {{"method", method},
                    {"residual_linf", rep.residual_linf},
                    {"iterations", rep.iterations},
                    {"converged", rep.converged}};
        json stages = json::array();
        for (const auto& st : rep.stages)
            stages.push_back({{"m", st.m}, {"energy", st.energy}, {"iters", st.iterations}, {"converged", st.converged},
                              {"gradient_norm", st.gradient_norm}});
        if (method == "continuation") {
            sol["stages"] = stages;
            sol["sup_norm_steps"] = rep.sup_norm_steps;
            sol["lipschitz_ratio"] = rep.lipschitz_ratio;
            sol["lipschitz_flag"] = rep.lipschitz_flag;
        } else {
            sol["eps"] = opts.eps;
            sol["last_update"] = rep.last_update;
            sol["data_range"] = {rep.data_min, rep.data_max};
            sol["max_principle_violations"] = rep.max_principle_violations;
            if (rep.max_principle_violations > 0) outcome.violation = true;
        }
        if (!rep.converged) outcome.violation = true;

        const std::string path = methods.size() > 1 ? with_tag(opts.out, method) : opts.out;
        write_field(rep.final, path);
        sol["out"] = path;
        if (!opts.heatmap.empty()) {
            const std::string hm = methods.size() > 1 ? with_tag(opts.heatmap, method) : opts.heatmap;
            io::write_pgm(rep.final, hm);
            sol["heatmap"] = hm;
        }
        results["solutions"].push_back(sol);
        if (!results.contains("stages")) {
            results["stages"] = stages;
            results["residual_linf"] = rep.residual_linf;
            results["sup_norm_steps"] = rep.sup_norm_steps;
        }

        char line[200];
        std::snprintf(line, sizeof line, "%-13s iterations %-8zu residual %.3e  %s\n", method.c_str(), rep.iterations,
                      rep.residual_linf, rep.converged ? "converged" : "NOT converged");
        out << line;
        finals.push_back(std::move(rep.final));
    }
    if (finals.size() == 2) {
        const double gap = sup_distance(finals[0], finals[1]);
        results["agreement_linf"] = gap;
        out << "agreement     sup|u_cont - u_tow| = " << gap << "\n";
    }
}

// -- regularize --------------------------------------------------------------

void run_regularize(RegularizeOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out) {
    require_distinct({opts.in, opts.out, opts.argpoints, common.report, common.config});
    if (!(opts.eps > 0.0)) config_error("--eps must be positive");
    outcome.config = {{"eps", opts.eps}, {"mode", opts.mode}, {"in", opts.in}, {"out", opts.out},
                      {"argpoints", opts.argpoints}, {"report", common.report}, {"seed", common.seed}};
    const GridFunction u = load(opts.in);
    const ConvolutionResult c = opts.mode == "sup" ? sup_convolution(u, opts.eps) : inf_convolution(u, opts.eps);
    const Grid& g = u.grid();

    auto& r = outcome.results;
    r["eps"] = c.eps;
    r["rho"] = c.rho;
    r["mode"] = opts.mode;
    r["min"] = c.values.min_value();
    r["max"] = c.values.max_value();
    try {
        const double defect = semiconvexity_defect(c);
        const double tol = semiconvexity_tolerance(u);
        r["semiconvexity_defect"] = defect;
        r["semiconvexity_tolerance"] = -tol;
        r["semiconvexity_ok"] = defect >= -tol;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyInterior) throw;
        r["semiconvexity_defect"] = nullptr;
    }
    const MagicPropertyReport magic = magic_property_check(u, c);
    r["magic"] = {{"checked", magic.checked},
                  {"max_residual", magic.max_residual},
                  {"mean_residual", magic.mean_residual},
                  {"fraction_within_2h", magic.fraction_within(2.0 * g.h())},
                  {"excluded_ties", magic.excluded_ties},
                  {"excluded_constrained", magic.excluded_constrained}};

    write_field(c.values, opts.out);
    if (!opts.argpoints.empty()) {
        static constexpr const char* names[] = {"x", "y", "z"};
        std::string text;
        for (int a = 0; a < g.dim(); ++a) text += std::string(names[a]) + ",";
        for (int a = 0; a < g.dim(); ++a) text += std::string("arg_") + names[a] + ",";
        text += "gap\n";
        char buf[40];
        for (Index node : g.region_nodes()) {
            const Point x = g.coord(node), y = c.argpoint(node);
            for (int a = 0; a < g.dim(); ++a) {
                std::snprintf(buf, sizeof buf, "%.17g,", x[a]);
                text += buf;
            }
            for (int a = 0; a < g.dim(); ++a) {
                std::snprintf(buf, sizeof buf, "%.17g,", y[a]);
                text += buf;
            }
            std::snprintf(buf, sizeof buf, "%.17g\n", c.gap[node]);
            text += buf;
        }
        io::atomic_write(opts.argpoints, text);
    }
    out << opts.mode << "-convolution eps=" << c.eps << " rho=" << c.rho << " magic residual max "
        << magic.max_residual << " over " << magic.checked << " nodes\n";
}

// -- evolve ------------------------------------------------------------------

void run_evolve(EvolveOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out) {
    require_distinct({opts.in, opts.out, common.report, common.config});
    if (!(opts.t > 0.0)) config_error("--t must be positive");
    outcome.config = {{"t", opts.t}, {"sign", opts.sign}, {"in", opts.in}, {"out", opts.out},
                      {"report", common.report}, {"seed", common.seed}};
    const GridFunction u0 = load(opts.in);
    const GridFunction ut = lax_evolve(u0, opts.t, opts.sign == "plus" ? LaxSign::Plus : LaxSign::Minus);
    const double rho = localization_radius(u0, opts.t);
    const double change = sup_distance(ut, u0);
    const double bound = sampled_modulus(u0, rho);
    outcome.results = {{"t", opts.t}, {"sign", opts.sign}, {"rho", rho}, {"sup_change", change},
                       {"modulus_bound", bound}, {"within_bound", change <= bound}};
    write_field(ut, opts.out);
    out << "evolved to t=" << opts.t << ": sup|u_t - u_0| = " << change << " (modulus bound " << bound << ")\n";
}

// -- jets --------------------------------------------------------------------

void run_jets(JetsOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out) {
    const int n = static_cast<int>(opts.at.size());
    if (n < 1 || n > kMaxDim) config_error("--at needs 1 to 3 coordinates");
    const std::size_t want = static_cast<std::size_t>(n + n * (n + 1) / 2);
    if (opts.jet.size() != want) config_error("--jet needs " + std::to_string(want) + " values for this dimension");
    if (opts.radii.empty()) opts.radii = dyadic_radii();
    if (opts.func == "cone" && opts.vertex.empty()) opts.vertex.assign(static_cast<std::size_t>(n), 0.0);
    outcome.config = {{"func", opts.func}, {"in", opts.in}, {"vertex", opts.vertex}, {"cone_slope", opts.cone_slope},
                      {"at", opts.at}, {"jet", opts.jet}, {"radii", opts.radii}, {"side", opts.side},
                      {"slack", opts.slack}, {"report", common.report}, {"seed", common.seed}};

    Vec x = Eigen::Map<const Vec>(opts.at.data(), n);
    Jet jet{Eigen::Map<const Vec>(opts.jet.data(), n), SymMatrix::zero(n)};
    std::size_t k = static_cast<std::size_t>(n);
    for (int i = 0; i < n; ++i)
        for (int jj = i; jj < n; ++jj) jet.X.set(i, jj, opts.jet[k++]);

    auto& r = outcome.results;
    r["func"] = opts.func;
    const bool super = opts.side != "sub", sub = opts.side != "super";
    try {
        if (opts.func == "file") {
            const GridFunction u = load(opts.in);
            if (u.grid().dim() != n) config_error("--at does not match the grid dimension");
            const Grid& g = u.grid();
            Offset idx{0, 0, 0};
            for (int a = 0; a < n; ++a) idx[a] = std::lround((x(a) - g.origin()[a]) / g.h());
            if (!g.in_lattice(idx)) config_error("--at lies outside the grid");
            const Index node = g.linear_index(idx);
            const Point c = g.coord(node);
            for (int a = 0; a < n; ++a)
                if (std::abs(c[a] - x(a)) > 1e-9 * g.h()) config_error("--at must be a grid node for sampled input");
            const std::optional<double> slack = opts.slack >= 0.0 ? std::optional<double>(opts.slack) : std::nullopt;
            if (super) r["superjet"] = verdict_json(superjet_test(u, node, jet, opts.radii, slack));
            if (sub) r["subjet"] = verdict_json(subjet_test(u, node, jet, opts.radii, slack));
        } else {
            Field f;
            if (opts.func == "cone") {
                if (opts.vertex.size() != static_cast<std::size_t>(n)) config_error("--vertex needs as many values as --at");
                const Vec v = Eigen::Map<const Vec>(opts.vertex.data(), n);
                f = fields::cone(v, opts.cone_slope);
                if (opts.cone_slope == -1.0) {
                    const ConeJetDescription oracle = cone_jet_oracle(v, x);
                    r["oracle"] = {{"at_vertex", oracle.at_vertex},
                                   {"in_superjet", oracle.in_superjet(jet)},
                                   {"in_subjet", oracle.in_subjet(jet)}};
                }
            } else {
                if (n != 2) config_error("the Aronsson function is two-dimensional");
                f = fields::aronsson().value;
            }
            const double slack = opts.slack >= 0.0 ? opts.slack : kClosedFormSlack;
            if (super) r["superjet"] = verdict_json(superjet_test(f, x, jet, opts.radii, slack));
            if (sub) r["subjet"] = verdict_json(subjet_test(f, x, jet, opts.radii, slack));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RadiiNotDecreasing || e.code() == ErrorCode::InvalidArgument) config_error(e.what());
        throw;
    }
    if (r.contains("superjet")) out << "superjet: " << r["superjet"]["status"].get<std::string>() << "\n";
    if (r.contains("subjet")) out << "subjet:   " << r["subjet"]["status"].get<std::string>() << "\n";
}

// -- verify ------------------------------------------------------------------

void run_verify(VerifyOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out) {
    require_distinct({opts.in, opts.against, common.report, common.config});
    const std::set<std::string> checks(opts.checks.begin(), opts.checks.end());
    if (checks.count("penalize") && opts.against.empty()) config_error("the penalize check needs --against");
    outcome.config = {{"in", opts.in}, {"against", opts.against}, {"checks", opts.checks}, {"cones", opts.cones},
                      {"subdomains", opts.subdomains}, {"alphas", opts.alphas}, {"dinf_max", opts.dinf_max},
                      {"report", common.report}, {"seed", common.seed}};
    const GridFunction u = load(opts.in);
    auto& r = outcome.results;

    if (checks.count("dinf")) {
        const ResidualField res = infinity_residual(u);
        const bool fail_check = opts.dinf_max >= 0.0 && res.max_abs > opts.dinf_max;
        r["dinf"] = {{"max_abs", res.max_abs}, {"nodes", res.count}, {"passed", !fail_check}};
        outcome.violation = outcome.violation || fail_check;
        out << "dinf      max |residual| " << res.max_abs << "\n";
    }
    if (checks.count("eikonal")) {
        const ResidualField res = eikonal_residual(u);
        r["eikonal"] = {{"max_abs", res.max_abs}, {"nodes", res.count}, {"excluded", res.excluded}};
        out << "eikonal   max |residual| " << res.max_abs << " (" << res.excluded << " nodes near kinks excluded)\n";
    }
    if (checks.count("cones")) {
        const ConeCheckReport rep = cone_comparison_check(u, opts.cones, opts.subdomains, common.seed);
        json failing = json::array();
        for (const auto& f : rep.failing_cases)
            failing.push_back({{"vertex", point_json(f.vertex, u.grid().dim())}, {"slope", f.slope},
                               {"subdomain", f.subdomain}, {"excess", f.excess}, {"side", f.min_side ? "min" : "max"}});
        r["cones"] = {{"cones_tested", rep.cones_tested}, {"worst_violation", rep.worst_violation},
                      {"tolerance_constant", kConeToleranceConstant}, {"failing_cases", failing},
                      {"passed", rep.passed()}};
        outcome.violation = outcome.violation || !rep.passed();
        out << "cones     " << rep.cones_tested << " tested, " << rep.failing_cases.size() << " failing\n";
    }
    if (checks.count("penalize")) {
        const GridFunction v = load(opts.against);
        PenalizationReport rep;
        try {
            rep = penalization_diagnostic(u, v, opts.alphas);
        } catch (const Error& e) {
            config_error(e.what());
        }
        json steps = json::array();
        bool monotone = true;
        for (std::size_t k = 0; k < rep.steps.size(); ++k) {
            steps.push_back({{"alpha", rep.steps[k].alpha}, {"M", rep.steps[k].M}, {"alpha_psi", rep.steps[k].alpha_psi}});
            if (k > 0 && rep.steps[k].M > rep.steps[k - 1].M) monotone = false;
        }
        r["penalize"] = {{"steps", steps}, {"limit_estimate", rep.limit_estimate}, {"direct_max", rep.direct_max},
                         {"monotone", monotone}};
        outcome.violation = outcome.violation || !monotone;
        out << "penalize  lim M_alpha ~ " << rep.limit_estimate << ", max(u - v) = " << rep.direct_max << "\n";
    }
}

// -- demo --------------------------------------------------------------------

void run_demo(DemoOptions opts, const CommonOptions& common, Outcome& outcome, std::ostream& out) {
    outcome.config = {{"name", opts.name}, {"h", opts.h}, {"out_dir", opts.out_dir}, {"report", common.report},
                      {"seed", common.seed}};
    GridPtr grid;
    try {
        grid = build_grid(Box::interval(-1.0, 1.0), opts.h);
    } catch (const Error& e) {
        config_error(e.what());
    }

    const GridFunction dist = distance_to_boundary(grid);
    const GridFunction exact = GridFunction::sample(grid, [](const Point& x) { return 1.0 - std::abs(x[0]); });
    const Field u1 = fields::piecewise_linear_1d({-1, 0, 1}, {0, 1, 0});
    const Field u2 = fields::piecewise_linear_1d({-1, -0.5, 0, 0.5, 1}, {0, 0.5, 0, 0.5, 0});
    const GridFunction s2 = GridFunction::sample(grid, [&](const Point& x) { Vec z(1); z << x[0]; return u2(z); });

    auto& r = outcome.results;
    r["distance_error"] = sup_distance(dist, exact);
    const ResidualField e1 = eikonal_residual(dist), e2 = eikonal_residual(s2);
    r["eikonal_residual"] = {{"distance", e1.max_abs}, {"sawtooth", e2.max_abs}};

    struct Kink {
        const char* candidate;
        const Field* f;
        double x, left, right;
    };
    const Kink kinks[] = {{"distance", &u1, 0.0, 1.0, -1.0},
                          {"sawtooth", &u2, -0.5, 1.0, -1.0},
                          {"sawtooth", &u2, 0.0, -1.0, 1.0},
                          {"sawtooth", &u2, 0.5, 1.0, -1.0}};
    const PdeOperator F = PdeOperator::eikonal();
    const auto radii = dyadic_radii();
    json table = json::array();
    std::set<std::pair<std::string, std::string>> sets[2];
    out << "candidate  kink     shape  sub-side        super-side      super-jets sub-jets\n";
    for (const auto& k : kinks) {
        const KinkJets1D kj = kink_jets_1d(k.left, k.right);
        const auto samples = kink_jet_samples(kj);
        Vec x(1);
        x << k.x;
        const ViscosityVerdict v = viscosity_verdict(F, *k.f, x, samples, radii);
        const std::string sub_s = to_string(v.sub, true), super_s = to_string(v.super, false);
        const char* shape = k.left > k.right ? "peak" : "valley";
        table.push_back({{"candidate", k.candidate}, {"x", k.x}, {"shape", shape}, {"sub", sub_s}, {"super", super_s},
                         {"confirmed_superjets", v.confirmed_superjets}, {"confirmed_subjets", v.confirmed_subjets}});
        sets[std::string(k.candidate) == "distance" ? 0 : 1].insert({sub_s, super_s});
        char line[160];
        std::snprintf(line, sizeof line, "%-10s %+5.2f    %-6s %-15s %-15s %-10zu %zu\n", k.candidate, k.x, shape,
                      sub_s.c_str(), super_s.c_str(), v.confirmed_superjets, v.confirmed_subjets);
        out << line;
    }
    r["kinks"] = table;
    r["verdict_sets_differ"] = sets[0] != sets[1];
    out << "distance error " << r["distance_error"].get<double>() << "; a.e. eikonal residuals " << e1.max_abs << " / "
        << e2.max_abs << "; verdict sets " << (sets[0] != sets[1] ? "differ" : "coincide") << "\n";

    if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
        const GridFunction s1 = GridFunction::sample(grid, [&](const Point& x) { Vec z(1); z << x[0]; return u1(z); });
        write_field(dist, (fs::path(opts.out_dir) / "distance.csv").string());
        write_field(s1, (fs::path(opts.out_dir) / "candidate_distance.csv").string());
        write_field(s2, (fs::path(opts.out_dir) / "candidate_sawtooth.csv").string());
    }
}

} // namespace viscograd::cli
