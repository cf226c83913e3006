#include "vls/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "vls/config.hpp"

namespace vls::cli {

namespace {

struct PlanFlags {
    std::string scenario;
    std::string mode = "weighted";
    std::map<std::string, std::string> raw;
    bool json = false;
};

const std::vector<std::pair<std::string, std::string>> kPlanFlags{
    {"--p0", "p0"},         {"--q0", "q0"},         {"--p-minus", "p_minus"}, {"--p-plus", "p_plus"},
    {"--q-minus", "q_minus"}, {"--q-plus", "q_plus"}, {"--s", "s"},           {"--beta1", "beta1"},
    {"--p-star", "p_star"}, {"--delta", "delta"},   {"--r", "r"},             {"--n", "n"},
    {"--p", "p"}};

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

Grid first_grid(const ScenarioConfig& cfg, std::optional<int> resolution) {
    if (!cfg.box) throw ConfigError({"config: missing 'grid'"});
    if (resolution) return Grid(*cfg.box, *resolution);
    if (cfg.resolutions.empty()) throw ConfigError({"grid: missing 'resolutions'"});
    return Grid(*cfg.box, cfg.resolutions.front());
}

const ExponentFunction& need_exponent(const ScenarioConfig& cfg) {
    if (!cfg.p) throw ConfigError({"config: missing 'exponent'"});
    return *cfg.p;
}

const FunctionSpec& need_function(const CliConfig& cfg) {
    if (!cfg.function) throw ConfigError({"config: missing 'function'"});
    return *cfg.function;
}

ClassSpec class_spec(const ClassRequest& c, const ScenarioConfig& cfg) {
    if (c.kind == "A_p") return ClassSpec::Ap(c.p);
    if (c.kind == "A_1") return ClassSpec::A1();
    if (c.kind == "RH_s") return ClassSpec::RH(c.s);
    return ClassSpec::Apvar(need_exponent(cfg));
}

int cmd_norm(const std::string& path, std::optional<int> res, bool as_json, bool modular_only, double lambda,
             std::ostream& out) {
    const CliConfig cfg = load_config(path);
    const Grid grid = first_grid(cfg.scenario, res);
    const ExponentFunction& p = need_exponent(cfg.scenario);
    const GridFunction f = need_function(cfg).rasterize(grid);
    const Weight w = make_weight_factory(cfg.scenario.weight)(grid);
    if (modular_only) {
        std::vector<double> v(f.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::abs(f[k]) * w.values()[k] / lambda;
        const double m = modular(GridFunction(grid, std::move(v)), p);
        if (as_json)
            out << nlohmann::json{{"modular", m}, {"lambda", lambda}, {"resolution", grid.resolution()}}.dump(2)
                << "\n";
        else
            out << "modular " << num(m) << " (lambda " << num(lambda) << ", resolution " << grid.resolution() << ")\n";
        return 0;
    }
    const NormResult r = weighted_norm(f, w, p, cfg.scenario.norm);
    if (as_json) {
        out << nlohmann::json{{"value", r.value},
                              {"bisection_iterations", r.bisection_iterations},
                              {"bracket_width", r.bracket_width},
                              {"modular_at_value", r.modular_at_value},
                              {"resolution", grid.resolution()}}
                   .dump(2)
            << "\n";
    } else {
        out << "norm " << std::fixed << std::setprecision(6) << r.value << std::defaultfloat << "\n"
            << "  value " << num(r.value) << "\n  iterations " << r.bisection_iterations << "\n  bracket_width "
            << num(r.bracket_width) << "\n  modular_at_value " << num(r.modular_at_value) << "\n  resolution "
            << grid.resolution() << "\n";
    }
    return 0;
}

int cmd_weight_const(const std::string& path, std::ostream& out) {
    const CliConfig cfg = load_config(path);
    const ScenarioConfig& s = cfg.scenario;
    if (!s.box) throw ConfigError({"config: missing 'grid'"});
    const ClassSpec spec = class_spec(cfg.weight_class.value_or(ClassRequest{}), s);
    const ClassConstantReport r =
        class_constant_trend(make_weight_factory(s.weight), spec, *s.box, s.class_resolutions, s.policy, s.norm);
    out << "class,params,family,resolution,estimate,verdict\n";
    for (std::size_t k = 0; k < r.resolutions.size(); ++k)
        out << r.class_tag << "," << '"' << spec.key() << '"' << "," << to_string(s.policy) << ","
            << r.resolutions[k] << "," << num(r.trend[k]) << "," << to_string(r.verdict) << "\n";
    return r.verdict == Verdict::diverging ? 1 : 0;
}

int cmd_rdf(const std::string& path, std::optional<int> res, std::optional<double> bound_flag, std::ostream& out) {
    const CliConfig cfg = load_config(path);
    const ScenarioConfig& s = cfg.scenario;
    const Grid grid = first_grid(s, res);
    const BallFamily balls = enumerate_balls(grid, s.policy);
    const OperatorHandle m = OperatorHandle::maximal(balls);
    const GridFunction h = need_function(cfg).rasterize(grid);
    const RdFSpec spec = cfg.rdf.value_or(RdFSpec{});
    const Weight w = make_weight_factory(s.weight)(grid);

    RdFConfig rc;
    rc.max_terms = spec.max_terms;
    rc.tail_tolerance = spec.tail_tolerance;
    rc.alpha = spec.alpha;
    rc.beta = spec.beta;
    std::optional<double> bound = bound_flag ? bound_flag : spec.norm_bound;
    std::string source = "user";
    if (!bound) {
        const ExponentFunction& p = need_exponent(s);
        const ProbeFamily fam = make_probes(s.probes, grid);
        bound = default_norm_bound(estimate_operator_norm(m, p, w, fam.probes, s.norm).value);
        source = "2 x probe estimate";
    } else {
        rc.bound_is_estimated = false;
    }
    rc.operator_norm_bound = *bound;
    const RdFResult r = (rc.alpha == 1.0 && rc.beta == 0.0) ? rdf_iterate(h, m, rc) : rdf_general(h, w, m, rc);
    std::optional<NormContext> ctx;
    if (s.p) ctx = NormContext{*s.p, w, h};
    const A1PropertyReport a = verify_a1_property(r, m, balls, ctx, rc.bound_is_estimated);

    out << "seed " << s.probes.seed << "\n";
    out << "B " << num(r.bound) << " (" << source << ")\n";
    out << "term,sup\n";
    for (std::size_t k = 0; k < r.term_sups.size(); ++k) out << k << "," << num(r.term_sups[k]) << "\n";
    out << "pointwise M(Rh) <= 2B Rh + slack: " << (a.pointwise_holds ? "holds" : "fails") << " (max excess "
        << num(a.max_excess) << ")\n";
    out << "A_1 constant " << num(a.a1_constant) << (a.a1_within_bound ? " within " : " exceeds ") << num(a.bound)
        << "\n";
    if (a.norm_holds)
        out << "||Rh|| " << num(*a.rh_norm) << " vs 2||h|| " << num(2.0 * *a.h_norm) << ": "
            << (*a.norm_holds ? "holds" : "fails") << " [" << a.norm_status << "]\n";
    return a.pointwise_holds ? 0 : 1;
}

int cmd_plan(const PlanFlags& flags, const std::string& path, std::ostream& out) {
    std::vector<PlanRequest> reqs;
    if (!path.empty()) reqs = load_config(path).scenario.plans;
    if (!flags.scenario.empty() || reqs.empty()) {
        if (flags.scenario.empty() && reqs.empty()) throw CLI::RequiredError("--scenario");
        if (reqs.empty() || (!flags.scenario.empty() && reqs.front().scenario != flags.scenario)) {
            reqs.insert(reqs.begin(), PlanRequest{flags.scenario});
        }
    }
    PlanRequest& head = reqs.front();
    if (flags.mode != "weighted" || head.mode.empty()) head.mode = flags.mode;
    for (const auto& [k, v] : flags.raw) head.values[k] = XRational::parse(v);

    nlohmann::json all = nlohmann::json::array();
    for (const PlanRequest& r : reqs) {
        const ExtrapolationPlan plan = build_plan(r);
        if (flags.json)
            all.push_back(to_json(plan));
        else
            out << format_table(plan);
    }
    if (flags.json) out << (all.size() == 1 ? all.front() : all).dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& path, std::optional<std::uint64_t> seed, const std::string& csv,
               const std::string& json_out, bool as_json, std::ostream& out) {
    CliConfig cfg = load_config(path);
    if (seed) cfg.scenario.probes.seed = *seed;
    if (!csv.empty()) cfg.scenario.csv_path = csv;
    if (!json_out.empty()) cfg.scenario.json_path = json_out;
    const VerificationReport rep = run_scenario(cfg.scenario);
    if (as_json) {
        out << report_summary(rep).dump(2) << "\n";
        return rep.exit_code();
    }
    out << "scenario " << rep.scenario << "\nseed " << rep.seed << "\n";
    for (const auto& plan : rep.plans) out << "plan " << plan.value("scenario", "") << "\n";
    for (const ObligationCheck& c : rep.obligations) {
        out << (c.passed ? "PASS " : "FAIL ") << c.obligation << " [" << c.verdict << "]";
        for (std::size_t k = 0; k < c.trend.size(); ++k)
            out << " " << c.resolutions[k] << ":" << num(c.trend[k]);
        out << "\n";
    }
    if (!rep.trend.empty()) {
        out << "best constant " << num(rep.best_constant) << " (" << rep.verdict << ")";
        for (std::size_t k = 0; k < rep.trend.size(); ++k) out << " " << rep.resolutions[k] << ":" << num(rep.trend[k]);
        out << "\n";
    }
    for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
    for (const auto& e : rep.errors) out << "error: " << e << "\n";
    out << "exit " << rep.exit_code() << "\n";
    return rep.exit_code();
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& output, std::ostream& out) {
    std::ostringstream merged;
    merged << kReportCsvHeader << "\n";
    std::size_t rows = 0;
    for (const std::string& path : inputs) {
        std::ifstream in(path);
        if (!in) throw HarnessError("cannot open '" + path + "'");
        std::string line;
        if (!std::getline(in, line) || line != kReportCsvHeader)
            throw HarnessError("'" + path + "' is not a report CSV");
        while (std::getline(in, line))
            if (!line.empty()) merged << line << "\n", ++rows;
    }
    if (output.empty()) {
        out << merged.str();
    } else {
        std::ofstream o(output);
        if (!o) throw HarnessError("cannot write '" + output + "'");
        o << merged.str();
        out << "merged " << rows << " rows from " << inputs.size() << " files into " << output << "\n";
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variable exponent Lebesgue space toolkit", "vls"};
    app.require_subcommand(1);

    std::string config;
    std::optional<int> resolution;
    bool as_json = false;

    auto* norm = app.add_subcommand("norm", "Luxemburg norm of a function from a config");
    norm->add_option("--config", config, "scenario config")->required()->check(CLI::ExistingFile);
    norm->add_option("--resolution", resolution, "override grid resolution")->check(CLI::Range(2, 1 << 20));
    norm->add_flag("--json", as_json);

    double lambda = 1.0;
    auto* mod = app.add_subcommand("modular", "modular of f/lambda from a config");
    mod->add_option("--config", config, "scenario config")->required()->check(CLI::ExistingFile);
    mod->add_option("--resolution", resolution)->check(CLI::Range(2, 1 << 20));
    mod->add_option("--lambda", lambda, "scale")->check(CLI::PositiveNumber);
    mod->add_flag("--json", as_json);

    auto* wc = app.add_subcommand("weight-const", "weight class constant trend");
    wc->add_option("--config", config, "scenario config")->required()->check(CLI::ExistingFile);

    std::optional<double> bound;
    auto* rdf = app.add_subcommand("rdf", "Rubio de Francia iteration");
    rdf->add_option("--config", config, "scenario config")->required()->check(CLI::ExistingFile);
    rdf->add_option("--resolution", resolution)->check(CLI::Range(2, 1 << 20));
    rdf->add_option("--bound", bound, "operator norm bound B");

    PlanFlags pf;
    auto* plan = app.add_subcommand("plan", "extrapolation plan");
    plan->add_option("--scenario", pf.scenario, "diagonal, offdiagonal, limited, a1, ainfty, delta, rough-sio, "
                                                "spherical, riesz-divergence, constant-reduction");
    plan->add_option("--config", config, "take plan requests from a config")->check(CLI::ExistingFile);
    plan->add_option("--mode", pf.mode, "limited mode")->check(CLI::IsMember({"weighted", "unweighted", "general"}));
    plan->add_flag("--json", pf.json);
    std::map<std::string, std::string> raw;
    for (const auto& [flag, key] : kPlanFlags) plan->add_option(flag, raw[key], "rational, e.g. 6/5 or inf");

    std::optional<std::uint64_t> seed;
    std::string csv, json_out;
    auto* verify = app.add_subcommand("verify", "run a scenario");
    verify->add_option("--config", config, "scenario config")->required()->check(CLI::ExistingFile);
    verify->add_option("--seed", seed, "override probe seed");
    verify->add_option("--csv", csv, "per-probe CSV output");
    verify->add_option("--json-out", json_out, "summary JSON output");
    verify->add_flag("--json", as_json, "print the summary as JSON");

    std::vector<std::string> inputs;
    std::string output;
    auto* report = app.add_subcommand("report", "merge report CSVs");
    report->add_option("inputs", inputs, "CSV files")->required()->check(CLI::ExistingFile);
    report->add_option("-o,--output", output, "merged CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (norm->parsed()) return cmd_norm(config, resolution, as_json, false, 1.0, out);
        if (mod->parsed()) return cmd_norm(config, resolution, as_json, true, lambda, out);
        if (wc->parsed()) return cmd_weight_const(config, out);
        if (rdf->parsed()) return cmd_rdf(config, resolution, bound, out);
        if (plan->parsed()) {
            for (const auto& [flag, key] : kPlanFlags)
                if (plan->count(flag)) pf.raw[key] = raw[key];
            return cmd_plan(pf, config, out);
        }
        if (verify->parsed()) return cmd_verify(config, seed, csv, json_out, as_json, out);
        if (report->parsed()) return cmd_report(inputs, output, out);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const InfeasibleParameter& e) {
        err << "infeasible: " << e.what() << " (window " << e.window().str() << ")\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace vls::cli
