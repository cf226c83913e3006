#include "vls/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace vls {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += "\n  - " + x;
    return s;
}

using nlohmann::json;

// Walks one JSON object, recording violations instead of throwing.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& errs) : j_(j), path_(std::move(path)), errs_(errs) {
        if (!j_.is_object()) fail("must be an object");
    }

    void allow(std::initializer_list<const char*> keys) {
        if (!j_.is_object()) return;
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!ok.count(it.key())) errs_.push_back(path_ + "." + it.key() + ": unknown key");
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
    const json& at(const char* key) const { return j_.at(key); }
    std::string sub(const char* key) const { return path_ + "." + key; }

    double number(const char* key, double fallback, bool required = false) {
        if (!has(key)) {
            if (required) fail(std::string("missing '") + key + "'");
            return fallback;
        }
        return to_number(j_.at(key), sub(key), fallback);
    }

    // Numbers, or the strings "inf" / "-inf".
    double to_number(const json& v, const std::string& where, double fallback) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
        errs_.push_back(where + ": expected a number");
        return fallback;
    }

    int integer(const char* key, int fallback, bool required = false) {
        if (!has(key)) {
            if (required) fail(std::string("missing '") + key + "'");
            return fallback;
        }
        if (!j_.at(key).is_number_integer()) {
            errs_.push_back(sub(key) + ": expected an integer");
            return fallback;
        }
        return j_.at(key).get<int>();
    }

    std::string string(const char* key, std::string fallback, bool required = false) {
        if (!has(key)) {
            if (required) fail(std::string("missing '") + key + "'");
            return fallback;
        }
        if (!j_.at(key).is_string()) {
            errs_.push_back(sub(key) + ": expected a string");
            return fallback;
        }
        return j_.at(key).get<std::string>();
    }

    std::vector<double> numbers(const char* key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) {
            errs_.push_back(sub(key) + ": expected an array of numbers");
            return fallback;
        }
        std::vector<double> out;
        for (const json& x : v) out.push_back(to_number(x, sub(key), 0.0));
        return out;
    }

    std::vector<int> integers(const char* key, std::vector<int> fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_array()) {
            errs_.push_back(sub(key) + ": expected an array of integers");
            return fallback;
        }
        std::vector<int> out;
        for (const json& x : v) {
            if (!x.is_number_integer()) {
                errs_.push_back(sub(key) + ": expected an array of integers");
                return fallback;
            }
            out.push_back(x.get<int>());
        }
        return out;
    }

    void fail(const std::string& msg) { errs_.push_back(path_ + ": " + msg); }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& errs_;
};

template <class F>
auto guarded(std::vector<std::string>& errs, const std::string& where, F&& f) -> std::optional<decltype(f())> {
    try {
        return f();
    } catch (const std::exception& e) {
        errs.push_back(where + ": " + e.what());
        return std::nullopt;
    }
}

std::optional<ExponentFunction> read_exponent(const json& j, const Box& box, const std::string& path,
                                              std::vector<std::string>& errs) {
    Reader r(j, path, errs);
    if (!j.is_object()) return std::nullopt;
    const std::string family = r.string("family", "", true);
    if (family == "constant") {
        r.allow({"family", "value"});
        const double v = r.number("value", 2.0, true);
        return guarded(errs, path, [&] { return ExponentFunction::constant(v, box); });
    }
    if (family == "affine") {
        r.allow({"family", "offset", "slope"});
        const double offset = r.number("offset", 2.0, true);
        const auto slope = r.numbers("slope", {0.0});
        Point s{0.0, 0.0};
        for (std::size_t k = 0; k < std::min<std::size_t>(2, slope.size()); ++k) s[k] = slope[k];
        return guarded(errs, path, [&] { return ExponentFunction::affine(offset, s, box); });
    }
    if (family == "sine") {
        r.allow({"family", "base", "amplitude", "frequency"});
        const double base = r.number("base", 2.0, true);
        const double amp = r.number("amplitude", 0.0, true);
        const double freq = r.number("frequency", 1.0);
        return guarded(errs, path, [&] { return ExponentFunction::sine(base, amp, freq, box); });
    }
    if (family == "step") {
        r.allow({"family", "left", "right", "jump_at"});
        const double left = r.number("left", 2.0, true);
        const double right = r.number("right", 2.0, true);
        const double at = r.number("jump_at", 0.5, true);
        return guarded(errs, path, [&] { return ExponentFunction::step(left, right, at, box); });
    }
    if (family == "log_holder") {
        r.allow({"family", "p_inf", "c_inf"});
        const double pinf = r.number("p_inf", 2.0, true);
        const double cinf = r.number("c_inf", 0.0, true);
        return guarded(errs, path, [&] { return ExponentFunction::log_holder_model(pinf, cinf, box); });
    }
    if (!family.empty()) r.fail("unknown exponent family '" + family + "'");
    return std::nullopt;
}

std::optional<Box> read_grid(const json& j, ScenarioConfig& cfg, std::vector<std::string>& errs) {
    Reader r(j, "grid", errs);
    r.allow({"dimension", "lo", "hi", "resolutions", "class_resolutions", "policy"});
    const int dim = r.integer("dimension", 1);
    const auto lo = r.numbers("lo", {0.0, 0.0});
    const auto hi = r.numbers("hi", {1.0, 1.0});
    cfg.resolutions = r.integers("resolutions", {});
    cfg.class_resolutions = r.integers("class_resolutions", cfg.class_resolutions);
    for (int n : cfg.resolutions)
        if (n < 2) r.fail("resolutions must be at least 2");
    for (int n : cfg.class_resolutions)
        if (n < 2) r.fail("class_resolutions must be at least 2");
    if (r.has("policy")) {
        const std::string name = r.string("policy", "all-pairs");
        if (auto p = guarded(errs, "grid.policy", [&] { return ball_policy_from_string(name); })) cfg.policy = *p;
    }
    if (dim != 1 && dim != 2) {
        r.fail("dimension must be 1 or 2");
        return std::nullopt;
    }
    if (lo.size() < static_cast<std::size_t>(dim) || hi.size() < static_cast<std::size_t>(dim)) {
        r.fail("lo and hi need one entry per dimension");
        return std::nullopt;
    }
    return guarded(errs, "grid", [&] {
        Box b = dim == 1 ? Box::interval(lo[0], hi[0]) : Box::square(lo[0], hi[0], lo[1], hi[1]);
        b.validate();
        return b;
    });
}

PlanRequest read_plan(const json& j, const std::string& path, std::vector<std::string>& errs) {
    static const std::set<std::string> rational_keys{"p0",     "q0", "p_minus", "p_plus", "q_minus", "q_plus", "s",
                                                     "beta1",  "p_star", "delta", "r", "n", "p"};
    PlanRequest req;
    Reader r(j, path, errs);
    if (!j.is_object()) return req;
    req.scenario = r.string("scenario", "", true);
    req.mode = r.string("mode", "weighted");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "scenario" || k == "mode") continue;
        if (!rational_keys.count(k)) {
            errs.push_back(path + "." + k + ": unknown key");
            continue;
        }
        const json& v = it.value();
        if (!v.is_string() && !v.is_number_integer()) {
            errs.push_back(path + "." + k + ": rationals must be strings like \"6/5\" or integers");
            continue;
        }
        const std::string text = v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>());
        if (auto x = guarded(errs, path + "." + k, [&] { return XRational::parse(text); })) req.values[k] = *x;
    }
    return req;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("invalid config:" + join(violations)), violations_(std::move(violations)) {}

GridFunction FunctionSpec::rasterize(const Grid& grid) const {
    if (kind == "polynomial") {
        const auto c = coefficients;
        return GridFunction::from(grid, [c](const Point& x) {
            double s = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x[0] + *it;
            return s;
        }, SignMode::sign_free);
    }
    if (kind == "constant") return GridFunction::constant(grid, value);
    if (kind == "indicator") {
        const double l = lo, h = hi, v = value;
        return GridFunction::from(grid, [=](const Point& x) { return x[0] >= l && x[0] <= h ? v : 0.0; });
    }
    if (kind == "power") {
        const int n = grid.dimension();
        const double e = a;
        return GridFunction::from(grid, [=](const Point& x) {
            const double r = n == 2 ? std::hypot(x[0], x[1]) : std::abs(x[0]);
            return r == 0.0 && e < 0.0 ? 0.0 : std::pow(r, e);
        });
    }
    if (kind == "sine") {
        const double o = offset, amp = amplitude, f = frequency;
        return GridFunction::from(grid, [=](const Point& x) { return o + amp * std::sin(f * x[0]); },
                                  SignMode::sign_free);
    }
    throw ConfigError({"function.kind: unknown function kind '" + kind + "'"});
}

ExponentFunction parse_exponent(const nlohmann::json& j, const Box& box) {
    std::vector<std::string> errs;
    auto p = read_exponent(j, box, "exponent", errs);
    if (!errs.empty() || !p) throw ConfigError(errs.empty() ? std::vector<std::string>{"exponent: invalid"} : errs);
    return *p;
}

CliConfig parse_config(const nlohmann::json& j) {
    std::vector<std::string> errs;
    CliConfig out;
    ScenarioConfig& cfg = out.scenario;
    Reader top(j, "config", errs);
    if (!j.is_object()) throw ConfigError(errs);
    top.allow({"schema_version", "name", "grid", "exponent", "target_exponent", "weight", "operator", "planner",
               "probes", "vector_valued", "tolerances", "output", "function", "weight_class", "rdf"});
    cfg.schema_version = top.integer("schema_version", 1, true);
    if (cfg.schema_version != 1) top.fail("unsupported schema_version " + std::to_string(cfg.schema_version));
    cfg.name = top.string("name", "scenario");

    if (top.has("grid")) cfg.box = read_grid(j.at("grid"), cfg, errs);
    for (const char* key : {"exponent", "target_exponent"}) {
        if (!top.has(key)) continue;
        if (!cfg.box) {
            if (!top.has("grid")) top.fail(std::string("'") + key + "' requires 'grid'");
            continue;
        }
        auto e = read_exponent(j.at(key), *cfg.box, key, errs);
        (std::string(key) == "exponent" ? cfg.p : cfg.q) = e;
    }

    if (top.has("weight")) {
        Reader r(j.at("weight"), "weight", errs);
        r.allow({"kind", "a", "path"});
        cfg.weight.kind = r.string("kind", "unit", true);
        if (cfg.weight.kind == "power")
            cfg.weight.a = r.number("a", 0.0, true);
        else if (cfg.weight.kind == "file")
            cfg.weight.path = r.string("path", "", true);
        else if (cfg.weight.kind != "unit")
            r.fail("unknown weight kind '" + cfg.weight.kind + "'");
    }

    if (top.has("operator")) {
        Reader r(j.at("operator"), "operator", errs);
        r.allow({"kind", "alpha", "epsilon_in_spacings"});
        OperatorSpec op;
        const std::string kind = r.string("kind", "hardy-littlewood", true);
        if (auto k = guarded(errs, "operator.kind", [&] { return operator_kind_from_string(kind); })) op.kind = *k;
        op.alpha = r.number("alpha", 0.0);
        op.epsilon_in_spacings = r.number("epsilon_in_spacings", 2.0);
        cfg.op = op;
    }

    if (top.has("planner")) {
        const json& pj = j.at("planner");
        if (pj.is_array()) {
            for (std::size_t k = 0; k < pj.size(); ++k)
                cfg.plans.push_back(read_plan(pj[k], "planner[" + std::to_string(k) + "]", errs));
        } else {
            cfg.plans.push_back(read_plan(pj, "planner", errs));
        }
    }

    if (top.has("probes")) {
        Reader r(j.at("probes"), "probes", errs);
        r.allow({"recipes", "count", "seed"});
        if (r.has("recipes")) {
            cfg.probes.recipes.clear();
            const json& rj = r.at("recipes");
            if (!rj.is_array()) r.fail("recipes must be an array of names");
            else
                for (const json& x : rj) {
                    if (!x.is_string()) {
                        r.fail("recipes must be an array of names");
                        continue;
                    }
                    if (auto rec = guarded(errs, "probes.recipes",
                                           [&] { return probe_recipe_from_string(x.get<std::string>()); }))
                        cfg.probes.recipes.push_back(*rec);
                }
        }
        cfg.probes.count = r.integer("count", cfg.probes.count);
        if (r.has("seed")) {
            if (!r.at("seed").is_number_unsigned()) r.fail("seed must be a non-negative integer");
            else cfg.probes.seed = r.at("seed").get<std::uint64_t>();
        }
        if (cfg.probes.count < 1 || cfg.probes.recipes.empty()) r.fail("empty probe family");
    }

    if (top.has("vector_valued")) {
        Reader r(j.at("vector_valued"), "vector_valued", errs);
        r.allow({"q", "list_size", "lists", "duplicates"});
        VectorValuedSpec vv;
        vv.q = r.number("q", vv.q);
        vv.list_size = r.integer("list_size", vv.list_size);
        vv.lists = r.integer("lists", vv.lists);
        vv.duplicates = r.integer("duplicates", vv.duplicates);
        if (!(vv.q > 1.0) || !std::isfinite(vv.q)) r.fail("q must lie in (1, inf)");
        if (vv.list_size < 1 || vv.lists < 1 || vv.duplicates < 1) r.fail("list sizes must be positive");
        cfg.vector_valued = vv;
    }

    if (top.has("tolerances")) {
        Reader r(j.at("tolerances"), "tolerances", errs);
        r.allow({"norm", "max_iterations", "stability"});
        cfg.norm.tolerance = r.number("norm", cfg.norm.tolerance);
        cfg.norm.max_iterations = r.integer("max_iterations", cfg.norm.max_iterations);
        cfg.stability_tolerance = r.number("stability", cfg.stability_tolerance);
        if (!(cfg.norm.tolerance > 0.0)) r.fail("norm tolerance must be positive");
        if (!(cfg.stability_tolerance > 0.0)) r.fail("stability tolerance must be positive");
    }

    if (top.has("output")) {
        Reader r(j.at("output"), "output", errs);
        r.allow({"csv", "json"});
        cfg.csv_path = r.string("csv", "");
        cfg.json_path = r.string("json", "");
    }

    if (top.has("function")) {
        Reader r(j.at("function"), "function", errs);
        r.allow({"kind", "coefficients", "value", "lo", "hi", "a", "offset", "amplitude", "frequency"});
        FunctionSpec f;
        f.kind = r.string("kind", "constant", true);
        f.coefficients = r.numbers("coefficients", {});
        f.value = r.number("value", f.value);
        f.lo = r.number("lo", f.lo);
        f.hi = r.number("hi", f.hi);
        f.a = r.number("a", f.a);
        f.offset = r.number("offset", f.offset);
        f.amplitude = r.number("amplitude", f.amplitude);
        f.frequency = r.number("frequency", f.frequency);
        static const std::set<std::string> kinds{"polynomial", "constant", "indicator", "power", "sine"};
        if (!kinds.count(f.kind)) r.fail("unknown function kind '" + f.kind + "'");
        if (f.kind == "polynomial" && f.coefficients.empty()) r.fail("polynomial needs coefficients");
        out.function = f;
    }

    if (top.has("weight_class")) {
        Reader r(j.at("weight_class"), "weight_class", errs);
        r.allow({"kind", "p", "s"});
        ClassRequest c;
        c.kind = r.string("kind", c.kind, true);
        c.p = r.number("p", c.p);
        c.s = r.number("s", c.s);
        if (c.kind != "A_p" && c.kind != "A_1" && c.kind != "RH_s" && c.kind != "A_p(.)")
            r.fail("unknown class '" + c.kind + "'");
        out.weight_class = c;
    }

    if (top.has("rdf")) {
        Reader r(j.at("rdf"), "rdf", errs);
        r.allow({"norm_bound", "max_terms", "tail_tolerance", "alpha", "beta"});
        RdFSpec s;
        if (r.has("norm_bound")) s.norm_bound = r.number("norm_bound", 1.0);
        s.max_terms = r.integer("max_terms", s.max_terms);
        if (r.has("tail_tolerance")) s.tail_tolerance = r.number("tail_tolerance", 0.0);
        s.alpha = r.number("alpha", s.alpha);
        s.beta = r.number("beta", s.beta);
        out.rdf = s;
    }

    if (cfg.box && !cfg.resolutions.empty() && !cfg.p && (cfg.op || !cfg.plans.empty()))
        top.fail("numeric runs require 'exponent'");
    if (!errs.empty()) throw ConfigError(errs);
    return out;
}

CliConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config '" + path + "'"});
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError({path + ": " + e.what()});
    }
    return parse_config(j);
}

}  // namespace vls
