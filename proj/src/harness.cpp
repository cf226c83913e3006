#include "vls/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace vls {

std::string to_string(ProbeRecipe r) {
    switch (r) {
        case ProbeRecipe::steps: return "steps";
        case ProbeRecipe::bumps: return "bumps";
        case ProbeRecipe::random_piecewise: return "random-piecewise";
        case ProbeRecipe::oscillatory: return "oscillatory";
        case ProbeRecipe::constants: return "constants";
    }
    return "unknown";
}

ProbeRecipe probe_recipe_from_string(const std::string& name) {
    for (auto r : {ProbeRecipe::steps, ProbeRecipe::bumps, ProbeRecipe::random_piecewise, ProbeRecipe::oscillatory,
                   ProbeRecipe::constants})
        if (to_string(r) == name) return r;
    throw HarnessError("unknown probe recipe '" + name + "'");
}

namespace {

struct Extent {
    double lo;
    double width;
};

std::array<Extent, 2> extents(const Box& box) {
    return {Extent{box.lo[0], box.hi[0] - box.lo[0]}, Extent{box.lo[1], box.hi[1] - box.lo[1]}};
}

ProbeShape make_shape(ProbeRecipe recipe, std::mt19937_64& rng, const Box& box, int index) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto ext = extents(box);
    const int n = box.dimension;
    const std::string tag = to_string(recipe) + "#" + std::to_string(index);
    switch (recipe) {
        case ProbeRecipe::steps: {
            std::array<double, 2> a{}, b{};
            for (int d = 0; d < n; ++d) {
                double x = u(rng), y = u(rng);
                if (x > y) std::swap(x, y);
                if (y - x < 0.05) y = std::min(1.0, x + 0.05), x = y - 0.05;
                a[d] = ext[d].lo + x * ext[d].width;
                b[d] = ext[d].lo + y * ext[d].width;
            }
            const double height = 0.5 + 1.5 * u(rng);
            return {[=](const Point& p) {
                        for (int d = 0; d < n; ++d)
                            if (p[d] < a[d] || p[d] > b[d]) return 0.0;
                        return height;
                    },
                    tag};
        }
        case ProbeRecipe::bumps: {
            const int k = 1 + static_cast<int>(u(rng) * 3.0);
            std::vector<std::array<double, 4>> bumps;  // center x, center y, radius, amplitude
            const double diam = box.diameter();
            for (int j = 0; j < k; ++j)
                bumps.push_back({ext[0].lo + u(rng) * ext[0].width, ext[1].lo + u(rng) * ext[1].width,
                                 (0.05 + 0.25 * u(rng)) * diam, 0.5 + 1.5 * u(rng)});
            return {[=](const Point& p) {
                        double s = 0.0;
                        for (const auto& b : bumps) {
                            const double dx = p[0] - b[0];
                            const double dy = n == 2 ? p[1] - b[1] : 0.0;
                            const double t = 1.0 - (dx * dx + dy * dy) / (b[2] * b[2]);
                            if (t > 0.0) s += b[3] * t * t;
                        }
                        return s;
                    },
                    tag};
        }
        case ProbeRecipe::random_piecewise: {
            const int m = 4 + static_cast<int>(u(rng) * 9.0);
            std::vector<double> heights(static_cast<std::size_t>(n == 2 ? m * m : m));
            for (double& h : heights) h = 0.05 + u(rng);
            return {[=](const Point& p) {
                        auto cell = [&](int d) {
                            const int c = static_cast<int>((p[d] - ext[d].lo) / ext[d].width * m);
                            return std::clamp(c, 0, m - 1);
                        };
                        const int idx = n == 2 ? cell(1) * m + cell(0) : cell(0);
                        return heights[static_cast<std::size_t>(idx)];
                    },
                    tag};
        }
        case ProbeRecipe::oscillatory: {
            const double amp = 0.3 + 0.65 * u(rng);
            const int freq = 1 + static_cast<int>(u(rng) * 8.0);
            const double phase = 2.0 * std::numbers::pi * u(rng);
            return {[=](const Point& p) {
                        double arg = 2.0 * std::numbers::pi * freq * (p[0] - ext[0].lo) / ext[0].width + phase;
                        if (n == 2) arg += 2.0 * std::numbers::pi * (p[1] - ext[1].lo) / ext[1].width;
                        return 1.0 + amp * std::sin(arg);
                    },
                    tag};
        }
        case ProbeRecipe::constants: {
            const double c = 0.5 + 1.5 * u(rng);
            return {[=](const Point&) { return c; }, tag};
        }
    }
    throw HarnessError("unknown probe recipe");
}

// rounding residue, e.g. the sharp maximal function of a constant
bool negligible(double den, double num) {
    return !std::isfinite(den) || !(den > 1e-12 * std::max(num, std::numeric_limits<double>::min()));
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Shortest decimal that round-trips, then exact.
XRational exact_decimal(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find('e') != std::string::npos) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(15) << v;
        s = os.str();
    }
    return XRational::parse(s);
}

double max_ratio(const std::vector<double>& ratios) {
    return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

}  // namespace

std::vector<ProbeShape> make_probe_shapes(const ProbeSpec& spec, const Box& box) {
    if (spec.count < 1 || spec.recipes.empty()) throw HarnessError("empty probe family");
    std::vector<ProbeShape> shapes;
    for (std::size_t r = 0; r < spec.recipes.size(); ++r) {
        std::mt19937_64 rng(spec.seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(spec.recipes[r]) + 1));
        for (int i = 0; i < spec.count; ++i) shapes.push_back(make_shape(spec.recipes[r], rng, box, i));
    }
    return shapes;
}

ProbeFamily rasterize_probes(const std::vector<ProbeShape>& shapes, const Grid& grid, std::uint64_t seed) {
    ProbeFamily fam;
    fam.seed = seed;
    for (const ProbeShape& s : shapes) {
        fam.probes.push_back(GridFunction::from(grid, s.fn));
        fam.tags.push_back(s.tag);
    }
    return fam;
}

ProbeFamily make_probes(const ProbeSpec& spec, const Grid& grid) {
    return rasterize_probes(make_probe_shapes(spec, grid.box()), grid, spec.seed);
}

int VerificationReport::exit_code() const {
    if (!errors.empty()) return 2;
    if (!warnings.empty()) return 1;
    return 0;
}

void VerificationReport::merge(const VerificationReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    obligations.insert(obligations.end(), other.obligations.begin(), other.obligations.end());
}

bool is_stable(const std::vector<double>& trend, double tolerance) {
    if (trend.size() < 2) return true;
    const double a = trend[trend.size() - 2];
    const double b = trend.back();
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return false;
    return std::abs(b / a - 1.0) <= tolerance;
}

VerificationReport verify_norm_inequality(const InequalityRequest& req) {
    if (req.resolutions.empty()) throw HarnessError("no resolutions given");
    VerificationReport rep;
    rep.scenario = req.scenario;
    rep.seed = req.probes.seed;
    rep.stability_tolerance = req.stability_tolerance;
    const int n = req.box.dimension;
    const bool reversed = req.op.kind == OperatorKind::sharp_maximal;

    ExponentFunction target = req.q.value_or(req.p);
    if (req.op.kind == OperatorKind::riesz_potential || req.op.kind == OperatorKind::fractional_maximal) {
        if (!(req.p.p_plus() < n / req.op.alpha)) throw HarnessError("p_+ < n/alpha required");
        if (!req.q) target = sobolev_target(req.p, req.op.alpha, n);
    }

    const auto shapes = make_probe_shapes(req.probes, req.box);
    for (int res : req.resolutions) {
        const Grid grid(req.box, res);
        const OperatorHandle op = instantiate(req.op, grid);
        const Weight w = req.weight ? req.weight(grid) : Weight::unit(grid);
        const ProbeFamily fam = rasterize_probes(shapes, grid, req.probes.seed);
        std::vector<double> ratios;
        for (std::size_t k = 0; k < fam.probes.size(); ++k) {
            const GridFunction& f = fam.probes[k];
            const GridFunction tf = apply(op, f);
            ProbeRow row{"conclusion", res, k, fam.tags[k]};
            if (reversed) {
                row.numerator = weighted_norm(f, w, req.p, req.norm).value;
                row.denominator = weighted_norm(tf, w, req.p, req.norm).value;
            } else {
                row.numerator = weighted_norm(tf, w, target, req.norm).value;
                row.denominator = weighted_norm(f, w, req.p, req.norm).value;
            }
            if (negligible(row.denominator, row.numerator)) {
                row.skipped = true;
                rep.warnings.push_back("probe " + fam.tags[k] + " at resolution " + std::to_string(res) +
                                       " skipped: zero denominator");
            } else {
                row.ratio = row.numerator / row.denominator;
                ratios.push_back(row.ratio);
            }
            rep.rows.push_back(row);
        }
        if (ratios.empty()) throw HarnessError("all probes skipped at resolution " + std::to_string(res));
        rep.resolutions.push_back(res);
        rep.trend.push_back(max_ratio(ratios));
    }
    rep.best_constant = *std::max_element(rep.trend.begin(), rep.trend.end());
    rep.verdict = is_stable(rep.trend, rep.stability_tolerance) ? "stable" : "unstable";
    if (rep.verdict != "stable") rep.warnings.push_back("best constant unstable under refinement");
    return rep;
}

VerificationReport vector_valued_check(const std::vector<std::vector<GridFunction>>& lists, double q,
                                       const ExponentFunction& p, const Weight& w, const OperatorHandle& m,
                                       const NormOptions& opts) {
    if (!(q > 1.0) || !std::isfinite(q)) throw HarnessError("vector-valued check requires 1 < q < inf");
    if (lists.empty()) throw HarnessError("empty probe family");
    VerificationReport rep;
    rep.scenario = "vector-valued";
    std::vector<double> ratios;
    for (std::size_t l = 0; l < lists.size(); ++l) {
        const auto& list = lists[l];
        if (list.empty()) throw HarnessError("empty probe list");
        const Grid& grid = list.front().grid();
        std::vector<double> lhs(grid.size(), 0.0), rhs(grid.size(), 0.0);
        for (const GridFunction& f : list) {
            const GridFunction mf = apply(m, f);
            for (std::size_t k = 0; k < lhs.size(); ++k) {
                lhs[k] += std::pow(mf[k], q);
                rhs[k] += std::pow(std::abs(f[k]), q);
            }
        }
        for (std::size_t k = 0; k < lhs.size(); ++k) {
            lhs[k] = std::pow(lhs[k], 1.0 / q);
            rhs[k] = std::pow(rhs[k], 1.0 / q);
        }
        ProbeRow row{"vector-valued", grid.resolution(), l, "list#" + std::to_string(l)};
        row.numerator = weighted_norm(GridFunction(grid, std::move(lhs)), w, p, opts).value;
        row.denominator = weighted_norm(GridFunction(grid, std::move(rhs)), w, p, opts).value;
        if (!(row.denominator > 0.0)) {
            row.skipped = true;
            rep.warnings.push_back("list " + std::to_string(l) + " skipped: zero denominator");
        } else {
            row.ratio = row.numerator / row.denominator;
            ratios.push_back(row.ratio);
        }
        rep.rows.push_back(row);
    }
    if (ratios.empty()) throw HarnessError("all probe lists skipped");
    rep.best_constant = max_ratio(ratios);
    rep.resolutions = {lists.front().front().grid().resolution()};
    rep.trend = {rep.best_constant};
    return rep;
}

ExponentFunction instantiate_exponent(const ExponentExpr& e, const ExponentFunction& p,
                                      const std::optional<ExponentFunction>& q) {
    if (!e.symbolic_divide.empty()) throw HarnessError("exponent " + e.str() + " has a symbolic scale");
    if (e.base == 'q' && !q) throw HarnessError("exponent " + e.str() + " needs q(.)");
    ExponentFunction x = e.base == 'q' ? *q : p;
    if (e.pre_divide != XRational(1)) x = transform(x, ExponentTransform::divide_by, e.pre_divide.to_double());
    if (e.conjugate) x = conjugate(x);
    if (e.post_divide != XRational(1)) x = transform(x, ExponentTransform::divide_by, e.post_divide.to_double());
    return x;
}

ExtrapolationPlan build_plan(const PlanRequest& r) {
    auto need = [&](const char* key) -> const XRational& {
        auto it = r.values.find(key);
        if (it == r.values.end()) throw HarnessError("plan '" + r.scenario + "' requires '" + key + "'");
        return it->second;
    };
    auto opt = [&](const char* key) -> std::optional<XRational> {
        auto it = r.values.find(key);
        if (it == r.values.end()) return std::nullopt;
        return it->second;
    };
    auto integer = [&](const char* key) {
        const XRational& v = need(key);
        if (!v.is_finite() || v.denominator() != "1") throw HarnessError(std::string("'") + key + "' must be an integer");
        return std::stoi(v.numerator());
    };
    const std::string& s = r.scenario;
    if (s == "diagonal") return plan_diagonal(need("p0"), need("p_minus"), need("p_plus"), opt("s"), opt("beta1"));
    if (s == "offdiagonal")
        return plan_offdiagonal(need("p0"), need("q0"), need("p_minus"), need("q_minus"), opt("s"), opt("beta1"));
    if (s == "limited") {
        LimitedRequest lr{need("q_minus"), need("q_plus"), need("p_minus"), need("p_plus"),
                          opt("p0"),       opt("p_star"), opt("s"),       opt("beta1")};
        if (r.mode == "weighted")
            lr.mode = LimitedMode::weighted;
        else if (r.mode == "unweighted")
            lr.mode = LimitedMode::unweighted;
        else if (r.mode == "general")
            lr.mode = LimitedMode::general;
        else
            throw HarnessError("unknown limited mode '" + r.mode + "'");
        return plan_limited(lr);
    }
    if (s == "a1") return plan_a1(need("p0"), need("p_minus"));
    if (s == "ainfty") return plan_ainfty(need("p0"), need("s"), need("p_minus"));
    if (s == "delta") return plan_corollary_delta(need("delta"));
    if (s == "rough-sio") return plan_rough_sio(need("r"));
    if (s == "spherical") return plan_spherical(integer("n"), need("p_minus"), need("p_plus"));
    if (s == "riesz-divergence") return plan_riesz_divergence(integer("n"));
    if (s == "constant-reduction") {
        const ConstantReduction c = plan_limited_constant_reduction(need("p"), need("q_minus"), need("q_plus"));
        ExtrapolationPlan plan;
        plan.scenario = "constant-reduction";
        for (auto& [k, v] : std::vector<std::pair<std::string, XRational>>{
                 {"p", c.p}, {"q_minus", c.q_minus}, {"q_plus", c.q_plus}, {"tau_p", c.tau_p},
                 {"alpha1", c.alpha1}, {"beta1", c.beta1}, {"alpha2", c.alpha2}, {"s_route1", c.s_route1},
                 {"beta2_route1", c.beta2_route1}, {"s_route2", c.s_route2}, {"beta2_route2", c.beta2_route2}})
            plan.set(k, v);
        plan.obligations.push_back(weight_in_class(c.p * c.alpha2 / c.tau_p, ExponentExpr{'p', c.alpha1}));
        plan.notes.push_back(std::string("routes ") + (c.routes_agree ? "agree" : "disagree"));
        if (c.boundary) plan.flags.push_back("boundary case p = q_-: tau_p = 1");
        if (!c.routes_agree) plan.flags.push_back("derivation routes disagree");
        return plan;
    }
    throw HarnessError("unknown plan scenario '" + s + "'");
}

WeightFactory make_weight_factory(const WeightSpec& spec) {
    if (spec.kind == "unit") return [](const Grid& g) { return Weight::unit(g); };
    if (spec.kind == "power") {
        const double a = spec.a;
        return [a](const Grid& g) { return Weight::power(g, a); };
    }
    if (spec.kind == "file") {
        std::ifstream in(spec.path);
        if (!in) throw HarnessError("cannot open weight file '" + spec.path + "'");
        std::vector<std::pair<double, double>> pts;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double x, v;
            if (ls >> x >> v) pts.emplace_back(x, v);
        }
        if (pts.size() < 2) throw HarnessError("weight file needs at least two samples");
        std::sort(pts.begin(), pts.end());
        const std::string label = "file:" + spec.path;
        return [pts, label](const Grid& g) {
            if (g.dimension() != 1) throw HarnessError("weight files are 1-D");
            std::vector<double> v(g.size());
            for (std::size_t k = 0; k < v.size(); ++k) {
                const double x = g.node(k)[0];
                auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(x, -kInfinity));
                if (it == pts.begin()) {
                    v[k] = it->second;
                } else if (it == pts.end()) {
                    v[k] = pts.back().second;
                } else {
                    const auto& [x1, v1] = *it;
                    const auto& [x0, v0] = *(it - 1);
                    v[k] = v0 + (v1 - v0) * (x - x0) / (x1 - x0);
                }
            }
            return Weight::from_values(g, std::move(v), label);
        };
    }
    throw HarnessError("unknown weight kind '" + spec.kind + "'");
}

namespace {

// M-boundedness on L^{E}(w^k): probe estimates across the scenario resolutions.
ObligationCheck check_maximal(const Obligation& o, const ExponentFunction& e, const WeightFactory& weight,
                              const ScenarioConfig& cfg, VerificationReport& rep) {
    ObligationCheck c;
    c.obligation = o.str();
    c.method = "probe estimate of ||M||, " + to_string(cfg.policy) + " balls";
    const double power = o.weight.power.to_double();
    const auto shapes = make_probe_shapes(cfg.probes, *cfg.box);
    for (int res : cfg.resolutions) {
        const Grid grid(*cfg.box, res);
        const OperatorHandle m = OperatorHandle::maximal(enumerate_balls(grid, cfg.policy));
        const Weight w = weight(grid).pow(power);
        const ProbeFamily fam = rasterize_probes(shapes, grid, cfg.probes.seed);
        const OperatorNormEstimate est = estimate_operator_norm(m, e, w, fam.probes, cfg.norm);
        std::size_t r = 0;
        for (std::size_t k = 0; k < fam.probes.size(); ++k) {
            ProbeRow row{"obligation:" + o.space(), res, k, fam.tags[k]};
            const double den = weighted_norm(fam.probes[k], w, e, cfg.norm).value;
            if (!(den > 0.0)) {
                row.skipped = true;
            } else {
                row.denominator = den;
                row.ratio = est.ratios[r++];
                row.numerator = row.ratio * den;
            }
            rep.rows.push_back(row);
        }
        c.resolutions.push_back(res);
        c.trend.push_back(est.value);
    }
    const bool stable = is_stable(c.trend, cfg.stability_tolerance);
    const bool admissible = e.p_minus() > 1.0;
    c.verdict = !admissible ? "p_- <= 1: M unbounded" : stable ? "stable" : "unstable";
    c.passed = admissible && stable;
    return c;
}

ObligationCheck check_class(const std::string& label, const ExponentFunction& e, const WeightFactory& weight,
                            double power, const ScenarioConfig& cfg) {
    ObligationCheck c;
    c.obligation = label;
    c.method = "A_p(.) constant trend, " + to_string(cfg.policy) + " balls";
    WeightFactory f = [&weight, power](const Grid& g) { return weight(g).pow(power); };
    const ClassConstantReport r = class_constant_trend(f, ClassSpec::Apvar(e), *cfg.box, cfg.class_resolutions,
                                                       cfg.policy, cfg.norm);
    c.resolutions = r.resolutions;
    c.trend = r.trend;
    c.verdict = to_string(r.verdict);
    c.passed = r.verdict == Verdict::bounded_looking;
    return c;
}

bool instantiable(const ExtrapolationPlan& plan) {
    for (const Obligation& o : plan.obligations)
        if (!o.exponent.symbolic_divide.empty()) return false;
    return true;
}

}  // namespace

VerificationReport run_scenario(const ScenarioConfig& cfg) {
    VerificationReport rep;
    rep.scenario = cfg.name;
    rep.seed = cfg.probes.seed;
    rep.stability_tolerance = cfg.stability_tolerance;

    std::vector<ExtrapolationPlan> plans;
    for (PlanRequest req : cfg.plans) {
        if (cfg.p && (req.scenario == "diagonal" || req.scenario == "a1" || req.scenario == "ainfty")) {
            if (!req.values.count("p_minus")) req.values["p_minus"] = exact_decimal(cfg.p->p_minus());
            if (!req.values.count("p_plus") && req.scenario == "diagonal")
                req.values["p_plus"] = exact_decimal(cfg.p->p_plus());
        }
        try {
            plans.push_back(build_plan(req));
            rep.plans.push_back(to_json(plans.back()));
        } catch (const std::exception& e) {
            rep.errors.push_back("plan '" + req.scenario + "': " + e.what());
        }
    }
    if (!cfg.box || cfg.resolutions.empty()) return rep;
    if (!cfg.p) throw HarnessError("numeric scenario requires an exponent");
    const ExponentFunction& p = *cfg.p;
    const WeightFactory weight = make_weight_factory(cfg.weight);

    if (cfg.weight.kind == "power" && !power_weight_admissible(cfg.weight.a, p, cfg.box->dimension))
        rep.warnings.push_back("power weight exponent a = " + fmt(cfg.weight.a) + " is not below n/p_+");

    for (const ExtrapolationPlan& plan : plans) {
        if (!instantiable(plan)) {
            rep.warnings.push_back("plan '" + plan.scenario + "' has symbolic obligations; not instantiated");
            continue;
        }
        for (const Obligation& o : plan.obligations) {
            try {
                const ExponentFunction e = instantiate_exponent(o.exponent, p, cfg.q);
                ObligationCheck c = o.kind == ObligationKind::maximal_bounded
                                        ? check_maximal(o, e, weight, cfg, rep)
                                        : check_class(o.str(), e, weight, o.weight.power.to_double(), cfg);
                if (!c.passed) rep.warnings.push_back("obligation " + c.obligation + ": " + c.verdict);
                rep.obligations.push_back(std::move(c));
            } catch (const std::exception& e) {
                rep.warnings.push_back("obligation " + o.str() + " not checked: " + e.what());
            }
        }
        if (plan.scenario == "diagonal") {
            ObligationCheck c = check_class("w ∈ A_{p(·)} (necessary)", p, weight, 1.0, cfg);
            if (!c.passed) rep.warnings.push_back("obligation " + c.obligation + ": " + c.verdict);
            rep.obligations.push_back(std::move(c));
        }
    }

    if (cfg.op) {
        InequalityRequest req;
        req.scenario = cfg.name;
        req.op = *cfg.op;
        req.op.policy = cfg.policy;
        req.probes = cfg.probes;
        req.p = p;
        req.q = cfg.q;
        req.weight = weight;
        req.box = *cfg.box;
        req.resolutions = cfg.resolutions;
        req.norm = cfg.norm;
        req.stability_tolerance = cfg.stability_tolerance;
        const VerificationReport conclusion = verify_norm_inequality(req);
        rep.merge(conclusion);
        rep.best_constant = conclusion.best_constant;
        rep.resolutions = conclusion.resolutions;
        rep.trend = conclusion.trend;
        rep.verdict = conclusion.verdict;
    }

    if (cfg.vector_valued) {
        const VectorValuedSpec& vv = *cfg.vector_valued;
        const auto shapes = make_probe_shapes(cfg.probes, *cfg.box);
        if (shapes.size() < static_cast<std::size_t>(vv.list_size * vv.lists))
            throw HarnessError("not enough probes for the vector-valued lists");
        ObligationCheck stability{"vector-valued best constant", "lists of " + std::to_string(vv.list_size) +
                                                                     " probes, q = " + fmt(vv.q)};
        ObligationCheck homogeneity{"vector-valued homogeneity", "duplicated lists vs single probe, 1e-10"};
        homogeneity.passed = true;
        for (int res : cfg.resolutions) {
            const Grid grid(*cfg.box, res);
            const OperatorHandle m = OperatorHandle::maximal(enumerate_balls(grid, cfg.policy));
            const Weight w = weight(grid);
            const ProbeFamily fam = rasterize_probes(shapes, grid, cfg.probes.seed);
            std::vector<std::vector<GridFunction>> lists;
            for (int l = 0; l < vv.lists; ++l)
                lists.emplace_back(fam.probes.begin() + l * vv.list_size, fam.probes.begin() + (l + 1) * vv.list_size);
            VerificationReport r = vector_valued_check(lists, vv.q, p, w, m);
            for (auto& row : r.rows) row.resolution = res;
            rep.merge(r);
            stability.resolutions.push_back(res);
            stability.trend.push_back(r.best_constant);

            const std::vector<std::vector<GridFunction>> single{{fam.probes.front()}};
            const std::vector<std::vector<GridFunction>> dup{
                std::vector<GridFunction>(static_cast<std::size_t>(vv.duplicates), fam.probes.front())};
            const double r1 = vector_valued_check(single, vv.q, p, w, m).best_constant;
            const double rd = vector_valued_check(dup, vv.q, p, w, m).best_constant;
            homogeneity.resolutions.push_back(res);
            homogeneity.trend.push_back(std::abs(rd - r1) / r1);
            if (!(std::abs(rd - r1) <= 1e-10 * r1)) homogeneity.passed = false;
        }
        stability.passed = is_stable(stability.trend, cfg.stability_tolerance);
        stability.verdict = stability.passed ? "stable" : "unstable";
        homogeneity.verdict = homogeneity.passed ? "match" : "mismatch";
        for (const ObligationCheck* c : {&stability, &homogeneity})
            if (!c->passed) rep.warnings.push_back(c->obligation + ": " + c->verdict);
        rep.obligations.push_back(stability);
        rep.obligations.push_back(homogeneity);
    }

    if (!cfg.csv_path.empty()) write_report_csv(rep, cfg.csv_path);
    if (!cfg.json_path.empty()) write_report_json(rep, cfg.json_path);
    return rep;
}

void write_report_csv(const VerificationReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw HarnessError("cannot write '" + path + "'");
    out << kReportCsvHeader << "\n";
    for (const ProbeRow& r : rep.rows)
        out << rep.scenario << "," << '"' << r.stage << '"' << "," << r.resolution << "," << r.probe << "," << r.tag
            << "," << fmt(r.numerator) << "," << fmt(r.denominator) << "," << fmt(r.ratio) << ","
            << (r.skipped ? "skipped" : "ok") << "\n";
}

nlohmann::json report_summary(const VerificationReport& rep) {
    nlohmann::json j;
    j["scenario"] = rep.scenario;
    j["seed"] = rep.seed;
    j["best_constant"] = rep.best_constant;
    j["resolutions"] = rep.resolutions;
    j["trend"] = rep.trend;
    j["stability_tolerance"] = rep.stability_tolerance;
    j["verdict"] = rep.verdict;
    nlohmann::json obs = nlohmann::json::array();
    for (const ObligationCheck& c : rep.obligations)
        obs.push_back({{"obligation", c.obligation},
                       {"method", c.method},
                       {"resolutions", c.resolutions},
                       {"trend", c.trend},
                       {"verdict", c.verdict},
                       {"passed", c.passed}});
    j["obligations"] = obs;
    j["plans"] = rep.plans;
    j["warnings"] = rep.warnings;
    j["errors"] = rep.errors;
    j["exit_code"] = rep.exit_code();
    return j;
}

void write_report_json(const VerificationReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw HarnessError("cannot write '" + path + "'");
    out << report_summary(rep).dump(2) << "\n";
}

}  // namespace vls
