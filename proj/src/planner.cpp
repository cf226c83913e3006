#include "vls/planner.hpp"

#include <iomanip>
#include <sstream>

namespace vls {

namespace {

const XRational kZero{0};
const XRational kOne{1};
const XRational kTwo{2};

std::string wrap(const XRational& x) {
    const std::string s = x.str();
    return s.find('/') == std::string::npos ? s : "(" + s + ")";
}

bool is_unit_fraction(const XRational& x) {
    return x.is_finite() && kZero < x && x < kOne && (kOne / x).is_finite() && (kOne / x).denominator() == "1";
}

void require(bool ok, const std::string& what) {
    if (!ok) throw PlannerError(what);
}

}  // namespace

std::string Window::str() const { return "(" + lo.str() + ", " + hi.str() + ")"; }

std::string ExponentExpr::str() const {
    const std::string core = std::string(1, base) + "(·)";
    std::string x = core;
    if (!symbolic_divide.empty()) {
        x = core + "/(" + symbolic_divide + (pre_divide == kOne ? "" : "·" + pre_divide.str()) + ")";
    } else if (pre_divide != kOne) {
        if (is_unit_fraction(pre_divide))
            x = (kOne / pre_divide).str() + core;
        else
            x = core + "/" + wrap(pre_divide);
    }
    if (conjugate) x = (x == core) ? std::string(1, base) + "'(·)" : "(" + x + ")'";
    if (post_divide != kOne) x = (x.find('/') == std::string::npos ? x : "(" + x + ")") + "/" + wrap(post_divide);
    return x;
}

std::string WeightExpr::str() const {
    if (power == kZero) return "1";
    if (power == kOne) return "w";
    if (power == XRational(-1)) return "w^-1";
    return "w^{" + power.str() + "}";
}

std::string Obligation::space() const { return "L^{" + exponent.str() + "}(" + weight.str() + ")"; }

std::string Obligation::str() const {
    if (kind == ObligationKind::maximal_bounded) return "M bounded on " + space();
    return weight.str() + " ∈ A_{" + exponent.str() + "}";
}

Obligation maximal_on(ExponentExpr e, XRational weight_power) {
    return Obligation{ObligationKind::maximal_bounded, std::move(e), WeightExpr{std::move(weight_power)}};
}

Obligation weight_in_class(XRational weight_power, ExponentExpr e) {
    return Obligation{ObligationKind::weight_class, std::move(e), WeightExpr{std::move(weight_power)}};
}

bool ExtrapolationPlan::has(const std::string& name) const {
    for (const auto& [k, v] : parameters)
        if (k == name) return true;
    return false;
}

const XRational& ExtrapolationPlan::get(const std::string& name) const {
    for (const auto& [k, v] : parameters)
        if (k == name) return v;
    throw PlannerError("plan '" + scenario + "' has no parameter '" + name + "'");
}

void ExtrapolationPlan::set(const std::string& name, XRational value) {
    for (auto& [k, v] : parameters)
        if (k == name) {
            v = std::move(value);
            return;
        }
    parameters.emplace_back(name, std::move(value));
}

XRational jn_exponent(const XRational& p, const XRational& s) {
    require(p.is_finite() && s.is_finite() && kOne < p && kOne < s, "jn_exponent requires 1 < p, s < inf");
    return s * (p - kOne) + kOne;
}

XRational apq_to_ar(const XRational& p, const XRational& q) {
    require(kOne <= p && p < q && q.is_finite(), "apq_to_ar requires 1 <= p < q < inf");
    return kOne + q / conj(p);
}

XRational sigma_from_gap(const XRational& p, const XRational& q) {
    require(kOne <= p && p <= q, "sigma requires 1 <= p <= q");
    const XRational gap = kOne / p - kOne / q;
    if (gap == kZero) return kOne;
    return conj(kOne / gap);
}

ExtrapolationPlan plan_diagonal(const XRational& p0, const XRational& p_minus, const XRational& p_plus,
                                std::optional<XRational> s_in, std::optional<XRational> beta1_in) {
    if (p0 == kOne) throw PlanRedirect("plan_a1");
    require(kOne < p0 && p0.is_finite(), "plan_diagonal requires 1 < p0 < inf");
    require(kOne < p_minus && p_minus <= p_plus && p_plus.is_finite(), "plan_diagonal requires 1 < p_- <= p_+ < inf");

    ExtrapolationPlan plan;
    plan.scenario = "diagonal";
    Window w{max(kZero, p0 - p_minus * (p0 - kOne)), min(p_minus, p0)};
    w.lo_clipped = p0 - p_minus * (p0 - kOne) < kZero;
    plan.window = w;
    const XRational s = s_in.value_or(kOne);
    if (!w.contains(s)) throw InfeasibleParameter("infeasible s = " + s.str() + ", window " + w.str(), w);
    const XRational beta1 = beta1_in.value_or(kZero);
    const XRational alpha1 = (p0 - s) / (p0 - kOne);
    const XRational alpha2 = kOne;
    const XRational beta2 = s - beta1 * (kOne - p0);
    const XRational gamma = s / conj(p0 / s);

    for (auto& [k, v] : std::vector<std::pair<std::string, XRational>>{
             {"p0", p0}, {"p_minus", p_minus}, {"p_plus", p_plus}, {"s", s}, {"alpha1", alpha1},
             {"beta1", beta1}, {"alpha2", alpha2}, {"beta2", beta2}, {"gamma", gamma}})
        plan.set(k, v);

    plan.obligations.push_back(maximal_on(ExponentExpr{'p', alpha1}, alpha1 - beta1));
    plan.obligations.push_back(maximal_on(ExponentExpr{'p', s, true, alpha2}, -beta2));
    if (s == kOne && beta1 == kZero) plan.notes.push_back("defaults: obligations form the M-pair (p(·), w)");
    return plan;
}

ExtrapolationPlan plan_offdiagonal(const XRational& p0, const XRational& q0, const XRational& p_minus,
                                   const XRational& q_minus, std::optional<XRational> s_in,
                                   std::optional<XRational> beta1_in) {
    require(kOne <= p0 && p0 <= q0 && q0.is_finite(), "plan_offdiagonal requires 1 <= p0 <= q0 < inf");
    const XRational sigma = sigma_from_gap(p0, q0);
    if (sigma == kOne) throw PlanRedirect("plan_diagonal");

    ExtrapolationPlan plan;
    plan.scenario = "offdiagonal";
    plan.set("p0", p0);
    plan.set("q0", q0);
    plan.set("sigma", sigma);
    plan.set("sigma_conj", conj(sigma));
    if (p_minus.is_finite() && q_minus.is_finite() && kZero < p_minus && kZero < q_minus &&
        kOne / p_minus - kOne / q_minus != kOne / p0 - kOne / q0)
        plan.flags.push_back("exponent gap 1/p_- - 1/q_- differs from 1/p0 - 1/q0");

    if (p0 == kOne) {
        plan.scenario = "offdiagonal-endpoint";
        plan.obligations.push_back(maximal_on(ExponentExpr{'q', q0, true}, -q0));
        plan.notes.push_back("p0 = 1: single obligation, no free parameters");
        return plan;
    }

    const XRational r1 = q0 / sigma;
    const XRational raw_lo = q0 - q_minus * (r1 - kOne);
    Window w{max(kZero, raw_lo), min(q0, q_minus), raw_lo < kZero};
    plan.window = w;
    const XRational s = s_in.value_or(sigma);
    if (!w.contains(s)) throw InfeasibleParameter("infeasible s = " + s.str() + ", window " + w.str(), w);
    const XRational beta1 = beta1_in.value_or(kZero);
    const XRational alpha1 = (q0 - s) / (r1 - kOne);
    const XRational beta2 = s - beta1 * (kOne - r1);
    plan.set("p_minus", p_minus);
    plan.set("q_minus", q_minus);
    plan.set("s", s);
    plan.set("r0", q0 / s);
    plan.set("r1", r1);
    plan.set("alpha1", alpha1);
    plan.set("beta1", beta1);
    plan.set("alpha2", kOne);
    plan.set("beta2", beta2);
    if (alpha1 != s) plan.flags.push_back("alpha1 from the proof (" + alpha1.str() + ") differs from the statement's alpha1 = s");
    if (beta1 != kZero && beta2 != s - beta1 * (kOne - q0 / s))
        plan.flags.push_back("beta2 uses 1 - q0/sigma; the statement's 1 - q0/s gives a different value");

    plan.obligations.push_back(maximal_on(ExponentExpr{'q', alpha1}, alpha1 - beta1));
    plan.obligations.push_back(maximal_on(ExponentExpr{'q', s, true}, -beta2));
    return plan;
}

Window p_star_interval(const XRational& q_minus, const XRational& q_plus, const XRational& p_minus,
                       const XRational& p_plus) {
    return Window{q_minus, q_plus * p_minus / p_plus};
}

ExtrapolationPlan plan_limited(const LimitedRequest& r) {
    require(kOne < r.q_minus && r.q_minus < r.p_minus && r.p_minus <= r.p_plus && r.p_plus < r.q_plus &&
                r.p_plus.is_finite(),
            "plan_limited requires 1 < q_- < p_- <= p_+ < q_+");
    const Window star = p_star_interval(r.q_minus, r.q_plus, r.p_minus, r.p_plus);
    if (star.empty()) throw InfeasibleParameter("oscillation too large: p_+/p_- >= q_+/q_-", star);

    XRational p_star;
    if (r.p_star) {
        if (!star.contains(*r.p_star))
            throw InfeasibleParameter("p_* = " + r.p_star->str() + " outside " + star.str(), star);
        p_star = *r.p_star;
    } else {
        if (r.p0 && !(r.q_minus < *r.p0 && *r.p0 < r.q_plus))
            throw InfeasibleParameter("p0 = " + r.p0->str() + " outside (q_-, q_+)", Window{r.q_minus, r.q_plus});
        if (r.p0 && star.contains(*r.p0))
            p_star = *r.p0;
        else if (star.hi.is_infinite())
            p_star = kTwo * r.q_minus;
        else
            p_star = midpoint(star.lo, star.hi);
    }

    ExtrapolationPlan plan;
    plan.scenario = "limited";
    Window w{max(r.p_minus - p_star * (r.p_minus / r.q_minus - kOne), p_star * r.p_plus / r.q_plus),
             min(r.p_minus, p_star)};
    plan.window = w;
    if (w.empty()) throw InfeasibleParameter("empty s-window " + w.str(), w);
    const XRational s = r.s.value_or(midpoint(w.lo, w.hi));
    if (!w.contains(s)) throw InfeasibleParameter("infeasible s = " + s.str() + ", window " + w.str(), w);

    const XRational alpha2 = conj(r.q_plus / p_star);
    const XRational tau0 = alpha2 * (p_star / r.q_minus - kOne) + kOne;
    const XRational alpha1 = r.q_minus * (p_star - s) / (p_star - r.q_minus);
    const XRational sigma = p_star * r.q_minus / (p_star - r.q_minus);
    const XRational c = kOne - s / p_star;

    XRational beta1 = kZero;
    if (r.mode == LimitedMode::weighted) beta1 = -(s * sigma / p_star);
    if (r.mode == LimitedMode::general) beta1 = r.beta1.value_or(kZero);
    const XRational beta2 = s * alpha2 - beta1 * (kOne - tau0);

    for (auto& [k, v] : std::vector<std::pair<std::string, XRational>>{
             {"q_minus", r.q_minus}, {"q_plus", r.q_plus}, {"p_minus", r.p_minus}, {"p_plus", r.p_plus},
             {"p_star", p_star}, {"s", s}, {"sigma", sigma}, {"c", c}, {"tau0", tau0}, {"alpha1", alpha1},
             {"beta1", beta1}, {"alpha2", alpha2}, {"beta2", beta2}})
        plan.set(k, v);
    plan.flags.push_back("tau0 includes the +1 of the proof; the statement prints it without (value there: " +
                         (tau0 - kOne).str() + ")");

    switch (r.mode) {
        case LimitedMode::weighted:
            require(beta2 == kZero, "internal: weighted limited plan must give beta2 = 0");
            require(alpha1 - beta1 == sigma, "internal: weighted limited plan must give alpha1 - beta1 = sigma");
            require(c * sigma == alpha1, "internal: c sigma must equal alpha1");
            plan.obligations.push_back(weight_in_class(sigma, ExponentExpr{'p', c * sigma}));
            plan.notes.push_back("second class condition 1 ∈ A_{" + ExponentExpr{'p', s, true, alpha2}.str() +
                                 "} holds for log-Hölder p(·)");
            break;
        case LimitedMode::unweighted:
            plan.scenario = "limited-unweighted";
            plan.obligations.push_back(maximal_on(ExponentExpr{'p', alpha1}, kZero));
            plan.obligations.push_back(maximal_on(ExponentExpr{'p', s, true, alpha2}, kZero));
            break;
        case LimitedMode::general:
            plan.obligations.push_back(weight_in_class(alpha1 - beta1, ExponentExpr{'p', alpha1}));
            plan.obligations.push_back(weight_in_class(-beta2, ExponentExpr{'p', s, true, alpha2}));
            break;
    }
    const MergeCheck merge = limited_merge_check(plan, r.p_minus, r.p_plus);
    plan.notes.push_back(std::string("obligation merge: ") + (merge.mergeable ? "possible" : "impossible") +
                         " (requires constant p = " + merge.required_p.str() + ")");
    return plan;
}

MergeCheck limited_merge_check(const ExtrapolationPlan& plan, const XRational& p_minus, const XRational& p_plus) {
    MergeCheck m;
    const XRational& s = plan.get("s");
    const XRational& a1 = plan.get("alpha1");
    const XRational& a2 = plan.get("alpha2");
    m.exponent_constant = p_minus == p_plus;
    if (a2 == kOne) {
        // (p/α1)' = (p/s)' forces α1 = s.
        m.required_p = p_minus;
        m.mergeable = m.exponent_constant && a1 == s && a1 - plan.get("beta1") == plan.get("beta2");
        return m;
    }
    m.required_p = (s * a2 - a1) / (a2 - kOne);
    m.mergeable = m.exponent_constant && m.required_p == p_minus && a1 - plan.get("beta1") == plan.get("beta2");
    return m;
}

ConstantReduction plan_limited_constant_reduction(const XRational& p, const XRational& q_minus,
                                                  const XRational& q_plus) {
    require(kOne <= q_minus && q_minus <= p && p < q_plus && p.is_finite(),
            "constant reduction requires 1 <= q_- <= p < q_+");
    ConstantReduction r;
    r.p = p;
    r.q_minus = q_minus;
    r.q_plus = q_plus;
    r.alpha2 = conj(q_plus / p);
    r.tau_p = r.alpha2 * (p / q_minus - kOne) + kOne;
    r.boundary = r.tau_p == kOne;

    // Route 1: the first class condition matches w^{p(q+/p)'/τ_p} ∈ A_{τ_p}.
    r.alpha1 = p / r.tau_p;
    r.beta1 = r.alpha1 * (kOne - r.alpha2);
    r.s_route1 = r.alpha1 * (kOne - p / q_minus) + p;
    r.beta2_route1 = r.s_route1 * r.alpha2 - r.beta1 * (kOne - r.tau_p);

    // Route 2: the second is its dual, (p/s)'/α2 = τ_p'.
    r.s_route2 = p / conj(r.alpha2 * conj(r.tau_p));
    r.beta2_route2 = (p / r.tau_p) * r.alpha2;

    r.routes_agree = r.s_route1 == r.s_route2 && r.beta2_route1 == r.beta2_route2;
    const Window w{max(p - p * (p / q_minus - kOne), p * p / q_plus), p};
    r.s_in_window = w.contains(r.s_route1);
    return r;
}

ExtrapolationPlan plan_a1(const XRational& p0, const XRational& p_minus) {
    require(kZero < p0 && p0.is_finite(), "plan_a1 requires 0 < p0 < inf");
    if (p_minus < p0) throw PlannerError("A1 extrapolation only goes up: p_- = " + p_minus.str() + " < p0 = " + p0.str());
    ExtrapolationPlan plan;
    plan.scenario = "a1";
    plan.set("p0", p0);
    plan.set("p_minus", p_minus);
    plan.set("alpha2", kOne);
    plan.set("beta2", p0);
    plan.obligations.push_back(maximal_on(ExponentExpr{'p', p0, true}, -p0));
    plan.notes.push_back("no free parameters");
    if (p0 < kOne) plan.flags.push_back("quasi-norm range: p0 < 1");
    return plan;
}

ExtrapolationPlan plan_ainfty(const XRational& p0, const XRational& s, const XRational& p_minus) {
    require(kZero < p0 && p0.is_finite(), "plan_ainfty requires 0 < p0 < inf");
    require(kZero < s, "plan_ainfty requires s > 0");
    if (p_minus < s) throw PlannerError("plan_ainfty requires s <= p_-: s = " + s.str() + ", p_- = " + p_minus.str());
    ExtrapolationPlan plan;
    plan.scenario = "ainfty";
    plan.set("p0", p0);
    plan.set("s", s);
    plan.set("p_minus", p_minus);
    plan.obligations.push_back(weight_in_class(s, ExponentExpr{'p', s}));
    plan.obligations.push_back(maximal_on(ExponentExpr{'p', s, true}, -s));
    plan.notes.push_back("A_inf hypothesis at p0 = " + p0.str() + " gives the hypothesis at s = " + s.str() +
                         ", then the A1 plan at s");
    if (s == p_minus) plan.notes.push_back("s = p_- boundary");
    return plan;
}

ExtrapolationPlan plan_corollary_delta(const XRational& delta) {
    require(kZero < delta && delta <= kOne, "delta must lie in (0, 1]");
    ExtrapolationPlan plan;
    plan.scenario = "delta";
    const XRational qm = kTwo / (kOne + delta);
    const XRational qp = delta == kOne ? XRational::infinity() : kTwo / (kOne - delta);
    plan.set("delta", delta);
    plan.set("q_minus", qm);
    plan.set("q_plus", qp);
    plan.window = Window{qm, qp};
    const XRational ap = kTwo / qm;
    const XRational rh = conj(qp / kTwo);
    plan.set("a_index", ap);
    plan.set("rh_index", rh);
    if (kOne < rh) {
        const XRational tau = jn_exponent(ap, rh);
        plan.set("jn_tau", tau);
        require(tau == kTwo, "internal: delta bridge must give tau = 2");
    }
    plan.notes.push_back("w0^{1/delta} ∈ A_2 ⇔ w0 ∈ A_{" + ap.str() + "} ∩ RH_{" + rh.str() + "}");
    plan.notes.push_back("exponent window " + plan.window->str() + " for p_- <= p_+");
    return plan;
}

ExtrapolationPlan plan_rough_sio(const XRational& r) {
    require(kOne < r, "plan_rough_sio requires r > 1");
    const XRational rc = conj(r);
    ExtrapolationPlan plan;
    plan.scenario = "rough-sio";
    plan.set("r", r);
    plan.set("r_conj", rc);
    plan.obligations.push_back(maximal_on(ExponentExpr{'p', rc}, rc));
    plan.obligations.push_back(maximal_on(ExponentExpr{'p', rc, true}, -rc));
    plan.notes.push_back("|T f|^{r'} measured in L^{p(·)/r'}");
    if (rc != kOne) plan.notes.push_back("requires p_- > " + rc.str());
    return plan;
}

ExtrapolationPlan plan_spherical(int n, const XRational& p_minus, const XRational& p_plus) {
    require(n >= 3, "spherical maximal plan requires n >= 3");
    const XRational nn{n};
    ExtrapolationPlan plan;
    plan.scenario = "spherical";
    const XRational lower = nn / (nn - kOne);
    const XRational upper = (nn - kOne) * p_minus;
    plan.set("n", nn);
    plan.set("p_minus", p_minus);
    plan.set("p_plus", p_plus);
    plan.set("p_minus_lower", lower);
    plan.set("p_plus_upper", upper);
    plan.set("sigma_threshold", (nn - kOne) / (nn - XRational(2)) * p_minus);
    const bool feasible = lower < p_minus && p_minus <= p_plus && p_plus < upper;
    plan.notes.push_back(std::string("unweighted bound ") + (feasible ? "feasible" : "infeasible"));
    if (!feasible) plan.flags.push_back("p(·) outside n/(n-1) < p_- <= p_+ < (n-1)p_-");
    ExponentExpr e{'p'};
    e.symbolic_divide = "c·sigma";
    plan.obligations.push_back(weight_in_class(plan.get("sigma_threshold"), e));
    plan.notes.push_back("weighted: w^sigma ∈ A_{p(·)/(c·sigma)} for some sigma > sigma_threshold");
    return plan;
}

ExtrapolationPlan plan_riesz_divergence(int n) {
    require(n >= 1, "dimension must be positive");
    const XRational nn{n};
    const XRational qm = kTwo * nn / (nn + kTwo);
    const XRational p_star = kTwo;
    const XRational sigma = p_star * qm / (p_star - qm);
    ExtrapolationPlan plan;
    plan.scenario = "riesz-divergence";
    plan.set("n", nn);
    plan.set("q_minus", qm);
    plan.set("p_star", p_star);
    plan.set("sigma", sigma);
    ExponentExpr e{'p', sigma};
    e.symbolic_divide = "c";
    plan.obligations.push_back(weight_in_class(sigma, e));
    return plan;
}

nlohmann::json to_json(const XRational& x) {
    if (x.is_infinite()) return {{"inf", true}};
    auto as_number = [](const std::string& s) -> nlohmann::json {
        if (s.size() < 18) return std::stoll(s);
        return s;
    };
    return {{"num", as_number(x.numerator())}, {"den", as_number(x.denominator())}};
}

nlohmann::json to_json(const ExtrapolationPlan& plan) {
    nlohmann::json j;
    j["scenario"] = plan.scenario;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : plan.parameters) params[k] = to_json(v);
    j["parameters"] = params;
    nlohmann::json obs = nlohmann::json::array();
    for (const Obligation& o : plan.obligations) {
        nlohmann::json e{{"base", std::string(1, o.exponent.base)},
                         {"pre_divide", to_json(o.exponent.pre_divide)},
                         {"conjugate", o.exponent.conjugate},
                         {"post_divide", to_json(o.exponent.post_divide)}};
        if (!o.exponent.symbolic_divide.empty()) e["symbolic_divide"] = o.exponent.symbolic_divide;
        obs.push_back({{"kind", o.kind == ObligationKind::maximal_bounded ? "maximal-bounded" : "weight-class"},
                       {"exponent", e},
                       {"weight_power", to_json(o.weight.power)},
                       {"text", o.str()}});
    }
    j["obligations"] = obs;
    if (plan.window)
        j["window"] = {{"lo", to_json(plan.window->lo)}, {"hi", to_json(plan.window->hi)},
                       {"lo_clipped", plan.window->lo_clipped}};
    j["flags"] = plan.flags;
    j["notes"] = plan.notes;
    return j;
}

std::string format_table(const ExtrapolationPlan& plan) {
    std::ostringstream os;
    os << "scenario: " << plan.scenario << "\n";
    std::size_t width = 0;
    for (const auto& [k, v] : plan.parameters) width = std::max(width, k.size());
    for (const auto& [k, v] : plan.parameters) {
        os << "  " << std::left << std::setw(static_cast<int>(width)) << k << " = " << std::setw(10) << v.str();
        if (v.is_finite() && v.denominator() != "1") os << " (" << std::setprecision(10) << v.to_double() << ")";
        os << "\n";
    }
    if (plan.window) os << "window: " << plan.window->str() << (plan.window->lo_clipped ? " (lower end clipped at 0)" : "") << "\n";
    os << "obligations:\n";
    for (const Obligation& o : plan.obligations) os << "  - " << o.str() << "\n";
    for (const std::string& f : plan.flags) os << "flag: " << f << "\n";
    for (const std::string& n : plan.notes) os << "note: " << n << "\n";
    return os.str();
}

}  // namespace vls
