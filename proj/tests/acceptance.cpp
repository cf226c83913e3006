// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "vls/config.hpp"
#include "vls/harness.hpp"

using namespace vls;
using oracle::Frac;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail = what;
            pass = false;
        }
    }
};

XRational X(const Frac& f) {
    if (f.inf) return XRational::infinity();
    return XRational::parse(f.str());
}

bool same(const XRational& x, const Frac& f) { return x == X(f); }

std::vector<double> exps(const ExponentFunction& p, const Grid& g) { return p.sample(g); }

std::vector<double> vals(const GridFunction& f) { return {f.values().begin(), f.values().end()}; }

ExponentFunction random_exponent(std::mt19937_64& rng, const Box& box, double lo, double hi, bool allow_inf) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int family = static_cast<int>(u(rng) * (allow_inf ? 4 : 3));
    const double a = lo + (hi - lo) * u(rng);
    const double b = lo + (hi - lo) * u(rng);
    const double width = box.hi[0] - box.lo[0];
    switch (family) {
        case 0: return ExponentFunction::affine(a, {(b - a) / width, 0.0}, box);
        case 1: {
            const double base = 0.5 * (a + b);
            const double amp = 0.5 * std::abs(b - a);
            return ExponentFunction::sine(base, amp, 1.0 + 6.0 * u(rng), box);
        }
        case 2: return ExponentFunction::step(a, b, box.lo[0] + width * (0.2 + 0.6 * u(rng)), box);
        default:
            return ExponentFunction::step(a, kInfinity, box.lo[0] + width * (0.5 + 0.4 * u(rng)), box);
    }
}

GridFunction random_function(std::mt19937_64& rng, const Grid& g, double scale) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int pieces = 3 + static_cast<int>(u(rng) * 6);
    std::vector<double> h(pieces);
    for (double& x : h) x = scale * (0.05 + u(rng));
    const Box& b = g.box();
    return GridFunction::from(g, [&](const Point& x) {
        const int k = std::min(pieces - 1, static_cast<int>((x[0] - b.lo[0]) / (b.hi[0] - b.lo[0]) * pieces));
        return h[k];
    });
}

// 1. Planner anchors, exact.
Outcome criterion1() {
    Outcome o;
    // σ = p_* q_- / (p_* - q_-) with q_- = 2n/(n+2), p_* = 2
    const Frac n(3), qm = Frac(2) * n / (n + Frac(2)), ps(2);
    const Frac sigma = ps * qm / (ps - qm);
    const ExtrapolationPlan riesz = plan_riesz_divergence(3);
    o.require(same(riesz.get("sigma"), sigma) && sigma == Frac(3), "riesz sigma " + riesz.get("sigma").str());

    // τ = s(p-1)+1 and r = 1 + q/p'
    const Frac tau = Frac(2) * (Frac(2) - Frac(1)) + Frac(1);
    o.require(same(jn_exponent(XRational(2), XRational(2)), tau) && tau == Frac(3), "jn tau");
    const Frac r = Frac(1) + Frac(4) / oracle::conj(Frac(2));
    o.require(same(apq_to_ar(XRational(2), XRational(4)), r) && r == Frac(3), "apq_to_ar");

    // δ = 1/2: (q_-, q_+) = (2/(1+δ), 2/(1-δ))
    const Frac d(1, 2);
    const ExtrapolationPlan delta = plan_corollary_delta(XRational(1, 2));
    o.require(same(delta.get("q_minus"), Frac(2) / (Frac(1) + d)) && same(delta.get("q_plus"), Frac(2) / (Frac(1) - d)),
              "delta window " + delta.get("q_minus").str() + ", " + delta.get("q_plus").str());
    o.require(same(delta.get("q_minus"), Frac(4, 3)) && same(delta.get("q_plus"), Frac(4)), "delta anchor");

    const ExtrapolationPlan diag = plan_diagonal(XRational(2), XRational(3, 2), XRational(3));
    o.require(diag.obligations.size() == 2, "diagonal obligation count");
    if (diag.obligations.size() == 2) {
        o.require(diag.obligations[0].str() == "M bounded on L^{p(·)}(w)", diag.obligations[0].str());
        o.require(diag.obligations[1].str() == "M bounded on L^{p'(·)}(w^-1)", diag.obligations[1].str());
    }
    o.require(diag.get("alpha1") == XRational(1) && diag.get("beta2") == XRational(1) &&
                  diag.get("gamma") == XRational(1, 2),
              "diagonal defaults");
    o.detail = o.pass ? "sigma=3 tau=3 r=3 delta->(4/3,4) M-pair" : o.detail;
    return o;
}

// 2. Constant-exponent reduction: both routes agree on 100 random rational triples.
Outcome criterion2() {
    Outcome o;
    std::mt19937_64 rng(7001);
    std::uniform_int_distribution<long long> num(1, 40), den(1, 12);
    auto rand_frac = [&](Frac lo) { return lo + Frac(num(rng), den(rng)); };
    int agreed = 0;
    for (int k = 0; k < 100; ++k) {
        const Frac qm = rand_frac(Frac(1));
        const Frac p = rand_frac(qm);
        const Frac qp = rand_frac(p);
        // τ_p = (q_+/p)'(p/q_- - 1) + 1
        const Frac a2 = oracle::conj(qp / p);
        const Frac tau = a2 * (p / qm - Frac(1)) + Frac(1);
        const Frac s1 = (p / tau) * (Frac(1) - p / qm) + p;
        const Frac s2 = p / oracle::conj(a2 * oracle::conj(tau));
        const Frac b2 = (p / tau) * a2;
        const ConstantReduction c = plan_limited_constant_reduction(X(p), X(qm), X(qp));
        const bool ok = c.routes_agree && c.s_route1 == c.s_route2 && c.beta2_route1 == c.beta2_route2 &&
                        same(c.s_route1, s1) && same(c.s_route2, s2) && same(c.beta2_route2, b2) && s1 == s2;
        if (ok) ++agreed;
        o.require(ok, "triple " + qm.str() + " < " + p.str() + " < " + qp.str());
    }
    if (o.pass) o.detail = std::to_string(agreed) + "/100 exact agreements";
    return o;
}

// 3. Feasibility law on a rational lattice. Every tuple goes through p_star_interval;
// those meeting the planner's precondition also go through plan_limited.
Outcome criterion3() {
    Outcome o;
    std::vector<Frac> v;
    for (int k = 5; k <= 18; ++k) v.push_back(Frac(k, 4));
    std::vector<Frac> top = v;
    top.push_back(Frac::infinity());
    std::size_t points = 0, feasible = 0, planned_points = 0;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t d = a + 1; d < top.size(); ++d)
            for (std::size_t b = 0; b < v.size(); ++b)
                for (std::size_t c = b; c < v.size(); ++c) {
                    const Frac qm = v[a], qp = top[d], pm = v[b], pp = v[c];
                    ++points;
                    const bool expect = qp.inf || pp * qm < qp * pm;
                    if (expect) ++feasible;
                    const Window star = p_star_interval(X(qm), X(qp), X(pm), X(pp));
                    const std::string tag =
                        "lattice point " + qm.str() + "," + qp.str() + "," + pm.str() + "," + pp.str();
                    o.require(expect == !star.empty(), tag);
                    if (!(qm < pm && pp < qp)) continue;
                    ++planned_points;
                    bool planned = false;
                    try {
                        const ExtrapolationPlan plan = plan_limited({X(qm), X(qp), X(pm), X(pp)});
                        planned = star.contains(plan.get("p_star"));
                    } catch (const InfeasibleParameter&) {
                    }
                    o.require(expect == planned, tag + " (plan)");
                }
    if (o.pass)
        o.detail = std::to_string(points) + " points, " + std::to_string(feasible) + " feasible; " +
                   std::to_string(planned_points) + " planned";
    return o;
}

// 4. Luxemburg norm closed forms and λ-scan oracle.
Outcome criterion4() {
    Outcome o;
    const Box unit = Box::interval(0.0, 1.0);
    const Grid g1(unit, 10000);
    const double n1 = luxemburg_norm(GridFunction::from(g1, [](const Point& x) { return x[0]; }),
                                     ExponentFunction::constant(2.0, unit))
                          .value;
    o.require(std::abs(n1 * std::sqrt(3.0) - 1.0) <= 1e-6, "||x||_2 = " + std::to_string(n1));
    const Box two = Box::interval(0.0, 2.0);
    const Grid g2(two, 10000);
    const double n2 = luxemburg_norm(GridFunction::constant(g2, 1.0), ExponentFunction::constant(2.0, two)).value;
    o.require(std::abs(n2 / std::sqrt(2.0) - 1.0) <= 1e-6, "||1||_2 on [0,2]");

    std::mt19937_64 rng(4004);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Box box = Box::interval(-1.0, 1.0 + k % 3);
        const Grid g(box, 257);
        const ExponentFunction p = random_exponent(rng, box, 1.0, 6.0, true);
        const GridFunction f = random_function(rng, g, std::pow(10.0, (k % 5) - 2.0));
        const double lib = luxemburg_norm(f, p, {1e-13, 400}).value;
        const double ref = oracle::luxemburg_scan(vals(f), exps(p, g), oracle::trapezoid(box.lo[0], box.hi[0], 257));
        worst = std::max(worst, std::abs(lib - ref) / ref);
    }
    o.require(worst <= 1e-8, "lambda-scan disagreement " + std::to_string(worst));
    if (o.pass) {
        std::ostringstream os;
        os << "closed forms ok, 20 scan cases max rel diff " << worst;
        o.detail = os.str();
    }
    return o;
}

// 5. Modular/norm properties on 200 cases.
Outcome criterion5() {
    Outcome o;
    std::mt19937_64 rng(5005);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const NormOptions opts{1e-12, 400};
    for (int k = 0; k < 200; ++k) {
        const Box box = Box::interval(0.0, 1.0 + (k % 4));
        const Grid g(box, 129);
        const double top = k % 2 == 0 ? 8.0 : 1.5 + 6.5 * u(rng);
        const ExponentFunction p = random_exponent(rng, box, 1.0, top, false);
        const GridFunction f = random_function(rng, g, std::pow(10.0, 4.0 * u(rng) - 2.0));
        const double pm = p.p_minus(), pp = p.p_plus();
        const std::string tag = "case " + std::to_string(k);

        const double nf = luxemburg_norm(f, p, opts).value;
        const GridFunction unit_f = f.scaled(1.0 / nf);
        o.require(std::abs(luxemburg_norm(unit_f, p, opts).value - 1.0) <= 1e-6, tag + " (1) norm");
        o.require(std::abs(modular(unit_f, p) - 1.0) <= 1e-4, tag + " (1) modular");

        const double C = modular(f, p);
        o.require(nf <= std::max(std::pow(C, 1.0 / pm), std::pow(C, 1.0 / pp)) * (1.0 + 1e-6), tag + " (2)");
        o.require(C <= std::max(std::pow(nf, pp), std::pow(nf, pm)) * (1.0 + 1e-4), tag + " (3)");
    }
    if (o.pass) o.detail = "200 cases, p_+ up to 8";
    return o;
}

// 6. Dilation identity.
Outcome criterion6() {
    Outcome o;
    std::mt19937_64 rng(6006);
    const NormOptions opts{1e-13, 400};
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Box box = Box::interval(0.0, 2.0);
        const Grid g(box, 129);
        const ExponentFunction p = random_exponent(rng, box, 1.2, 6.0, false);
        const GridFunction f = random_function(rng, g, 1.0 + k);
        const double base = luxemburg_norm(f, p, opts).value;
        for (double s : {0.5, 1.0, 2.0, 3.0}) {
            std::vector<double> fs(f.size());
            for (std::size_t i = 0; i < fs.size(); ++i) fs[i] = std::pow(std::abs(f[i]), s);
            const double rhs =
                luxemburg_norm(GridFunction(g, fs), transform(p, ExponentTransform::divide_by, s), opts).value;
            const double lhs = std::pow(base, s);
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        }
    }
    o.require(worst <= 1e-6, "dilation error " + std::to_string(worst));
    if (o.pass) {
        std::ostringstream os;
        os << "50 cases x 4 scales, max rel err " << worst;
        o.detail = os.str();
    }
    return o;
}

// 7. Rubio de Francia iteration.
Outcome criterion7() {
    Outcome o;
    const Box box = Box::interval(-1.0, 1.0);
    const Grid g(box, 48);
    const BallFamily balls = enumerate_balls(g, BallPolicy::all_pairs);
    const OperatorHandle m = OperatorHandle::maximal(balls);
    const auto q = oracle::trapezoid(box.lo[0], box.hi[0], 48);

    for (double B : {1.5, 2.0, 3.0, 5.0}) {
        RdFConfig cfg;
        cfg.operator_norm_bound = B;
        cfg.max_terms = 80;
        const RdFResult r = rdf_iterate(GridFunction::constant(g, 1.0), m, cfg);
        const double expect = 2 * B / (2 * B - 1);
        for (std::size_t k = 0; k < g.size(); ++k)
            o.require(std::abs(r.value[k] - expect) <= 1e-10, "geometric series at B = " + std::to_string(B));
    }

    std::mt19937_64 rng(7007);
    const ExponentFunction p = ExponentFunction::affine(2.0, {0.25, 0.0}, box);
    const Weight w = Weight::unit(g);
    ProbeSpec ps;
    ps.count = 10;
    const ProbeFamily probes = make_probes(ps, g);
    const double B = default_norm_bound(estimate_operator_norm(m, p, w, probes.probes).value);
    int conditional = 0;
    for (int run = 0; run < 50; ++run) {
        const GridFunction h = random_function(rng, g, 1.0);
        RdFConfig cfg;
        cfg.operator_norm_bound = B;
        const RdFResult r = rdf_iterate(h, m, cfg);
        for (std::size_t k = 0; k < g.size(); ++k) o.require(h[k] <= r.value[k], "h <= Rh");
        const auto mr = oracle::maximal_all_intervals(vals(r.value), q);
        for (std::size_t k = 0; k < g.size(); ++k)
            o.require(mr[k] <= (2 * B * r.value[k] + r.slack[k]) * (1 + 1e-12), "M(Rh) <= 2B Rh + slack");
        const A1PropertyReport a = verify_a1_property(r, m, balls, NormContext{p, w, h}, true);
        o.require(a.pointwise_holds, "library pointwise check");
        o.require(a.norm_holds.value_or(false), "||Rh|| <= 2||h||");
        if (a.norm_status == "conditional") ++conditional;
    }
    o.require(conditional == 50, "norm status not conditional");
    if (o.pass) {
        std::ostringstream os;
        os << "2B/(2B-1) at 4 bounds, 50 runs at B = " << B << " (conditional)";
        o.detail = os.str();
    }
    return o;
}

// 8. Weight-class identities.
Outcome criterion8() {
    Outcome o;
    const Box box = Box::interval(-1.0, 1.0);
    const Grid g(box, 65);
    const BallFamily balls = enumerate_balls(g, BallPolicy::all_pairs);
    const ExponentFunction p = ExponentFunction::affine(2.5, {0.5, 0.0}, box);

    for (double a : {-0.5, 0.0, 0.25, 0.4}) {
        const Weight w = Weight::power(g, a);
        const auto lhs = ball_quantities(w, ClassSpec::Apvar(p), balls);
        const auto rhs = ball_quantities(w.inverse(), ClassSpec::Apvar(conjugate(p)), balls);
        o.require(lhs == rhs, "A_p(.) duality at a = " + std::to_string(a));
    }

    for (double s : {0.2, 0.5, 0.9})
        for (double a : {0.25, 0.5}) {
            const AinftyWeakerReport r = ainfty_weaker_check(Weight::power(g, a), p, s, balls);
            o.require(r.holds && r.violations == 0, "A_inf-weaker at s = " + std::to_string(s));
        }

    const ExponentFunction p2 = ExponentFunction::constant(2.0, box);
    const ExponentFunction q4 = ExponentFunction::constant(4.0, box);
    const SigmaCheckReport sc = apqvar_sigma_check(Weight::power(g, 0.25), p2, q4, 4.0 / 3.0, balls);
    o.require(sc.identity_holds, "sigma identity (constant exponents)");
    const ExponentFunction pv = ExponentFunction::affine(2.0, {0.25, 0.0}, box);
    const ExponentFunction qv = derive(pv, [](double t) { return 1.0 / (1.0 / t - 0.25); }, 1.0 / (1.0 / 1.75 - 0.25),
                                       1.0 / (1.0 / 2.25 - 0.25), "sobolev");
    const SigmaCheckReport sv = apqvar_sigma_check(Weight::power(g, 0.25), pv, qv, 4.0 / 3.0, balls);
    o.require(sv.identity_holds, "sigma identity (variable exponents)");
    if (o.pass) {
        std::ostringstream os;
        os << "duality exact, A_inf-weaker holds, sigma identity errors " << sc.max_identity_error << ", "
           << sv.max_identity_error;
        o.detail = os.str();
    }
    return o;
}

// 9. Power-weight admissibility verdicts.
Outcome criterion9() {
    Outcome o;
    const Box box = Box::interval(0.0, 1.0);
    const ExponentFunction p = ExponentFunction::affine(2.0, {0.25, 0.0}, box);
    const std::vector<int> res{64, 128, 256};
    o.require(power_weight_admissible(0.125, p, 1) && !power_weight_admissible(2.0, p, 1), "admissibility rule");
    const ClassConstantReport good = class_constant_trend(
        [](const Grid& g) { return Weight::power(g, 0.125); }, ClassSpec::Apvar(p), box, res);
    const ClassConstantReport bad =
        class_constant_trend([](const Grid& g) { return Weight::power(g, 2.0); }, ClassSpec::Ap(2.0), box, res);
    o.require(good.verdict == Verdict::bounded_looking, "a = 1/8 verdict");
    o.require(bad.verdict == Verdict::diverging, "a = 2 verdict");
    std::ostringstream os;
    os << "a=1/8:";
    for (double t : good.trend) os << " " << t;
    os << " (" << to_string(good.verdict) << "); a=2:";
    for (double t : bad.trend) os << " " << t;
    os << " (" << to_string(bad.verdict) << ")";
    if (o.pass) o.detail = os.str();
    return o;
}

// 10. End-to-end scenario.
Outcome criterion10() {
    Outcome o;
    const CliConfig cfg = load_config(std::string(VLS_CONFIG_DIR) + "/diag_m_powerweight.cfg");
    const VerificationReport a = run_scenario(cfg.scenario);
    const VerificationReport b = run_scenario(cfg.scenario);
    o.require(report_summary(a).dump() == report_summary(b).dump(), "summaries differ between runs");
    o.require(a.rows.size() == b.rows.size(), "row count differs");
    for (std::size_t k = 0; k < std::min(a.rows.size(), b.rows.size()); ++k)
        o.require(a.rows[k].ratio == b.rows[k].ratio, "row ratio differs");
    o.require(a.errors.empty() && a.warnings.empty(), "report carries warnings or errors");
    o.require(!a.obligations.empty(), "no obligations");
    for (const ObligationCheck& c : a.obligations) o.require(c.passed, "obligation " + c.obligation);
    o.require(a.resolutions == std::vector<int>({256, 512}), "resolutions");
    o.require(a.trend.size() == 2 && std::abs(a.trend[1] / a.trend[0] - 1.0) <= 0.10, "best constant unstable");

    // Duplicated lists against single probes, directly.
    const Grid g(*cfg.scenario.box, 256);
    const OperatorHandle m = OperatorHandle::maximal(enumerate_balls(g, BallPolicy::all_pairs));
    const Weight w = Weight::power(g, 0.125);
    const ProbeFamily fam = make_probes(cfg.scenario.probes, g);
    double worst = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        const double single = vector_valued_check({{fam.probes[k]}}, 2.0, *cfg.scenario.p, w, m).best_constant;
        const double dup = vector_valued_check({std::vector<GridFunction>(4, fam.probes[k])}, 2.0, *cfg.scenario.p,
                                               w, m)
                               .best_constant;
        worst = std::max(worst, std::abs(dup - single) / single);
    }
    o.require(worst <= 1e-10, "duplicate-list mismatch");
    if (o.pass) {
        std::ostringstream os;
        os << "best constant " << a.trend[0] << " -> " << a.trend[1] << ", " << a.obligations.size()
           << " obligations pass, duplicate lists max rel diff " << worst;
        o.detail = os.str();
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<double, std::function<Outcome()>>> criteria{
        {1, criterion1},   {5, criterion2},   {30, criterion3},  {60, criterion4},  {120, criterion5},
        {120, criterion6}, {120, criterion7}, {120, criterion8}, {300, criterion9}, {600, criterion10}};
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > criteria[k].first) {
            o.pass = false;
            o.detail += " (over time budget)";
        }
        if (!o.pass) ++failures;
        std::printf("%s criterion %zu: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", k + 1, o.detail.c_str(), secs);
    }
    return failures;
}
