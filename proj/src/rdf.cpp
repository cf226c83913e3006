#include "vls/rdf.hpp"

#include <algorithm>
#include <cmath>

#include "vls/weights.hpp"

namespace vls {

void RdFConfig::validate() const {
    if (!(operator_norm_bound >= 1.0) || !std::isfinite(operator_norm_bound)) throw RdFError("invalid norm bound");
    if (max_terms < 1) throw RdFError("max_terms must be >= 1");
    if (tail_tolerance && !(*tail_tolerance >= 0.0)) throw RdFError("tail tolerance must be >= 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw RdFError("alpha must be > 0");
    if (!std::isfinite(beta)) throw RdFError("beta must be finite");
}

double default_norm_bound(double probe_estimate) { return std::max(1.0, 2.0 * probe_estimate); }

namespace {

void check_h(const GridFunction& h) {
    for (double v : h.values())
        if (!(v >= 0.0) || !std::isfinite(v)) throw RdFError("non-positive h");
    if (h.is_zero()) throw RdFError("non-positive h");
}

}  // namespace

RdFResult rdf_iterate(const GridFunction& h, const OperatorHandle& m, const RdFConfig& cfg) {
    cfg.validate();
    check_h(h);
    const double two_b = 2.0 * cfg.operator_norm_bound;
    const double tol = cfg.tail_tolerance.value_or(1e-10 * h.sup_abs());

    std::vector<double> sum(h.values().begin(), h.values().end());
    GridFunction term = h;
    std::vector<double> sups{h.sup_abs()};
    GridFunction next_m = apply(m, term);
    int k = 1;
    for (; k <= cfg.max_terms; ++k) {
        term = next_m.scaled(1.0 / two_b);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
        sups.push_back(term.sup_abs());
        next_m = apply(m, term);
        if (sups.back() <= tol) break;
    }
    RdFResult r{GridFunction(h.grid(), std::move(sum)), std::move(sups), 0, std::move(next_m), cfg.operator_norm_bound};
    r.terms = static_cast<int>(r.term_sups.size());
    return r;
}

RdFResult rdf_general(const GridFunction& h, const Weight& w, const OperatorHandle& m, const RdFConfig& cfg) {
    cfg.validate();
    check_h(h);
    if (!(h.grid() == w.grid())) throw RdFError("function and weight live on different grids");
    const auto wv = w.values();
    std::vector<double> g(h.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = std::pow(h[k], cfg.alpha) * std::pow(wv[k], cfg.beta);
    RdFResult r = rdf_iterate(GridFunction(h.grid(), std::move(g)), m, cfg);
    if (cfg.alpha == 1.0 && cfg.beta == 0.0) return r;
    std::vector<double> out(h.size());
    const double e = -cfg.beta / cfg.alpha;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::pow(r.value[k], 1.0 / cfg.alpha) * std::pow(wv[k], e);
    r.value = GridFunction(h.grid(), std::move(out));
    return r;
}

A1PropertyReport verify_a1_property(const RdFResult& rh, const OperatorHandle& m, const BallFamily& balls,
                                    const std::optional<NormContext>& norm, bool bound_is_estimated) {
    A1PropertyReport r;
    r.bound = 2.0 * rh.bound;
    const GridFunction mrh = apply(m, rh.value);
    r.max_excess = -kInfinity;
    bool ok = true;
    for (std::size_t k = 0; k < mrh.size(); ++k) {
        const double rhs = r.bound * rh.value[k] + rh.slack[k];
        const double excess = mrh[k] - rhs;
        r.max_excess = std::max(r.max_excess, excess);
        if (excess > 1e-12 * rhs) ok = false;
    }
    r.pointwise_holds = ok;

    const Weight w = Weight::from_function(rh.value, "Rh");
    r.a1_constant = class_constant(w, ClassSpec::A1(), balls).estimate;
    // Ball averages are bounded by M(Rh), so the slack enters relative to min Rh.
    double slack_ratio = 0.0;
    for (std::size_t k = 0; k < mrh.size(); ++k) slack_ratio = std::max(slack_ratio, rh.slack[k] / rh.value[k]);
    r.a1_within_bound = r.a1_constant <= (r.bound + slack_ratio) * (1.0 + 1e-12);

    if (!norm) {
        r.norm_status = "skipped";
        return r;
    }
    r.rh_norm = weighted_norm(rh.value, norm->weight, norm->exponent).value;
    r.h_norm = weighted_norm(norm->h, norm->weight, norm->exponent).value;
    r.norm_holds = *r.rh_norm <= 2.0 * *r.h_norm * (1.0 + 1e-9);
    r.norm_status = bound_is_estimated ? "conditional" : "proved-bound";
    return r;
}

}  // namespace vls
