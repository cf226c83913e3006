#include "vls/norm.hpp"

#include <algorithm>
#include <cmath>

namespace vls {

namespace {

// Nodes that contribute to the modular, in log form, plus the L^∞ part.
struct Prepared {
    std::vector<double> log_values;
    std::vector<double> exponents;
    std::vector<double> weights;
    double sup_infinite = 0.0;
    double max_value = 0.0;
    double measure = 0.0;
    double p_min = kInfinity;
    double p_max = 0.0;
};

Prepared prepare(const ModularData& d) {
    Prepared p;
    const std::size_t n = d.values.size();
    p.log_values.reserve(n);
    p.exponents.reserve(n);
    p.weights.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = std::abs(d.values[k]);
        const double w = d.weights[k];
        p.measure += w;
        if (!(w > 0.0)) continue;
        p.max_value = std::max(p.max_value, v);
        if (std::isinf(d.exponents[k])) {
            p.sup_infinite = std::max(p.sup_infinite, v);
            continue;
        }
        if (v == 0.0) continue;
        p.log_values.push_back(std::log(v));
        p.exponents.push_back(d.exponents[k]);
        p.weights.push_back(w);
        p.p_min = std::min(p.p_min, d.exponents[k]);
        p.p_max = std::max(p.p_max, d.exponents[k]);
    }
    return p;
}

// ρ(f/λ) + sup_{R_∞} |f|/λ
double constraint(const Prepared& p, double lambda) {
    const double ll = std::log(lambda);
    double s = 0.0;
    for (std::size_t k = 0; k < p.log_values.size(); ++k)
        s += p.weights[k] * std::exp(p.exponents[k] * (p.log_values[k] - ll));
    if (p.sup_infinite > 0.0) s += p.sup_infinite / lambda;
    return std::isnan(s) ? kInfinity : s;
}

}  // namespace

double modular(const ModularData& data) {
    double s = 0.0;
    for (std::size_t k = 0; k < data.values.size(); ++k) {
        const double e = data.exponents[k];
        const double v = std::abs(data.values[k]);
        if (std::isinf(e) || v == 0.0) continue;
        s += data.weights[k] * std::exp(e * std::log(v));
    }
    return std::isnan(s) ? kInfinity : s;
}

double modular(const GridFunction& f, const ExponentFunction& p) {
    const auto e = p.sample(f.grid());
    return modular(ModularData{f.values(), e, f.grid().quadrature_weights()});
}

NormResult luxemburg_norm(const ModularData& data, const NormOptions& opts) {
    const Prepared p = prepare(data);
    NormResult r;
    if (p.log_values.empty() && p.sup_infinite == 0.0) return r;

    if (p.sup_infinite == 0.0) {
        const double rho = constraint(p, 1.0);
        if (std::isfinite(rho) && rho > 0.0) {
            if (p.p_min == p.p_max) {
                r.value = std::pow(rho, 1.0 / p.p_min);
                r.modular_at_value = constraint(p, r.value);
                return r;
            }
            // Modular/norm comparison: the norm lies between rho^{1/p+} and rho^{1/p-}.
            const double a = std::pow(rho, 1.0 / p.p_min);
            const double b = std::pow(rho, 1.0 / p.p_max);
            double lo = std::min(a, b) * (1.0 - 1e-12);
            double hi = std::max(a, b) * (1.0 + 1e-12);
            if (constraint(p, lo) >= 1.0 && constraint(p, hi) <= 1.0) {
                int it = 0;
                while (hi - lo > opts.tolerance * hi) {
                    const double mid = hi / lo > 2.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    (constraint(p, mid) <= 1.0 ? hi : lo) = mid;
                    if (++it > opts.max_iterations) throw NormError("norm bisection did not converge", lo, hi);
                }
                r.value = hi;
                r.bisection_iterations = it;
                r.bracket_width = hi - lo;
                r.modular_at_value = constraint(p, hi);
                return r;
            }
        }
    }

    // Generic bracket: start at max|f|(1 + |box|), double up, halve down.
    double hi = std::max(p.max_value, 1e-300) * (1.0 + p.measure);
    int it = 0;
    while (constraint(p, hi) > 1.0) {
        hi *= 2.0;
        if (++it > opts.max_iterations || !std::isfinite(hi)) throw NormError("norm bracket expansion failed", 0, hi);
    }
    double lo = hi;
    while (constraint(p, lo) <= 1.0) {
        lo *= 0.5;
        if (++it > opts.max_iterations || !(lo > 0.0)) throw NormError("norm bracket contraction failed", lo, hi);
    }
    while (hi - lo > opts.tolerance * hi) {
        const double mid = hi / lo > 2.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (constraint(p, mid) <= 1.0 ? hi : lo) = mid;
        if (++it > opts.max_iterations) throw NormError("norm bisection did not converge", lo, hi);
    }
    r.value = hi;
    r.bisection_iterations = it;
    r.bracket_width = hi - lo;
    r.modular_at_value = constraint(p, hi);
    return r;
}

NormResult luxemburg_norm(const GridFunction& f, const ExponentFunction& p, const NormOptions& opts) {
    const auto e = p.sample(f.grid());
    return luxemburg_norm(ModularData{f.values(), e, f.grid().quadrature_weights()}, opts);
}

NormResult weighted_norm(const GridFunction& f, const Weight& w, const ExponentFunction& p, const NormOptions& opts) {
    if (!(f.grid() == w.grid())) throw WeightError("function and weight live on different grids");
    std::vector<double> fw(f.size());
    for (std::size_t k = 0; k < fw.size(); ++k) fw[k] = std::abs(f[k]) * w.values()[k];
    const auto e = p.sample(f.grid());
    return luxemburg_norm(ModularData{fw, e, f.grid().quadrature_weights()}, opts);
}

DualPairing dual_pairing_bound(const GridFunction& f, const GridFunction& h, const ExponentFunction& p,
                               const NormOptions& opts) {
    if (!(f.grid() == h.grid())) throw FieldError("pairing functions live on different grids");
    std::vector<double> prod(f.size());
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = f[k] * h[k];
    DualPairing d;
    d.pairing = integrate(f.grid(), prod);
    d.holder_budget = p.is_constant() ? 1.0 + kConstantHolderSlack : kVariableHolderBudget;
    const double nf = luxemburg_norm(f, p, opts).value;
    const double nh = luxemburg_norm(h, conjugate(p), opts).value;
    d.bound = d.holder_budget * nf * nh;
    d.ratio = d.bound > 0.0 ? d.pairing / d.bound : 0.0;
    return d;
}

}  // namespace vls
