#include "vls/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vls {

std::string to_string(WeightClass cls) {
    switch (cls) {
        case WeightClass::ap: return "A_p";
        case WeightClass::a1: return "A_1";
        case WeightClass::rh: return "RH_s";
        case WeightClass::apvar: return "A_p(.)";
        case WeightClass::apq: return "A_p,q";
        case WeightClass::apqvar: return "A_p(.),q(.)";
    }
    return "unknown";
}

std::string to_string(Verdict v) { return v == Verdict::diverging ? "diverging" : "bounded-looking"; }

ClassSpec ClassSpec::Ap(double p) {
    ClassSpec c;
    c.cls = WeightClass::ap;
    c.p = p;
    c.validate();
    return c;
}

ClassSpec ClassSpec::A1() { return ClassSpec{}; }

ClassSpec ClassSpec::RH(double s) {
    ClassSpec c;
    c.cls = WeightClass::rh;
    c.s = s;
    c.validate();
    return c;
}

ClassSpec ClassSpec::Apvar(ExponentFunction p) {
    ClassSpec c;
    c.cls = WeightClass::apvar;
    c.pvar = std::move(p);
    c.validate();
    return c;
}

ClassSpec ClassSpec::Apq(double p, double q) {
    ClassSpec c;
    c.cls = WeightClass::apq;
    c.p = p;
    c.q = q;
    c.validate();
    return c;
}

ClassSpec ClassSpec::Apqvar(ExponentFunction p, ExponentFunction q, double gamma) {
    ClassSpec c;
    c.cls = WeightClass::apqvar;
    c.pvar = std::move(p);
    c.qvar = std::move(q);
    c.gamma = gamma;
    c.validate();
    return c;
}

void ClassSpec::validate() const {
    switch (cls) {
        case WeightClass::ap:
            if (!(p > 1.0) || !std::isfinite(p)) throw WeightError("A_p requires 1 < p < inf");
            break;
        case WeightClass::a1: break;
        case WeightClass::rh:
            if (!(s > 1.0) || !std::isfinite(s)) throw WeightError("RH_s requires 1 < s < inf");
            break;
        case WeightClass::apvar:
            if (!pvar) throw WeightError("A_p(.) requires an exponent");
            if (!(pvar->p_minus() >= 1.0)) throw WeightError("A_p(.) requires p_- >= 1");
            break;
        case WeightClass::apq:
            if (!(p >= 1.0) || !(q >= p) || !std::isfinite(q)) throw WeightError("A_p,q requires 1 <= p <= q < inf");
            break;
        case WeightClass::apqvar: {
            if (!pvar || !qvar) throw WeightError("A_p(.),q(.) requires two exponents");
            if (!(gamma > 0.0 && gamma < 1.0)) throw WeightError("A_p(.),q(.) requires 0 < gamma < 1");
            if (!(pvar->p_minus() >= 1.0)) throw WeightError("A_p(.),q(.) requires p_- >= 1");
            break;
        }
    }
}

std::string ClassSpec::tag() const { return to_string(cls); }

std::string ClassSpec::key() const {
    std::ostringstream os;
    os.precision(17);
    os << tag() << "[p=" << p << ",q=" << q << ",s=" << s << ",g=" << gamma;
    if (pvar) os << ",p(.)=" << pvar->describe();
    if (qvar) os << ",q(.)=" << qvar->describe();
    os << "]";
    return os.str();
}

Verdict classify_trend(const std::vector<double>& estimates) {
    if (estimates.size() < 2) return Verdict::bounded_looking;
    for (std::size_t k = 1; k < estimates.size(); ++k) {
        if (!std::isfinite(estimates[k])) continue;
        if (!(estimates[k] >= kDivergenceGrowth * estimates[k - 1])) return Verdict::bounded_looking;
    }
    return Verdict::diverging;
}

namespace {

// Per-ball gather of the inputs of a Luxemburg norm.
struct Gather {
    std::vector<double> values;
    std::vector<double> exponents;
    std::vector<double> weights;

    void load(const BallFamily& balls, std::size_t b, std::span<const double> v, std::span<const double> e,
              std::span<const double> qw) {
        values.clear();
        exponents.clear();
        weights.clear();
        for (const NodeSpan& s : balls.spans(b))
            for (std::size_t k = s.begin; k < s.end; ++k) {
                values.push_back(v[k]);
                exponents.push_back(e[k]);
                weights.push_back(qw[k]);
            }
    }
    double norm(const NormOptions& opts) const {
        return luxemburg_norm(ModularData{values, exponents, weights}, opts).value;
    }
};

double ball_mean(const BallFamily& balls, std::size_t b, std::span<const double> qw,
                 const std::function<double(std::size_t)>& g) {
    double s = 0.0;
    for (const NodeSpan& sp : balls.spans(b))
        for (std::size_t k = sp.begin; k < sp.end; ++k) s += qw[k] * g(k);
    return s / balls.measure(b);
}

double ball_min(const BallFamily& balls, std::size_t b, std::span<const double> v) {
    double m = kInfinity;
    for (const NodeSpan& sp : balls.spans(b))
        for (std::size_t k = sp.begin; k < sp.end; ++k) m = std::min(m, v[k]);
    return m;
}

// |B|^{e} ||u χ_B||_{p} ||v χ_B||_{q}
std::vector<double> norm_products(const BallFamily& balls, std::span<const double> u, std::span<const double> pu,
                                  std::span<const double> v, std::span<const double> pv, double e,
                                  const NormOptions& opts) {
    const auto qw = balls.grid().quadrature_weights();
    std::vector<double> out(balls.size());
    Gather g;
    for (std::size_t b = 0; b < balls.size(); ++b) {
        g.load(balls, b, u, pu, qw);
        const double a = g.norm(opts);
        g.load(balls, b, v, pv, qw);
        const double c = g.norm(opts);
        const double m = balls.measure(b);
        out[b] = (a * c) * (e == -1.0 ? 1.0 / m : std::pow(m, e));
    }
    return out;
}

void check_gap(const ExponentFunction& p, const ExponentFunction& q, double gap, const Grid& grid, double tol,
               const char* what) {
    const auto ps = p.sample(grid);
    const auto qs = q.sample(grid);
    for (std::size_t k = 0; k < ps.size(); ++k)
        if (std::abs(1.0 / ps[k] - 1.0 / qs[k] - gap) > tol) throw WeightError(what);
}

}  // namespace

std::vector<double> ball_quantities(const Weight& w, const ClassSpec& spec, const BallFamily& balls,
                                    const NormOptions& opts) {
    spec.validate();
    if (!(w.grid() == balls.grid())) throw WeightError("weight and ball family live on different grids");
    const auto qw = balls.grid().quadrature_weights();
    const auto wv = w.values();
    const auto wi = w.inverse_values();
    std::vector<double> out(balls.size());
    switch (spec.cls) {
        case WeightClass::ap: {
            const double e = 1.0 / (spec.p - 1.0);
            std::vector<double> dual(wi.size());
            for (std::size_t k = 0; k < dual.size(); ++k) dual[k] = std::pow(wi[k], e);
            for (std::size_t b = 0; b < balls.size(); ++b) {
                const double a = ball_mean(balls, b, qw, [&](std::size_t k) { return wv[k]; });
                const double c = ball_mean(balls, b, qw, [&](std::size_t k) { return dual[k]; });
                out[b] = a * std::pow(c, spec.p - 1.0);
            }
            break;
        }
        case WeightClass::a1:
            for (std::size_t b = 0; b < balls.size(); ++b)
                out[b] = ball_mean(balls, b, qw, [&](std::size_t k) { return wv[k]; }) / ball_min(balls, b, wv);
            break;
        case WeightClass::rh: {
            std::vector<double> ws(wv.size());
            for (std::size_t k = 0; k < ws.size(); ++k) ws[k] = std::pow(wv[k], spec.s);
            for (std::size_t b = 0; b < balls.size(); ++b) {
                const double a = ball_mean(balls, b, qw, [&](std::size_t k) { return ws[k]; });
                const double c = ball_mean(balls, b, qw, [&](std::size_t k) { return wv[k]; });
                out[b] = std::pow(a, 1.0 / spec.s) / c;
            }
            break;
        }
        case WeightClass::apvar: {
            const auto ps = spec.pvar->sample(balls.grid());
            const auto pc = conjugate(*spec.pvar).sample(balls.grid());
            out = norm_products(balls, wv, ps, wi, pc, -1.0, opts);
            break;
        }
        case WeightClass::apq: {
            std::vector<double> wq(wv.size());
            for (std::size_t k = 0; k < wq.size(); ++k) wq[k] = std::pow(wv[k], spec.q);
            if (spec.p == 1.0) {
                for (std::size_t b = 0; b < balls.size(); ++b)
                    out[b] = ball_mean(balls, b, qw, [&](std::size_t k) { return wq[k]; }) / ball_min(balls, b, wq);
                break;
            }
            const double pc = conjugate_value(spec.p);
            std::vector<double> dual(wi.size());
            for (std::size_t k = 0; k < dual.size(); ++k) dual[k] = std::pow(wi[k], pc);
            for (std::size_t b = 0; b < balls.size(); ++b) {
                const double a = ball_mean(balls, b, qw, [&](std::size_t k) { return wq[k]; });
                const double c = ball_mean(balls, b, qw, [&](std::size_t k) { return dual[k]; });
                out[b] = std::pow(a, 1.0 / spec.q) * std::pow(c, 1.0 / pc);
            }
            break;
        }
        case WeightClass::apqvar: {
            check_gap(*spec.pvar, *spec.qvar, spec.gamma, balls.grid(), 1e-9, "1/p - 1/q = gamma violated");
            const auto qs = spec.qvar->sample(balls.grid());
            const auto pc = conjugate(*spec.pvar).sample(balls.grid());
            out = norm_products(balls, wv, qs, wi, pc, spec.gamma - 1.0, opts);
            break;
        }
    }
    return out;
}

ClassConstantReport class_constant(const Weight& w, const ClassSpec& spec, const BallFamily& balls,
                                   const NormOptions& opts) {
    ClassConstantReport r;
    r.class_tag = spec.tag();
    r.family_id = balls.id();
    r.resolutions = {balls.grid().resolution()};
    const std::string key = spec.key() + "@" + r.family_id;
    const auto q = ball_quantities(w, spec, balls, opts);
    if (q.empty()) throw WeightError("empty ball family");
    const auto it = std::max_element(q.begin(), q.end());
    r.estimate = *it;
    r.argmax_ball = static_cast<std::size_t>(it - q.begin());
    r.trend = {r.estimate};
    w.cache_constant(key, r.estimate);
    return r;
}

ClassConstantReport class_constant_trend(const WeightFactory& make_weight, const ClassSpec& spec, const Box& box,
                                         const std::vector<int>& resolutions, BallPolicy policy,
                                         const NormOptions& opts) {
    if (resolutions.empty()) throw WeightError("no resolutions given");
    ClassConstantReport r;
    for (int n : resolutions) {
        const Grid grid(box, n);
        const BallFamily balls = enumerate_balls(grid, policy);
        const ClassConstantReport level = class_constant(make_weight(grid), spec, balls, opts);
        r.class_tag = level.class_tag;
        r.family_id = level.family_id;
        r.estimate = level.estimate;
        r.argmax_ball = level.argmax_ball;
        r.trend.push_back(level.estimate);
        r.resolutions.push_back(n);
    }
    r.verdict = classify_trend(r.trend);
    return r;
}

Weight reverse_factorization(const Weight& mu1, const Weight& mu2, double p) {
    if (!(p > 1.0)) throw WeightError("reverse factorization requires p > 1");
    if (!(mu1.grid() == mu2.grid())) throw WeightError("weights live on different grids");
    std::vector<double> v(mu1.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = mu1.values()[k] * std::pow(mu2.values()[k], 1.0 - p);
    return Weight::from_values(mu1.grid(), std::move(v), "mu1*mu2^(1-p)");
}

double jn_exponent(double p, double s) {
    if (!(p > 1.0) || !(s > 1.0) || !std::isfinite(p) || !std::isfinite(s))
        throw WeightError("jn_exponent requires p > 1 and s > 1");
    return s * (p - 1.0) + 1.0;
}

double apq_to_ar(double p, double q) {
    if (!(p >= 1.0) || !(q > p) || !std::isfinite(q)) throw WeightError("apq_to_ar requires 1 <= p < q < inf");
    return 1.0 + q / conjugate_value(p);
}

SigmaCheckReport apqvar_sigma_check(const Weight& w, const ExponentFunction& p, const ExponentFunction& q,
                                    double sigma, const BallFamily& balls, const NormOptions& opts,
                                    double tolerance) {
    if (!(sigma > 1.0) || !std::isfinite(sigma)) throw WeightError("sigma > 1 required");
    const double gap = 1.0 / conjugate_value(sigma);
    check_gap(p, q, gap, balls.grid(), 1e-9, "1/p - 1/q = 1/sigma' violated");

    SigmaCheckReport r;
    r.sigma = sigma;
    const ExponentFunction q_over = transform(q, ExponentTransform::divide_by, sigma);
    {
        const auto qs = q_over.sample(balls.grid());
        const auto ps = p.sample(balls.grid());
        for (std::size_t k = 0; k < qs.size(); ++k)
            r.max_exponent_identity_error =
                std::max(r.max_exponent_identity_error, std::abs(sigma * conjugate_value(qs[k]) - conjugate_value(ps[k])));
    }
    const auto q1 = ball_quantities(w, ClassSpec::Apqvar(p, q, gap), balls, opts);
    const auto q2 = ball_quantities(w.pow(sigma), ClassSpec::Apvar(q_over), balls, opts);
    for (std::size_t b = 0; b < q1.size(); ++b) {
        const double lhs = std::pow(q1[b], sigma);
        r.max_identity_error = std::max(r.max_identity_error, std::abs(q2[b] - lhs) / q2[b]);
    }
    r.apqvar_constant = *std::max_element(q1.begin(), q1.end());
    r.apvar_constant = *std::max_element(q2.begin(), q2.end());
    r.identity_holds = r.max_identity_error <= tolerance && r.max_exponent_identity_error <= 1e-9;
    return r;
}

AinftyWeakerReport ainfty_weaker_check(const Weight& w, const ExponentFunction& p, double s, const BallFamily& balls,
                                       const NormOptions& opts) {
    if (!(s > 0.0 && s < 1.0)) throw WeightError("0 < s < 1 required");
    AinftyWeakerReport r;
    r.s = s;
    const auto base = ball_quantities(w, ClassSpec::Apvar(p), balls, opts);
    const auto scaled =
        ball_quantities(w.pow(s), ClassSpec::Apvar(transform(p, ExponentTransform::divide_by, s)), balls, opts);
    for (std::size_t b = 0; b < base.size(); ++b)
        if (scaled[b] > std::pow(base[b], s) * r.holder_budget * (1.0 + opts.tolerance)) ++r.violations;
    r.base_constant = *std::max_element(base.begin(), base.end());
    r.scaled_constant = *std::max_element(scaled.begin(), scaled.end());
    r.holds = r.violations == 0 && r.scaled_constant <= std::pow(r.base_constant, s) * r.holder_budget;
    return r;
}

AinftyScan ainfty_scan(const WeightFactory& make_weight, const Box& box, const std::vector<int>& resolutions,
                       BallPolicy policy) {
    AinftyScan scan;
    for (double t : scan.exponents) {
        scan.reports.push_back(class_constant_trend(make_weight, ClassSpec::Ap(t), box, resolutions, policy));
        if (scan.reports.back().verdict == Verdict::bounded_looking) {
            scan.member = true;
            break;
        }
    }
    return scan;
}

bool power_weight_admissible(double a, const ExponentFunction& p, int dimension) {
    if (a == 0.0) return true;
    return a > 0.0 && a < dimension / p.p_plus();
}

}  // namespace vls
