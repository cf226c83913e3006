#include "vls/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vls {

struct ExponentFunction::State {
    ExponentFamily family;
    std::vector<double> params;
    Evaluator fn;
    Box box;
    std::string label;
    double p_minus;
    double p_plus;
    std::shared_ptr<const ExponentFunction> conj_source;
};

std::string to_string(ExponentFamily family) {
    switch (family) {
        case ExponentFamily::constant: return "constant";
        case ExponentFamily::affine: return "affine";
        case ExponentFamily::sine: return "sine";
        case ExponentFamily::step: return "step";
        case ExponentFamily::log_holder_model: return "log-holder-model";
        case ExponentFamily::custom: return "custom";
        case ExponentFamily::derived: return "derived";
    }
    return "unknown";
}

double conjugate_value(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return kInfinity;
    if (p < 1.0) throw ExponentError("conjugate exponent undefined for p < 1");
    return p / (p - 1.0);
}

ExponentFunction ExponentFunction::make(ExponentFamily family, std::vector<double> params, Evaluator fn,
                                        const Box& box, std::string label, double p_minus, double p_plus,
                                        std::shared_ptr<const ExponentFunction> conj_source) {
    box.validate();
    if (!(p_minus > 0.0) || std::isnan(p_plus) || p_plus < p_minus)
        throw ExponentError("exponent range must satisfy 0 < p_- <= p_+");
    auto s = std::make_shared<State>(State{family, std::move(params), std::move(fn), box, std::move(label), p_minus,
                                           p_plus, std::move(conj_source)});
    return ExponentFunction(std::move(s));
}

namespace {

template <class F>
void for_each_sample(const Box& box, int resolution, F&& visit) {
    const Grid g(box, resolution);
    for (std::size_t k = 0; k < g.size(); ++k) visit(g.node(k));
}

}  // namespace

ExponentFunction ExponentFunction::make_sampled(ExponentFamily family, std::vector<double> params, Evaluator fn,
                                                const Box& box, std::string label) {
    double lo = kInfinity;
    double hi = -kInfinity;
    for_each_sample(box, box.dimension == 1 ? 4097 : 257, [&](const Point& x) {
        const double v = fn(x);
        if (std::isnan(v) || !(v > 0.0)) throw ExponentError("exponent evaluator returned a value <= 0");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    });
    return make(family, std::move(params), std::move(fn), box, std::move(label), lo, hi);
}

ExponentFunction ExponentFunction::constant(double value, const Box& box) {
    if (!(value > 0.0)) throw ExponentError("constant exponent must be positive");
    std::ostringstream os;
    os << "constant(" << value << ")";
    return make(ExponentFamily::constant, {value}, [value](const Point&) { return value; }, box, os.str(), value,
                value);
}

ExponentFunction ExponentFunction::affine(double offset, Point slope, const Box& box) {
    box.validate();
    if (box.dimension == 1) slope[1] = 0.0;
    auto fn = [offset, slope](const Point& x) { return offset + slope[0] * x[0] + slope[1] * x[1]; };
    double lo = kInfinity;
    double hi = -kInfinity;
    for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < (box.dimension == 2 ? 2 : 1); ++cy) {
            const Point corner{cx ? box.hi[0] : box.lo[0], cy ? box.hi[1] : box.lo[1]};
            const double v = fn(corner);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    std::ostringstream os;
    os << "affine(" << offset << ", " << slope[0];
    if (box.dimension == 2) os << ", " << slope[1];
    os << ")";
    return make(ExponentFamily::affine, {offset, slope[0], slope[1]}, fn, box, os.str(), lo, hi);
}

ExponentFunction ExponentFunction::sine(double base, double amplitude, double frequency, const Box& box) {
    std::ostringstream os;
    os << "sine(" << base << ", " << amplitude << ", " << frequency << ")";
    return make_sampled(ExponentFamily::sine, {base, amplitude, frequency},
                        [=](const Point& x) { return base + amplitude * std::sin(frequency * x[0]); }, box,
                        os.str());
}

ExponentFunction ExponentFunction::step(double left, double right, double jump_at, const Box& box) {
    box.validate();
    if (!(left > 0.0) || !(right > 0.0)) throw ExponentError("step exponent values must be positive");
    double lo = 0.0;
    double hi = 0.0;
    if (jump_at <= box.lo[0]) {
        lo = hi = right;
    } else if (jump_at > box.hi[0]) {
        lo = hi = left;
    } else {
        lo = std::min(left, right);
        hi = std::max(left, right);
    }
    std::ostringstream os;
    os << "step(" << left << ", " << right << ", " << jump_at << ")";
    return make(ExponentFamily::step, {left, right, jump_at},
                [=](const Point& x) { return x[0] < jump_at ? left : right; }, box, os.str(), lo, hi);
}

ExponentFunction ExponentFunction::log_holder_model(double p_inf, double c_inf, const Box& box) {
    std::ostringstream os;
    os << "log-holder-model(" << p_inf << ", " << c_inf << ")";
    const int dim = box.dimension;
    return make_sampled(ExponentFamily::log_holder_model, {p_inf, c_inf},
                        [=](const Point& x) {
                            const double r = dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
                            return p_inf + c_inf / std::log(std::numbers::e + r);
                        },
                        box, os.str());
}

ExponentFunction ExponentFunction::custom(Evaluator fn, const Box& box, std::string label) {
    return make_sampled(ExponentFamily::custom, {}, std::move(fn), box, std::move(label));
}

double ExponentFunction::operator()(const Point& x) const { return state_->fn(x); }
bool ExponentFunction::is_infinite_at(const Point& x) const { return std::isinf(state_->fn(x)); }
const Box& ExponentFunction::domain() const { return state_->box; }
double ExponentFunction::p_minus() const { return state_->p_minus; }
double ExponentFunction::p_plus() const { return state_->p_plus; }
ExponentFamily ExponentFunction::family() const { return state_->family; }
const std::vector<double>& ExponentFunction::parameters() const { return state_->params; }
std::string ExponentFunction::describe() const { return state_->label; }
const ExponentFunction* ExponentFunction::conjugate_source() const { return state_->conj_source.get(); }

std::vector<double> ExponentFunction::sample(const Grid& grid) const {
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = state_->fn(grid.node(k));
    return out;
}

ExponentFunction conjugate(const ExponentFunction& p) {
    if (const ExponentFunction* src = p.conjugate_source()) return *src;
    if (p.p_minus() < 1.0) throw ExponentError("conjugate exponent undefined for p_- < 1");
    auto source = std::make_shared<const ExponentFunction>(p);
    auto fn = [source](const Point& x) { return conjugate_value((*source)(x)); };
    return ExponentFunction::make(ExponentFamily::derived, {}, fn, p.domain(), "conjugate(" + p.describe() + ")",
                                  conjugate_value(p.p_plus()), conjugate_value(p.p_minus()), source);
}

ExponentFunction derive(const ExponentFunction& p, std::function<double(double)> map, double lo, double hi,
                        std::string label) {
    auto base = std::make_shared<const ExponentFunction>(p);
    auto fn = [base, map = std::move(map)](const Point& x) { return map((*base)(x)); };
    return ExponentFunction::make(ExponentFamily::derived, {}, fn, p.domain(), std::move(label), lo, hi);
}

EssentialRange essential_range(const ExponentFunction& p, const Box& region, int resolution) {
    const Box& dom = p.domain();
    if (region.dimension != dom.dimension) throw ExponentError("degenerate region");
    Box cut = dom;
    for (int a = 0; a < dom.dimension; ++a) {
        cut.lo[a] = std::max(dom.lo[a], region.lo[a]);
        cut.hi[a] = std::min(dom.hi[a], region.hi[a]);
        if (!(cut.lo[a] < cut.hi[a])) throw ExponentError("degenerate region");
    }
    EssentialRange r{kInfinity, -kInfinity};
    for_each_sample(cut, resolution, [&](const Point& x) {
        const double v = p(x);
        r.p_minus = std::min(r.p_minus, v);
        r.p_plus = std::max(r.p_plus, v);
    });
    return r;
}

LogHolderEstimate lh_constants(const ExponentFunction& p, int resolution) {
    const Grid g(p.domain(), resolution);
    const auto vals = p.sample(g);
    std::vector<std::size_t> finite;
    for (std::size_t k = 0; k < vals.size(); ++k)
        if (std::isfinite(vals[k])) finite.push_back(k);

    LogHolderEstimate est;
    est.resolution = resolution;
    if (finite.empty()) return est;

    std::vector<Point> pts(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) pts[k] = g.node(k);
    auto dist = [&](std::size_t a, std::size_t b) {
        return g.dimension() == 1 ? std::abs(pts[a][0] - pts[b][0])
                                  : std::hypot(pts[a][0] - pts[b][0], pts[a][1] - pts[b][1]);
    };

    for (std::size_t ia = 0; ia < finite.size(); ++ia)
        for (std::size_t ib = ia + 1; ib < finite.size(); ++ib) {
            const std::size_t a = finite[ia];
            const std::size_t b = finite[ib];
            const double d = dist(a, b);
            if (!(d > 0.0) || d >= 0.5) continue;
            est.c0 = std::max(est.c0, std::abs(vals[a] - vals[b]) * -std::log(d));
        }

    std::size_t far = finite.front();
    for (std::size_t k : finite)
        if (g.norm_of_node(k) > g.norm_of_node(far)) far = k;
    est.p_inf = vals[far];
    for (std::size_t k : finite)
        est.c_inf = std::max(est.c_inf, std::abs(vals[k] - est.p_inf) * std::log(std::numbers::e + g.norm_of_node(k)));
    est.is_lh = std::isfinite(est.c0) && std::isfinite(est.c_inf);
    return est;
}

LogHolderRefinement lh_refinement(const ExponentFunction& p, int base_resolution) {
    LogHolderRefinement out;
    int n = base_resolution;
    for (auto& level : out.levels) {
        level = lh_constants(p, n);
        n *= 2;
    }
    bool grows = out.levels[0].c0 > 0.0;
    for (std::size_t k = 0; k + 1 < out.levels.size(); ++k)
        grows = grows && out.levels[k + 1].c0 >= (1.0 + out.growth_threshold) * out.levels[k].c0;
    out.diverging = grows;
    return out;
}

ExponentFunction transform(const ExponentFunction& p, ExponentTransform kind, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ExponentError("invalid scale");
    std::ostringstream os;
    switch (kind) {
        case ExponentTransform::divide_by:
            os << "(" << p.describe() << ")/" << scale;
            return derive(p, [scale](double v) { return v / scale; }, p.p_minus() / scale, p.p_plus() / scale,
                          os.str());
        case ExponentTransform::multiply_by:
            os << scale << "*(" << p.describe() << ")";
            return derive(p, [scale](double v) { return v * scale; }, p.p_minus() * scale, p.p_plus() * scale,
                          os.str());
        case ExponentTransform::conjugate_of_quotient: {
            if (p.p_minus() / scale < 1.0) throw ExponentError("(p/s)' undefined: p_-/s < 1");
            os << "((" << p.describe() << ")/" << scale << ")'";
            return derive(p, [scale](double v) { return conjugate_value(v / scale); },
                          conjugate_value(p.p_plus() / scale), conjugate_value(p.p_minus() / scale), os.str());
        }
    }
    throw ExponentError("unknown transform");
}

ExponentFunction sobolev_target(const ExponentFunction& p, double alpha, int dimension) {
    const double ratio = alpha / dimension;
    if (!(alpha > 0.0) || !(alpha < dimension)) throw ExponentError("0 < alpha < n required");
    if (!(p.p_plus() < dimension / alpha)) throw ExponentError("p_+ < n/alpha required");
    auto target = [ratio](double v) { return 1.0 / (1.0 / v - ratio); };
    std::ostringstream os;
    os << "sobolev(" << p.describe() << ", " << alpha << ")";
    return derive(p, target, target(p.p_minus()), target(p.p_plus()), os.str());
}

}  // namespace vls
