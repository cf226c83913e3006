#include "vls/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vls {

std::string to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::hardy_littlewood: return "hardy-littlewood";
        case OperatorKind::fractional_maximal: return "fractional-maximal";
        case OperatorKind::riesz_potential: return "riesz-potential";
        case OperatorKind::sharp_maximal: return "sharp-maximal";
        case OperatorKind::hilbert_1d: return "hilbert-1d";
    }
    return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& name) {
    for (auto k : {OperatorKind::hardy_littlewood, OperatorKind::fractional_maximal, OperatorKind::riesz_potential,
                   OperatorKind::sharp_maximal, OperatorKind::hilbert_1d})
        if (to_string(k) == name) return k;
    throw OperatorError("unknown operator kind '" + name + "'");
}

std::string OperatorSpec::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == OperatorKind::fractional_maximal || kind == OperatorKind::riesz_potential) os << "(alpha=" << alpha << ")";
    if (kind == OperatorKind::hilbert_1d) os << "(eps=" << epsilon_in_spacings << "h)";
    return os.str();
}

namespace {

void check_alpha(double alpha, int n) {
    if (!(alpha > 0.0) || !(alpha < n)) throw OperatorError("0 < alpha < n required");
}

void check_same_grid(const GridFunction& f, const BallFamily& balls) {
    if (!(f.grid() == balls.grid())) throw OperatorError("function and ball family live on different grids");
}

SignMode output_mode(const GridFunction& f) { return f.sign_mode(); }

// Shared loop of the three supremum-type operators: out[x] = max(node_term(x), max_{B ∋ x} ball_term(B)).
template <class NodeTerm, class BallTerm>
std::vector<double> ball_supremum(const GridFunction& f, const BallFamily& balls, NodeTerm node_term,
                                  BallTerm ball_term) {
    check_same_grid(f, balls);
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = node_term(k);
    std::vector<char> hit(f.size(), 0);
    const bool centered = balls.policy() == BallPolicy::centered_only;
    const Grid& g = balls.grid();
    for (std::size_t b = 0; b < balls.size(); ++b) {
        const double value = ball_term(b);
        if (centered) {
            // Nearest node to the center.
            const Point c = balls.ball(b).center;
            const int i = static_cast<int>(std::lround((c[0] - g.box().lo[0]) / g.spacing(0)));
            const int j = g.dimension() == 2 ? static_cast<int>(std::lround((c[1] - g.box().lo[1]) / g.spacing(1))) : 0;
            const std::size_t k = g.flat_index(i, j);
            out[k] = std::max(out[k], value);
            hit[k] = 1;
            continue;
        }
        for (const NodeSpan& s : balls.spans(b))
            for (std::size_t k = s.begin; k < s.end; ++k) {
                out[k] = std::max(out[k], value);
                hit[k] = 1;
            }
    }
    if (!std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; }))
        throw OperatorError("ball family does not cover grid");
    return out;
}

double ball_average(std::span<const double> values, std::span<const double> w, const BallFamily& balls,
                    std::size_t b) {
    double s = 0.0;
    for (const NodeSpan& sp : balls.spans(b))
        for (std::size_t k = sp.begin; k < sp.end; ++k) s += w[k] * values[k];
    return s / balls.measure(b);
}

}  // namespace

OperatorHandle OperatorHandle::maximal(BallFamily balls) {
    OperatorHandle h;
    h.kind = OperatorKind::hardy_littlewood;
    h.balls = std::move(balls);
    return h;
}

OperatorHandle OperatorHandle::fractional_maximal(double alpha, BallFamily balls) {
    check_alpha(alpha, balls.grid().dimension());
    OperatorHandle h;
    h.kind = OperatorKind::fractional_maximal;
    h.alpha = alpha;
    h.balls = std::move(balls);
    return h;
}

OperatorHandle OperatorHandle::riesz_potential(double alpha, const Grid& grid) {
    check_alpha(alpha, grid.dimension());
    OperatorHandle h;
    h.kind = OperatorKind::riesz_potential;
    h.alpha = alpha;
    return h;
}

OperatorHandle OperatorHandle::sharp_maximal(BallFamily balls) {
    OperatorHandle h;
    h.kind = OperatorKind::sharp_maximal;
    h.balls = std::move(balls);
    return h;
}

OperatorHandle OperatorHandle::hilbert(double epsilon, const Grid& grid) {
    if (grid.dimension() != 1) throw OperatorError("hilbert-1d requires a 1-D grid");
    if (!(epsilon >= grid.spacing(0) * (1.0 - 1e-12))) throw OperatorError("hilbert truncation must be >= spacing");
    OperatorHandle h;
    h.kind = OperatorKind::hilbert_1d;
    h.epsilon = epsilon;
    return h;
}

OperatorHandle instantiate(const OperatorSpec& spec, const Grid& grid) {
    switch (spec.kind) {
        case OperatorKind::hardy_littlewood: return OperatorHandle::maximal(enumerate_balls(grid, spec.policy));
        case OperatorKind::fractional_maximal:
            return OperatorHandle::fractional_maximal(spec.alpha, enumerate_balls(grid, spec.policy));
        case OperatorKind::riesz_potential: return OperatorHandle::riesz_potential(spec.alpha, grid);
        case OperatorKind::sharp_maximal: return OperatorHandle::sharp_maximal(enumerate_balls(grid, spec.policy));
        case OperatorKind::hilbert_1d: return OperatorHandle::hilbert(spec.epsilon_in_spacings * grid.spacing(0), grid);
    }
    throw OperatorError("unknown operator kind");
}

GridFunction apply_maximal(const GridFunction& f, const BallFamily& balls) {
    const GridFunction a = f.abs();
    const auto w = f.grid().quadrature_weights();
    auto out = ball_supremum(
        a, balls, [&](std::size_t k) { return a[k]; },
        [&](std::size_t b) { return ball_average(a.values(), w, balls, b); });
    return GridFunction(f.grid(), std::move(out));
}

GridFunction apply_fractional_maximal(const GridFunction& f, double alpha, const BallFamily& balls) {
    const int n = f.grid().dimension();
    check_alpha(alpha, n);
    const GridFunction a = f.abs();
    const auto w = f.grid().quadrature_weights();
    const double e = alpha / n;
    auto out = ball_supremum(
        a, balls, [&](std::size_t k) { return std::pow(w[k], e) * a[k]; },
        [&](std::size_t b) { return std::pow(balls.measure(b), e) * ball_average(a.values(), w, balls, b); });
    return GridFunction(f.grid(), std::move(out));
}

GridFunction apply_sharp_maximal(const GridFunction& f, const BallFamily& balls) {
    const auto w = f.grid().quadrature_weights();
    const auto v = f.values();
    auto out = ball_supremum(
        f, balls, [](std::size_t) { return 0.0; },
        [&](std::size_t b) {
            const double mean = ball_average(v, w, balls, b);
            double s = 0.0;
            for (const NodeSpan& sp : balls.spans(b))
                for (std::size_t k = sp.begin; k < sp.end; ++k) s += w[k] * std::abs(v[k] - mean);
            return s / balls.measure(b);
        });
    return GridFunction(f.grid(), std::move(out));
}

GridFunction apply_riesz_potential(const GridFunction& f, double alpha) {
    const Grid& g = f.grid();
    const int n = g.dimension();
    check_alpha(alpha, n);
    const auto w = g.quadrature_weights();
    const std::size_t size = g.size();
    std::vector<Point> pts(size);
    for (std::size_t k = 0; k < size; ++k) pts[k] = g.node(k);

    // Kernel integrated over the node's own cell, f frozen there.
    std::vector<double> diag(size);
    for (std::size_t k = 0; k < size; ++k) {
        if (n == 1) {
            const int i = static_cast<int>(k);
            const double left = i > 0 ? 0.5 * g.spacing(0) : 0.0;
            const double right = i + 1 < g.resolution() ? 0.5 * g.spacing(0) : 0.0;
            diag[k] = (std::pow(left, alpha) + std::pow(right, alpha)) / alpha;
        } else {
            const double rho = std::sqrt(w[k] / std::numbers::pi);
            diag[k] = 2.0 * std::numbers::pi * std::pow(rho, alpha) / alpha;
        }
    }
    const double e = alpha - n;
    std::vector<double> out(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
        double s = f[i] * diag[i];
        for (std::size_t j = 0; j < size; ++j) {
            if (j == i || f[j] == 0.0) continue;
            const double d = n == 1 ? std::abs(pts[i][0] - pts[j][0])
                                    : std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            s += w[j] * f[j] * std::pow(d, e);
        }
        out[i] = s;
    }
    return GridFunction(g, std::move(out), output_mode(f));
}

GridFunction apply_hilbert(const GridFunction& f, double epsilon) {
    const Grid& g = f.grid();
    if (g.dimension() != 1) throw OperatorError("hilbert-1d requires a 1-D grid");
    const double h = g.spacing(0);
    if (!(epsilon >= h * (1.0 - 1e-12))) throw OperatorError("hilbert truncation must be >= spacing");
    const auto w = g.quadrature_weights();
    const long n = g.resolution();
    // |x_i - x_j| > ε  ⇔  |i - j| > m
    const long m = static_cast<long>(std::floor(epsilon / h + 1e-9));
    std::vector<double> out(n, 0.0);
    for (long i = 0; i < n; ++i) {
        const double xi = g.node(i)[0];
        double s = 0.0;
        for (long j = 0; j < n; ++j) {
            if (std::labs(i - j) <= m || f[j] == 0.0) continue;
            s += w[j] * f[j] / (xi - g.node(j)[0]);
        }
        out[i] = s / std::numbers::pi;
    }
    return GridFunction(g, std::move(out), SignMode::sign_free);
}

GridFunction apply(const OperatorHandle& op, const GridFunction& f) {
    auto need_balls = [&]() -> const BallFamily& {
        if (!op.balls) throw OperatorError("operator requires a ball family");
        return *op.balls;
    };
    switch (op.kind) {
        case OperatorKind::hardy_littlewood: return apply_maximal(f, need_balls());
        case OperatorKind::fractional_maximal: return apply_fractional_maximal(f, op.alpha, need_balls());
        case OperatorKind::riesz_potential: return apply_riesz_potential(f, op.alpha);
        case OperatorKind::sharp_maximal: return apply_sharp_maximal(f, need_balls());
        case OperatorKind::hilbert_1d: return apply_hilbert(f, op.epsilon);
    }
    throw OperatorError("unknown operator kind");
}

OperatorNormEstimate estimate_operator_norm(const OperatorHandle& op, const ExponentFunction& p, const Weight& w,
                                            std::span<const GridFunction> probes, const NormOptions& opts) {
    if (probes.empty()) throw OperatorError("empty probe family");
    OperatorNormEstimate est;
    for (const GridFunction& f : probes) {
        const double den = weighted_norm(f, w, p, opts).value;
        if (!(den > 0.0) || !std::isfinite(den)) {
            ++est.skipped;
            continue;
        }
        const double num = weighted_norm(apply(op, f), w, p, opts).value;
        est.ratios.push_back(num / den);
        est.value = std::max(est.value, num / den);
    }
    if (est.ratios.empty()) throw OperatorError("all probes have zero norm");
    return est;
}

}  // namespace vls
