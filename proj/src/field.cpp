#include "vls/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace vls {

namespace {

// Index slack when snapping real coordinates to node indices.
constexpr double kIndexSlack = 1e-9;

}  // namespace

Box Box::interval(double lo, double hi) {
    Box b;
    b.dimension = 1;
    b.lo = {lo, 0.0};
    b.hi = {hi, 0.0};
    b.validate();
    return b;
}

Box Box::square(double lo0, double hi0, double lo1, double hi1) {
    Box b;
    b.dimension = 2;
    b.lo = {lo0, lo1};
    b.hi = {hi0, hi1};
    b.validate();
    return b;
}

void Box::validate() const {
    if (dimension != 1 && dimension != 2) throw FieldError("box dimension must be 1 or 2");
    for (int a = 0; a < dimension; ++a) {
        if (!(lo[a] < hi[a]) || !std::isfinite(lo[a]) || !std::isfinite(hi[a]))
            throw FieldError("box requires finite lo < hi on every axis");
    }
}

double Box::measure() const {
    double m = 1.0;
    for (int a = 0; a < dimension; ++a) m *= hi[a] - lo[a];
    return m;
}

double Box::diameter() const {
    double s = 0.0;
    for (int a = 0; a < dimension; ++a) s += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    return std::sqrt(s);
}

bool Box::contains(const Point& x, double slack) const {
    for (int a = 0; a < dimension; ++a) {
        if (x[a] < lo[a] - slack || x[a] > hi[a] + slack) return false;
    }
    return true;
}

bool operator==(const Box& a, const Box& b) {
    if (a.dimension != b.dimension) return false;
    for (int k = 0; k < a.dimension; ++k) {
        if (a.lo[k] != b.lo[k] || a.hi[k] != b.hi[k]) return false;
    }
    return true;
}

Grid::Grid(Box box, int resolution) : box_(box), resolution_(resolution) {
    box_.validate();
    if (resolution < 2) throw FieldError("grid resolution must be at least 2");
    size_ = box_.dimension == 1 ? static_cast<std::size_t>(resolution)
                                : static_cast<std::size_t>(resolution) * resolution;
    for (int a = 0; a < box_.dimension; ++a) spacing_[a] = (box_.hi[a] - box_.lo[a]) / (resolution - 1);

    std::vector<double> axis(resolution);
    for (int i = 0; i < resolution; ++i) axis[i] = (i == 0 || i == resolution - 1) ? 0.5 : 1.0;
    auto w = std::make_shared<std::vector<double>>(size_);
    if (box_.dimension == 1) {
        for (int i = 0; i < resolution; ++i) (*w)[i] = axis[i] * spacing_[0];
    } else {
        for (int j = 0; j < resolution; ++j)
            for (int i = 0; i < resolution; ++i)
                (*w)[flat_index(i, j)] = axis[i] * axis[j] * spacing_[0] * spacing_[1];
    }
    weights_ = std::move(w);
}

Point Grid::node(std::size_t flat) const {
    const int i = static_cast<int>(flat % resolution_);
    const int j = static_cast<int>(flat / resolution_);
    Point p{box_.lo[0] + i * spacing_[0], 0.0};
    // Pin the last node to hi exactly so endpoint evaluations are exact.
    if (i == resolution_ - 1) p[0] = box_.hi[0];
    if (box_.dimension == 2) {
        p[1] = (j == resolution_ - 1) ? box_.hi[1] : box_.lo[1] + j * spacing_[1];
    }
    return p;
}

double Grid::norm_of_node(std::size_t flat) const {
    const Point p = node(flat);
    return box_.dimension == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
}

bool operator==(const Grid& a, const Grid& b) {
    return a.resolution() == b.resolution() && a.box() == b.box();
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, SignMode mode)
    : grid_(std::move(grid)), values_(std::move(values)), mode_(mode) {
    if (values_.size() != grid_.size()) throw FieldError("grid function size does not match grid");
    for (double v : values_) {
        if (!std::isfinite(v)) throw FieldError("grid function values must be finite");
        if (mode_ == SignMode::nonnegative && v < 0.0)
            throw FieldError("nonnegative grid function has a negative value");
    }
}

GridFunction GridFunction::constant(const Grid& grid, double value) {
    return GridFunction(grid, std::vector<double>(grid.size(), value),
                        value < 0.0 ? SignMode::sign_free : SignMode::nonnegative);
}

GridFunction GridFunction::abs() const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return std::abs(x); });
    return GridFunction(grid_, std::move(v), SignMode::nonnegative);
}

GridFunction GridFunction::scaled(double factor) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [factor](double x) { return factor * x; });
    const SignMode m = (mode_ == SignMode::nonnegative && factor >= 0.0) ? SignMode::nonnegative : SignMode::sign_free;
    return GridFunction(grid_, std::move(v), m);
}

double GridFunction::sup_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool GridFunction::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double integrate(const Grid& grid, std::span<const double> values) {
    const auto w = grid.quadrature_weights();
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * values[k];
    return s;
}

double integrate(const GridFunction& f) { return integrate(f.grid(), f.values()); }

void write_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FieldError("cannot open " + path + " for writing");
    const Grid& g = f.grid();
    out << (g.dimension() == 1 ? "x,value\n" : "x,y,value\n");
    out << std::setprecision(17);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point p = g.node(k);
        out << p[0] << ',';
        if (g.dimension() == 2) out << p[1] << ',';
        out << f[k] << '\n';
    }
}

namespace {

// Node indices i with lo + i*h in [a, b], clipped to the grid.
bool index_range(double a, double b, double lo, double h, int n, int& first, int& last) {
    first = static_cast<int>(std::ceil((a - lo) / h - kIndexSlack));
    last = static_cast<int>(std::floor((b - lo) / h + kIndexSlack));
    first = std::max(first, 0);
    last = std::min(last, n - 1);
    return first <= last;
}

}  // namespace

std::vector<NodeSpan> rasterize(const Grid& grid, const Ball& ball) {
    std::vector<NodeSpan> out;
    const Box& box = grid.box();
    const int n = grid.resolution();
    const double r = ball.radius;
    if (grid.dimension() == 1) {
        int a = 0;
        int b = 0;
        if (index_range(ball.center[0] - r, ball.center[0] + r, box.lo[0], grid.spacing(0), n, a, b))
            out.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b) + 1});
        return out;
    }
    int j0 = 0;
    int j1 = 0;
    if (!index_range(ball.center[1] - r, ball.center[1] + r, box.lo[1], grid.spacing(1), n, j0, j1)) return out;
    for (int j = j0; j <= j1; ++j) {
        const double dy = box.lo[1] + j * grid.spacing(1) - ball.center[1];
        const double rem = r * r - dy * dy;
        const double half = rem > 0.0 ? std::sqrt(rem) : 0.0;
        // Rows that only graze the disk within slack still count as touching at the center column.
        if (rem < -kIndexSlack * r * r) continue;
        int i0 = 0;
        int i1 = 0;
        if (index_range(ball.center[0] - half, ball.center[0] + half, box.lo[0], grid.spacing(0), n, i0, i1)) {
            out.push_back({grid.flat_index(i0, j), grid.flat_index(i1, j) + 1});
        }
    }
    return out;
}

std::string to_string(BallPolicy policy) {
    switch (policy) {
        case BallPolicy::all_pairs: return "all-pairs";
        case BallPolicy::dyadic_radii: return "dyadic-radii";
        case BallPolicy::centered_only: return "centered-only";
    }
    return "unknown";
}

BallPolicy ball_policy_from_string(const std::string& name) {
    if (name == "all-pairs") return BallPolicy::all_pairs;
    if (name == "dyadic-radii") return BallPolicy::dyadic_radii;
    if (name == "centered-only") return BallPolicy::centered_only;
    throw FieldError("unknown ball policy '" + name + "'");
}

BallFamily::BallFamily(Grid grid, std::vector<Ball> balls, BallPolicy policy)
    : grid_(std::move(grid)), balls_(std::move(balls)), policy_(policy) {
    const auto w = grid_.quadrature_weights();
    offsets_.reserve(balls_.size() + 1);
    offsets_.push_back(0);
    measures_.reserve(balls_.size());
    for (const Ball& b : balls_) {
        if (!(b.radius > 0.0)) throw FieldError("ball radius must be positive");
        auto sp = rasterize(grid_, b);
        double m = 0.0;
        for (const NodeSpan& s : sp)
            for (std::size_t k = s.begin; k < s.end; ++k) m += w[k];
        if (sp.empty() || !(m > 0.0)) throw FieldError("ball below resolution");
        spans_.insert(spans_.end(), sp.begin(), sp.end());
        offsets_.push_back(spans_.size());
        measures_.push_back(m);
    }
}

std::size_t BallFamily::member_count(std::size_t k) const {
    std::size_t c = 0;
    for (const NodeSpan& s : spans(k)) c += s.end - s.begin;
    return c;
}

bool BallFamily::covers_grid() const {
    std::vector<char> hit(grid_.size(), 0);
    for (std::size_t b = 0; b < balls_.size(); ++b)
        for (const NodeSpan& s : spans(b))
            for (std::size_t k = s.begin; k < s.end; ++k) hit[k] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

std::string BallFamily::id() const {
    std::ostringstream os;
    os << to_string(policy_) << "/d" << grid_.dimension() << "/n" << grid_.resolution() << "/b" << balls_.size();
    return os.str();
}

namespace {

std::vector<double> dyadic_radii(const Grid& grid) {
    const double h = grid.dimension() == 1 ? grid.spacing(0) : std::min(grid.spacing(0), grid.spacing(1));
    const double diam = grid.box().diameter();
    std::vector<double> radii;
    for (double r = h; r < diam; r *= 2.0) radii.push_back(r);
    if (radii.empty()) radii.push_back(h);
    return radii;
}

std::vector<double> pair_distances_2d(const Grid& grid) {
    const int n = grid.resolution();
    const double hx = grid.spacing(0);
    const double hy = grid.spacing(1);
    const double diam = grid.box().diameter();
    std::set<double> d;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == 0 && j == 0) continue;
            const double r = std::hypot(i * hx, j * hy);
            if (r <= diam) d.insert(r);
        }
    return {d.begin(), d.end()};
}

}  // namespace

BallFamily enumerate_balls(const Grid& grid, BallPolicy policy) {
    std::vector<Ball> balls;
    const int n = grid.resolution();
    if (policy == BallPolicy::all_pairs) {
        if (grid.dimension() == 1) {
            balls.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    const double xa = grid.node(a)[0];
                    const double xb = grid.node(b)[0];
                    balls.push_back({{0.5 * (xa + xb), 0.0}, 0.5 * (xb - xa)});
                }
        } else {
            const auto radii = pair_distances_2d(grid);
            for (std::size_t k = 0; k < grid.size(); ++k)
                for (double r : radii) balls.push_back({grid.node(k), r});
        }
    } else {
        const auto radii = dyadic_radii(grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            for (double r : radii) balls.push_back({grid.node(k), r});
    }
    return BallFamily(grid, std::move(balls), policy);
}

double average_on_ball(const GridFunction& f, const Ball& ball) {
    const auto spans = rasterize(f.grid(), ball);
    const auto w = f.grid().quadrature_weights();
    double num = 0.0;
    double den = 0.0;
    for (const NodeSpan& s : spans)
        for (std::size_t k = s.begin; k < s.end; ++k) {
            num += w[k] * f[k];
            den += w[k];
        }
    if (!(den > 0.0)) throw FieldError("ball below resolution");
    return num / den;
}

}  // namespace vls
