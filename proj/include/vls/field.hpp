#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vls {

using Point = std::array<double, 2>;

// Axis-aligned box in dimension 1 or 2. Unused axis entries are ignored.
struct Box {
    int dimension = 1;
    Point lo{0.0, 0.0};
    Point hi{1.0, 1.0};

    static Box interval(double lo, double hi);
    static Box square(double lo0, double hi0, double lo1, double hi1);

    double measure() const;
    double diameter() const;
    bool contains(const Point& x, double slack = 0.0) const;
    void validate() const;
};

bool operator==(const Box& a, const Box& b);

// Uniform tensor grid over a box. Copies share the node/weight tables.
class Grid {
public:
    Grid(Box box, int resolution);

    int dimension() const { return box_.dimension; }
    int resolution() const { return resolution_; }
    std::size_t size() const { return size_; }
    const Box& box() const { return box_; }
    double spacing(int axis = 0) const { return spacing_[axis]; }

    Point node(std::size_t flat) const;
    std::size_t flat_index(int i, int j = 0) const { return static_cast<std::size_t>(j) * resolution_ + i; }
    double norm_of_node(std::size_t flat) const;

    // Composite-trapezoid weights; weight i is the measure of node i's cell clipped to the box.
    std::span<const double> quadrature_weights() const { return *weights_; }

    Grid with_resolution(int resolution) const { return Grid(box_, resolution); }
    Grid refined() const { return with_resolution(2 * resolution_); }

private:
    Box box_;
    int resolution_;
    std::size_t size_;
    std::array<double, 2> spacing_{};
    std::shared_ptr<const std::vector<double>> weights_;
};

bool operator==(const Grid& a, const Grid& b);

enum class SignMode { nonnegative, sign_free };

class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values, SignMode mode = SignMode::nonnegative);

    template <class F>
    static GridFunction from(const Grid& grid, F&& fn, SignMode mode = SignMode::nonnegative) {
        std::vector<double> v(grid.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.node(k));
        return GridFunction(grid, std::move(v), mode);
    }
    static GridFunction constant(const Grid& grid, double value);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const { return values_.size(); }
    SignMode sign_mode() const { return mode_; }

    GridFunction abs() const;
    GridFunction scaled(double factor) const;
    double sup_abs() const;
    bool is_zero() const;

private:
    Grid grid_;
    std::vector<double> values_;
    SignMode mode_;
};

double integrate(const GridFunction& f);
double integrate(const Grid& grid, std::span<const double> values);

// Writes "x,value" (1-D) or "x,y,value" (2-D) rows.
void write_csv(const GridFunction& f, const std::string& path);

struct Ball {
    Point center{0.0, 0.0};
    double radius = 0.0;
};

// Contiguous run of flat node indices [begin, end).
struct NodeSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Node-membership rasterization: a node is inside when its coordinates are within the radius.
std::vector<NodeSpan> rasterize(const Grid& grid, const Ball& ball);

enum class BallPolicy { all_pairs, dyadic_radii, centered_only };

std::string to_string(BallPolicy policy);
BallPolicy ball_policy_from_string(const std::string& name);

class BallFamily {
public:
    BallFamily(Grid grid, std::vector<Ball> balls, BallPolicy policy);

    const Grid& grid() const { return grid_; }
    BallPolicy policy() const { return policy_; }
    std::size_t size() const { return balls_.size(); }
    const Ball& ball(std::size_t k) const { return balls_[k]; }
    std::span<const Ball> balls() const { return balls_; }

    std::span<const NodeSpan> spans(std::size_t k) const {
        return {spans_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }
    // |B ∩ box| under the quadrature of the grid.
    double measure(std::size_t k) const { return measures_[k]; }
    std::size_t member_count(std::size_t k) const;

    bool covers_grid() const;
    std::string id() const;

private:
    Grid grid_;
    std::vector<Ball> balls_;
    BallPolicy policy_;
    std::vector<NodeSpan> spans_;
    std::vector<std::size_t> offsets_;
    std::vector<double> measures_;
};

BallFamily enumerate_balls(const Grid& grid, BallPolicy policy);

// Weighted mean of f over the member nodes of B (clipped-ball convention).
double average_on_ball(const GridFunction& f, const Ball& ball);

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vls
