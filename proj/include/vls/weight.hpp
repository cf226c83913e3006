#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vls/field.hpp"

namespace vls {

class WeightError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Positive weight sampled on a grid. Both w and w^{-1} are stored so that
// inversion is exact: w.inverse().inverse() has bitwise the values of w.
class Weight {
public:
    enum class Kind { grid, power };

    static Weight from_values(const Grid& grid, std::vector<double> values, std::string label = "grid");
    static Weight from_function(const GridFunction& f, std::string label = "grid");
    static Weight unit(const Grid& grid);
    // |x|^{-a}. The node at the origin takes the cell average of |x|^{-a}
    // (exact in 1-D, equal-area disk in 2-D); for a >= n it takes (h/2)^{-a}.
    static Weight power(const Grid& grid, double a);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return *values_; }
    std::span<const double> inverse_values() const { return *inverse_; }
    std::size_t size() const { return values_->size(); }

    Kind kind() const { return kind_; }
    // For power weights, the a in |x|^{-a} (tracked through pow and inverse).
    double power_exponent() const { return a_; }
    std::string describe() const { return label_; }

    Weight inverse() const;
    // Pointwise w^s on the stored node values.
    Weight pow(double s) const;
    GridFunction as_function() const { return GridFunction(grid_, *values_); }

    std::optional<double> cached_constant(const std::string& key) const;
    void cache_constant(const std::string& key, double value) const;

private:
    struct Cache {
        std::mutex mutex;
        std::map<std::string, double> entries;
    };

    Weight(Grid grid, std::shared_ptr<const std::vector<double>> values,
           std::shared_ptr<const std::vector<double>> inverse, Kind kind, double a, std::string label);

    Grid grid_;
    std::shared_ptr<const std::vector<double>> values_;
    std::shared_ptr<const std::vector<double>> inverse_;
    Kind kind_;
    double a_;
    std::string label_;
    std::shared_ptr<Cache> cache_;
};

// Pointwise product.
Weight operator*(const Weight& a, const Weight& b);

}  // namespace vls
