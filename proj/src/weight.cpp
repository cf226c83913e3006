#include "vls/weight.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace vls {

namespace {

std::shared_ptr<const std::vector<double>> reciprocals(const std::vector<double>& v) {
    auto inv = std::make_shared<std::vector<double>>(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double r = 1.0 / v[k];
        if (!std::isfinite(r) || !(r > 0.0)) throw WeightError("weight not locally invertible");
        (*inv)[k] = r;
    }
    return inv;
}

void check_positive(const std::vector<double>& v) {
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x)) throw WeightError("weight must be strictly positive and finite");
}

}  // namespace

Weight::Weight(Grid grid, std::shared_ptr<const std::vector<double>> values,
               std::shared_ptr<const std::vector<double>> inverse, Kind kind, double a, std::string label)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      inverse_(std::move(inverse)),
      kind_(kind),
      a_(a),
      label_(std::move(label)),
      cache_(std::make_shared<Cache>()) {}

Weight Weight::from_values(const Grid& grid, std::vector<double> values, std::string label) {
    if (values.size() != grid.size()) throw WeightError("weight size does not match grid");
    check_positive(values);
    auto inv = reciprocals(values);
    return Weight(grid, std::make_shared<const std::vector<double>>(std::move(values)), std::move(inv), Kind::grid,
                  0.0, std::move(label));
}

Weight Weight::from_function(const GridFunction& f, std::string label) {
    return from_values(f.grid(), std::vector<double>(f.values().begin(), f.values().end()), std::move(label));
}

Weight Weight::unit(const Grid& grid) {
    auto ones = std::make_shared<const std::vector<double>>(grid.size(), 1.0);
    return Weight(grid, ones, ones, Kind::power, 0.0, "1");
}

Weight Weight::power(const Grid& grid, double a) {
    if (!std::isfinite(a)) throw WeightError("power weight exponent must be finite");
    if (a == 0.0) return unit(grid);
    const int n = grid.dimension();
    const double h = n == 1 ? grid.spacing(0) : std::min(grid.spacing(0), grid.spacing(1));
    double origin_value = 0.0;
    if (a < n) {
        if (n == 1) {
            origin_value = std::pow(h / 2.0, -a) / (1.0 - a);
        } else {
            const double rho = std::sqrt(grid.spacing(0) * grid.spacing(1) / std::numbers::pi);
            origin_value = 2.0 * std::pow(rho, -a) / (2.0 - a);
        }
    } else {
        origin_value = std::pow(h / 2.0, -a);
    }
    std::vector<double> v(grid.size());
    const double origin_radius = 1e-9 * h;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double r = grid.norm_of_node(k);
        v[k] = r < origin_radius ? origin_value : std::pow(r, -a);
    }
    check_positive(v);
    auto inv = reciprocals(v);
    std::ostringstream os;
    os << "|x|^" << -a;
    return Weight(grid, std::make_shared<const std::vector<double>>(std::move(v)), std::move(inv), Kind::power, a,
                  os.str());
}

Weight Weight::inverse() const {
    std::ostringstream os;
    os << "(" << label_ << ")^-1";
    return Weight(grid_, inverse_, values_, kind_, -a_, kind_ == Kind::power ? os.str() : label_ + "^-1");
}

Weight Weight::pow(double s) const {
    if (s == 1.0) return *this;
    if (s == -1.0) return inverse();
    std::vector<double> v(values_->size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::pow((*values_)[k], s);
    check_positive(v);
    auto inv = reciprocals(v);
    std::ostringstream os;
    os << "(" << label_ << ")^" << s;
    return Weight(grid_, std::make_shared<const std::vector<double>>(std::move(v)), std::move(inv), kind_, a_ * s,
                  os.str());
}

std::optional<double> Weight::cached_constant(const std::string& key) const {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->entries.find(key);
    if (it == cache_->entries.end()) return std::nullopt;
    return it->second;
}

void Weight::cache_constant(const std::string& key, double value) const {
    std::lock_guard lock(cache_->mutex);
    cache_->entries[key] = value;
}

Weight operator*(const Weight& a, const Weight& b) {
    if (!(a.grid() == b.grid())) throw WeightError("weights live on different grids");
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values()[k] * b.values()[k];
    return Weight::from_values(a.grid(), std::move(v), "(" + a.describe() + ")*(" + b.describe() + ")");
}

}  // namespace vls
