#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "vls/field.hpp"

namespace vls {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ExponentFamily { constant, affine, sine, step, log_holder_model, custom, derived };

std::string to_string(ExponentFamily family);

class ExponentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A measurable exponent p(.) on a box, with values in (0, inf]. Infinity is an
// ordinary IEEE value here and marks the region R^n_inf. Immutable; copies share state.
class ExponentFunction {
public:
    using Evaluator = std::function<double(const Point&)>;

    static ExponentFunction constant(double value, const Box& box);
    // offset + slope . x
    static ExponentFunction affine(double offset, Point slope, const Box& box);
    // base + amplitude * sin(frequency * x0)
    static ExponentFunction sine(double base, double amplitude, double frequency, const Box& box);
    // left for x0 < jump_at, right for x0 >= jump_at; either side may be infinite.
    static ExponentFunction step(double left, double right, double jump_at, const Box& box);
    // p_inf + c_inf / log(e + |x|)
    static ExponentFunction log_holder_model(double p_inf, double c_inf, const Box& box);
    static ExponentFunction custom(Evaluator fn, const Box& box, std::string label);

    double operator()(const Point& x) const;
    bool is_infinite_at(const Point& x) const;

    const Box& domain() const;
    double p_minus() const;
    double p_plus() const;
    bool is_constant() const { return p_minus() == p_plus(); }
    // P rather than P_0: the Luxemburg functional is a norm only when p_- >= 1.
    bool is_norm_exponent() const { return p_minus() >= 1.0; }

    ExponentFamily family() const;
    const std::vector<double>& parameters() const;
    std::string describe() const;

    std::vector<double> sample(const Grid& grid) const;

    // The exponent this one was conjugated from, if any.
    const ExponentFunction* conjugate_source() const;

private:
    struct State;
    explicit ExponentFunction(std::shared_ptr<const State> s) : state_(std::move(s)) {}
    static ExponentFunction make(ExponentFamily family, std::vector<double> params, Evaluator fn, const Box& box,
                                 std::string label, double p_minus, double p_plus,
                                 std::shared_ptr<const ExponentFunction> conj_source = nullptr);
    static ExponentFunction make_sampled(ExponentFamily family, std::vector<double> params, Evaluator fn,
                                         const Box& box, std::string label);

    friend ExponentFunction conjugate(const ExponentFunction& p);
    friend ExponentFunction derive(const ExponentFunction& p, std::function<double(double)> map, double lo,
                                   double hi, std::string label);

    std::shared_ptr<const State> state_;
};

// 1/p + 1/p' = 1 with 1' = inf and inf' = 1. Involution: conjugate(conjugate(p)) is p itself.
double conjugate_value(double p);
ExponentFunction conjugate(const ExponentFunction& p);

// Pointwise map of an exponent with an explicitly supplied cached range [lo, hi].
ExponentFunction derive(const ExponentFunction& p, std::function<double(double)> map, double lo, double hi,
                        std::string label);

struct EssentialRange {
    double p_minus;
    double p_plus;
};

// Min and max of p over a uniform sample of region ∩ domain.
EssentialRange essential_range(const ExponentFunction& p, const Box& region, int resolution = 1025);

struct LogHolderEstimate {
    int resolution = 0;
    double c0 = 0.0;
    double c_inf = 0.0;
    double p_inf = 0.0;  // value at the farthest sample point: a proxy on a bounded box
    bool p_inf_is_proxy = true;
    bool is_lh = true;
};

LogHolderEstimate lh_constants(const ExponentFunction& p, int resolution = 257);

struct LogHolderRefinement {
    std::array<LogHolderEstimate, 3> levels;
    // C0 grew by at least the threshold at every level: the sampled modulus is not log-Hölder.
    bool diverging = false;
    double growth_threshold = 0.10;
};

LogHolderRefinement lh_refinement(const ExponentFunction& p, int base_resolution = 129);

enum class ExponentTransform { divide_by, conjugate_of_quotient, multiply_by };

ExponentFunction transform(const ExponentFunction& p, ExponentTransform kind, double scale);

// 1/q = 1/p - alpha/n, the Sobolev target exponent of I_alpha.
ExponentFunction sobolev_target(const ExponentFunction& p, double alpha, int dimension);

}  // namespace vls
