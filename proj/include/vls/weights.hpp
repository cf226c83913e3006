#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vls/exponent.hpp"
#include "vls/field.hpp"
#include "vls/norm.hpp"
#include "vls/weight.hpp"

namespace vls {

enum class WeightClass { ap, a1, rh, apvar, apq, apqvar };

std::string to_string(WeightClass cls);

struct ClassSpec {
    WeightClass cls = WeightClass::a1;
    double p = 0.0;
    double q = 0.0;
    double s = 0.0;
    double gamma = 0.0;
    std::optional<ExponentFunction> pvar;
    std::optional<ExponentFunction> qvar;

    static ClassSpec Ap(double p);
    static ClassSpec A1();
    static ClassSpec RH(double s);
    static ClassSpec Apvar(ExponentFunction p);
    static ClassSpec Apq(double p, double q);
    static ClassSpec Apqvar(ExponentFunction p, ExponentFunction q, double gamma);

    std::string tag() const;
    // Cache key; includes the parameters.
    std::string key() const;
    void validate() const;
};

enum class Verdict { bounded_looking, diverging };

std::string to_string(Verdict v);

inline constexpr double kDivergenceGrowth = 1.25;

// Diverging when every consecutive ratio is at least kDivergenceGrowth.
Verdict classify_trend(const std::vector<double>& estimates);

struct ClassConstantReport {
    std::string class_tag;
    double estimate = 0.0;
    std::string family_id;
    std::size_t argmax_ball = 0;
    std::vector<int> resolutions;
    std::vector<double> trend;
    Verdict verdict = Verdict::bounded_looking;
};

// The defining quantity of the class on each ball of the family.
std::vector<double> ball_quantities(const Weight& w, const ClassSpec& spec, const BallFamily& balls,
                                    const NormOptions& opts = {});

ClassConstantReport class_constant(const Weight& w, const ClassSpec& spec, const BallFamily& balls,
                                   const NormOptions& opts = {});

using WeightFactory = std::function<Weight(const Grid&)>;

// class_constant at each resolution on a fresh grid and family; the verdict comes from the trend.
ClassConstantReport class_constant_trend(const WeightFactory& make_weight, const ClassSpec& spec, const Box& box,
                                         const std::vector<int>& resolutions,
                                         BallPolicy policy = BallPolicy::all_pairs, const NormOptions& opts = {});

// μ1 μ2^{1-p}
Weight reverse_factorization(const Weight& mu1, const Weight& mu2, double p);

// τ = s(p-1) + 1
double jn_exponent(double p, double s);

// r = 1 + q/p'
double apq_to_ar(double p, double q);

struct SigmaCheckReport {
    double sigma = 0.0;
    double apqvar_constant = 0.0;
    double apvar_constant = 0.0;  // of w^σ with exponent q/σ
    double max_identity_error = 0.0;  // relative, over balls: |Q2 - Q1^σ| / Q2
    double max_exponent_identity_error = 0.0;  // pointwise |σ (q/σ)' - p'|
    bool identity_holds = false;
};

SigmaCheckReport apqvar_sigma_check(const Weight& w, const ExponentFunction& p, const ExponentFunction& q,
                                    double sigma, const BallFamily& balls, const NormOptions& opts = {},
                                    double tolerance = 1e-6);

struct AinftyWeakerReport {
    double s = 0.0;
    double holder_budget = kVariableHolderBudget;
    double base_constant = 0.0;    // [w]_{A_p}
    double scaled_constant = 0.0;  // [w^s]_{A_{p/s}}
    std::size_t violations = 0;    // balls where Q(w^s) > Q(w)^s K_H
    bool holds = false;
    Verdict verdict = Verdict::bounded_looking;
};

AinftyWeakerReport ainfty_weaker_check(const Weight& w, const ExponentFunction& p, double s, const BallFamily& balls,
                                       const NormOptions& opts = {});

// w ∈ A_t for some t in {1.5, 2, 4, 8}, judged by refinement trends.
struct AinftyScan {
    std::vector<double> exponents{1.5, 2.0, 4.0, 8.0};
    std::vector<ClassConstantReport> reports;
    bool member = false;
};

AinftyScan ainfty_scan(const WeightFactory& make_weight, const Box& box, const std::vector<int>& resolutions,
                       BallPolicy policy = BallPolicy::all_pairs);

// 0 <= a < n/p_+
bool power_weight_admissible(double a, const ExponentFunction& p, int dimension);

}  // namespace vls
