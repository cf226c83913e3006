#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vls/exponent.hpp"
#include "vls/field.hpp"
#include "vls/norm.hpp"
#include "vls/weight.hpp"

namespace vls {

class OperatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OperatorKind { hardy_littlewood, fractional_maximal, riesz_potential, sharp_maximal, hilbert_1d };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

// Grid-independent description; instantiate() binds it to a grid.
struct OperatorSpec {
    OperatorKind kind = OperatorKind::hardy_littlewood;
    double alpha = 0.0;
    // Hilbert truncation in units of grid spacing (2 by default).
    double epsilon_in_spacings = 2.0;
    BallPolicy policy = BallPolicy::all_pairs;

    std::string describe() const;
};

struct OperatorHandle {
    OperatorKind kind = OperatorKind::hardy_littlewood;
    double alpha = 0.0;
    double epsilon = 0.0;
    std::optional<BallFamily> balls;

    static OperatorHandle maximal(BallFamily balls);
    static OperatorHandle fractional_maximal(double alpha, BallFamily balls);
    static OperatorHandle riesz_potential(double alpha, const Grid& grid);
    static OperatorHandle sharp_maximal(BallFamily balls);
    static OperatorHandle hilbert(double epsilon, const Grid& grid);
};

OperatorHandle instantiate(const OperatorSpec& spec, const Grid& grid);

// Uncentered: sup over family balls containing x (and the node's own cell) of ⨍_B |f|.
GridFunction apply_maximal(const GridFunction& f, const BallFamily& balls);
GridFunction apply_fractional_maximal(const GridFunction& f, double alpha, const BallFamily& balls);
GridFunction apply_riesz_potential(const GridFunction& f, double alpha);
GridFunction apply_sharp_maximal(const GridFunction& f, const BallFamily& balls);
// (1/π) ∫_{|x-y|>ε} f(y)/(x-y) dy
GridFunction apply_hilbert(const GridFunction& f, double epsilon);

GridFunction apply(const OperatorHandle& op, const GridFunction& f);

struct OperatorNormEstimate {
    double value = 0.0;  // lower bound on the true operator norm
    std::vector<double> ratios;
    std::size_t skipped = 0;
};

// max over probes of ||(Tf) w||_p / ||f w||_p. Zero-norm probes are skipped.
OperatorNormEstimate estimate_operator_norm(const OperatorHandle& op, const ExponentFunction& p, const Weight& w,
                                            std::span<const GridFunction> probes, const NormOptions& opts = {});

}  // namespace vls
