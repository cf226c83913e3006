#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "vls/exponent.hpp"
#include "vls/field.hpp"
#include "vls/weight.hpp"

namespace vls {

struct NormOptions {
    double tolerance = 1e-10;  // relative bracket width
    int max_iterations = 400;
};

struct NormResult {
    double value = 0.0;
    int bisection_iterations = 0;
    double bracket_width = 0.0;
    double modular_at_value = 0.0;
};

class NormError : public std::runtime_error {
public:
    NormError(const std::string& what, double lo, double hi) : std::runtime_error(what), lo_(lo), hi_(hi) {}
    double bracket_lo() const { return lo_; }
    double bracket_hi() const { return hi_; }

private:
    double lo_;
    double hi_;
};

// Raw data for one modular evaluation: |f| values, exponents and quadrature
// weights over the same nodes. Exponent entries may be +inf.
struct ModularData {
    std::span<const double> values;
    std::span<const double> exponents;
    std::span<const double> weights;
};

// ∫ |f|^{p(x)} over the finite-exponent nodes, with 0^p = 0. Returns +inf on overflow.
double modular(const ModularData& data);
double modular(const GridFunction& f, const ExponentFunction& p);

// The Luxemburg functional inf{λ > 0 : ρ(f/λ) + ||f/λ||_{L^∞(R^n_∞)} <= 1}.
NormResult luxemburg_norm(const ModularData& data, const NormOptions& opts = {});
NormResult luxemburg_norm(const GridFunction& f, const ExponentFunction& p, const NormOptions& opts = {});

// ||f||_{L^{p(.)}(w)} = ||f w||_{p(.)}
NormResult weighted_norm(const GridFunction& f, const Weight& w, const ExponentFunction& p,
                         const NormOptions& opts = {});

struct DualPairing {
    double pairing = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    double holder_budget = 1.0;
};

inline constexpr double kVariableHolderBudget = 4.0;
inline constexpr double kConstantHolderSlack = 1e-9;

// ∫ f h against K ||f||_{p} ||h||_{p'}.
DualPairing dual_pairing_bound(const GridFunction& f, const GridFunction& h, const ExponentFunction& p,
                               const NormOptions& opts = {});

}  // namespace vls
