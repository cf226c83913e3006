#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vls/exponent.hpp"
#include "vls/field.hpp"
#include "vls/norm.hpp"
#include "vls/operators.hpp"
#include "vls/weight.hpp"

namespace vls {

class RdFError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RdFConfig {
    double operator_norm_bound = 1.0;
    int max_terms = 20;
    // Absolute; when unset, 1e-10 * sup h.
    std::optional<double> tail_tolerance;
    double alpha = 1.0;
    double beta = 0.0;
    // True when operator_norm_bound came from probes rather than a proof.
    bool bound_is_estimated = true;

    void validate() const;
};

// Probe estimates are lower bounds; the default bound doubles them.
double default_norm_bound(double probe_estimate);

struct RdFResult {
    GridFunction value;
    // sup of each included term M^k h / (2B)^k, k = 0..terms-1
    std::vector<double> term_sups;
    int terms = 0;
    // M applied to the last included term: the pointwise remainder in M(Rh) <= 2B Rh.
    GridFunction slack;
    double bound = 1.0;
};

RdFResult rdf_iterate(const GridFunction& h, const OperatorHandle& m, const RdFConfig& cfg);

// (R(h^α w^β))^{1/α} w^{-β/α}
RdFResult rdf_general(const GridFunction& h, const Weight& w, const OperatorHandle& m, const RdFConfig& cfg);

struct NormContext {
    ExponentFunction exponent;
    Weight weight;
    GridFunction h;
};

struct A1PropertyReport {
    bool pointwise_holds = false;
    double max_excess = 0.0;  // max of M(Rh) - 2B Rh - slack
    double a1_constant = 0.0;
    double bound = 0.0;       // 2B
    bool a1_within_bound = false;
    // Norm property, only when a context is given.
    std::optional<double> rh_norm;
    std::optional<double> h_norm;
    std::optional<bool> norm_holds;
    std::string norm_status;  // "proved-bound", "conditional" or "skipped"
};

A1PropertyReport verify_a1_property(const RdFResult& rh, const OperatorHandle& m, const BallFamily& balls,
                                    const std::optional<NormContext>& norm = std::nullopt,
                                    bool bound_is_estimated = true);

}  // namespace vls
