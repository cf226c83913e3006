#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vls/exponent.hpp"
#include "vls/field.hpp"
#include "vls/norm.hpp"
#include "vls/operators.hpp"
#include "vls/planner.hpp"
#include "vls/rdf.hpp"
#include "vls/weight.hpp"
#include "vls/weights.hpp"

namespace vls {

class HarnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProbeRecipe { steps, bumps, random_piecewise, oscillatory, constants };

std::string to_string(ProbeRecipe r);
ProbeRecipe probe_recipe_from_string(const std::string& name);

struct ProbeSpec {
    std::vector<ProbeRecipe> recipes{ProbeRecipe::steps};
    int count = 20;  // per recipe
    std::uint64_t seed = 20240601;
};

// Grid-independent probe: the same seed yields the same shape on every grid.
struct ProbeShape {
    std::function<double(const Point&)> fn;
    std::string tag;
};

std::vector<ProbeShape> make_probe_shapes(const ProbeSpec& spec, const Box& box);

struct ProbeFamily {
    std::vector<GridFunction> probes;
    std::vector<std::string> tags;
    std::uint64_t seed = 0;
};

ProbeFamily rasterize_probes(const std::vector<ProbeShape>& shapes, const Grid& grid, std::uint64_t seed);
ProbeFamily make_probes(const ProbeSpec& spec, const Grid& grid);

struct ProbeRow {
    std::string stage;
    int resolution = 0;
    std::size_t probe = 0;
    std::string tag;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    bool skipped = false;
};

struct ObligationCheck {
    std::string obligation;
    std::string method;
    std::vector<int> resolutions;
    std::vector<double> trend;
    std::string verdict;
    bool passed = false;
};

inline constexpr double kStabilityTolerance = 0.10;

struct VerificationReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<ProbeRow> rows;
    double best_constant = 0.0;
    std::vector<int> resolutions;
    std::vector<double> trend;
    double stability_tolerance = kStabilityTolerance;
    std::string verdict = "stable";
    std::vector<ObligationCheck> obligations;
    std::vector<nlohmann::json> plans;
    std::vector<std::string> warnings;
    std::vector<std::string> errors;

    // 0 all pass, 1 warnings, 2 errors
    int exit_code() const;
    void merge(const VerificationReport& other);
};

// |t_k / t_{k-1} - 1| <= tol for the last refinement step.
bool is_stable(const std::vector<double>& trend, double tolerance = kStabilityTolerance);

struct InequalityRequest {
    std::string scenario = "inequality";
    OperatorSpec op;
    ProbeSpec probes;
    ExponentFunction p = ExponentFunction::constant(2.0, Box::interval(0.0, 1.0));
    // Target exponent for off-diagonal operators; derived for I_α and M_α when unset.
    std::optional<ExponentFunction> q;
    WeightFactory weight;
    Box box = Box::interval(0.0, 1.0);
    std::vector<int> resolutions{128, 256};
    NormOptions norm;
    double stability_tolerance = kStabilityTolerance;
};

// Ratios ||T f||_{q,w} / ||f||_{p,w}; for M# the reversed ||f||_{p,w} / ||M# f||_{p,w}.
VerificationReport verify_norm_inequality(const InequalityRequest& request);

// Ratios ||(Σ (M f_k)^q)^{1/q} w||_p / ||(Σ |f_k|^q)^{1/q} w||_p, one per list.
VerificationReport vector_valued_check(const std::vector<std::vector<GridFunction>>& lists, double q,
                                       const ExponentFunction& p, const Weight& w, const OperatorHandle& m,
                                       const NormOptions& opts = {1e-13, 400});

// Instantiates an exponent expression against the scenario's p and q.
ExponentFunction instantiate_exponent(const ExponentExpr& e, const ExponentFunction& p,
                                      const std::optional<ExponentFunction>& q);

struct PlanRequest {
    std::string scenario;
    std::map<std::string, XRational> values;
    std::string mode = "weighted";
};

ExtrapolationPlan build_plan(const PlanRequest& request);

struct WeightSpec {
    std::string kind = "unit";  // unit | power | file
    double a = 0.0;
    std::string path;
};

WeightFactory make_weight_factory(const WeightSpec& spec);

struct VectorValuedSpec {
    double q = 2.0;
    int list_size = 5;
    int lists = 4;
    int duplicates = 3;
};

struct ScenarioConfig {
    int schema_version = 1;
    std::string name;
    std::optional<Box> box;
    std::vector<int> resolutions;
    std::vector<int> class_resolutions{64, 128, 256};
    BallPolicy policy = BallPolicy::all_pairs;
    std::optional<ExponentFunction> p;
    std::optional<ExponentFunction> q;
    WeightSpec weight;
    std::optional<OperatorSpec> op;
    std::vector<PlanRequest> plans;
    ProbeSpec probes;
    std::optional<VectorValuedSpec> vector_valued;
    double stability_tolerance = kStabilityTolerance;
    NormOptions norm;
    std::string csv_path;
    std::string json_path;
};

VerificationReport run_scenario(const ScenarioConfig& config);

// One row per probe.
void write_report_csv(const VerificationReport& report, const std::string& path);
nlohmann::json report_summary(const VerificationReport& report);
void write_report_json(const VerificationReport& report, const std::string& path);

inline constexpr const char* kReportCsvHeader = "scenario,stage,resolution,probe,tag,numerator,denominator,ratio,status";

}  // namespace vls
