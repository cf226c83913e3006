#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vls/harness.hpp"

namespace vls {

// Carries every schema violation found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

// polynomial: coefficients c0 + c1 x + ... (first coordinate)
// constant:   value
// indicator:  value on [lo, hi] in the first coordinate, 0 elsewhere
// power:      |x|^a
// sine:       offset + amplitude sin(frequency x)
struct FunctionSpec {
    std::string kind = "constant";
    std::vector<double> coefficients;
    double value = 1.0;
    double lo = 0.0;
    double hi = 1.0;
    double a = 0.0;
    double offset = 0.0;
    double amplitude = 1.0;
    double frequency = 1.0;

    GridFunction rasterize(const Grid& grid) const;
};

struct ClassRequest {
    std::string kind = "A_p(.)";  // A_p, A_1, RH_s, A_p(.)
    double p = 2.0;
    double s = 2.0;
};

struct RdFSpec {
    std::optional<double> norm_bound;
    int max_terms = 20;
    std::optional<double> tail_tolerance;
    double alpha = 1.0;
    double beta = 0.0;
};

struct CliConfig {
    ScenarioConfig scenario;
    std::optional<FunctionSpec> function;
    std::optional<ClassRequest> weight_class;
    std::optional<RdFSpec> rdf;
};

ExponentFunction parse_exponent(const nlohmann::json& j, const Box& box);
CliConfig parse_config(const nlohmann::json& j);
CliConfig load_config(const std::string& path);

}  // namespace vls
