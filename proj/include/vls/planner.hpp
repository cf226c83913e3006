#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vls/xrational.hpp"

namespace vls {

// Open interval (lo, hi). lo_clipped marks a lower end raised to 0.
struct Window {
    XRational lo;
    XRational hi;
    bool lo_clipped = false;

    bool contains(const XRational& x) const { return lo < x && x < hi; }
    bool empty() const { return !(lo < hi); }
    std::string str() const;
};

class PlannerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleParameter : public PlannerError {
public:
    InfeasibleParameter(const std::string& what, Window window) : PlannerError(what), window_(std::move(window)) {}
    const Window& window() const { return window_; }

private:
    Window window_;
};

// The requested plan does not apply; `target` names the one that does.
class PlanRedirect : public PlannerError {
public:
    explicit PlanRedirect(std::string target) : PlannerError("use " + target), target_(std::move(target)) {}
    const std::string& target() const { return target_; }

private:
    std::string target_;
};

// ((base / pre_divide)^{conj} ) / post_divide, with base p(.) or q(.).
// `symbolic_divide` is appended for scale factors the planner cannot fix (e.g. "c").
struct ExponentExpr {
    char base = 'p';
    XRational pre_divide{1};
    bool conjugate = false;
    XRational post_divide{1};
    std::string symbolic_divide;

    std::string str() const;
};

struct WeightExpr {
    XRational power{1};
    std::string str() const;
};

enum class ObligationKind { maximal_bounded, weight_class };

struct Obligation {
    ObligationKind kind = ObligationKind::maximal_bounded;
    ExponentExpr exponent;
    WeightExpr weight;

    // "L^{p(·)}(w)" for M-boundedness, "w^{3} ∈ A_{p(·)/(3/4)}" for class membership.
    std::string space() const;
    std::string str() const;
};

Obligation maximal_on(ExponentExpr e, XRational weight_power);
Obligation weight_in_class(XRational weight_power, ExponentExpr e);

struct ExtrapolationPlan {
    std::string scenario;
    std::vector<std::pair<std::string, XRational>> parameters;
    std::vector<Obligation> obligations;
    std::optional<Window> window;
    std::vector<std::string> flags;
    std::vector<std::string> notes;

    bool has(const std::string& name) const;
    const XRational& get(const std::string& name) const;
    void set(const std::string& name, XRational value);
};

ExtrapolationPlan plan_diagonal(const XRational& p0, const XRational& p_minus, const XRational& p_plus,
                                std::optional<XRational> s = std::nullopt,
                                std::optional<XRational> beta1 = std::nullopt);

ExtrapolationPlan plan_offdiagonal(const XRational& p0, const XRational& q0, const XRational& p_minus,
                                   const XRational& q_minus, std::optional<XRational> s = std::nullopt,
                                   std::optional<XRational> beta1 = std::nullopt);

enum class LimitedMode { weighted, unweighted, general };

struct LimitedRequest {
    XRational q_minus;
    XRational q_plus;
    XRational p_minus;
    XRational p_plus;
    std::optional<XRational> p0;
    std::optional<XRational> p_star;
    std::optional<XRational> s;
    std::optional<XRational> beta1;  // only used in general mode
    LimitedMode mode = LimitedMode::weighted;
};

// The open interval p_* must lie in; empty when p_+/p_- >= q_+/q_-.
Window p_star_interval(const XRational& q_minus, const XRational& q_plus, const XRational& p_minus,
                       const XRational& p_plus);

ExtrapolationPlan plan_limited(const LimitedRequest& request);

// Can the two class obligations of a limited plan coincide? Only for constant p.
struct MergeCheck {
    XRational required_p;  // (s α2 - α1)/(α2 - 1)
    bool exponent_constant = false;
    bool mergeable = false;
};

MergeCheck limited_merge_check(const ExtrapolationPlan& limited, const XRational& p_minus, const XRational& p_plus);

struct ConstantReduction {
    XRational p, q_minus, q_plus;
    XRational tau_p;
    XRational alpha1, beta1, alpha2;
    XRational s_route1, beta2_route1;
    XRational s_route2, beta2_route2;
    bool routes_agree = false;
    bool boundary = false;  // p = q_-, τ_p = 1
    bool s_in_window = false;
};

ConstantReduction plan_limited_constant_reduction(const XRational& p, const XRational& q_minus,
                                                  const XRational& q_plus);

ExtrapolationPlan plan_a1(const XRational& p0, const XRational& p_minus);

ExtrapolationPlan plan_ainfty(const XRational& p0, const XRational& s, const XRational& p_minus);

ExtrapolationPlan plan_corollary_delta(const XRational& delta);

ExtrapolationPlan plan_rough_sio(const XRational& r);

ExtrapolationPlan plan_spherical(int n, const XRational& p_minus, const XRational& p_plus);

ExtrapolationPlan plan_riesz_divergence(int n);

// τ = s(p-1)+1
XRational jn_exponent(const XRational& p, const XRational& s);
// r = 1 + q/p'
XRational apq_to_ar(const XRational& p, const XRational& q);
// σ from 1/σ' = 1/p - 1/q
XRational sigma_from_gap(const XRational& p, const XRational& q);

nlohmann::json to_json(const XRational& x);
nlohmann::json to_json(const ExtrapolationPlan& plan);
std::string format_table(const ExtrapolationPlan& plan);

}  // namespace vls
