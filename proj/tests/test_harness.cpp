#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "vls/config.hpp"
#include "vls/harness.hpp"

using namespace vls;

namespace {

const Box kUnit = Box::interval(0.0, 1.0);

InequalityRequest maximal_request() {
    InequalityRequest r;
    r.op.kind = OperatorKind::hardy_littlewood;
    r.p = ExponentFunction::constant(2.0, kUnit);
    r.box = kUnit;
    r.probes.count = 10;
    r.resolutions = {128, 256};
    return r;
}

std::string config_path(const char* name) { return std::string(VLS_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("probe families are seeded and grid independent") {
    ProbeSpec spec;
    spec.recipes = {ProbeRecipe::steps, ProbeRecipe::bumps, ProbeRecipe::random_piecewise, ProbeRecipe::oscillatory,
                    ProbeRecipe::constants};
    spec.count = 4;
    const Grid coarse(kUnit, 65), fine(kUnit, 129);
    const ProbeFamily a = make_probes(spec, coarse), b = make_probes(spec, coarse), c = make_probes(spec, fine);
    REQUIRE(a.probes.size() == 20);
    for (std::size_t k = 0; k < a.probes.size(); ++k) {
        CHECK(a.tags[k] == b.tags[k]);
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            CHECK(a.probes[k][i] == b.probes[k][i]);
            CHECK(a.probes[k][i] == c.probes[k][2 * i]);
        }
        CHECK_FALSE(a.probes[k].is_zero());
    }
    spec.seed += 1;
    const ProbeFamily d = make_probes(spec, coarse);
    bool differs = false;
    for (std::size_t i = 0; i < coarse.size(); ++i) differs |= d.probes[0][i] != a.probes[0][i];
    CHECK(differs);
    spec.count = 0;
    CHECK_THROWS(make_probes(spec, coarse));
}

TEST_CASE("maximal operator on L^2 is stable and at least 1") {
    const VerificationReport r = verify_norm_inequality(maximal_request());
    CHECK(r.best_constant >= 1.0);
    CHECK(r.best_constant <= 10.0);
    CHECK(r.verdict == "stable");
    CHECK(r.rows.size() == 20);
    CHECK(r.exit_code() == 0);
}

TEST_CASE("best constant grows with the probe family") {
    InequalityRequest r = maximal_request();
    const double small = verify_norm_inequality(r).best_constant;
    r.probes.recipes.push_back(ProbeRecipe::bumps);
    CHECK(verify_norm_inequality(r).best_constant >= small);
}

TEST_CASE("sharp maximal runs reversed and skips constants") {
    InequalityRequest r = maximal_request();
    r.op.kind = OperatorKind::sharp_maximal;
    r.probes.recipes = {ProbeRecipe::steps, ProbeRecipe::constants};
    r.probes.count = 3;
    const VerificationReport rep = verify_norm_inequality(r);
    std::size_t skipped = 0;
    for (const ProbeRow& row : rep.rows)
        if (row.skipped) {
            ++skipped;
            CHECK(row.tag.rfind("constants", 0) == 0);
        }
    CHECK(skipped == 6);
    CHECK_FALSE(rep.warnings.empty());
    CHECK(rep.exit_code() == 1);
}

TEST_CASE("Riesz potential at the Sobolev boundary is rejected") {
    InequalityRequest r = maximal_request();
    r.op.kind = OperatorKind::riesz_potential;
    r.op.alpha = 0.5;
    CHECK_THROWS_WITH(verify_norm_inequality(r), doctest::Contains("p_+ < n/alpha required"));
}

TEST_CASE("vector-valued check") {
    const Grid g(kUnit, 128);
    const OperatorHandle m = OperatorHandle::maximal(enumerate_balls(g, BallPolicy::all_pairs));
    const ExponentFunction p = ExponentFunction::constant(2.0, kUnit);
    const Weight w = Weight::unit(g);
    ProbeSpec spec;
    spec.count = 3;
    const ProbeFamily fam = make_probes(spec, g);
    for (const GridFunction& f : fam.probes) {
        const double single = vector_valued_check({{f}}, 2.0, p, w, m).best_constant;
        const auto est = estimate_operator_norm(m, p, w, std::vector<GridFunction>{f}, {1e-13, 400});
        CHECK(single == doctest::Approx(est.value).epsilon(1e-10));
        const double dup = vector_valued_check({std::vector<GridFunction>(5, f)}, 3.0, p, w, m).best_constant;
        const double one = vector_valued_check({{f}}, 3.0, p, w, m).best_constant;
        CHECK(std::abs(dup - one) <= 1e-10 * one);
    }
    CHECK_THROWS(vector_valued_check({}, 2.0, p, w, m));
    CHECK_THROWS(vector_valued_check({{}}, 2.0, p, w, m));
    CHECK_THROWS(vector_valued_check({{fam.probes[0]}}, 1.0, p, w, m));
}

TEST_CASE("exponent expressions instantiate against p") {
    const ExponentFunction p = ExponentFunction::affine(2.0, {1.0, 0.0}, kUnit);
    ExponentExpr e;
    e.pre_divide = XRational(2);
    e.conjugate = true;
    const ExponentFunction x = instantiate_exponent(e, p, std::nullopt);
    // ((2 + t)/2)' at t = 1 is 3
    CHECK(x({1.0, 0.0}) == doctest::Approx(3.0));
    e.base = 'q';
    CHECK_THROWS(instantiate_exponent(e, p, std::nullopt));
    ExponentExpr sym;
    sym.symbolic_divide = "c";
    CHECK_THROWS(instantiate_exponent(sym, p, std::nullopt));
}

TEST_CASE("plan requests") {
    PlanRequest r{"delta", {{"delta", XRational(1, 2)}}};
    CHECK(build_plan(r).get("q_plus") == XRational(4));
    CHECK_THROWS_WITH(build_plan(PlanRequest{"limited"}), doctest::Contains("requires 'q_minus'"));
    CHECK_THROWS(build_plan(PlanRequest{"bogus"}));
    PlanRequest cr{"constant-reduction", {{"p", XRational(2)}, {"q_minus", XRational(4, 3)}, {"q_plus", XRational(4)}}};
    CHECK(build_plan(cr).notes.front() == "routes agree");
}

TEST_CASE("planner-only scenario") {
    const CliConfig cfg = load_config(config_path("limited_riesz_sigma.cfg"));
    const VerificationReport rep = run_scenario(cfg.scenario);
    CHECK(rep.rows.empty());
    REQUIRE(rep.plans.size() == 2);
    CHECK(rep.plans[0]["parameters"]["sigma"]["num"] == 3);
    CHECK(rep.plans[1]["parameters"]["sigma"]["num"] == 3);
    CHECK(rep.exit_code() == 0);
}

TEST_CASE("weight files") {
    const std::string path = "weights_test.csv";
    {
        std::ofstream out(path);
        out << "# x,w\n0,1\n0.5,3\n1,1\n";
    }
    WeightSpec spec;
    spec.kind = "file";
    spec.path = path;
    const Weight w = make_weight_factory(spec)(Grid(kUnit, 5));
    CHECK(w.values()[1] == doctest::Approx(2.0));
    CHECK(w.values()[2] == doctest::Approx(3.0));
    std::remove(path.c_str());
    spec.path = "missing.csv";
    CHECK_THROWS(make_weight_factory(spec));
}

TEST_CASE("report CSV") {
    const VerificationReport r = verify_norm_inequality(maximal_request());
    const std::string path = "report_test.csv";
    write_report_csv(r, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == kReportCsvHeader);
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == r.rows.size());
    std::remove(path.c_str());
    const nlohmann::json s = report_summary(r);
    CHECK(s["seed"] == r.seed);
    CHECK(s["exit_code"] == 0);
}

TEST_CASE("config validation lists every violation") {
    const nlohmann::json bad = nlohmann::json::parse(R"({
        "schema_version": 1,
        "colour": "red",
        "grid": {"dimension": 3, "resolutions": [1]},
        "planner": {"scenario": "delta", "delta": 0.5},
        "probes": {"recipes": ["spirals"]}
    })");
    try {
        parse_config(bad);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.violations().size() >= 5);
    }
    CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"name": "x"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"schema_version": 2})")), ConfigError);
}

TEST_CASE("bundled configs parse") {
    for (const char* name : {"diag_m_powerweight.cfg", "limited_riesz_sigma.cfg", "norm_const_p2.cfg"})
        CHECK_NOTHROW(load_config(config_path(name)));
    const CliConfig d = load_config(config_path("diag_m_powerweight.cfg"));
    CHECK(d.scenario.weight.kind == "power");
    CHECK(d.scenario.weight.a == 0.125);
    CHECK(d.scenario.p->p_plus() == doctest::Approx(2.25));
    CHECK(power_weight_admissible(d.scenario.weight.a, *d.scenario.p, 1));
}
