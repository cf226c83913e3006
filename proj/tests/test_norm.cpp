#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vls/norm.hpp"
#include "vls/weight.hpp"

using namespace vls;

namespace {

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("modular closed forms") {
    const Box b = Box::interval(0.0, 1.0);
    const Grid g(b, 2001);
    CHECK(modular(GridFunction::constant(g, 1.0), ExponentFunction::constant(2.0, b)) == doctest::Approx(1.0));
    CHECK(modular(GridFunction::constant(g, 2.0), ExponentFunction::constant(3.0, b)) == doctest::Approx(8.0));
    const double m = modular(GridFunction::constant(g, 2.0), ExponentFunction::affine(2.0, {1.0, 0.0}, b));
    CHECK(m == doctest::Approx(4.0 / std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("modular ignores the infinite region") {
    const Box b = Box::interval(0.0, 2.0);
    const Grid g(b, 201);
    const ExponentFunction p = ExponentFunction::step(2.0, kInfinity, 1.0, b);
    const double m = modular(GridFunction::constant(g, 1.0), p);
    CHECK(m == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Luxemburg norm closed forms") {
    const Box b = Box::interval(0.0, 1.0);
    const Grid g(b, 10000);
    const ExponentFunction two = ExponentFunction::constant(2.0, b);
    CHECK(luxemburg_norm(GridFunction::constant(g, 1.0), two).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(luxemburg_norm(GridFunction::from(g, [](const Point& x) { return x[0]; }), two).value ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
    const Box b2 = Box::interval(0.0, 2.0);
    CHECK(luxemburg_norm(GridFunction::constant(Grid(b2, 10000), 1.0), ExponentFunction::constant(2.0, b2)).value ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(luxemburg_norm(GridFunction::constant(g, 0.0), two).value == 0.0);
}

TEST_CASE("infinite region agrees with the lambda scan") {
    const Box b = Box::interval(0.0, 2.0);
    const Grid g(b, 401);
    const ExponentFunction p = ExponentFunction::step(2.0, kInfinity, 1.0, b);
    const GridFunction f = GridFunction::constant(g, 1.0);
    const NormResult r = luxemburg_norm(f, p, {1e-13, 400});
    const double ref = oracle::luxemburg_scan(as_vector(f.values()), p.sample(g), oracle::trapezoid(0.0, 2.0, 401));
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-8));
    CHECK(r.bracket_width <= 1e-13 * r.value * 1.0001);
}

TEST_CASE("variable exponents agree with the lambda scan") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const Box b = Box::interval(-1.0, 1.0);
        const Grid g(b, 129);
        const ExponentFunction p = ExponentFunction::sine(1.5 + 3.0 * u(rng), 0.4, 1.0 + k, b);
        const GridFunction f = GridFunction::from(g, [&](const Point& x) { return 0.1 + std::abs(std::sin(3.0 * x[0] + k)); });
        const double lib = luxemburg_norm(f, p, {1e-13, 400}).value;
        const double ref = oracle::luxemburg_scan(as_vector(f.values()), p.sample(g), oracle::trapezoid(-1.0, 1.0, 129));
        CHECK(lib == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("norm result invariants") {
    const Box b = Box::interval(0.0, 1.0);
    const Grid g(b, 257);
    const ExponentFunction p = ExponentFunction::affine(1.5, {3.0, 0.0}, b);
    const GridFunction f = GridFunction::from(g, [](const Point& x) { return 1.0 + 5.0 * x[0]; });
    const NormResult r = luxemburg_norm(f, p, {1e-10, 400});
    CHECK(r.bracket_width <= 1e-10 * r.value * 1.0001);
    CHECK(std::abs(r.modular_at_value - 1.0) <= 1e-6);
    CHECK(r.bisection_iterations > 0);
}

TEST_CASE("weighted norms") {
    const Box b = Box::interval(0.0, 1.0);
    const Grid g(b, 10000);
    const ExponentFunction two = ExponentFunction::constant(2.0, b);
    const GridFunction one = GridFunction::constant(g, 1.0);
    CHECK(weighted_norm(one, Weight::unit(g), two).value == luxemburg_norm(one, two).value);
    const Weight x = Weight::from_function(GridFunction::from(g, [](const Point& p) { return p[0] + 1e-300; }));
    CHECK(weighted_norm(one, x, two).value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
    const ExponentFunction p = ExponentFunction::affine(2.0, {1.0, 0.0}, b);
    const GridFunction f = GridFunction::from(g, [](const Point& t) { return 0.5 + t[0]; });
    CHECK(weighted_norm(f.scaled(2.0), x, p).value == doctest::Approx(2.0 * weighted_norm(f, x, p).value));
}

TEST_CASE("dual pairing") {
    const Box b = Box::interval(0.0, 1.0);
    const Grid g(b, 10000);
    const ExponentFunction two = ExponentFunction::constant(2.0, b);
    const DualPairing one = dual_pairing_bound(GridFunction::constant(g, 1.0), GridFunction::constant(g, 1.0), two);
    CHECK(one.pairing == doctest::Approx(1.0));
    CHECK(one.ratio <= 1.0 + 1e-9);
    const DualPairing lin = dual_pairing_bound(GridFunction::from(g, [](const Point& x) { return x[0]; }),
                                               GridFunction::from(g, [](const Point& x) { return 1.0 - x[0]; }), two);
    CHECK(lin.pairing == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
    CHECK(lin.pairing / lin.bound * lin.holder_budget == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("dilation on a non-null infinite region follows the sum convention") {
    // p = 2 on [0,1/2], inf on (1/2,1]; f = 1. ||f|| solves t^2/2 + t = 1 with t = 1/λ.
    const Box b = Box::interval(0.0, 1.0);
    const Grid g(b, 4001);
    const ExponentFunction p = ExponentFunction::step(2.0, kInfinity, 0.5, b);
    const GridFunction f = GridFunction::constant(g, 1.0);
    const double norm = luxemburg_norm(f, p, {1e-13, 400}).value;
    CHECK(norm == doctest::Approx((1.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-3));
    // ||f^2||_{p/2} solves t/2 + t = 1, so it is 3/2 rather than norm^2.
    const double sq = luxemburg_norm(f, transform(p, ExponentTransform::divide_by, 2.0), {1e-13, 400}).value;
    CHECK(sq == doctest::Approx(1.5).epsilon(1e-3));
    CHECK(std::abs(sq - norm * norm) > 0.3);
}
