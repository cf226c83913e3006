#include <doctest.h>

#include <cmath>

#include "vls/exponent.hpp"

using namespace vls;

TEST_CASE("conjugate exponents") {
    const Box b = Box::interval(0.0, 1.0);
    const ExponentFunction two = ExponentFunction::constant(2.0, b);
    CHECK(conjugate(two)({0.3, 0.0}) == doctest::Approx(2.0));
    CHECK(std::isinf(conjugate(ExponentFunction::constant(1.0, b))({0.3, 0.0})));
    const ExponentFunction p = ExponentFunction::affine(2.0, {1.0, 0.0}, b);
    CHECK(conjugate(p)({0.5, 0.0}) == doctest::Approx(5.0 / 3.0));
    CHECK(conjugate(conjugate(p))({0.7, 0.0}) == p({0.7, 0.0}));
    CHECK(conjugate_value(kInfinity) == 1.0);
    CHECK_THROWS(conjugate_value(0.5));
}

TEST_CASE("essential range") {
    const Box b = Box::interval(0.0, 1.0);
    const auto c = essential_range(ExponentFunction::constant(3.0, b), b);
    CHECK(c.p_minus == 3.0);
    CHECK(c.p_plus == 3.0);
    const ExponentFunction p = ExponentFunction::affine(2.0, {1.0, 0.0}, b);
    const auto all = essential_range(p, b);
    CHECK(all.p_minus == doctest::Approx(2.0));
    CHECK(all.p_plus == doctest::Approx(3.0));
    const auto part = essential_range(p, Box::interval(0.25, 0.5));
    CHECK(part.p_minus == doctest::Approx(2.25));
    CHECK(part.p_plus == doctest::Approx(2.5));
}

TEST_CASE("log-Hölder diagnostics") {
    const Box b = Box::interval(-2.0, 2.0);
    const auto flat = lh_constants(ExponentFunction::constant(2.0, b));
    CHECK(flat.c0 == 0.0);
    CHECK(flat.c_inf == 0.0);
    CHECK(flat.is_lh);
    const auto smooth = lh_constants(ExponentFunction::sine(2.0, 0.25, 1.0, b));
    CHECK(std::isfinite(smooth.c0));
    CHECK(smooth.is_lh);
    const auto jump = lh_refinement(ExponentFunction::step(2.0, 3.0, 0.0, b));
    CHECK(jump.diverging);
    CHECK(jump.levels[2].c0 > jump.levels[1].c0);
    CHECK(jump.levels[1].c0 > jump.levels[0].c0);
    CHECK_FALSE(lh_refinement(ExponentFunction::sine(2.0, 0.25, 1.0, b)).diverging);
}

TEST_CASE("transforms") {
    const Box b = Box::interval(0.0, 1.0);
    CHECK(transform(ExponentFunction::constant(4.0, b), ExponentTransform::divide_by, 2.0)({0.2, 0.0}) ==
          doctest::Approx(2.0));
    CHECK(transform(ExponentFunction::constant(3.0, b), ExponentTransform::conjugate_of_quotient, 1.0)({0.2, 0.0}) ==
          doctest::Approx(1.5));
    const ExponentFunction p = ExponentFunction::affine(2.0, {1.0, 0.0}, b);
    const ExponentFunction q = transform(p, ExponentTransform::divide_by, 0.5);
    for (double x : {0.0, 0.3, 1.0}) CHECK(q({x, 0.0}) == doctest::Approx(4.0 + 2.0 * x));
    CHECK(q.p_minus() == doctest::Approx(4.0));
    CHECK(q.p_plus() == doctest::Approx(6.0));
    CHECK_THROWS_WITH(transform(p, ExponentTransform::divide_by, 0.0), doctest::Contains("invalid scale"));
    CHECK_THROWS_WITH(transform(p, ExponentTransform::multiply_by, -1.0), doctest::Contains("invalid scale"));
}

TEST_CASE("sobolev target") {
    const Box b = Box::interval(0.0, 1.0);
    const ExponentFunction q = sobolev_target(ExponentFunction::constant(1.5, b), 0.5, 1);
    CHECK(q({0.5, 0.0}) == doctest::Approx(6.0));
    CHECK_THROWS_WITH(sobolev_target(ExponentFunction::constant(2.0, b), 0.5, 1),
                      doctest::Contains("p_+ < n/alpha required"));
}

TEST_CASE("step exponents carry infinity") {
    const Box b = Box::interval(0.0, 2.0);
    const ExponentFunction p = ExponentFunction::step(2.0, kInfinity, 1.0, b);
    CHECK(p.is_infinite_at({1.5, 0.0}));
    CHECK_FALSE(p.is_infinite_at({0.5, 0.0}));
    CHECK(std::isinf(p.p_plus()));
    CHECK(p.p_minus() == 2.0);
}
