#include "fraclap/fieldspec.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fraclap/errors.hpp"
#include "fraclap/params.hpp"

#include "expression_corpus.hpp"

using namespace fraclap;

namespace {

const std::vector<std::string>& kCorpus = expression_corpus();

}  // namespace

TEST_CASE("every corpus expression round-trips through the pretty printer", "[fieldspec]") {
  const ProblemParams p{.n = 2};
  for (const auto& text : kCorpus) {
    INFO("expression: " << text);
    const FieldExpr first = parse_expr(text, p);
    const std::string printed = pretty_print(first);
    INFO("printed:    " << printed);
    const FieldExpr second = parse_expr(printed, p);
    CHECK(first == second);
    // And the printer is a fixed point from then on.
    CHECK(pretty_print(second) == printed);
  }
}

TEST_CASE("parsed polynomials match hand-coded evaluation", "[fieldspec]") {
  const ProblemParams p{.n = 2};
  const ScalarField f = parse_field("3*x1^2-2*x1*x2+x2^3-0.5", p);
  CHECK(f.smoothness == Smoothness::smooth);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const Point x{unif(rng), unif(rng)};
    const double direct = 3.0 * x[0] * x[0] - 2.0 * x[0] * x[1] + x[1] * x[1] * x[1] - 0.5;
    CHECK_THAT(f(x), Catch::Matchers::WithinRel(direct, 1e-14) ||
                         Catch::Matchers::WithinAbs(direct, 1e-14));
  }
}

TEST_CASE("constant and named atoms evaluate as documented", "[fieldspec]") {
  const ProblemParams p{.n = 2};

  const ScalarField one = parse_field("1", p);
  CHECK(one(Point{0.0, 0.0}) == 1.0);
  CHECK(one(Point{5.0, -3.0}) == 1.0);
  CHECK(one.support == Support::global);

  const ScalarField d = parse_field("delta", p);
  CHECK_THAT(d(Point{0.25, 0.0}), Catch::Matchers::WithinAbs(0.75, 1e-15));
  CHECK(d(Point{1.5, 0.0}) == 0.0);
  CHECK(d(Point{3.0, 4.0}) == 0.0);

  const ScalarField nrm = parse_field("|x|", p);
  CHECK_THAT(nrm(Point{3.0, 4.0}), Catch::Matchers::WithinAbs(5.0, 1e-15));
}

TEST_CASE("the compact-support combinator flags and enforces its support", "[fieldspec]") {
  const ProblemParams p{.n = 2, .s = 0.75};
  const ScalarField f = parse_field("inside((1-|x|^2)^0.75)", p);
  CHECK(f.support == Support::ball_only);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-0.999, 0.999);
  for (int k = 0; k < 200; ++k) {
    Point x{unif(rng), unif(rng)};
    const double q = 1.0 - x.norm_sq();
    const double direct = q > 0.0 ? std::pow(q, 0.75) : 0.0;
    CHECK_THAT(f(x), Catch::Matchers::WithinAbs(direct, 1e-15));
  }
  CHECK(f(Point{1.2, 0.0}) == 0.0);
  CHECK(f(Point{0.8, 0.8}) == 0.0);
}

TEST_CASE("negative powers of the boundary gap stay total", "[fieldspec]") {
  const ProblemParams p{.n = 2, .s = 0.5};
  const ScalarField f = parse_field("delta^(-0.49)", p);
  CHECK_THAT(f(Point{0.5, 0.0}), Catch::Matchers::WithinRel(std::pow(0.5, -0.49), 1e-15));
  // Outside the ball delta is 0 and the power is +inf; evaluation stays total.
  CHECK(std::isinf(f(Point{2.0, 0.0})));
}

TEST_CASE("operator precedence matches the documented grammar", "[fieldspec]") {
  const ProblemParams p{.n = 2};
  const Point origin{0.0, 0.0};
  auto value = [&](const std::string& text) { return parse_field(text, p)(origin); };

  CHECK(value("1+2*3") == 7.0);
  CHECK(value("2^3^2") == 512.0);   // right-associative
  CHECK(value("-2^2") == -4.0);     // ^ binds tighter than unary -
  CHECK(value("(-2)^2") == 4.0);
  CHECK(value("2^-3") == 0.125);
  CHECK(value("1-2-3") == -4.0);    // left-associative
  CHECK(value("6/3/2") == 1.0);
  CHECK(value("--4") == 4.0);
  CHECK(value("pow(2,10)") == 1024.0);
  CHECK(value("min(3,max(1,2))") == 2.0);
  CHECK(value("abs(2-5)") == 3.0);
  CHECK_THAT(value("exp(1)"), Catch::Matchers::WithinRel(std::exp(1.0), 1e-15));
}

TEST_CASE("parse errors carry positions and never abort", "[fieldspec]") {
  const ProblemParams p{.n = 2};

  auto position_of = [&](const std::string& text) -> std::size_t {
    try {
      (void)parse_expr(text, p);
    } catch (const ParseError& e) {
      return e.position();
    }
    FAIL("expected a parse error for: " << text);
    return static_cast<std::size_t>(-1);
  };

  CHECK(position_of("") == 0);
  CHECK(position_of("1+") == 2);
  CHECK(position_of("(1") == 2);
  CHECK(position_of("1 2") == 2);
  CHECK(position_of("@") == 0);
  CHECK(position_of("|y|") == 0);

  CHECK_THROWS_AS(parse_expr("min(1)", p), ArityError);
  CHECK_THROWS_AS(parse_expr("min(1,2,3)", p), ArityError);
  CHECK_THROWS_AS(parse_expr("exp()", p), ParseError);
  CHECK_THROWS_AS(parse_expr("exp 2", p), ParseError);
  CHECK_THROWS_AS(parse_expr("foo(1)", p), UnknownIdentifierError);
  CHECK_THROWS_AS(parse_expr("x3", p), UnknownIdentifierError);
  CHECK_THROWS_AS(parse_expr("x0+1", p), UnknownIdentifierError);

  // Identifier errors are parse errors too, with a position and suggestions.
  try {
    (void)parse_expr("1+zeta", p);
    FAIL("expected an identifier error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
    CHECK_FALSE(e.expected().empty());
  }

  // Coordinates up to n parse; beyond n they are rejected at parse time.
  const ProblemParams p3{.n = 3};
  CHECK_NOTHROW(parse_expr("x3", p3));
  CHECK_THROWS_AS(parse_expr("x4", p3), UnknownIdentifierError);
}

TEST_CASE("vector fields parse component-wise with arity checks", "[fieldspec]") {
  const ProblemParams p{.n = 2};

  const VectorField drift = parse_vector_field({"0.3", "0"}, p);
  const Point probe{0.4, -0.2};
  CHECK(drift(probe)[0] == 0.3);
  CHECK(drift(probe)[1] == 0.0);
  CHECK_FALSE(drift.identically_zero_hint);

  const VectorField rot = parse_vector_field({"x2", "-x1"}, p);
  const Point q{0.3, 0.4};
  CHECK(rot(q)[0] == 0.4);
  CHECK(rot(q)[1] == -0.3);

  const VectorField none = parse_vector_field({"0", "0.0"}, p);
  CHECK(none.identically_zero_hint);

  CHECK_THROWS_AS(parse_vector_field({"1"}, p), DimensionMismatchError);
  CHECK_THROWS_AS(parse_vector_field({"1", "2", "3"}, p), DimensionMismatchError);
  CHECK_THROWS_AS(parse_vector_field({"x1", "x7"}, p), UnknownIdentifierError);
}
