#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "leafspec/errors.hpp"
#include "leafspec/fredholm.hpp"
#include "leafspec/leafgeom.hpp"
#include "leafspec/operator_expr.hpp"
#include "leafspec/symcalc.hpp"

using namespace leafspec;
using namespace leafspec::symbol;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix scalar(Complex c) { return Matrix::Constant(1, 1, c); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

SymbolContext two_piece_context(Complex a_t, Complex a_s, double p = 2.0, double dm = 0.0,
                                double dp = 0.0) {
  SymbolContext ctx;
  ctx.coefficients["a"] = PCCoefficient::scalar_jump("t", a_t, "s", a_s);
  ctx.positions = {{"t", 0.0}, {"s", 100.0}};
  ctx.local["t"] = {p, dm, dp};
  ctx.local["s"] = {p, dm, dp};
  return ctx;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Complex random_z(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_SUITE("symcalc") {

TEST_CASE("generator symbols") {
  const Matrix s = sigma_S(2);
  CHECK(max_abs(s * s - Matrix::Identity(4, 4)) == 0.0);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(3, 3) == -1.0);

  const Matrix m = sigma_a({scalar(1.0), scalar(Complex(0, 1))}, 0.5);
  CHECK(m(0, 0).real() == doctest::Approx(0.5));
  CHECK(m(0, 0).imag() == doctest::Approx(0.5));
  CHECK(std::abs(m(0, 1) - Complex(-0.5, 0.5)) <= 1e-15);
  CHECK(std::abs(m(1, 0) - m(0, 1)) == 0.0);

  // A continuous coefficient gives a scalar multiple of the identity.
  const Matrix c = sigma_a({scalar(3.0), scalar(3.0)}, Complex(0.2, 1.7));
  CHECK(max_abs(c - 3.0 * Matrix::Identity(2, 2)) <= 1e-15);
}

TEST_CASE("endpoint symbols reduce to the one-sided limits") {
  const MatrixJump j{scalar(2.0), scalar(Complex(0, 5))};
  const Matrix at0 = sigma_a(j, 0.0);
  CHECK(at0(0, 0) == Complex(2.0));
  CHECK(at0(1, 1) == Complex(0, 5));
  CHECK(at0(0, 1) == Complex(0.0));
  const Matrix at1 = sigma_a(j, 1.0);
  CHECK(at1(0, 0) == Complex(0, 5));
  CHECK(at1(1, 1) == Complex(2.0));
}

TEST_CASE("aP + Q determinant") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Complex am = random_z(rng), ap = random_z(rng), z = random_z(rng);
    const std::map<std::string, MatrixJump> jumps{{"a", {scalar(am), scalar(ap)}}};
    const Matrix m = sigma_expr(OperatorExpr::aP_plus_Q("a"), jumps, 1, z);
    const Complex expected = ap * z + am * (1.0 - z);
    CHECK(std::abs(determinant(m) - expected) <= 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("symbol is a homomorphism") {
  std::mt19937_64 rng(5);
  const auto a = OperatorExpr::mult("a");
  const auto b = OperatorExpr::mult("b");
  const auto S = OperatorExpr::S();
  for (int i = 0; i < 100; ++i) {
    const std::map<std::string, MatrixJump> jumps{
        {"a", {random_matrix(rng, 2), random_matrix(rng, 2)}},
        {"b", {random_matrix(rng, 2), random_matrix(rng, 2)}}};
    const Complex z = random_z(rng);
    for (int sign : {1, -1}) {
      auto sym = [&](const OperatorExpr& e) { return sigma_expr(e, jumps, 2, z, sign); };
      const Matrix lhs = sym((a + b) * (S + a));
      const Matrix rhs = sym(a * S + a * a + b * S + b * a);
      CHECK(max_abs(lhs - rhs) <= 1e-10 * (1.0 + max_abs(lhs)));
      CHECK(max_abs(sym(a * b) - sym(a) * sym(b)) <= 1e-12 * (1.0 + max_abs(sym(a * b))));
      const Matrix ss = sym(S * S);
      CHECK(max_abs(ss - Matrix::Identity(4, 4)) == 0.0);
      CHECK(max_abs(sym(OperatorExpr::P() + OperatorExpr::Q()) - Matrix::Identity(4, 4)) <= 1e-15);
      const Matrix p = sym(OperatorExpr::P());
      CHECK(max_abs(p * p - p) <= 1e-15);
    }
  }
}

TEST_CASE("determinant does not depend on the square root branch") {
  std::mt19937_64 rng(7);
  const auto a = OperatorExpr::mult("a");
  const auto e = a * OperatorExpr::P() * a + OperatorExpr::S() * a + OperatorExpr::Q();
  for (int i = 0; i < 200; ++i) {
    const std::map<std::string, MatrixJump> jumps{
        {"a", {random_matrix(rng, 2), random_matrix(rng, 2)}}};
    const Complex z = random_z(rng);
    const Complex d1 = determinant(sigma_expr(e, jumps, 2, z, 1));
    const Complex d2 = determinant(sigma_expr(e, jumps, 2, z, -1));
    CHECK(std::abs(d1 - d2) <= 1e-9 * (1.0 + std::abs(d1)));
  }
}

TEST_CASE("two projections realization") {
  for (Complex z : {Complex(0.3, 0.0), Complex(-1.0, 2.0), Complex(0.5, -0.25)}) {
    const Matrix s = two_projections_s(2, z);
    CHECK(max_abs(s * s - s) <= 1e-14 * (1.0 + max_abs(s) * max_abs(s)));
    const Matrix p = sigma_S(2) * 0.5 + Matrix::Identity(4, 4) * 0.5;
    const Matrix x = two_projections_x(p, s);
    // p s p + (I-p)(I-s)(I-p) is z times the identity.
    CHECK(max_abs(x - z * Matrix::Identity(4, 4)) <= 1e-13 * (1.0 + std::abs(z)));
  }
  std::mt19937_64 rng(11);
  const Matrix basis = random_matrix(rng, 3);
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  const Matrix p = basis * d * basis.inverse();
  CHECK(max_abs(two_projections_x(p, p) - Matrix::Identity(3, 3)) <= 1e-10);
  const Matrix q = Matrix::Identity(3, 3) - p;
  CHECK(max_abs(two_projections_x(p, q)) <= 1e-10);
  CHECK_THROWS_AS(two_projections_x(p, 2.0 * p), ContractError);
  CHECK_THROWS_AS(two_projections_x(p, Matrix::Identity(2, 2)), ContractError);
}

TEST_CASE("coefficient limits follow the orientation") {
  const PCCoefficient c(1, {{"s", scalar(2.0)}, {"t", scalar(1.0)}, {"u", scalar(1.0)}});
  const LabelPositions pos{{"t", 0}, {"s", 10}, {"u", 20}};
  const MatrixJump at_t = c.jump_at("t", pos);
  CHECK(at_t.a_minus(0, 0) == Complex(1.0));
  CHECK(at_t.a_plus(0, 0) == Complex(1.0));
  const MatrixJump at_s = c.jump_at("s", pos);
  CHECK(at_s.a_minus(0, 0) == Complex(1.0));
  CHECK(at_s.a_plus(0, 0) == Complex(2.0));
  CHECK(c.jump_labels(pos) == std::vector<std::string>{"s", "u"});
  CHECK(c.value_at(15.0, pos)(0, 0) == Complex(2.0));
  CHECK(c.value_at(25.0, pos)(0, 0) == Complex(1.0));
  CHECK_THROWS_AS(c.jump_at("nowhere", pos), ReferenceError);
  CHECK_THROWS_AS(c.ordered({{"t", 0}, {"s", 0}, {"u", 1}}), ConfigError);
  CHECK_THROWS_AS(PCCoefficient(1, {{"t", scalar(1.0)}, {"t", scalar(2.0)}}), ConfigError);
  CHECK_THROWS_AS(PCCoefficient(2, {{"t", scalar(1.0)}}), ConfigError);
}

TEST_CASE("bundle test examples") {
  SUBCASE("a jumps from 1 to i") {
    const BundleVerdict v =
        bundle_fredholm_test(OperatorExpr::aP_plus_Q("a"), two_piece_context(1.0, Complex(0, 1)));
    CHECK(v.fredholm);
    CHECK(v.exact);
    CHECK(v.min_abs_det > 0.1);
  }
  SUBCASE("a jumps from 1 to -1") {
    const BundleVerdict v =
        bundle_fredholm_test(OperatorExpr::aP_plus_Q("a"), two_piece_context(1.0, -1.0));
    CHECK_FALSE(v.fredholm);
    REQUIRE(v.witness);
    CHECK(std::abs(v.witness->z - 0.5) <= 1e-12);
    CHECK(v.min_abs_det == 0.0);
  }
  SUBCASE("identity") {
    const BundleVerdict v =
        bundle_fredholm_test(OperatorExpr::identity(), two_piece_context(1.0, -1.0));
    CHECK(v.fredholm);
    CHECK(v.min_abs_det == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("vanishing coefficient on an arc") {
    const BundleVerdict v =
        bundle_fredholm_test(OperatorExpr::mult("a"), two_piece_context(1.0, 0.0));
    CHECK_FALSE(v.fredholm);
  }
  SUBCASE("S alone is invertible") {
    const BundleVerdict v = bundle_fredholm_test(OperatorExpr::S(), two_piece_context(1.0, 2.0));
    CHECK(v.fredholm);
  }
}

TEST_CASE("bundle test agrees with the scalar criterion") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pd(1.1, 8.0), dd(-2.0, 2.0), ang(-kPi, kPi),
      rad(0.3, 3.0);
  int disagreements_exact = 0, disagreements_roots = 0, blocked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Complex a_t = std::polar(rad(rng), ang(rng));
    const Complex a_s = std::polar(rad(rng), ang(rng));
    double dm = dd(rng), dp = dd(rng);
    if (dm > dp) std::swap(dm, dp);
    const double p = pd(rng);
    const SymbolContext ctx = two_piece_context(a_t, a_s, p, dm, dp);
    const bool scalar_verdict =
        fredholm::is_fredholm_scalar({{"t", a_s, a_t, p, dm, dp}, {"s", a_t, a_s, p, dm, dp}})
            .fredholm;
    blocked += !scalar_verdict;
    const BundleVerdict exact = bundle_fredholm_test(OperatorExpr::aP_plus_Q("a"), ctx, 256);
    disagreements_exact += exact.fredholm != scalar_verdict;
    // The scale wrapper hides the aP + Q form and forces the root path.
    if (i % 4 == 0) {
      const auto wrapped = OperatorExpr::scale(1.0, OperatorExpr::aP_plus_Q("a"));
      const BundleVerdict roots = bundle_fredholm_test(wrapped, ctx, 256);
      CHECK_FALSE(roots.exact);
      disagreements_roots += roots.fredholm != scalar_verdict;
    }
  }
  CHECK(disagreements_exact == 0);
  CHECK(disagreements_roots == 0);
  CHECK(blocked > 50);
}

TEST_CASE("matrix coefficients") {
  SymbolContext ctx;
  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1(0, 0) = 1.0;
  d1(1, 1) = 1.0;
  d2(0, 0) = Complex(0, 1);
  d2(1, 1) = -1.0;
  ctx.coefficients["A"] = PCCoefficient(2, {{"t", d1}, {"s", d2}});
  ctx.positions = {{"t", 0.0}, {"s", 50.0}};
  ctx.local["t"] = {2.0, 0.0, 0.0};
  ctx.local["s"] = {2.0, 0.0, 0.0};
  // The second diagonal entry jumps 1 -> -1, which blocks at p = 2.
  const BundleVerdict v = bundle_fredholm_test(OperatorExpr::aP_plus_Q("A"), ctx);
  CHECK_FALSE(v.exact);
  CHECK_FALSE(v.fredholm);
  REQUIRE(v.witness);
  CHECK(std::abs(v.witness->z - 0.5) <= 1e-8);

  d2(1, 1) = Complex(0, 1);
  ctx.coefficients["A"] = PCCoefficient(2, {{"t", d1}, {"s", d2}});
  CHECK(bundle_fredholm_test(OperatorExpr::aP_plus_Q("A"), ctx).fredholm);
}

TEST_CASE("configuration errors") {
  SymbolContext ctx = two_piece_context(1.0, 2.0);
  CHECK_THROWS_AS(bundle_fredholm_test(OperatorExpr::mult("b"), ctx), ReferenceError);
  ctx.local.erase("s");
  CHECK_THROWS_AS(bundle_fredholm_test(OperatorExpr::mult("a"), ctx), ConfigError);
  ctx = two_piece_context(1.0, 2.0);
  ctx.coefficients["b"] = PCCoefficient(2, {{"t", Matrix::Identity(2, 2)}});
  CHECK_THROWS_AS(ctx.check(OperatorExpr::mult("a")), ConfigError);
  CHECK_THROWS_AS(bundle_fredholm_test(OperatorExpr::mult("a"), two_piece_context(1.0, 2.0), 100),
                  ParameterError);
}

TEST_CASE("expression structure and json") {
  const auto e = OperatorExpr::aP_plus_Q("a");
  CHECK(e.match_aP_plus_Q() == std::optional<std::string>("a"));
  CHECK((OperatorExpr::Q() + OperatorExpr::mult("a") * OperatorExpr::P()).match_aP_plus_Q() ==
        std::optional<std::string>("a"));
  CHECK_FALSE(OperatorExpr::scale(1.0, e).match_aP_plus_Q());
  CHECK(e.degree() == 1);
  const auto a = OperatorExpr::mult("a");
  CHECK((a * a * OperatorExpr::S()).degree() == 2);
  CHECK(OperatorExpr::S().degree() == 0);

  const auto composite = OperatorExpr::scale(Complex(0.5, -1.0), a * OperatorExpr::S() + e) *
                         OperatorExpr::mult("b");
  const nlohmann::json j = expr_to_json(composite);
  CHECK(expr_from_json(j) == composite);
  CHECK(composite.coefficient_ids() == std::set<std::string>{"a", "b"});

  const auto parsed = expr_from_json(nlohmann::json::parse(
      R"({"op":"sum","args":[{"op":"prod","args":[{"gen":"mult","coeff":"a"},{"gen":"P"}]},{"gen":"Q"}]})"));
  CHECK(parsed.match_aP_plus_Q() == std::optional<std::string>("a"));

  try {
    expr_from_json(nlohmann::json::parse(R"({"op":"sum","args":[{"gen":"T"}]})"), "/expression");
    FAIL("expected a schema error");
  } catch (const SchemaError& err) {
    CHECK(err.pointer() == "/expression/args/0/gen");
  }
  CHECK_THROWS_AS(expr_from_json(nlohmann::json::parse(R"({"gen":"mult"})")), SchemaError);
  CHECK_THROWS_AS(expr_from_json(nlohmann::json::parse(R"({"op":"prod","args":[]})")), SchemaError);
}

}  // TEST_SUITE
