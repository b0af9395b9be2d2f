#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "expr_corpus.hpp"
#include "ordstat/error.hpp"
#include "ordstat/expr.hpp"

using namespace ordstat;
namespace ot = ordstat::testing;

namespace {

double eval(const std::string& text, std::vector<double> q = {}) {
  const auto v = parse_expression(text).evaluate(q);
  REQUIRE(v.has_value());
  return *v;
}

}  // namespace

TEST_CASE("golden corpus round-trips through the printer") {
  CHECK(ot::golden_corpus().size() >= 50);
  for (const auto& text : ot::golden_corpus()) {
    CAPTURE(text);
    const auto first = parse_expression(text);
    const std::string printed = first.to_string();
    CAPTURE(printed);
    const auto second = parse_expression(printed);
    CHECK(first.structurally_equal(second));
    CHECK(second.to_string() == printed);
  }
}

TEST_CASE("trees have the expected shape") {
  const auto e1 = parse_expression("q[0] + 2*q[1]");
  const auto& add = e1.root();
  REQUIRE(add.kind == ExprNode::Kind::Add);
  REQUIRE(add.children.size() == 2);
  CHECK(add.children[0]->kind == ExprNode::Kind::Param);
  CHECK(add.children[0]->index == 0);
  const auto& mul = *add.children[1];
  REQUIRE(mul.kind == ExprNode::Kind::Mul);
  CHECK(mul.children[0]->kind == ExprNode::Kind::Number);
  CHECK(mul.children[0]->value == 2.0);
  CHECK(mul.children[1]->index == 1);

  const auto e2 = parse_expression("max_re_root(1, 3, 2)");
  const auto& call = e2.root();
  CHECK(call.kind == ExprNode::Kind::Call);
  CHECK(call.name == "max_re_root");
  CHECK(call.children.size() == 3);

  const auto e3 = parse_expression("2 ^ 3 ^ 2");
  const auto& pow = e3.root();
  REQUIRE(pow.kind == ExprNode::Kind::Pow);
  CHECK(pow.children[0]->kind == ExprNode::Kind::Number);
  CHECK(pow.children[1]->kind == ExprNode::Kind::Pow);
}

TEST_CASE("printer uses minimal parentheses") {
  CHECK(parse_expression("(q[0] + q[1]) + q[2]").to_string() == "q[0] + q[1] + q[2]");
  CHECK(parse_expression("q[0] + (q[1] + q[2])").to_string() == "q[0] + (q[1] + q[2])");
  CHECK(parse_expression("q[0] ^ (q[1] ^ q[2])").to_string() == "q[0]^q[1]^q[2]");
  CHECK(parse_expression("(q[0] ^ q[1]) ^ q[2]").to_string() == "(q[0]^q[1])^q[2]");
  CHECK(parse_expression("((q[0] * 2))").to_string() == "q[0] * 2");
  CHECK(parse_expression("-(q[0] ^ 2)").to_string() == "-q[0]^2");
  CHECK(parse_expression("(-q[0]) ^ 2").to_string() == "(-q[0])^2");
  CHECK(parse_expression("max( q[0] ,q[1])").to_string() == "max(q[0], q[1])");
}

TEST_CASE("structural equality distinguishes trees") {
  CHECK_FALSE(parse_expression("q[0] - q[1] - q[2]")
                  .structurally_equal(parse_expression("q[0] - (q[1] - q[2])")));
  CHECK_FALSE(parse_expression("q[0]").structurally_equal(parse_expression("q[1]")));
  CHECK_FALSE(parse_expression("1").structurally_equal(parse_expression("1.0000000000000002")));
  CHECK(parse_expression("1.0").structurally_equal(parse_expression("1")));
}

TEST_CASE("evaluation follows precedence and associativity") {
  CHECK(eval("1 + 2 * 3") == 7.0);
  CHECK(eval("(1 + 2) * 3") == 9.0);
  CHECK(eval("8 - 3 - 2") == 3.0);
  CHECK(eval("8 / 4 / 2") == 1.0);
  CHECK(eval("2 ^ 3 ^ 2") == 512.0);
  CHECK(eval("-2 ^ 2") == -4.0);
  CHECK(eval("2 ^ -1") == 0.5);
  CHECK(eval("q[0] * q[1] - q[2]", {2, 5, 1}) == 9.0);
  CHECK(eval("abs(-3)") == 3.0);
  CHECK(eval("exp(0) + log(1)") == 1.0);
  CHECK(eval("sqrt(16)") == 4.0);
  CHECK(eval("sin(0) + cos(0)") == 1.0);
  CHECK(eval("min(3, 1, 2)") == 1.0);
  CHECK(eval("max(3, 1, 2)") == 3.0);
  // s^2 + 3s + 2 = (s + 1)(s + 2).
  CHECK(eval("max_re_root(1, 3, 2)") == doctest::Approx(-1.0).epsilon(1e-12));
  // 1/(s + 1) peaks at the lowest frequency of the grid.
  CHECK(eval("peak_gain([1], [1, 1], 0.001, 10, 100)") ==
        doctest::Approx(1.0 / std::sqrt(1.0 + 1e-6)).epsilon(1e-12));
}

TEST_CASE("undefined samples evaluate to nullopt") {
  const std::vector<double> q = {0.0, -1.0};
  CHECK_FALSE(parse_expression("log(q[0])").evaluate(q).has_value());
  CHECK_FALSE(parse_expression("sqrt(q[1])").evaluate(q).has_value());
  CHECK_FALSE(parse_expression("1 / q[0]").evaluate(q).has_value());
  CHECK_FALSE(parse_expression("exp(1000)").evaluate(q).has_value());
  CHECK_FALSE(parse_expression("max_re_root(q[0], 1, 1)").evaluate(q).has_value());
  CHECK(parse_expression("sqrt(q[0])").evaluate(q).value() == 0.0);
}

TEST_CASE("required dimension and short parameter vectors") {
  const auto e = parse_expression("q[0] + q[4]");
  CHECK(e.required_dimension() == 5);
  CHECK(parse_expression("1 + 2").required_dimension() == 0);
  const std::vector<double> short_q = {1.0, 2.0};
  CHECK_THROWS_AS(e.evaluate(short_q), DomainError);
}

TEST_CASE("malformed inputs report positions") {
  const auto& cases = ot::malformed_corpus();
  CHECK(cases.size() >= 10);
  for (const auto& c : cases) {
    CAPTURE(c.text);
    try {
      parse_expression(c.text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CAPTURE(std::string(e.what()));
      CHECK(e.line() == c.line);
      CHECK(e.column() == c.column);
      const std::string prefix =
          "line " + std::to_string(c.line) + ", column " + std::to_string(c.column) + ":";
      CHECK(std::string(e.what()).rfind(prefix, 0) == 0);
    }
  }
}

TEST_CASE("parse errors list what was expected") {
  try {
    parse_expression("q[0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    bool has_bracket = false;
    for (const auto& x : e.expected()) has_bracket = has_bracket || x == "']'";
    CHECK(has_bracket);
  }
}
