#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordstat/error.hpp"

namespace ordstat {

/// Syntax error with a 1-based position and the set of tokens that would
/// have been accepted there.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message,
             std::vector<std::string> expected = {});

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// Node of an uncertain-quantity expression tree. Trees are immutable and
/// shared between copies.
struct ExprNode {
  enum class Kind { Number, Param, Negate, Add, Sub, Mul, Div, Pow, Call, List };

  Kind kind = Kind::Number;
  double value = 0.0;      // Number
  std::size_t index = 0;   // Param
  std::string name;        // Call
  std::vector<std::shared_ptr<const ExprNode>> children;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// A parsed expression u(q) over parameter coordinates q[0], q[1], ...
///
/// Grammar (precedence from loosest to tightest):
///
///     expr    = term { ("+" | "-") term } ;
///     term    = unary { ("*" | "/") unary } ;
///     unary   = "-" unary | power ;
///     power   = primary [ "^" unary ] ;
///     primary = number | "q" "[" integer "]" | ident "(" args ")" | "(" expr ")" ;
///     args    = arg { "," arg } ;
///     arg     = expr | "[" expr { "," expr } "]" ;
///
/// `+ - * /` associate to the left, `^` to the right, and `-2^2` is -(2^2).
/// Builtins: abs exp log sqrt sin cos (1 argument), min max (2 or more),
/// max_re_root(c_n, ..., c_0) (polynomial coefficients, highest degree
/// first, 2 to 65 of them) and peak_gain([num], [den], w_min, w_max, points)
/// with an integer literal `points` >= 2. Bracketed lists are only legal as
/// the first two arguments of peak_gain.
class QuantityExpr {
 public:
  static QuantityExpr parse(std::string_view text);

  /// u(q); std::nullopt when any intermediate is non-finite or a builtin is
  /// undefined at q (an "undefined sample").
  std::optional<double> evaluate(std::span<const double> q) const;

  /// Canonical text with minimal parentheses; parse(to_string()) rebuilds
  /// a structurally identical tree.
  std::string to_string() const;

  /// Number of coordinates the expression reads (largest q index + 1).
  std::size_t required_dimension() const noexcept { return required_dimension_; }

  const ExprNode& root() const noexcept { return *root_; }

  bool structurally_equal(const QuantityExpr& other) const;

 private:
  explicit QuantityExpr(ExprPtr root);

  ExprPtr root_;
  std::size_t required_dimension_ = 0;
};

inline QuantityExpr parse_expression(std::string_view text) { return QuantityExpr::parse(text); }

inline std::optional<double> evaluate(const QuantityExpr& expr, std::span<const double> q) {
  return expr.evaluate(q);
}

}  // namespace ordstat
