#include "ordstat/expr.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>

#include "ordstat/quantities.hpp"

namespace ordstat {
namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
  bool integral = false;  // Number written without '.' or exponent
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const std::size_t line = line_;
      const std::size_t col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number(line, col));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col});
      } else {
        Tok kind;
        switch (c) {
          case '+': kind = Tok::Plus; break;
          case '-': kind = Tok::Minus; break;
          case '*': kind = Tok::Star; break;
          case '/': kind = Tok::Slash; break;
          case '^': kind = Tok::Caret; break;
          case '(': kind = Tok::LParen; break;
          case ')': kind = Tok::RParen; break;
          case '[': kind = Tok::LBracket; break;
          case ']': kind = Tok::RBracket; break;
          case ',': kind = Tok::Comma; break;
          default:
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        advance();
        out.push_back({kind, std::string(1, c), line, col});
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  Token number(std::size_t line, std::size_t col) {
    const std::size_t start = pos_;
    bool integral = true;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance();
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      integral = false;
      advance();
      n += digits();
    }
    if (n == 0) throw ParseError(line, col, "malformed number", {"digit"});
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      integral = false;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (digits() == 0) throw ParseError(line_, col_, "malformed exponent", {"digit"});
    }
    Token t{Tok::Number, std::string(src_.substr(start, pos_ - start)), line, col, integral};
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

ExprPtr make(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

ExprPtr make_binary(ExprNode::Kind kind, ExprPtr l, ExprPtr r) {
  ExprNode n;
  n.kind = kind;
  n.children = {std::move(l), std::move(r)};
  return make(std::move(n));
}

struct Builtin {
  std::string_view name;
  std::size_t min_args;
  std::size_t max_args;
};

constexpr Builtin kBuiltins[] = {
    {"abs", 1, 1},  {"exp", 1, 1},  {"log", 1, 1},
    {"sqrt", 1, 1}, {"sin", 1, 1},  {"cos", 1, 1},
    {"min", 2, std::numeric_limits<std::size_t>::max()},
    {"max", 2, std::numeric_limits<std::size_t>::max()},
    {"max_re_root", 2, kMaxPolynomialDegree + 1},
    {"peak_gain", 5, 5},
};

const Builtin* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins)
    if (b.name == name) return &b;
  return nullptr;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ExprPtr parse_all() {
    ExprPtr e = expr();
    if (peek().kind != Tok::End) fail({"operator", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "unexpected " + describe(t) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += (i + 1 == expected.size()) ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(t.line, t.column, msg, std::move(expected));
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail({what});
    take();
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const auto kind = take().kind == Tok::Plus ? ExprNode::Kind::Add : ExprNode::Kind::Sub;
      lhs = make_binary(kind, lhs, term());
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const auto kind = take().kind == Tok::Star ? ExprNode::Kind::Mul : ExprNode::Kind::Div;
      lhs = make_binary(kind, lhs, unary());
    }
    return lhs;
  }

  ExprPtr unary() {
    if (peek().kind == Tok::Minus) {
      take();
      ExprNode n;
      n.kind = ExprNode::Kind::Negate;
      n.children = {unary()};
      return make(std::move(n));
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (peek().kind == Tok::Caret) {
      take();
      return make_binary(ExprNode::Kind::Pow, base, unary());
    }
    return base;
  }

  ExprPtr number_node(const Token& t) {
    double v = 0.0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc() || !std::isfinite(v))
      throw ParseError(t.line, t.column, "number '" + t.text + "' is out of range");
    ExprNode n;
    n.kind = ExprNode::Kind::Number;
    n.value = v;
    return make(std::move(n));
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        take();
        return number_node(t);
      case Tok::LParen: {
        take();
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        take();
        if (t.text == "q") return parameter(t);
        return call(t);
      default:
        fail({"number", "'q['", "function name", "'('"});
    }
  }

  ExprPtr parameter(const Token& q) {
    if (peek().kind != Tok::LBracket) fail({"'['"});
    take();
    const Token& idx = peek();
    if (idx.kind != Tok::Number || !idx.integral)
      throw ParseError(idx.line, idx.column,
                       "parameter index must be a non-negative integer literal, got " +
                           describe(idx),
                       {"integer"});
    take();
    std::uint64_t v = 0;
    const auto res = std::from_chars(idx.text.data(), idx.text.data() + idx.text.size(), v);
    if (res.ec != std::errc() || v > 1'000'000)
      throw ParseError(idx.line, idx.column, "parameter index '" + idx.text + "' is too large");
    expect(Tok::RBracket, "']'");
    (void)q;
    ExprNode n;
    n.kind = ExprNode::Kind::Param;
    n.index = static_cast<std::size_t>(v);
    return make(std::move(n));
  }

  ExprPtr list(const Token& open) {
    ExprNode n;
    n.kind = ExprNode::Kind::List;
    n.children.push_back(expr());
    while (peek().kind == Tok::Comma) {
      take();
      n.children.push_back(expr());
    }
    expect(Tok::RBracket, "']'");
    (void)open;
    return make(std::move(n));
  }

  ExprPtr call(const Token& name) {
    const Builtin* b = find_builtin(name.text);
    if (b == nullptr)
      throw ParseError(name.line, name.column, "unknown identifier '" + name.text + "'");
    expect(Tok::LParen, "'('");
    ExprNode n;
    n.kind = ExprNode::Kind::Call;
    n.name = name.text;
    std::vector<Token> arg_tokens;
    if (peek().kind != Tok::RParen) {
      for (;;) {
        arg_tokens.push_back(peek());
        if (peek().kind == Tok::LBracket) {
          const Token& open = take();
          n.children.push_back(list(open));
        } else {
          n.children.push_back(expr());
        }
        if (peek().kind != Tok::Comma) break;
        take();
      }
    }
    expect(Tok::RParen, "')'");

    const std::size_t argc = n.children.size();
    if (argc < b->min_args || argc > b->max_args) {
      std::string want = std::to_string(b->min_args);
      if (b->max_args != b->min_args)
        want += (b->max_args == std::numeric_limits<std::size_t>::max())
                    ? " or more"
                    : " to " + std::to_string(b->max_args);
      throw ParseError(name.line, name.column,
                       "'" + name.text + "' takes " + want + " argument(s), got " +
                           std::to_string(argc));
    }
    for (std::size_t i = 0; i < argc; ++i) {
      const bool is_list = n.children[i]->kind == ExprNode::Kind::List;
      const bool wants_list = name.text == "peak_gain" && i < 2;
      if (is_list != wants_list)
        throw ParseError(arg_tokens[i].line, arg_tokens[i].column,
                         wants_list ? "'peak_gain' argument " + std::to_string(i + 1) +
                                          " must be a bracketed coefficient list"
                                    : "bracketed list not allowed here",
                         {wants_list ? "'['" : "expression"});
    }
    if (name.text == "peak_gain") {
      const ExprNode& pts = *n.children[4];
      const Token& at = arg_tokens[4];
      if (pts.kind != ExprNode::Kind::Number || !at.integral || pts.value < 2.0 ||
          pts.value > 1e7)
        throw ParseError(at.line, at.column,
                         "'peak_gain' point count must be an integer literal in [2, 1e7]",
                         {"integer"});
    }
    return make(std::move(n));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::size_t max_index(const ExprNode& n) {
  std::size_t m = n.kind == ExprNode::Kind::Param ? n.index + 1 : 0;
  for (const auto& c : n.children) m = std::max(m, max_index(*c));
  return m;
}

// ---- evaluation ----

using Value = std::optional<double>;

Value finite(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

Value eval_node(const ExprNode& n, std::span<const double> q);

bool eval_all(const std::vector<ExprPtr>& nodes, std::span<const double> q,
              std::vector<double>& out) {
  out.clear();
  out.reserve(nodes.size());
  for (const auto& c : nodes) {
    const Value v = eval_node(*c, q);
    if (!v) return false;
    out.push_back(*v);
  }
  return true;
}

Value eval_call(const ExprNode& n, std::span<const double> q) {
  const std::string& f = n.name;
  if (f == "peak_gain") {
    std::vector<double> num;
    std::vector<double> den;
    if (!eval_all(n.children[0]->children, q, num) || !eval_all(n.children[1]->children, q, den))
      return std::nullopt;
    const Value lo = eval_node(*n.children[2], q);
    const Value hi = eval_node(*n.children[3], q);
    if (!lo || !hi || !(*lo > 0.0) || !(*hi >= *lo)) return std::nullopt;
    if (std::all_of(den.begin(), den.end(), [](double c) { return c == 0.0; })) return std::nullopt;
    return peak_gain(num, den, *lo, *hi, static_cast<std::size_t>(n.children[4]->value));
  }
  std::vector<double> args;
  if (!eval_all(n.children, q, args)) return std::nullopt;
  if (f == "max_re_root") {
    if (args.front() == 0.0) return std::nullopt;
    try {
      return finite(max_re_root(args));
    } catch (const ConsistencyError&) {
      return std::nullopt;
    }
  }
  if (f == "min") return *std::min_element(args.begin(), args.end());
  if (f == "max") return *std::max_element(args.begin(), args.end());
  const double x = args.front();
  if (f == "abs") return std::abs(x);
  if (f == "exp") return finite(std::exp(x));
  if (f == "log") return x > 0.0 ? finite(std::log(x)) : std::nullopt;
  if (f == "sqrt") return x >= 0.0 ? finite(std::sqrt(x)) : std::nullopt;
  if (f == "sin") return finite(std::sin(x));
  if (f == "cos") return finite(std::cos(x));
  throw DomainError("unknown builtin '" + f + "'");
}

Value eval_node(const ExprNode& n, std::span<const double> q) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number:
      return n.value;
    case K::Param:
      return finite(q[n.index]);
    case K::Negate: {
      const Value v = eval_node(*n.children[0], q);
      if (!v) return std::nullopt;
      return -*v;
    }
    case K::Call:
      return eval_call(n, q);
    case K::List:
      throw DomainError("list node evaluated outside peak_gain");
    default:
      break;
  }
  const Value l = eval_node(*n.children[0], q);
  if (!l) return std::nullopt;
  const Value r = eval_node(*n.children[1], q);
  if (!r) return std::nullopt;
  switch (n.kind) {
    case K::Add: return finite(*l + *r);
    case K::Sub: return finite(*l - *r);
    case K::Mul: return finite(*l * *r);
    case K::Div: return *r == 0.0 ? std::nullopt : finite(*l / *r);
    case K::Pow: return finite(std::pow(*l, *r));
    default: return std::nullopt;
  }
}

// ---- printing ----

int precedence(const ExprNode& n) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Negate: return 3;
    case K::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // "-0" and other negatives cannot be re-lexed as a single literal.
  if (std::signbit(v)) s = "(" + s + ")";
  return s;
}

void print(const ExprNode& n, std::ostringstream& os);

void print_wrapped(const ExprNode& n, bool parens, std::ostringstream& os) {
  if (parens) os << '(';
  print(n, os);
  if (parens) os << ')';
}

void print(const ExprNode& n, std::ostringstream& os) {
  using K = ExprNode::Kind;
  const int p = precedence(n);
  switch (n.kind) {
    case K::Number:
      os << format_number(n.value);
      return;
    case K::Param:
      os << "q[" << n.index << ']';
      return;
    case K::Negate:
      os << '-';
      print_wrapped(*n.children[0], precedence(*n.children[0]) < 3, os);
      return;
    case K::Call:
    case K::List: {
      if (n.kind == K::Call) os << n.name << '(';
      else os << '[';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) os << ", ";
        print(*n.children[i], os);
      }
      os << (n.kind == K::Call ? ')' : ']');
      return;
    }
    case K::Pow:
      print_wrapped(*n.children[0], precedence(*n.children[0]) <= p, os);
      os << '^';
      print_wrapped(*n.children[1], precedence(*n.children[1]) < 3, os);
      return;
    default: {
      static constexpr const char* ops[] = {"", "", "", " + ", " - ", " * ", " / "};
      print_wrapped(*n.children[0], precedence(*n.children[0]) < p, os);
      os << ops[static_cast<int>(n.kind)];
      print_wrapped(*n.children[1], precedence(*n.children[1]) <= p, os);
      return;
    }
  }
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case ExprNode::Kind::Number:
      if (std::bit_cast<std::uint64_t>(a.value) != std::bit_cast<std::uint64_t>(b.value))
        return false;
      break;
    case ExprNode::Kind::Param:
      if (a.index != b.index) return false;
      break;
    case ExprNode::Kind::Call:
      if (a.name != b.name) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_tree(*a.children[i], *b.children[i])) return false;
  return true;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message,
                       std::vector<std::string> expected)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

QuantityExpr::QuantityExpr(ExprPtr root)
    : root_(std::move(root)), required_dimension_(max_index(*root_)) {}

QuantityExpr QuantityExpr::parse(std::string_view text) {
  Parser parser(Lexer(text).run());
  return QuantityExpr(parser.parse_all());
}

std::optional<double> QuantityExpr::evaluate(std::span<const double> q) const {
  if (q.size() < required_dimension_)
    throw DomainError("expression reads q[" + std::to_string(required_dimension_ - 1) +
                      "] but the parameter vector has " + std::to_string(q.size()) +
                      " coordinates");
  return eval_node(*root_, q);
}

std::string QuantityExpr::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

bool QuantityExpr::structurally_equal(const QuantityExpr& other) const {
  return same_tree(*root_, *other.root_);
}

}  // namespace ordstat
