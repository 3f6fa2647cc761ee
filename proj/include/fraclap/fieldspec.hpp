#ifndef FRACLAP_FIELDSPEC_HPP
#define FRACLAP_FIELDSPEC_HPP

// Expression language for specifying fields in configs and on the command
// line.  Grammar (EBNF, whitespace-insensitive):
//
//   expr   = term  { ("+" | "-") term } ;
//   term   = unary { ("*" | "/") unary } ;
//   unary  = "-" unary | power ;
//   power  = atom [ "^" unary ] ;                  right-associative
//   atom   = number | "|x|" | "delta" | coord
//          | func "(" expr { "," expr } ")" | "(" expr ")" ;
//   coord  = "x" digits ;                          x1 .. xn
//   func   = "exp" | "abs" | "min" | "max" | "pow" | "inside" ;
//
// delta is max(0, 1 - |x|), the distance to the complement of the unit ball.
// inside(e) multiplies e by the indicator of the open unit ball.  Evaluation
// is total: domain violations surface as NaN or inf, which the quadrature
// layer rejects.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/field.hpp"
#include "fraclap/geometry.hpp"
#include "fraclap/params.hpp"

namespace fraclap {
namespace detail {

struct ExprNode {
  enum class Kind {
    number,
    coord,
    norm,
    delta,
    negate,
    add,
    sub,
    mul,
    div,
    power,
    exp_fn,
    abs_fn,
    min_fn,
    max_fn,
    inside_fn
  };

  Kind kind = Kind::number;
  double value = 0.0;  // literal payload, zero for every other kind
  int index = 0;       // 1-based coordinate, zero for every other kind
  std::vector<ExprNode> kids;

  bool operator==(const ExprNode&) const = default;
};

inline double eval_node(const ExprNode& nd, const Point& x) {
  using K = ExprNode::Kind;
  switch (nd.kind) {
    case K::number:
      return nd.value;
    case K::coord:
      return x[nd.index - 1];
    case K::norm:
      return std::sqrt(x.norm_sq());
    case K::delta:
      return std::max(0.0, 1.0 - std::sqrt(x.norm_sq()));
    case K::negate:
      return -eval_node(nd.kids[0], x);
    case K::add:
      return eval_node(nd.kids[0], x) + eval_node(nd.kids[1], x);
    case K::sub:
      return eval_node(nd.kids[0], x) - eval_node(nd.kids[1], x);
    case K::mul:
      return eval_node(nd.kids[0], x) * eval_node(nd.kids[1], x);
    case K::div:
      return eval_node(nd.kids[0], x) / eval_node(nd.kids[1], x);
    case K::power:
      return std::pow(eval_node(nd.kids[0], x), eval_node(nd.kids[1], x));
    case K::exp_fn:
      return std::exp(eval_node(nd.kids[0], x));
    case K::abs_fn:
      return std::fabs(eval_node(nd.kids[0], x));
    case K::min_fn:
      return std::fmin(eval_node(nd.kids[0], x), eval_node(nd.kids[1], x));
    case K::max_fn:
      return std::fmax(eval_node(nd.kids[0], x), eval_node(nd.kids[1], x));
    case K::inside_fn:
      return x.norm_sq() < 1.0 ? eval_node(nd.kids[0], x) : 0.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Advisory regularity classification; conservative on / and ^.
inline Smoothness classify_smoothness(const ExprNode& nd) {
  using K = ExprNode::Kind;
  Smoothness kids = Smoothness::smooth;
  for (const auto& k : nd.kids) kids = std::min(kids, classify_smoothness(k));
  switch (nd.kind) {
    case K::number:
    case K::coord:
      return Smoothness::smooth;
    case K::norm:
    case K::delta:
      return Smoothness::continuous;
    case K::negate:
    case K::add:
    case K::sub:
    case K::mul:
    case K::exp_fn:
      return kids;
    case K::abs_fn:
    case K::min_fn:
    case K::max_fn:
      return std::min(kids, Smoothness::continuous);
    case K::inside_fn:
      return std::min(kids, Smoothness::piecewise);
    case K::power:
      if (nd.kids[1].kind == K::number && nd.kids[1].value >= 0.0 &&
          nd.kids[1].value == std::floor(nd.kids[1].value))
        return classify_smoothness(nd.kids[0]);
      return Smoothness::unknown;
    case K::div:
      return Smoothness::unknown;
  }
  return Smoothness::unknown;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  ExprNode parse() {
    ExprNode root = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_, "end of expression");
    return root;
  }

 private:
  using K = ExprNode::Kind;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprNode parse_expr() {
    ExprNode lhs = parse_term();
    for (;;) {
      if (consume('+'))
        lhs = ExprNode{.kind = K::add, .kids = {std::move(lhs), parse_term()}};
      else if (consume('-'))
        lhs = ExprNode{.kind = K::sub, .kids = {std::move(lhs), parse_term()}};
      else
        return lhs;
    }
  }

  ExprNode parse_term() {
    ExprNode lhs = parse_unary();
    for (;;) {
      if (consume('*'))
        lhs = ExprNode{.kind = K::mul, .kids = {std::move(lhs), parse_unary()}};
      else if (consume('/'))
        lhs = ExprNode{.kind = K::div, .kids = {std::move(lhs), parse_unary()}};
      else
        return lhs;
    }
  }

  ExprNode parse_unary() {
    if (consume('-')) {
      ExprNode operand = parse_unary();
      // Fold a negated literal so that "-4" prints back as itself.
      if (operand.kind == K::number) return ExprNode{.kind = K::number, .value = -operand.value};
      return ExprNode{.kind = K::negate, .kids = {std::move(operand)}};
    }
    return parse_power();
  }

  ExprNode parse_power() {
    ExprNode base = parse_atom();
    if (consume('^'))
      return ExprNode{.kind = K::power, .kids = {std::move(base), parse_unary()}};
    return base;
  }

  ExprNode parse_atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", pos_, "number, identifier, '|x|' or '('");
    const char c = text_[pos_];

    if (c == '(') {
      ++pos_;
      ExprNode inner = parse_expr();
      if (!consume(')')) throw ParseError("unbalanced parenthesis", pos_, "')'");
      return inner;
    }

    if (c == '|') {
      if (text_.substr(pos_, 3) != "|x|")
        throw ParseError("stray '|'", pos_, "'|x|'");
      pos_ += 3;
      return ExprNode{.kind = K::norm};
    }

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))))
      return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();

    throw ParseError(std::string("unexpected character '") + c + "'", pos_,
                     "number, identifier, '|x|' or '('");
  }

  ExprNode parse_number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc())
      throw ParseError("malformed numeric literal", pos_, "number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return ExprNode{.kind = K::number, .value = value};
  }

  ExprNode parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "delta") return ExprNode{.kind = K::delta};
    if (name == "exp") return parse_call(name, start, K::exp_fn, 1);
    if (name == "abs") return parse_call(name, start, K::abs_fn, 1);
    if (name == "min") return parse_call(name, start, K::min_fn, 2);
    if (name == "max") return parse_call(name, start, K::max_fn, 2);
    if (name == "pow") return parse_call(name, start, K::power, 2);
    if (name == "inside") return parse_call(name, start, K::inside_fn, 1);

    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
      int idx = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (idx < 1 || idx > dim_)
        throw UnknownIdentifierError("coordinate " + std::string(name) +
                                         " out of range for dimension " + std::to_string(dim_),
                                     start);
      return ExprNode{.kind = K::coord, .index = idx};
    }

    throw UnknownIdentifierError("unknown identifier '" + std::string(name) + "'", start,
                                 "x1..x" + std::to_string(dim_) +
                                     ", delta, |x|, exp, abs, min, max, pow, inside");
  }

  ExprNode parse_call(std::string_view name, std::size_t name_pos, K kind, std::size_t arity) {
    if (!consume('('))
      throw ParseError("function '" + std::string(name) + "' needs an argument list", pos_, "'('");
    std::vector<ExprNode> args;
    args.push_back(parse_expr());
    while (consume(',')) args.push_back(parse_expr());
    if (!consume(')')) throw ParseError("unbalanced argument list", pos_, "')' or ','");
    if (args.size() != arity)
      throw ArityError("function '" + std::string(name) + "' expects " + std::to_string(arity) +
                           " argument(s), got " + std::to_string(args.size()),
                       name_pos);
    return ExprNode{.kind = kind, .kids = std::move(args)};
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Operator precedence used for minimal re-parenthesization: +- is 1, */ is 2,
// unary - is 3, ^ is 4, atoms are 5.
inline std::string print_node(const ExprNode& nd, int min_prec) {
  using K = ExprNode::Kind;
  int prec = 5;
  std::string body;
  switch (nd.kind) {
    case K::number:
      body = format_double(nd.value);
      if (nd.value < 0.0 && min_prec >= 2) return "(" + body + ")";
      break;
    case K::coord:
      body = "x" + std::to_string(nd.index);
      break;
    case K::norm:
      body = "|x|";
      break;
    case K::delta:
      body = "delta";
      break;
    case K::negate:
      prec = 3;
      body = "-" + print_node(nd.kids[0], 3);
      break;
    case K::add:
      prec = 1;
      body = print_node(nd.kids[0], 1) + "+" + print_node(nd.kids[1], 2);
      break;
    case K::sub:
      prec = 1;
      body = print_node(nd.kids[0], 1) + "-" + print_node(nd.kids[1], 2);
      break;
    case K::mul:
      prec = 2;
      body = print_node(nd.kids[0], 2) + "*" + print_node(nd.kids[1], 3);
      break;
    case K::div:
      prec = 2;
      body = print_node(nd.kids[0], 2) + "/" + print_node(nd.kids[1], 3);
      break;
    case K::power:
      prec = 4;
      body = print_node(nd.kids[0], 5) + "^" + print_node(nd.kids[1], 3);
      break;
    case K::exp_fn:
      body = "exp(" + print_node(nd.kids[0], 1) + ")";
      break;
    case K::abs_fn:
      body = "abs(" + print_node(nd.kids[0], 1) + ")";
      break;
    case K::min_fn:
      body = "min(" + print_node(nd.kids[0], 1) + "," + print_node(nd.kids[1], 1) + ")";
      break;
    case K::max_fn:
      body = "max(" + print_node(nd.kids[0], 1) + "," + print_node(nd.kids[1], 1) + ")";
      break;
    case K::inside_fn:
      body = "inside(" + print_node(nd.kids[0], 1) + ")";
      break;
  }
  if (prec < min_prec) return "(" + body + ")";
  return body;
}

}  // namespace detail

// A parsed expression: the tree plus the ambient dimension it was checked
// against.  Value-semantic; equality is structural.
struct FieldExpr {
  detail::ExprNode ast;
  int dim = 0;

  bool operator==(const FieldExpr&) const = default;
};

inline FieldExpr parse_expr(std::string_view text, const ProblemParams& params) {
  detail::ExprParser parser(text, params.n);
  return FieldExpr{parser.parse(), params.n};
}

inline std::string pretty_print(const FieldExpr& e) { return detail::print_node(e.ast, 0); }

inline ScalarField to_field(const FieldExpr& e) {
  auto tree = std::make_shared<const detail::ExprNode>(e.ast);
  ScalarField f;
  f.eval = [tree](const Point& x) { return detail::eval_node(*tree, x); };
  f.dim = e.dim;
  f.support = e.ast.kind == detail::ExprNode::Kind::inside_fn ? Support::ball_only
                                                              : Support::global;
  f.smoothness = detail::classify_smoothness(e.ast);
  return f;
}

inline ScalarField parse_field(std::string_view text, const ProblemParams& params) {
  return to_field(parse_expr(text, params));
}

inline VectorField parse_vector_field(const std::vector<std::string>& texts,
                                      const ProblemParams& params) {
  if (static_cast<int>(texts.size()) != params.n)
    throw DimensionMismatchError("vector field needs " + std::to_string(params.n) +
                                 " components, got " + std::to_string(texts.size()));
  VectorField v;
  bool all_zero = true;
  for (const auto& t : texts) {
    FieldExpr e = parse_expr(t, params);
    all_zero = all_zero && e.ast == detail::ExprNode{.kind = detail::ExprNode::Kind::number,
                                                     .value = 0.0};
    v.components.push_back(to_field(e));
  }
  v.identically_zero_hint = all_zero;
  return v;
}

}  // namespace fraclap

#endif  // FRACLAP_FIELDSPEC_HPP
