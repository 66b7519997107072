#include "sigflip/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <optional>

namespace sigflip {

namespace {

const std::array<std::pair<const char*, Expression::Func>, 6> kFuncs = {{
    {"sin", Expression::Func::Sin},
    {"cos", Expression::Func::Cos},
    {"exp", Expression::Func::Exp},
    {"sqrt", Expression::Func::Sqrt},
    {"tanh", Expression::Func::Tanh},
    {"abs", Expression::Func::Abs},
}};

std::optional<Expression::Func> func_by_name(const std::string& s) {
  for (const auto& [name, f] : kFuncs)
    if (s == name) return f;
  return std::nullopt;
}

const char* func_name(Expression::Func f) {
  for (const auto& [name, g] : kFuncs)
    if (g == f) return name;
  return "?";
}

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret,
                    LParen, RParen, Comma, End };
  Kind kind;
  double number = 0.0;
  std::string ident;
  std::uint32_t offset = 0;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    tok_.offset = static_cast<std::uint32_t>(pos_);
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = src_[pos_];
    switch (c) {
      case '+': tok_.kind = Token::Kind::Plus;   ++pos_; return;
      case '-': tok_.kind = Token::Kind::Minus;  ++pos_; return;
      case '*': tok_.kind = Token::Kind::Star;   ++pos_; return;
      case '/': tok_.kind = Token::Kind::Slash;  ++pos_; return;
      case '^': tok_.kind = Token::Kind::Caret;  ++pos_; return;
      case '(': tok_.kind = Token::Kind::LParen; ++pos_; return;
      case ')': tok_.kind = Token::Kind::RParen; ++pos_; return;
      case ',': tok_.kind = Token::Kind::Comma;  ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin)
        throw SyntaxError("malformed number", pos_);
      // strtod accepts "inf"/"nan"; those must lex as identifiers instead,
      // and a leading digit/dot can't start them, so only check the result.
      if (!std::isfinite(v))
        throw SyntaxError("non-finite literal", pos_);
      pos_ += static_cast<std::size_t>(end - begin);
      tok_.kind = Token::Kind::Number;
      tok_.number = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Kind::Ident;
      tok_.ident = src_.substr(start, pos_ - start);
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace

bool is_reserved_name(const std::string& name) {
  if (name == "pi" || name == "e") return true;
  return func_by_name(name).has_value();
}

namespace {

class Parser {
public:
  Parser(const std::string& src, const std::vector<std::string>& coords,
         std::vector<Expression::Node>& nodes)
      : lex_(src), coords_(coords), nodes_(nodes) {}

  int parse_all() {
    int root = parse_sum();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::End)
      throw SyntaxError("unexpected trailing input", t.offset);
    return root;
  }

private:
  using K = Expression::Node::Kind;

  int add_node(Expression::Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Kind::Plus || t.kind == Token::Kind::Minus) {
        Token op = lex_.take();
        int rhs = parse_product();
        Expression::Node n;
        n.kind = op.kind == Token::Kind::Plus ? K::Add : K::Sub;
        n.a = lhs;
        n.b = rhs;
        n.offset = op.offset;
        lhs = add_node(n);
      } else {
        return lhs;
      }
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Kind::Star || t.kind == Token::Kind::Slash) {
        Token op = lex_.take();
        int rhs = parse_unary();
        Expression::Node n;
        n.kind = op.kind == Token::Kind::Star ? K::Mul : K::Div;
        n.a = lhs;
        n.b = rhs;
        n.offset = op.offset;
        lhs = add_node(n);
      } else {
        return lhs;
      }
    }
  }

  // Unary minus sits between * / and ^: -t^2 parses as -(t^2).
  int parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Minus) {
      Token op = lex_.take();
      int arg = parse_unary();
      Expression::Node n;
      n.kind = K::Neg;
      n.a = arg;
      n.offset = op.offset;
      return add_node(n);
    }
    return parse_power();
  }

  int parse_power() {
    int base = parse_atom();
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Caret) {
      Token op = lex_.take();
      // exponent may start with a sign (x^-2); recursion keeps ^ right
      // associative: a^b^c == a^(b^c)
      int ex = parse_unary();
      Expression::Node n;
      n.kind = K::Pow;
      n.a = base;
      n.b = ex;
      n.offset = op.offset;
      return add_node(n);
    }
    return base;
  }

  int parse_atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::Number: {
        Expression::Node n;
        n.kind = K::Constant;
        n.constant = t.number;
        n.offset = t.offset;
        return add_node(n);
      }
      case Token::Kind::LParen: {
        int inner = parse_sum();
        Token close = lex_.take();
        if (close.kind != Token::Kind::RParen)
          throw SyntaxError("expected ')'", close.offset);
        return inner;
      }
      case Token::Kind::Ident: {
        if (lex_.peek().kind == Token::Kind::LParen) {
          auto f = func_by_name(t.ident);
          if (!f) throw UnknownIdentifier(t.ident, t.offset);
          lex_.take();  // (
          int arg = parse_sum();
          Token close = lex_.take();
          if (close.kind == Token::Kind::Comma)
            throw ArityError("'" + t.ident + "' takes one argument",
                             close.offset);
          if (close.kind != Token::Kind::RParen)
            throw SyntaxError("expected ')'", close.offset);
          Expression::Node n;
          n.kind = K::Call;
          n.func = *f;
          n.a = arg;
          n.offset = t.offset;
          return add_node(n);
        }
        if (t.ident == "pi" || t.ident == "e") {
          Expression::Node n;
          n.kind = K::Constant;
          n.constant = t.ident == "pi" ? std::numbers::pi : std::numbers::e;
          n.offset = t.offset;
          return add_node(n);
        }
        if (func_by_name(t.ident))
          throw SyntaxError("expected '(' after function name '" + t.ident + "'",
                            t.offset);
        for (std::size_t i = 0; i < coords_.size(); ++i) {
          if (coords_[i] == t.ident) {
            Expression::Node n;
            n.kind = K::Variable;
            n.var = static_cast<int>(i);
            n.offset = t.offset;
            return add_node(n);
          }
        }
        throw UnknownIdentifier(t.ident, t.offset);
      }
      case Token::Kind::End:
        throw SyntaxError("unexpected end of expression", t.offset);
      default:
        throw SyntaxError("unexpected token", t.offset);
    }
  }

  Lexer lex_;
  const std::vector<std::string>& coords_;
  std::vector<Expression::Node>& nodes_;
};

}  // namespace

Expression Expression::parse(const std::string& source,
                             const std::vector<std::string>& coords) {
  Expression e;
  e.source_ = source;
  e.coords_ = coords;
  Parser p(source, e.coords_, e.nodes_);
  e.root_ = p.parse_all();
  return e;
}

double Expression::value(const Eigen::VectorXd& p) const {
  std::vector<double> vars(p.data(), p.data() + p.size());
  double v = evaluate<double>(vars);
  if (!std::isfinite(v)) throw DomainError("non-finite expression value");
  return v;
}

DualScalar Expression::dual(const Eigen::VectorXd& p) const {
  const int n = dim();
  std::vector<DualScalar> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(DualScalar::variable(p[i], i, n));
  DualScalar d = evaluate<DualScalar>(vars);
  if (d.g.size() == 0) d.g = Eigen::VectorXd::Zero(n);
  if (!std::isfinite(d.v) || !d.g.allFinite())
    throw DomainError("non-finite expression value");
  return d;
}

namespace {

void print_node(const std::vector<Expression::Node>& nodes, int idx,
                const std::vector<std::string>& coords, std::string& out) {
  using K = Expression::Node::Kind;
  const Expression::Node& n = nodes[idx];
  switch (n.kind) {
    case K::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.constant);
      out += buf;
      return;
    }
    case K::Variable:
      out += coords[n.var];
      return;
    case K::Neg:
      out += "(-";
      print_node(nodes, n.a, coords, out);
      out += ')';
      return;
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div:
    case K::Pow: {
      char op = n.kind == K::Add ? '+'
              : n.kind == K::Sub ? '-'
              : n.kind == K::Mul ? '*'
              : n.kind == K::Div ? '/' : '^';
      out += '(';
      print_node(nodes, n.a, coords, out);
      out += op;
      print_node(nodes, n.b, coords, out);
      out += ')';
      return;
    }
    case K::Call:
      out += func_name(n.func);
      out += '(';
      print_node(nodes, n.a, coords, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const std::vector<Expression::Node>& an, int ai,
                 const std::vector<Expression::Node>& bn, int bi) {
  using K = Expression::Node::Kind;
  const auto& a = an[ai];
  const auto& b = bn[bi];
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case K::Constant:
      // bitwise, so parse/print round trips are exact; -0.0 != 0.0 is fine
      // because the printer distinguishes them too
      return std::memcmp(&a.constant, &b.constant, sizeof(double)) == 0;
    case K::Variable:
      return a.var == b.var;
    case K::Neg:
      return equal_nodes(an, a.a, bn, b.a);
    case K::Call:
      return a.func == b.func && equal_nodes(an, a.a, bn, b.a);
    default:
      return equal_nodes(an, a.a, bn, b.a) && equal_nodes(an, a.b, bn, b.b);
  }
}

}  // namespace

std::string Expression::print() const {
  std::string out;
  print_node(nodes_, root_, coords_, out);
  return out;
}

bool Expression::equal(const Expression& a, const Expression& b) {
  if (a.coords_ != b.coords_) return false;
  return equal_nodes(a.nodes_, a.root_, b.nodes_, b.root_);
}

}  // namespace sigflip
