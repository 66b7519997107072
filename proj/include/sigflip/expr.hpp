#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigflip/dual.hpp"
#include "sigflip/errors.hpp"

namespace sigflip {

// Parsed scalar expression over a fixed coordinate list. Immutable after
// parse. Grammar (loosest to tightest): + -, * /, unary -, ^ (right
// associative; unary minus binds looser than ^, so -t^2 == -(t^2), but a
// leading minus is accepted inside an exponent: x^-2). Functions: sin cos exp
// sqrt tanh abs. Named constants: pi, e.
class Expression {
public:
  enum class Func : std::uint8_t { Sin, Cos, Exp, Sqrt, Tanh, Abs };

  struct Node {
    enum class Kind : std::uint8_t {
      Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call
    };
    Kind kind;
    double constant = 0.0;  // Constant
    int var = -1;           // Variable: index into coords
    Func func = Func::Sin;  // Call
    int a = -1, b = -1;     // child node indices
    std::uint32_t offset = 0;  // byte offset in source, for diagnostics
  };

  static Expression parse(const std::string& source,
                          const std::vector<std::string>& coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::string& source() const { return source_; }

  double value(const Eigen::VectorXd& p) const;
  // Gradient is always sized dim(), even for constant expressions.
  DualScalar dual(const Eigen::VectorXd& p) const;

  template <class T>
  T evaluate(const std::vector<T>& vars) const {
    if (static_cast<int>(vars.size()) != dim())
      throw AnalysisError("expression evaluated with wrong arity");
    return eval_node<T>(root_, vars);
  }

  // Canonical fully parenthesized form; parse(print()) is structurally equal.
  std::string print() const;

  static bool equal(const Expression& a, const Expression& b);

private:
  Expression() = default;

  // Domain failures are tagged with the offending node's byte offset. The
  // wrapper sits around the operation only, never around child evaluation,
  // so exactly one (innermost) offset is attached.
  template <class F>
  static auto tag_offset(std::uint32_t off, F&& fn) {
    try {
      return fn();
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (at byte " +
                        std::to_string(off) + ")");
    }
  }

  template <class T>
  T eval_node(int idx, const std::vector<T>& vars) const {
    const Node& n = nodes_[idx];
    using K = Node::Kind;
    switch (n.kind) {
      case K::Constant: return T(n.constant);
      case K::Variable: return vars[n.var];
      case K::Neg:      return -eval_node<T>(n.a, vars);
      case K::Add:      return eval_node<T>(n.a, vars) + eval_node<T>(n.b, vars);
      case K::Sub:      return eval_node<T>(n.a, vars) - eval_node<T>(n.b, vars);
      case K::Mul:      return eval_node<T>(n.a, vars) * eval_node<T>(n.b, vars);
      case K::Div: {
        T num = eval_node<T>(n.a, vars);
        T den = eval_node<T>(n.b, vars);
        return tag_offset(n.offset, [&] {
          if constexpr (std::is_same_v<T, double>) return div_checked(num, den);
          else return num / den;
        });
      }
      case K::Pow: {
        T base = eval_node<T>(n.a, vars);
        T ex = eval_node<T>(n.b, vars);
        return tag_offset(n.offset, [&] {
          if constexpr (std::is_same_v<T, double>) return pow_checked(base, ex);
          else return pow(base, ex);
        });
      }
      case K::Call: {
        T arg = eval_node<T>(n.a, vars);
        switch (n.func) {
          case Func::Sin:  if constexpr (std::is_same_v<T, double>) return std::sin(arg);  else return sin(arg);
          case Func::Cos:  if constexpr (std::is_same_v<T, double>) return std::cos(arg);  else return cos(arg);
          case Func::Exp:  if constexpr (std::is_same_v<T, double>) return std::exp(arg);  else return exp(arg);
          case Func::Sqrt:
            return tag_offset(n.offset, [&] {
              if constexpr (std::is_same_v<T, double>) return sqrt_checked(arg);
              else return sqrt(arg);
            });
          case Func::Tanh: if constexpr (std::is_same_v<T, double>) return std::tanh(arg); else return tanh(arg);
          case Func::Abs:  if constexpr (std::is_same_v<T, double>) return std::abs(arg);  else return abs(arg);
        }
        throw AnalysisError("corrupt expression node");
      }
    }
    throw AnalysisError("corrupt expression node");
  }

  std::string source_;
  std::vector<std::string> coords_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Names an expression may not shadow; charts must reject these as coordinate
// names or parsing becomes ambiguous.
bool is_reserved_name(const std::string& name);

}  // namespace sigflip
