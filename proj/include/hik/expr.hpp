#pragma once

// Coordinate expressions for metric components.
//
// Grammar (whitespace ignored):
//   expr    := term  (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            right-associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
// Functions: sin cos tan exp log sqrt sinh cosh tanh. `pi` is built in;
// other names must be declared coordinates or named constants.

#include <array>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hik/scalar.hpp"

namespace hik::expr {

enum class NodeKind { number, coordinate, constant, add, sub, mul, div, pow, neg, call };

enum class Function { sin, cos, tan, exp, log, sqrt, sinh, cosh, tanh };

const char* function_name(Function f);

struct Node {
  NodeKind kind = NodeKind::number;
  double value = 0.0;     // number literal, or constant value
  int index = -1;         // coordinate index
  Function function = Function::sin;
  std::string name;       // coordinate / constant name
  std::size_t offset = 0; // byte offset of the node in the source text
  std::vector<Node> children;
};

/// Structural equality (ignores source offsets).
bool same_structure(const Node& a, const Node& b);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string message, std::string expected);
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string message_;
  std::string expected_;
};

/// Evaluation failure (log of non-positive, division by zero, ...). `where`
/// is the printed form of the offending node.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& message, std::string where, std::size_t offset)
      : std::runtime_error(message + " in '" + where + "'"), where_(std::move(where)), offset_(offset) {}
  const std::string& where() const { return where_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string where_;
  std::size_t offset_;
};

using Constants = std::map<std::string, double, std::less<>>;

Node parse(std::string_view text, std::span<const std::string> coordinates, const Constants& constants = {});

/// Minimal-parenthesis printer; parse(print(n)) is structurally n.
std::string print(const Node& node);

/// True when the subtree references no coordinate.
bool is_constant(const Node& node);

namespace detail {

template <class T>
T apply(Function f, const T& x) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  using std::tanh;
  switch (f) {
    case Function::sin: return sin(x);
    case Function::cos: return cos(x);
    case Function::tan: return tan(x);
    case Function::exp: return exp(x);
    case Function::log: return log(x);
    case Function::sqrt: return sqrt(x);
    case Function::sinh: return sinh(x);
    case Function::cosh: return cosh(x);
    case Function::tanh: return tanh(x);
  }
  return x;
}

[[noreturn]] void fail(const Node& node, const std::string& message);

}  // namespace detail

/// Evaluate at `point` (one entry per declared coordinate). The scalar type
/// selects the realization: double, Dual<double>, Dual2, ...
template <class T>
T eval(const Node& node, std::span<const T> point) {
  switch (node.kind) {
    case NodeKind::number:
    case NodeKind::constant: return T(node.value);
    case NodeKind::coordinate: return point[node.index];
    case NodeKind::add: return eval(node.children[0], point) + eval(node.children[1], point);
    case NodeKind::sub: return eval(node.children[0], point) - eval(node.children[1], point);
    case NodeKind::mul: return eval(node.children[0], point) * eval(node.children[1], point);
    case NodeKind::div: {
      const T den = eval(node.children[1], point);
      if (value_of(den) == 0.0) detail::fail(node, "division by zero");
      return eval(node.children[0], point) / den;
    }
    case NodeKind::neg: return -eval(node.children[0], point);
    case NodeKind::pow: {
      const Node& exponent = node.children[1];
      const T base = eval(node.children[0], point);
      if (is_constant(exponent)) {
        const double n = value_of(eval(exponent, point));
        if (n == std::round(n) && std::fabs(n) <= 64.0) {
          if (n < 0 && value_of(base) == 0.0) detail::fail(node, "zero raised to a negative power");
          return ipow(base, static_cast<long>(n));
        }
      }
      if (!(value_of(base) > 0.0)) detail::fail(node, "non-integer power of a non-positive base");
      using std::exp;
      using std::log;
      return exp(eval(exponent, point) * log(base));
    }
    case NodeKind::call: {
      const T arg = eval(node.children[0], point);
      const double v = value_of(arg);
      if (node.function == Function::log && !(v > 0.0)) detail::fail(node, "log of a non-positive value");
      if (node.function == Function::sqrt) {
        if (v < 0.0) detail::fail(node, "sqrt of a negative value");
        if (v == 0.0 && is_dual_v<T>) detail::fail(node, "sqrt is not differentiable at zero");
      }
      if (node.function == Function::tan && std::cos(v) == 0.0) detail::fail(node, "tan pole");
      return detail::apply(node.function, arg);
    }
  }
  return T(0.0);
}

template <class T, std::size_t N>
T eval(const Node& node, const std::array<T, N>& point) {
  return eval(node, std::span<const T>(point.data(), N));
}

}  // namespace hik::expr
