#include "hik/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <utility>

namespace hik::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"tanh", Function::tanh},
}};

Node make(NodeKind kind, std::size_t offset, std::vector<Node> children = {}) {
  Node n;
  n.kind = kind;
  n.offset = offset;
  n.children = std::move(children);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coordinates, const Constants& constants)
      : text_(text), coordinates_(coordinates), constants_(constants) {}

  Node run() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "empty expression", "expression");
    Node n = parse_expr();
    skip_space();
    if (pos_ < text_.size()) throw ParseError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'", "operator or end of input");
    return n;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node parse_expr() {
    Node lhs = parse_term();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('+'))
        lhs = make(NodeKind::add, at, {std::move(lhs), parse_term()});
      else if (accept('-'))
        lhs = make(NodeKind::sub, at, {std::move(lhs), parse_term()});
      else
        return lhs;
    }
  }

  Node parse_term() {
    Node lhs = parse_unary();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('*'))
        lhs = make(NodeKind::mul, at, {std::move(lhs), parse_unary()});
      else if (accept('/'))
        lhs = make(NodeKind::div, at, {std::move(lhs), parse_unary()});
      else
        return lhs;
    }
  }

  Node parse_unary() {
    skip_space();
    const std::size_t at = pos_;
    if (accept('-')) return make(NodeKind::neg, at, {parse_unary()});
    return parse_power();
  }

  Node parse_power() {
    Node base = parse_primary();
    skip_space();
    const std::size_t at = pos_;
    if (accept('^')) return make(NodeKind::pow, at, {std::move(base), parse_unary()});
    return base;
  }

  Node parse_primary() {
    skip_space();
    const std::size_t at = pos_;
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input", "number, name or '('");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Node inner = parse_expr();
      if (!accept(')')) throw ParseError(pos_, "missing ')'", "')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(at, pos_ - at);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        for (const auto& [fname, f] : kFunctions) {
          if (fname != name) continue;
          ++pos_;
          Node arg = parse_expr();
          if (!accept(')')) throw ParseError(pos_, "missing ')' after argument of " + std::string(name), "')'");
          Node n = make(NodeKind::call, at, {std::move(arg)});
          n.function = f;
          return n;
        }
        throw ParseError(at, "unknown function '" + std::string(name) + "'", "one of sin cos tan exp log sqrt sinh cosh tanh");
      }
      for (std::size_t i = 0; i < coordinates_.size(); ++i) {
        if (coordinates_[i] == name) {
          Node n = make(NodeKind::coordinate, at);
          n.index = static_cast<int>(i);
          n.name = std::string(name);
          return n;
        }
      }
      double value = 0.0;
      if (auto it = constants_.find(name); it != constants_.end())
        value = it->second;
      else if (name == "pi")
        value = M_PI;
      else
        throw ParseError(at, "undeclared symbol '" + std::string(name) + "'", "declared coordinate or constant");
      Node n = make(NodeKind::constant, at);
      n.name = std::string(name);
      n.value = value;
      return n;
    }
    throw ParseError(at, "unexpected character '" + std::string(1, c) + "'", "number, name or '('");
  }

  Node parse_number() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) ++end;
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) ++exp_end;
      if (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
        while (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) ++exp_end;
        end = exp_end;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + at, text_.data() + end, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + end) throw ParseError(at, "malformed number", "number");
    pos_ = end;
    Node n = make(NodeKind::number, at);
    n.value = value;
    return n;
  }

  std::string_view text_;
  std::span<const std::string> coordinates_;
  const Constants& constants_;
  std::size_t pos_ = 0;
};

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::neg: return 3;
    case NodeKind::pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string wrap(const Node& n, bool parens) { return parens ? "(" + print(n) + ")" : print(n); }

}  // namespace

const char* function_name(Function f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name.data();
  return "?";
}

ParseError::ParseError(std::size_t offset, std::string message, std::string expected)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message + " (expected " + expected + ")"),
      offset_(offset),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

Node parse(std::string_view text, std::span<const std::string> coordinates, const Constants& constants) {
  return Parser(text, coordinates, constants).run();
}

bool same_structure(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::number:
      if (a.value != b.value) return false;
      break;
    case NodeKind::coordinate:
      if (a.index != b.index) return false;
      break;
    case NodeKind::constant:
      if (a.name != b.name || a.value != b.value) return false;
      break;
    case NodeKind::call:
      if (a.function != b.function) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(a.children[i], b.children[i])) return false;
  return true;
}

std::string print(const Node& node) {
  const int p = precedence(node);
  switch (node.kind) {
    case NodeKind::number: return format_number(node.value);
    case NodeKind::coordinate:
    case NodeKind::constant: return node.name;
    case NodeKind::call: return std::string(function_name(node.function)) + "(" + print(node.children[0]) + ")";
    case NodeKind::neg: return "-" + wrap(node.children[0], precedence(node.children[0]) < 3);
    case NodeKind::pow:
      return wrap(node.children[0], precedence(node.children[0]) <= 4) + "^" +
             wrap(node.children[1], precedence(node.children[1]) < 3);
    default: {
      const char* op = node.kind == NodeKind::add ? " + " : node.kind == NodeKind::sub ? " - " : node.kind == NodeKind::mul ? "*" : "/";
      return wrap(node.children[0], precedence(node.children[0]) < p) + op +
             wrap(node.children[1], precedence(node.children[1]) <= p);
    }
  }
}

bool is_constant(const Node& node) {
  if (node.kind == NodeKind::coordinate) return false;
  for (const auto& c : node.children)
    if (!is_constant(c)) return false;
  return true;
}

namespace detail {

void fail(const Node& node, const std::string& message) { throw EvalError(message, print(node), node.offset); }

}  // namespace detail

}  // namespace hik::expr
