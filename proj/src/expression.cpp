#include "fracspec/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "fracspec/types.hpp"

namespace fracspec {

struct Expression::Node {
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };
  Kind kind = Kind::number;
  double number = 0.0;
  std::size_t slot = 0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

const char* const kFunctions[] = {"sin", "cos", "exp", "log", "sqrt", "pow", "gamma"};

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression \"" + s_ + "\" at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = binary(Node::Kind::add, n, term());
      else if (accept('-')) n = binary(Node::Kind::sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = binary(Node::Kind::mul, n, unary());
      else if (accept('/')) n = binary(Node::Kind::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::negate;
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->number = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);

    if (accept('(')) {
      bool known = false;
      for (const char* f : kFunctions) known = known || id == f;
      if (!known) fail("unknown function '" + id + "'");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::call;
      n->function = id;
      n->args.push_back(expr());
      while (accept(',')) n->args.push_back(expr());
      if (!accept(')')) fail("expected ')' after arguments of " + id);
      const std::size_t want = id == "pow" ? 2 : 1;
      if (n->args.size() != want) fail(id + " takes " + std::to_string(want) + " argument(s)");
      return n;
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == id) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->slot = i;
        return n;
      }
    }
    if (id == "pi") {
      auto n = std::make_shared<Node>();
      n->number = std::numbers::pi;
      return n;
    }
    fail("unknown name '" + id + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double apply(const std::string& f, double a, double b) {
  if (f == "sin") return std::sin(a);
  if (f == "cos") return std::cos(a);
  if (f == "exp") return std::exp(a);
  if (f == "log") return std::log(a);
  if (f == "sqrt") return std::sqrt(a);
  if (f == "pow") return std::pow(a, b);
  return std::tgamma(a);
}

Jet apply(const std::string& f, const Jet& a, const Jet& b) {
  if (f == "sin") return sin(a);
  if (f == "cos") return cos(a);
  if (f == "exp") return exp(a);
  if (f == "log") return log(a);
  if (f == "sqrt") return sqrt(a);
  if (f == "pow") return pow(a, b);
  return tgamma(a);
}

double power(double a, double b) { return std::pow(a, b); }
Jet power(const Jet& a, const Jet& b) { return pow(a, b); }

template <class T>
T evaluate(const Node& n, std::span<const T> vars) {
  switch (n.kind) {
    case Node::Kind::number: return T(n.number);
    case Node::Kind::variable: return vars[n.slot];
    case Node::Kind::negate: return -evaluate(*n.args[0], vars);
    case Node::Kind::add: return evaluate(*n.args[0], vars) + evaluate(*n.args[1], vars);
    case Node::Kind::sub: return evaluate(*n.args[0], vars) - evaluate(*n.args[1], vars);
    case Node::Kind::mul: return evaluate(*n.args[0], vars) * evaluate(*n.args[1], vars);
    case Node::Kind::div: return evaluate(*n.args[0], vars) / evaluate(*n.args[1], vars);
    case Node::Kind::pow: return power(evaluate(*n.args[0], vars), evaluate(*n.args[1], vars));
    case Node::Kind::call: {
      const T a = evaluate(*n.args[0], vars);
      const T b = n.args.size() > 1 ? evaluate(*n.args[1], vars) : T(0.0);
      return apply(n.function, a, b);
    }
  }
  return T(0.0);
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, variables).parse();
  return e;
}

double Expression::eval(std::span<const double> vars) const { return evaluate(*root_, vars); }

Jet Expression::eval(std::span<const Jet> vars) const { return evaluate(*root_, vars); }

}  // namespace fracspec
