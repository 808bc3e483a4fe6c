#pragma once

// Minimal arithmetic expressions for user-defined problems:
//   + - * / ^, unary minus, parentheses, numbers, named variables, the
//   constant pi, and the functions sin cos exp log sqrt pow gamma.
// Variables are bound to slots at parse time; evaluation works on double or
// on Jet (for derivatives of exact solutions).

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fracspec/jet.hpp"

namespace fracspec {

class Expression {
 public:
  /// Throws ConfigError with the offending position on syntax errors or
  /// names not listed in `variables`.
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);

  double eval(std::span<const double> vars) const;
  Jet eval(std::span<const Jet> vars) const;

  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace fracspec
