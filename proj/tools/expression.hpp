#pragma once

// Real expressions in one variable t: numbers, t, pi, e, + - * / ^,
// parentheses and sin, cos, exp.

#include <memory>
#include <string>

namespace gcelab::cli {

class Expression {
 public:
  /// Throws Error(ParseError) with the offending position.
  static Expression parse(const std::string& text);

  double operator()(double t) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace gcelab::cli
