#include "expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "gcelab/error.hpp"

namespace gcelab::cli {

struct Expression::Node {
  enum class Op { number, var, add, sub, mul, div, pow, neg, sin, cos, exp } op;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  return std::make_shared<const Node>(Node{op, v, std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "expression '" + s_ + "' at position " + std::to_string(pos_) + ": " + what);
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

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) {
        n = make(Node::Op::add, n, term());
      } else if (accept('-')) {
        n = make(Node::Op::sub, n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) {
        n = make(Node::Op::mul, n, unary());
      } else if (accept('/')) {
        n = make(Node::Op::div, n, unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::pow, base, unary());
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
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "t") return make(Node::Op::var);
      if (word == "pi") return make(Node::Op::number, nullptr, nullptr, std::numbers::pi);
      if (word == "e") return make(Node::Op::number, nullptr, nullptr, std::numbers::e);
      Node::Op op;
      if (word == "sin") {
        op = Node::Op::sin;
      } else if (word == "cos") {
        op = Node::Op::cos;
      } else if (word == "exp") {
        op = Node::Op::exp;
      } else {
        pos_ = start;
        fail("unknown name '" + word + "'");
      }
      if (!accept('(')) fail("expected '(' after " + word);
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(op, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Node::Op::number, nullptr, nullptr, v);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double t) {
  switch (n.op) {
    case Node::Op::number: return n.value;
    case Node::Op::var: return t;
    case Node::Op::add: return eval(*n.a, t) + eval(*n.b, t);
    case Node::Op::sub: return eval(*n.a, t) - eval(*n.b, t);
    case Node::Op::mul: return eval(*n.a, t) * eval(*n.b, t);
    case Node::Op::div: return eval(*n.a, t) / eval(*n.b, t);
    case Node::Op::pow: return std::pow(eval(*n.a, t), eval(*n.b, t));
    case Node::Op::neg: return -eval(*n.a, t);
    case Node::Op::sin: return std::sin(eval(*n.a, t));
    case Node::Op::cos: return std::cos(eval(*n.a, t));
    case Node::Op::exp: return std::exp(eval(*n.a, t));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expression::operator()(double t) const { return eval(*root_, t); }

}  // namespace gcelab::cli
