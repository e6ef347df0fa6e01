#include "gfbm/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "gfbm/error.hpp"

namespace gfbm {

struct Expression::Node {
  enum class Op { number, var, neg, add, sub, mul, div, pow, call } op;
  double value = 0.0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double u) const {
    switch (op) {
      case Op::number: return value;
      case Op::var: return u;
      case Op::neg: return -args[0]->eval(u);
      case Op::add: return args[0]->eval(u) + args[1]->eval(u);
      case Op::sub: return args[0]->eval(u) - args[1]->eval(u);
      case Op::mul: return args[0]->eval(u) * args[1]->eval(u);
      case Op::div: return args[0]->eval(u) / args[1]->eval(u);
      case Op::pow: return std::pow(args[0]->eval(u), args[1]->eval(u));
      case Op::call: {
        const double x = args[0]->eval(u);
        if (function == "exp") return std::exp(x);
        if (function == "log") return std::log(x);
        if (function == "sqrt") return std::sqrt(x);
        if (function == "abs") return std::abs(x);
        if (function == "sin") return std::sin(x);
        if (function == "cos") return std::cos(x);
        if (function == "tanh") return std::tanh(x);
        if (function == "pow") return std::pow(x, args[1]->eval(u));
        return std::nan("");
      }
    }
    return std::nan("");
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("density expression: " + what + " at position " +
                      std::to_string(pos_) + " in '" + text_ + "'");
  }

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

  static NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0,
                      std::string fn = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->value = value;
    n->function = std::move(fn);
    n->args = std::move(args);
    return n;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos_ += used;
      return make(Op::number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "u") return make(Op::var);
      if (name == "pi") return make(Op::number, {}, std::numbers::pi);
      if (name == "e") return make(Op::number, {}, std::numbers::e);
      static const char* kFunctions[] = {"exp", "log", "sqrt", "abs", "sin", "cos", "tanh", "pow"};
      bool known = false;
      for (const char* f : kFunctions) known = known || name == f;
      if (!known) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      std::vector<NodePtr> args{expression()};
      if (name == "pow") {
        if (!accept(',')) fail("pow takes two arguments");
        args.push_back(expression());
      }
      if (!accept(')')) fail("expected ')'");
      return make(Op::call, std::move(args), 0.0, name);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text).parse()) {}

double Expression::operator()(double u) const { return root_->eval(u); }

}  // namespace gfbm
