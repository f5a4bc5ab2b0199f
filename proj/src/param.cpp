#include "rydpulse/param.hpp"

#include "rydpulse/error.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rydpulse {

namespace detail {
struct ExprNode {
  Expr::Op op = Expr::Op::Constant;
  double value = 0.0;
  std::string name;
  std::size_t index = 0;
  std::vector<Expr> args;
};
} // namespace detail

namespace {

const char *op_name(Expr::Op op) {
  switch (op) {
  case Expr::Op::Neg: return "neg";
  case Expr::Op::Add: return "add";
  case Expr::Op::Sub: return "sub";
  case Expr::Op::Mul: return "mul";
  case Expr::Op::Div: return "div";
  default: return "";
  }
}

Expr::Op op_from_name(const std::string &name) {
  if (name == "neg") return Expr::Op::Neg;
  if (name == "add") return Expr::Op::Add;
  if (name == "sub") return Expr::Op::Sub;
  if (name == "mul") return Expr::Op::Mul;
  if (name == "div") return Expr::Op::Div;
  throw Error("unknown expression operator '" + name + "'");
}

} // namespace

Expr::Expr(double value) {
  auto node = std::make_shared<detail::ExprNode>();
  node->op = Op::Constant;
  node->value = value;
  node_ = std::move(node);
}

Expr::Expr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}

Expr Expr::variable(std::string name, std::size_t index) {
  auto node = std::make_shared<detail::ExprNode>();
  node->op = Op::Variable;
  node->name = std::move(name);
  node->index = index;
  return Expr(std::move(node));
}

Expr Expr::binary(Op op, const Expr &a, const Expr &b) {
  auto node = std::make_shared<detail::ExprNode>();
  node->op = op;
  node->args = {a, b};
  return Expr(std::move(node));
}

Expr::Op Expr::op() const { return node_->op; }

double Expr::evaluate(const VariableValues &values) const {
  const auto &n = *node_;
  switch (n.op) {
  case Op::Constant:
    return n.value;
  case Op::Variable: {
    auto it = values.find(n.name);
    if (it == values.end()) {
      throw Error("no value given for variable '" + n.name + "'");
    }
    if (n.index >= it->second.size()) {
      throw Error("index " + std::to_string(n.index) + " out of range for variable '" +
                  n.name + "'");
    }
    return it->second[n.index];
  }
  case Op::Neg:
    return -n.args[0].evaluate(values);
  case Op::Add:
    return n.args[0].evaluate(values) + n.args[1].evaluate(values);
  case Op::Sub:
    return n.args[0].evaluate(values) - n.args[1].evaluate(values);
  case Op::Mul:
    return n.args[0].evaluate(values) * n.args[1].evaluate(values);
  case Op::Div:
    return n.args[0].evaluate(values) / n.args[1].evaluate(values);
  }
  return 0.0;
}

bool Expr::is_constant() const {
  std::set<std::string> names;
  collect_variables(names);
  return names.empty();
}

void Expr::collect_variables(std::set<std::string> &names) const {
  if (node_->op == Op::Variable) {
    names.insert(node_->name);
  }
  for (const auto &arg : node_->args) {
    arg.collect_variables(names);
  }
}

nlohmann::json Expr::to_json() const {
  const auto &n = *node_;
  switch (n.op) {
  case Op::Constant:
    return n.value;
  case Op::Variable:
    return {{"var", n.name}, {"index", n.index}};
  default: {
    auto args = nlohmann::json::array();
    for (const auto &a : n.args) {
      args.push_back(a.to_json());
    }
    return {{"op", op_name(n.op)}, {"args", args}};
  }
  }
}

Expr Expr::from_json(const nlohmann::json &j) {
  if (j.is_number()) {
    return Expr(j.get<double>());
  }
  if (!j.is_object()) {
    throw Error("expression must be a number or an object");
  }
  if (j.contains("var")) {
    return variable(j.at("var").get<std::string>(), j.value("index", std::size_t{0}));
  }
  const Op op = op_from_name(j.at("op").get<std::string>());
  const auto &args = j.at("args");
  if (op == Op::Neg) {
    if (args.size() != 1) throw Error("'neg' takes one argument");
    return -from_json(args[0]);
  }
  if (args.size() != 2) {
    throw Error(std::string("'") + op_name(op) + "' takes two arguments");
  }
  return binary(op, from_json(args[0]), from_json(args[1]));
}

Expr Expr::unary(Op op, const Expr &a) {
  auto node = std::make_shared<detail::ExprNode>();
  node->op = op;
  node->args = {a};
  return Expr(std::move(node));
}

Expr operator-(const Expr &a) { return Expr::unary(Expr::Op::Neg, a); }
Expr operator+(const Expr &a, const Expr &b) { return Expr::binary(Expr::Op::Add, a, b); }
Expr operator-(const Expr &a, const Expr &b) { return Expr::binary(Expr::Op::Sub, a, b); }
Expr operator*(const Expr &a, const Expr &b) { return Expr::binary(Expr::Op::Mul, a, b); }
Expr operator/(const Expr &a, const Expr &b) { return Expr::binary(Expr::Op::Div, a, b); }

Param::Param(Expr expr) {
  if (expr.op() == Expr::Op::Constant) {
    value_ = expr.evaluate({});
  } else {
    expr_ = std::move(expr);
  }
}

double Param::value() const {
  if (expr_) {
    throw Error("parameter depends on a variable and has no value before build()");
  }
  return value_;
}

double Param::resolve(const VariableValues &values) const {
  return expr_ ? expr_->evaluate(values) : value_;
}

void Param::collect_variables(std::set<std::string> &names) const {
  if (expr_) expr_->collect_variables(names);
}

nlohmann::json Param::to_json() const { return expr_ ? expr_->to_json() : nlohmann::json(value_); }

Param Param::from_json(const nlohmann::json &j) { return Param(Expr::from_json(j)); }

Variable::Variable(std::string name, std::size_t size) : name_(std::move(name)), size_(size) {
  if (size_ == 0) {
    throw Error("variable '" + name_ + "' must have size >= 1");
  }
}

Expr Variable::operator[](std::size_t i) const {
  if (i >= size_) {
    throw std::out_of_range("index " + std::to_string(i) + " out of range for variable '" +
                            name_ + "' of size " + std::to_string(size_));
  }
  return Expr::variable(name_, i);
}

Expr Variable::scalar() const {
  if (size_ != 1) {
    throw Error("variable '" + name_ + "' has size " + std::to_string(size_) +
                "; index it to obtain a scalar");
  }
  return Expr::variable(name_, 0);
}

std::vector<Expr> Variable::elements() const {
  std::vector<Expr> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    out.push_back(Expr::variable(name_, i));
  }
  return out;
}

} // namespace rydpulse
