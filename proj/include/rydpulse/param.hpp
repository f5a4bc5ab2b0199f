#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rydpulse {

/// Values assigned to sequence variables at build time.
using VariableValues = std::map<std::string, std::vector<double>>;

namespace detail {
struct ExprNode;
}

/// Deferred real-valued expression over declared sequence variables.
///
/// Expressions are immutable trees; copying an Expr shares the tree.
/// Only scalar expressions exist: a size-n variable is accessed through
/// indexing, never as a whole.
class Expr {
public:
  enum class Op { Constant, Variable, Neg, Add, Sub, Mul, Div };

  Expr(double value); // NOLINT(google-explicit-constructor)

  static Expr variable(std::string name, std::size_t index);

  Op op() const;
  double evaluate(const VariableValues &values) const;
  bool is_constant() const;
  /// Names of all variables referenced by the tree.
  void collect_variables(std::set<std::string> &names) const;

  nlohmann::json to_json() const;
  static Expr from_json(const nlohmann::json &j);

  static Expr unary(Op op, const Expr &a);
  static Expr binary(Op op, const Expr &a, const Expr &b);

private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> node);

  std::shared_ptr<const detail::ExprNode> node_;
};

// Namespace-scope so that Variable (implicitly convertible) participates.
Expr operator-(const Expr &a);
Expr operator+(const Expr &a, const Expr &b);
Expr operator-(const Expr &a, const Expr &b);
Expr operator*(const Expr &a, const Expr &b);
Expr operator/(const Expr &a, const Expr &b);

/// A numeric argument that is either known now or deferred until build().
class Param {
public:
  Param(double value) : value_(value) {}      // NOLINT(google-explicit-constructor)
  Param(int value) : value_(value) {}         // NOLINT(google-explicit-constructor)
  Param(long value) : value_(double(value)) {} // NOLINT(google-explicit-constructor)
  Param(Expr expr);                           // NOLINT(google-explicit-constructor)

  bool is_deferred() const { return expr_.has_value(); }
  /// Value of a non-deferred parameter; throws if deferred.
  double value() const;
  double resolve(const VariableValues &values) const;
  void collect_variables(std::set<std::string> &names) const;

  nlohmann::json to_json() const;
  static Param from_json(const nlohmann::json &j);

  friend bool operator==(const Param &a, const Param &b) { return a.to_json() == b.to_json(); }

private:
  double value_ = 0.0;
  std::optional<Expr> expr_;
};

/// Handle returned by Sequence::declare_variable.
class Variable {
public:
  Variable(std::string name, std::size_t size);

  const std::string &name() const { return name_; }
  std::size_t size() const { return size_; }

  /// Scalar expression for element `i`; throws std::out_of_range.
  Expr operator[](std::size_t i) const;
  /// Scalar view of a size-1 variable; throws for larger sizes.
  Expr scalar() const;
  operator Expr() const { return scalar(); } // NOLINT(google-explicit-constructor)

  std::vector<Expr> elements() const;

private:
  std::string name_;
  std::size_t size_;
};

} // namespace rydpulse
