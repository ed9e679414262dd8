#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "zkit/error.hpp"
#include "zkit/field.hpp"

namespace zkit::circuit {

enum class Visibility { kPublicInput, kPrivateInput, kInternal, kOutput };

std::string_view visibility_name(Visibility v);
bool is_input(Visibility v);

struct Term {
  std::size_t signal;
  FieldElement coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// sum_i coeff_i * signal_i + constant, with terms sorted by signal index and
/// no zero coefficients.
class LinearCombination {
 public:
  explicit LinearCombination(const PrimeField& f) : constant_(f.zero()) {}
  static LinearCombination constant(const FieldElement& c);
  static LinearCombination signal(const PrimeField& f, std::size_t index);

  const PrimeField& field() const { return constant_.field(); }
  const std::vector<Term>& terms() const { return terms_; }
  const FieldElement& constant_term() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  /// this += scale * other
  void add_scaled(const LinearCombination& other, const FieldElement& scale);
  void add_term(std::size_t signal, const FieldElement& coeff);
  void add_constant(const FieldElement& c) { constant_ += c; }

  LinearCombination& operator+=(const LinearCombination& o);
  LinearCombination& operator-=(const LinearCombination& o);
  LinearCombination& operator*=(const FieldElement& c);
  friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
  friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
  friend LinearCombination operator*(LinearCombination a, const FieldElement& c) { return a *= c; }
  friend LinearCombination operator+(LinearCombination a, const FieldElement& c) {
    a.add_constant(c);
    return a;
  }
  friend LinearCombination operator-(LinearCombination a, const FieldElement& c) {
    a.add_constant(-c);
    return a;
  }
  friend bool operator==(const LinearCombination&, const LinearCombination&) = default;

  /// Evaluates against per-signal values; every referenced signal must have one.
  FieldElement evaluate(std::span<const std::optional<FieldElement>> values) const;

 private:
  std::vector<Term> terms_;
  FieldElement constant_;
};

/// product.first * product.second + linear, or just linear.
struct Quadratic {
  std::optional<std::pair<LinearCombination, LinearCombination>> product;
  LinearCombination linear;

  explicit Quadratic(LinearCombination l) : linear(std::move(l)) {}
  Quadratic(LinearCombination a, LinearCombination b, LinearCombination l)
      : product(std::make_pair(std::move(a), std::move(b))), linear(std::move(l)) {}

  FieldElement evaluate(std::span<const std::optional<FieldElement>> values) const;
  void for_each_signal(const std::function<void(std::size_t)>& fn) const;
};

struct SignalDecl {
  std::string name;
  Visibility visibility;
  SourceLocation location;
};

/// target <- rhs, a constrained assignment.
struct Assignment {
  std::size_t target;
  Quadratic rhs;
  SourceLocation location;
};

/// lhs = rhs, a constraint with no assignment.
struct Assertion {
  Quadratic lhs;
  Quadratic rhs;
  SourceLocation location;
};

/// target <-- builtin(args), computed during witness evaluation but not
/// constrained; the surrounding gadget must constrain the result.
struct Hint {
  std::size_t target;
  std::string builtin;
  std::vector<LinearCombination> args;
  SourceLocation location;
};

using Statement = std::variant<Assignment, Assertion, Hint>;

/// Names of the hint builtins understood by witness evaluation:
///   bit(x, i, width)  bit i of x; RangeViolation if x >= 2^width
///   idiv(a, b)        floor(a / b) on canonical integers; DivisorZero if b = 0
///   imod(a, b)        a mod b on canonical integers; DivisorZero if b = 0
bool is_hint_builtin(std::string_view name);

/// A validated circuit: every referenced signal is declared, each non-input
/// signal is assigned exactly once, and assignments form a DAG. Immutable.
class CircuitAst {
 public:
  const PrimeField& field() const { return *field_; }
  const std::vector<SignalDecl>& signals() const { return signals_; }
  const std::vector<Statement>& statements() const { return statements_; }
  /// Indices of Assignment/Hint statements in an order where every statement
  /// comes after the ones it depends on (textual order where possible).
  const std::vector<std::size_t>& evaluation_order() const { return order_; }

  std::optional<std::size_t> find_signal(std::string_view name) const;
  std::size_t count_statements_of_kind(std::size_t variant_index) const;

 private:
  friend class CircuitBuilder;
  CircuitAst() = default;

  const PrimeField* field_ = nullptr;
  std::vector<SignalDecl> signals_;
  std::vector<Statement> statements_;
  std::vector<std::size_t> order_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

class CircuitBuilder;

/// A named, parameterized circuit fragment. `params` are compile-time
/// integers, `args` the input wires; the result maps output names (as seen
/// by the host, e.g. "out") to linear combinations.
using TemplateOutputs = std::vector<std::pair<std::string, LinearCombination>>;
using TemplateFn = std::function<TemplateOutputs(
    CircuitBuilder&, std::span<const std::uint64_t> params,
    std::span<const LinearCombination> args, SourceLocation where)>;

class TemplateRegistry {
 public:
  void add(std::string name, TemplateFn fn) { templates_[std::move(name)] = std::move(fn); }
  const TemplateFn* find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, TemplateFn, std::less<>> templates_;
};

/// Incrementally constructs a CircuitAst. Used by the DSL parser and by the
/// gadget library. Names are qualified by the current scope stack
/// ("hasher.round3.t2"), which keeps gadget instances hygienic.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(const PrimeField& f);

  const PrimeField& field() const { return *field_; }
  FieldElement constant(std::int64_t v) const { return field_->element(v); }
  LinearCombination lc(const FieldElement& c) const { return LinearCombination::constant(c); }
  LinearCombination lc(std::int64_t c) const { return lc(constant(c)); }

  class ScopeGuard {
   public:
    ~ScopeGuard() { builder_->scopes_.pop_back(); }
    ScopeGuard(const ScopeGuard&) = delete;
    ScopeGuard& operator=(const ScopeGuard&) = delete;

   private:
    friend class CircuitBuilder;
    explicit ScopeGuard(CircuitBuilder* b) : builder_(b) {}
    CircuitBuilder* builder_;
  };
  [[nodiscard]] ScopeGuard scope(std::string name);
  std::string qualify(std::string_view local) const;

  /// Declares a signal under the current scope. SyntaxError on redeclaration.
  std::size_t declare(std::string_view local, Visibility v, SourceLocation where = {});
  /// Same, without scope qualification.
  std::size_t declare_qualified(std::string name, Visibility v, SourceLocation where = {});
  std::optional<std::size_t> find(std::string_view qualified) const;
  const std::string& signal_name(std::size_t index) const { return ast_.signals_[index].name; }
  Visibility signal_visibility(std::size_t index) const { return ast_.signals_[index].visibility; }
  LinearCombination signal(std::size_t index) const {
    return LinearCombination::signal(*field_, index);
  }

  /// Constrained assignment. DoubleAssignment if already assigned or an input.
  void assign(std::size_t target, Quadratic rhs, SourceLocation where = {});
  void assert_equal(Quadratic lhs, Quadratic rhs, SourceLocation where = {});
  void hint(std::size_t target, std::string builtin, std::vector<LinearCombination> args,
            SourceLocation where = {});

  /// Declares a fresh internal signal and constrains it to a * b.
  LinearCombination mul(std::string_view local, const LinearCombination& a,
                        const LinearCombination& b, SourceLocation where = {});
  /// Declares a fresh internal signal computed by a hint.
  LinearCombination hinted(std::string_view local, std::string builtin,
                           std::vector<LinearCombination> args, SourceLocation where = {});
  /// Constrains x * (1 - x) = 0.
  void assert_bit(const LinearCombination& x, SourceLocation where = {});

  /// Validates and freezes the circuit. Throws UnassignedSignal or
  /// CyclicDependency.
  CircuitAst finish() &&;

 private:
  const PrimeField* field_;
  CircuitAst ast_;
  std::vector<std::string> scopes_;
  std::vector<std::optional<std::size_t>> assigned_by_;  // statement index
};

}  // namespace zkit::circuit
