#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zkit/circuit/ast.hpp"

namespace zkit::circuit {

struct WireInfo {
  std::string name;
  Visibility visibility;
  friend bool operator==(const WireInfo&, const WireInfo&) = default;
};

/// (wire index, coefficient) pairs sorted by wire, no zero coefficients.
using SparseVector = std::vector<std::pair<std::size_t, FieldElement>>;

/// One rank-1 constraint (s . a) * (s . b) = (s . c).
struct Constraint {
  SparseVector a, b, c;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Name used for wire 0, which always carries the constant 1.
inline constexpr const char* kOneWireName = "1";

/// A rank-1 constraint system with n wires (wire 0 = constant one) and m
/// constraints. Immutable once constructed.
class ConstraintSystem {
 public:
  /// Throws DimensionMismatch unless m >= 1, n >= 2 and every index < n.
  ConstraintSystem(const PrimeField& f, std::vector<WireInfo> wires, std::vector<Constraint> rows);

  const PrimeField& field() const { return *field_; }
  std::size_t num_wires() const { return wires_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  const std::vector<WireInfo>& wires() const { return wires_; }
  const std::vector<Constraint>& rows() const { return rows_; }
  std::optional<std::size_t> wire_index(std::string_view name) const;

  /// Dense accessors, for tests and small systems.
  FieldElement a(std::size_t row, std::size_t wire) const;
  FieldElement b(std::size_t row, std::size_t wire) const;
  FieldElement c(std::size_t row, std::size_t wire) const;

  friend bool operator==(const ConstraintSystem& x, const ConstraintSystem& y) {
    return x.field_ == y.field_ && x.wires_ == y.wires_ && x.rows_ == y.rows_;
  }

 private:
  const PrimeField* field_;
  std::vector<WireInfo> wires_;
  std::vector<Constraint> rows_;
};

/// Wire assignment s with s[0] = 1.
class Witness {
 public:
  /// Throws DimensionMismatch if empty or s[0] != 1.
  Witness(const PrimeField& f, std::vector<FieldElement> values);

  const PrimeField& field() const { return *field_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<FieldElement>& values() const { return values_; }
  const FieldElement& operator[](std::size_t i) const { return values_[i]; }
  /// Replaces one value (i >= 1); used to build tampered witnesses.
  void set(std::size_t i, const FieldElement& v);

  friend bool operator==(const Witness&, const Witness&) = default;

 private:
  const PrimeField* field_;
  std::vector<FieldElement> values_;
};

FieldElement dot(const SparseVector& row, const Witness& w);

/// Wire index of every AST signal. Inputs come first (public and private
/// interleaved in declaration order), then internal signals, then outputs;
/// the constant wire is index 0.
std::vector<std::size_t> wire_layout(const CircuitAst& ast);

/// One constraint per assignment and assertion; hints produce none.
ConstraintSystem flatten(const CircuitAst& ast);

/// True iff every row holds. Throws DimensionMismatch on size or field mismatch.
bool check_constraints(const ConstraintSystem& cs, const Witness& w);
/// Index of the first violated row, if any.
std::optional<std::size_t> first_violated(const ConstraintSystem& cs, const Witness& w);

using InputMap = std::map<std::string, FieldElement, std::less<>>;

/// Computes all signal values from the inputs. Throws MissingInput,
/// UnknownSignal (value for a non-input), AssertionFailed, and the hint
/// errors RangeViolation / DivisorZero.
Witness eval_witness(const CircuitAst& ast, const InputMap& inputs);

/// A constraint system with some wires fixed to public values. The fixed
/// wires are folded into the constant column and removed.
struct Specialization {
  ConstraintSystem cs;
  std::vector<std::size_t> kept;  // original wire index of each remaining wire
};

/// Throws UnknownSignal for unknown names and DimensionMismatch if the
/// constant wire is named.
Specialization specialize(const ConstraintSystem& cs, const InputMap& fixed);
/// Restricts a witness of the original system to the kept wires.
Witness project(const Witness& w, const std::vector<std::size_t>& kept);

}  // namespace zkit::circuit
