#pragma once

#include <memory>
#include <vector>

#include "zkit/circuit/r1cs.hpp"
#include "zkit/polynomial.hpp"

namespace zkit {

/// Quadratic arithmetic program of a constraint system with n wires and m
/// constraints, on target points 1..m:
///   u_i(q) = A[q][i],  v_i(q) = B[q][i],  w_i(q) = C[q][i],  t = (x-1)...(x-m).
///
/// The polynomials are held in Lagrange form (the sparse matrix columns) and
/// materialized on request; evaluation at a point costs O(nonzeros + m).
class Qap {
 public:
  /// Throws FieldTooSmall unless 2m < p.
  explicit Qap(circuit::ConstraintSystem cs);

  const PrimeField& field() const { return cs_.field(); }
  std::size_t num_wires() const { return cs_.num_wires(); }
  std::size_t num_constraints() const { return cs_.num_constraints(); }
  const circuit::ConstraintSystem& constraint_system() const { return cs_; }
  const LagrangeDomain& domain() const { return *domain_; }
  const Polynomial& t() const { return domain_->vanishing(); }

  /// Coefficient form of u_i, v_i, w_i (degree <= m-1).
  Polynomial u(std::size_t i) const;
  Polynomial v(std::size_t i) const;
  Polynomial w(std::size_t i) const;

  struct PointEvaluation {
    std::vector<FieldElement> u, v, w;  // u_i(z), v_i(z), w_i(z) for every wire
    FieldElement t;                     // t(z)
  };
  PointEvaluation evaluate_at(const FieldElement& z) const;

  /// sum_i s_i u_i, sum_i s_i v_i, sum_i s_i w_i in coefficient form.
  struct Combined {
    Polynomial u, v, w;
  };
  Combined combine(const circuit::Witness& s) const;

 private:
  enum class Matrix { kA, kB, kC };
  Polynomial column(Matrix which, std::size_t wire) const;

  circuit::ConstraintSystem cs_;
  std::shared_ptr<const LagrangeDomain> domain_;
};

Qap reduce(const circuit::ConstraintSystem& cs);

/// h with (sum s_i u_i)(sum s_i v_i) - (sum s_i w_i) = h * t. Throws
/// NotSatisfying if t does not divide, DimensionMismatch on a witness of the
/// wrong length.
Polynomial compute_h(const Qap& qap, const circuit::Witness& s);

/// Same computation, returning the quotient even when the remainder is
/// nonzero. Only for modelling a cheating prover.
Polynomial compute_h_unchecked(const Qap& qap, const circuit::Witness& s);

/// True iff compute_h succeeds.
bool qap_satisfied(const Qap& qap, const circuit::Witness& s);

}  // namespace zkit
