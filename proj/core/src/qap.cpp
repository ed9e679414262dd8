#include "zkit/qap.hpp"

namespace zkit {
namespace {

// Below this many constraints columns are interpolated with the plain
// Lagrange formula; above it the domain's subproduct tree is used.
constexpr std::size_t kNaiveInterpolationLimit = 64;

void check_witness(const Qap& qap, const circuit::Witness& s) {
  if (s.size() != qap.num_wires()) {
    throw Error(Errc::kDimensionMismatch, "witness has " + std::to_string(s.size()) +
                                              " values, QAP has " +
                                              std::to_string(qap.num_wires()) + " wires");
  }
  if (&s.field() != &qap.field()) {
    throw Error(Errc::kModulusMismatch, "witness and QAP over different fields");
  }
}

DivRem quotient(const Qap& qap, const circuit::Witness& s) {
  check_witness(qap, s);
  auto c = qap.combine(s);
  Polynomial p = c.u * c.v - c.w;
  return poly_divrem(p, qap.t());
}

}  // namespace

Qap::Qap(circuit::ConstraintSystem cs)
    : cs_(std::move(cs)),
      domain_(std::make_shared<LagrangeDomain>(cs_.field(), cs_.num_constraints())) {}

Polynomial Qap::column(Matrix which, std::size_t wire) const {
  if (wire >= num_wires()) throw Error(Errc::kDimensionMismatch, "wire index out of range");
  const PrimeField& f = field();
  const std::size_t m = num_constraints();
  std::vector<FieldElement> values;
  values.reserve(m);
  for (std::size_t q = 0; q < m; ++q) {
    values.push_back(which == Matrix::kA   ? cs_.a(q, wire)
                     : which == Matrix::kB ? cs_.b(q, wire)
                                           : cs_.c(q, wire));
  }
  if (m <= kNaiveInterpolationLimit) {
    std::vector<std::pair<FieldElement, FieldElement>> pts;
    pts.reserve(m);
    for (std::size_t q = 0; q < m; ++q) {
      pts.emplace_back(f.element(static_cast<std::int64_t>(q + 1)), values[q]);
    }
    return poly_interpolate(pts);
  }
  return domain_->interpolate(values);
}

Polynomial Qap::u(std::size_t i) const { return column(Matrix::kA, i); }
Polynomial Qap::v(std::size_t i) const { return column(Matrix::kB, i); }
Polynomial Qap::w(std::size_t i) const { return column(Matrix::kC, i); }

Qap::PointEvaluation Qap::evaluate_at(const FieldElement& z) const {
  const PrimeField& f = field();
  std::vector<FieldElement> basis = domain_->basis_at(z);
  PointEvaluation out{std::vector<FieldElement>(num_wires(), f.zero()),
                      std::vector<FieldElement>(num_wires(), f.zero()),
                      std::vector<FieldElement>(num_wires(), f.zero()), poly_eval(t(), z)};
  for (std::size_t q = 0; q < num_constraints(); ++q) {
    const auto& row = cs_.rows()[q];
    const FieldElement& l = basis[q];
    for (const auto& [wire, coeff] : row.a) out.u[wire] += coeff * l;
    for (const auto& [wire, coeff] : row.b) out.v[wire] += coeff * l;
    for (const auto& [wire, coeff] : row.c) out.w[wire] += coeff * l;
  }
  return out;
}

Qap::Combined Qap::combine(const circuit::Witness& s) const {
  check_witness(*this, s);
  const std::size_t m = num_constraints();
  std::vector<FieldElement> a, b, c;
  a.reserve(m);
  b.reserve(m);
  c.reserve(m);
  for (const auto& row : cs_.rows()) {
    a.push_back(circuit::dot(row.a, s));
    b.push_back(circuit::dot(row.b, s));
    c.push_back(circuit::dot(row.c, s));
  }
  return {domain_->interpolate(a), domain_->interpolate(b), domain_->interpolate(c)};
}

Qap reduce(const circuit::ConstraintSystem& cs) { return Qap(cs); }

Polynomial compute_h(const Qap& qap, const circuit::Witness& s) {
  auto [h, r] = quotient(qap, s);
  if (!r.is_zero()) {
    throw Error(Errc::kNotSatisfying, "t(x) does not divide u(x)v(x) - w(x): witness violates a constraint");
  }
  return h;
}

Polynomial compute_h_unchecked(const Qap& qap, const circuit::Witness& s) {
  return quotient(qap, s).quot;
}

bool qap_satisfied(const Qap& qap, const circuit::Witness& s) {
  return quotient(qap, s).rem.is_zero();
}

}  // namespace zkit
