#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zkit/field.hpp"

namespace zkit {

/// Dense univariate polynomial over a prime field, kept in canonical form:
/// no trailing zero coefficients, so the zero polynomial has no coefficients
/// and structural equality is polynomial equality.
class Polynomial {
 public:
  explicit Polynomial(const PrimeField& f) : field_(&f) {}
  /// Coefficient i multiplies x^i. Trailing zeros are stripped.
  Polynomial(const PrimeField& f, std::vector<FieldElement> coeffs);

  static Polynomial constant(const FieldElement& c);
  /// c * x^k
  static Polynomial monomial(const FieldElement& c, std::size_t k);

  const PrimeField& field() const { return *field_; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }
  /// nullopt stands for the degree of the zero polynomial (negative infinity).
  std::optional<std::size_t> degree() const;
  /// Coefficient of x^i; zero past the end.
  FieldElement coeff(std::size_t i) const;

  FieldElement operator()(const FieldElement& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const FieldElement& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const FieldElement& c) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

  /// Keeps only the coefficients of x^0 .. x^(k-1).
  Polynomial truncated(std::size_t k) const;
  /// Coefficients reversed over a window of `len` slots (len >= size()).
  Polynomial reversed(std::size_t len) const;

 private:
  void normalize();
  void check_same(const Polynomial& o) const;

  const PrimeField* field_;
  std::vector<FieldElement> coeffs_;
};

struct DivRem {
  Polynomial quot;
  Polynomial rem;
};

/// Horner evaluation.
FieldElement poly_eval(const Polynomial& f, const FieldElement& x);

/// Lagrange interpolation, O(k^2). Throws DuplicateAbscissa.
Polynomial poly_interpolate(std::span<const std::pair<FieldElement, FieldElement>> points);

/// Euclidean division. Uses schoolbook division for small operands and a
/// Newton-inverse division for large ones; both give identical results.
/// Throws DivisionByZeroPolynomial.
DivRem poly_divrem(const Polynomial& num, const Polynomial& den);

/// (x-1)(x-2)...(x-m). Throws FieldTooSmall unless m >= 1 and 2m < p.
Polynomial vanishing_poly(const PrimeField& f, std::size_t m);

namespace poly_detail {
/// Reference implementations, exposed so tests can compare the fast paths.
Polynomial mul_schoolbook(const Polynomial& a, const Polynomial& b);
Polynomial mul_kronecker(const Polynomial& a, const Polynomial& b);
DivRem divrem_schoolbook(const Polynomial& num, const Polynomial& den);
DivRem divrem_newton(const Polynomial& num, const Polynomial& den);
/// Inverse of f modulo x^k; f(0) must be nonzero.
Polynomial inverse_series(const Polynomial& f, std::size_t k);
}  // namespace poly_detail

/// The interpolation domain {1, ..., m} with a cached subproduct tree.
/// Interpolates m values in O(M(m) log m) and evaluates all m Lagrange basis
/// polynomials at a point in O(m).
class LagrangeDomain {
 public:
  /// Throws FieldTooSmall unless m >= 1 and 2m < p.
  LagrangeDomain(const PrimeField& f, std::size_t m);

  const PrimeField& field() const { return *field_; }
  std::size_t size() const { return m_; }
  /// t(x) = (x-1)...(x-m).
  const Polynomial& vanishing() const { return nodes_[root_].product; }

  /// The unique polynomial of degree < m with f(q) = values[q-1].
  Polynomial interpolate(std::span<const FieldElement> values) const;

  /// [L_1(z), ..., L_m(z)] where L_q is the Lagrange basis polynomial at q.
  std::vector<FieldElement> basis_at(const FieldElement& z) const;

  /// 1 / prod_{j != q} (q - j) for q = 1..m.
  const std::vector<FieldElement>& barycentric_weights() const { return weights_; }

 private:
  struct Node {
    std::size_t lo, hi;  // points lo+1 .. hi
    int left, right;     // -1 for leaves
    Polynomial product;
  };

  int build(std::size_t lo, std::size_t hi);
  Polynomial combine(int node, std::span<const FieldElement> scaled) const;

  const PrimeField* field_;
  std::size_t m_;
  std::vector<FieldElement> weights_;
  std::vector<Node> nodes_;
  int root_ = 0;
};

}  // namespace zkit
