#include "zkit/polynomial.hpp"

#include <gmp.h>

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace zkit {
namespace {

constexpr std::size_t kKroneckerThreshold = 32;
constexpr std::size_t kNewtonThreshold = 64;
constexpr std::size_t kLeafSize = 32;

void check_fields(const PrimeField& a, const PrimeField& b) {
  if (&a != &b) throw Error(Errc::kModulusMismatch, "polynomials over different fields");
}

// Divides f by (x - r) in place of a fresh vector; the remainder f(r) is
// dropped. f must have at least one coefficient.
std::vector<FieldElement> divide_linear(const std::vector<FieldElement>& f,
                                        const FieldElement& r) {
  std::vector<FieldElement> q(f.size() - 1, r.field().zero());
  FieldElement carry = r.field().zero();
  for (std::size_t i = f.size(); i-- > 1;) {
    carry = f[i] + carry * r;
    q[i - 1] = carry;
  }
  return q;
}

// (x - lo - 1)(x - lo - 2)...(x - hi)
Polynomial product_range(const PrimeField& f, std::size_t lo, std::size_t hi) {
  if (hi - lo <= kLeafSize) {
    std::vector<FieldElement> c{f.one()};
    for (std::size_t q = lo + 1; q <= hi; ++q) {
      FieldElement root = f.element(static_cast<std::int64_t>(q));
      c.push_back(f.zero());
      for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - root * c[i];
      c[0] = -(root * c[0]);
    }
    return Polynomial(f, std::move(c));
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return product_range(f, lo, mid) * product_range(f, mid, hi);
}

void check_domain_size(const PrimeField& f, std::size_t m) {
  if (m == 0 || mpz_class(2) * mpz_class(std::to_string(m)) >= f.modulus()) {
    throw Error(Errc::kFieldTooSmall,
                "domain of " + std::to_string(m) + " points needs 2m < p");
  }
}

}  // namespace

Polynomial::Polynomial(const PrimeField& f, std::vector<FieldElement> coeffs)
    : field_(&f), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) check_fields(c.field(), f);
  normalize();
}

Polynomial Polynomial::constant(const FieldElement& c) {
  return Polynomial(c.field(), {c});
}

Polynomial Polynomial::monomial(const FieldElement& c, std::size_t k) {
  std::vector<FieldElement> v(k + 1, c.field().zero());
  v[k] = c;
  return Polynomial(c.field(), std::move(v));
}

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

void Polynomial::check_same(const Polynomial& o) const { check_fields(*field_, *o.field_); }

std::optional<std::size_t> Polynomial::degree() const {
  if (coeffs_.empty()) return std::nullopt;
  return coeffs_.size() - 1;
}

FieldElement Polynomial::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : field_->zero();
}

FieldElement Polynomial::operator()(const FieldElement& x) const { return poly_eval(*this, x); }

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same(o);
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), field_->zero());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same(o);
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), field_->zero());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(const FieldElement& c) {
  check_fields(*field_, c.field());
  for (auto& x : coeffs_) x *= c;
  normalize();
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& x : r.coeffs_) x = -x;
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  if (std::min(a.size(), b.size()) < kKroneckerThreshold) {
    return poly_detail::mul_schoolbook(a, b);
  }
  return poly_detail::mul_kronecker(a, b);
}

Polynomial Polynomial::truncated(std::size_t k) const {
  if (k >= coeffs_.size()) return *this;
  return Polynomial(*field_, std::vector<FieldElement>(coeffs_.begin(), coeffs_.begin() + k));
}

Polynomial Polynomial::reversed(std::size_t len) const {
  std::vector<FieldElement> r(len, field_->zero());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r[len - 1 - i] = coeffs_[i];
  return Polynomial(*field_, std::move(r));
}

// ---------------------------------------------------------------------------

FieldElement poly_eval(const Polynomial& f, const FieldElement& x) {
  check_fields(f.field(), x.field());
  FieldElement acc = x.field().zero();
  const auto& c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Polynomial poly_interpolate(std::span<const std::pair<FieldElement, FieldElement>> points) {
  if (points.empty()) throw Error(Errc::kDuplicateAbscissa, "interpolation needs at least one point");
  const PrimeField& f = points[0].first.field();
  std::unordered_set<FieldElement> seen;
  for (const auto& [x, y] : points) {
    check_fields(f, x.field());
    check_fields(f, y.field());
    if (!seen.insert(x).second) {
      throw Error(Errc::kDuplicateAbscissa, "abscissa " + x.to_decimal() + " repeated");
    }
  }

  // M(x) = prod (x - x_j); the i-th basis numerator is M / (x - x_i).
  std::vector<FieldElement> m{f.one()};
  for (const auto& [x, _] : points) {
    m.push_back(f.zero());
    for (std::size_t i = m.size() - 1; i > 0; --i) m[i] = m[i - 1] - x * m[i];
    m[0] = -(x * m[0]);
  }

  const std::size_t k = points.size();
  std::vector<std::vector<FieldElement>> numerators;
  std::vector<FieldElement> denominators;
  numerators.reserve(k);
  denominators.reserve(k);
  for (const auto& [x, _] : points) {
    numerators.push_back(divide_linear(m, x));
    denominators.push_back(poly_eval(Polynomial(f, numerators.back()), x));
  }
  std::vector<FieldElement> inv = batch_inverse(denominators);

  std::vector<FieldElement> out(k, f.zero());
  for (std::size_t i = 0; i < k; ++i) {
    FieldElement scale = points[i].second * inv[i];
    if (scale.is_zero()) continue;
    for (std::size_t j = 0; j < k; ++j) out[j] += scale * numerators[i][j];
  }
  return Polynomial(f, std::move(out));
}

DivRem poly_divrem(const Polynomial& num, const Polynomial& den) {
  check_fields(num.field(), den.field());
  if (den.is_zero()) throw Error(Errc::kDivisionByZeroPolynomial, "division by the zero polynomial");
  if (num.size() < den.size()) return {Polynomial(num.field()), num};
  if (den.size() < kNewtonThreshold || num.size() - den.size() < kNewtonThreshold) {
    return poly_detail::divrem_schoolbook(num, den);
  }
  return poly_detail::divrem_newton(num, den);
}

Polynomial vanishing_poly(const PrimeField& f, std::size_t m) {
  check_domain_size(f, m);
  return product_range(f, 0, m);
}

// ---------------------------------------------------------------------------

namespace poly_detail {

Polynomial mul_schoolbook(const Polynomial& a, const Polynomial& b) {
  const PrimeField& f = a.field();
  if (a.is_zero() || b.is_zero()) return Polynomial(f);
  std::vector<FieldElement> out(a.size() + b.size() - 1, f.zero());
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i].is_zero()) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) out[i + j] += ac[i] * bc[j];
  }
  return Polynomial(f, std::move(out));
}

// Kronecker substitution: pack the Montgomery representatives into wide
// integer slots, multiply once with GMP, and reduce each slot. A slot holds
// a sum of products (aR)(bR), so after reduction mod p one Montgomery step
// by plain 1 brings it back to Montgomery form (ab)R.
Polynomial mul_kronecker(const Polynomial& a, const Polynomial& b) {
  const PrimeField& f = a.field();
  if (a.is_zero() || b.is_zero()) return Polynomial(f);
  const Polynomial& big = a.size() >= b.size() ? a : b;
  const Polynomial& small = a.size() >= b.size() ? b : a;

  const std::size_t nl = f.limb_count();
  const std::size_t slot_bits =
      2 * f.bit_length() + std::bit_width(small.size()) + 1;
  const std::size_t k = (slot_bits + 63) / 64;

  auto pack = [&](const Polynomial& p) {
    std::vector<mp_limb_t> out(p.size() * k, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Limbs& v = p.coeffs()[i].montgomery_limbs();
      std::copy_n(v.begin(), nl, out.begin() + static_cast<std::ptrdiff_t>(i * k));
    }
    return out;
  };
  std::vector<mp_limb_t> x = pack(big);
  std::vector<mp_limb_t> y = pack(small);
  std::vector<mp_limb_t> r(x.size() + y.size());
  if (&big == &small) {
    mpn_sqr(r.data(), x.data(), static_cast<mp_size_t>(x.size()));
  } else {
    mpn_mul(r.data(), x.data(), static_cast<mp_size_t>(x.size()), y.data(),
            static_cast<mp_size_t>(y.size()));
  }

  const std::size_t out_len = big.size() + small.size() - 1;
  const Limbs& p = f.modulus_limbs();
  const auto pinv = f.montgomery_inverse();
  std::vector<mp_limb_t> quot(k + 1);
  std::vector<mp_limb_t> rem(nl);
  Limbs one{};
  one[0] = 1;
  std::vector<FieldElement> out;
  out.reserve(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const mp_limb_t* slot = r.data() + i * k;
    Limbs reduced{};
    if (k >= nl) {
      mpn_tdiv_qr(quot.data(), rem.data(), 0, slot, static_cast<mp_size_t>(k),
                  reinterpret_cast<const mp_limb_t*>(p.data()), static_cast<mp_size_t>(nl));
      std::copy_n(rem.begin(), nl, reduced.begin());
    }
    Limbs mont{};
    ZKIT_LIMB_DISPATCH(nl, (detail::mont_mul<N>(mont.data(), reduced.data(), one.data(),
                                                 p.data(), pinv)));
    out.push_back(FieldElement::from_montgomery_limbs(f, mont));
  }
  return Polynomial(f, std::move(out));
}

DivRem divrem_schoolbook(const Polynomial& num, const Polynomial& den) {
  const PrimeField& f = num.field();
  if (den.is_zero()) throw Error(Errc::kDivisionByZeroPolynomial, "division by the zero polynomial");
  if (num.size() < den.size()) return {Polynomial(f), num};
  std::vector<FieldElement> r = num.coeffs();
  const auto& d = den.coeffs();
  const std::size_t dn = d.size();
  const FieldElement lead_inv = d.back().inverse();
  std::vector<FieldElement> q(r.size() - dn + 1, f.zero());
  for (std::size_t i = q.size(); i-- > 0;) {
    FieldElement c = r[i + dn - 1] * lead_inv;
    q[i] = c;
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < dn; ++j) r[i + j] -= c * d[j];
  }
  r.resize(dn - 1, f.zero());
  return {Polynomial(f, std::move(q)), Polynomial(f, std::move(r))};
}

Polynomial inverse_series(const Polynomial& f, std::size_t k) {
  const PrimeField& field = f.field();
  if (f.is_zero() || f.coeffs()[0].is_zero()) {
    throw Error(Errc::kInversionOfZero, "power series with zero constant term");
  }
  Polynomial g = Polynomial::constant(f.coeffs()[0].inverse());
  const Polynomial two = Polynomial::constant(field.element(std::int64_t{2}));
  for (std::size_t len = 1; len < k;) {
    len = std::min(2 * len, k);
    Polynomial e = (f.truncated(len) * g).truncated(len);
    g = (g * (two - e)).truncated(len);
  }
  return g.truncated(k);
}

DivRem divrem_newton(const Polynomial& num, const Polynomial& den) {
  const PrimeField& f = num.field();
  if (den.is_zero()) throw Error(Errc::kDivisionByZeroPolynomial, "division by the zero polynomial");
  if (num.size() < den.size()) return {Polynomial(f), num};
  const std::size_t k = num.size() - den.size() + 1;
  Polynomial inv = inverse_series(den.reversed(den.size()), k);
  Polynomial q_rev = (num.reversed(num.size()).truncated(k) * inv).truncated(k);
  Polynomial q = q_rev.reversed(k);
  Polynomial r = (num - q * den).truncated(den.size() - 1);
  return {std::move(q), std::move(r)};
}

}  // namespace poly_detail

// ---------------------------------------------------------------------------

LagrangeDomain::LagrangeDomain(const PrimeField& f, std::size_t m) : field_(&f), m_(m) {
  check_domain_size(f, m);

  // w_q = 1 / ((q-1)! * (-1)^(m-q) * (m-q)!)
  std::vector<FieldElement> fact{f.one()};
  fact.reserve(m);
  for (std::size_t i = 1; i < m; ++i) {
    fact.push_back(fact.back() * f.element(static_cast<std::int64_t>(i)));
  }
  std::vector<FieldElement> denom;
  denom.reserve(m);
  for (std::size_t q = 1; q <= m; ++q) {
    FieldElement d = fact[q - 1] * fact[m - q];
    denom.push_back((m - q) % 2 == 0 ? d : -d);
  }
  weights_ = batch_inverse(denom);

  nodes_.reserve(2 * (m / kLeafSize + 1));
  root_ = build(0, m);
}

int LagrangeDomain::build(std::size_t lo, std::size_t hi) {
  if (hi - lo <= kLeafSize) {
    nodes_.push_back(Node{lo, hi, -1, -1, product_range(*field_, lo, hi)});
    return static_cast<int>(nodes_.size() - 1);
  }
  std::size_t mid = lo + (hi - lo) / 2;
  int l = build(lo, mid);
  int r = build(mid, hi);
  Polynomial prod = nodes_[l].product * nodes_[r].product;
  nodes_.push_back(Node{lo, hi, l, r, std::move(prod)});
  return static_cast<int>(nodes_.size() - 1);
}

// sum over the node's points q of scaled[q-1] * prod_{j in node, j != q} (x - j)
Polynomial LagrangeDomain::combine(int id, std::span<const FieldElement> scaled) const {
  const Node& node = nodes_[id];
  if (node.left < 0) {
    const PrimeField& f = *field_;
    const auto& prod = node.product.coeffs();
    std::vector<FieldElement> acc(prod.size() - 1, f.zero());
    for (std::size_t q = node.lo + 1; q <= node.hi; ++q) {
      const FieldElement& c = scaled[q - 1];
      if (c.is_zero()) continue;
      std::vector<FieldElement> part = divide_linear(prod, f.element(static_cast<std::int64_t>(q)));
      for (std::size_t i = 0; i < part.size(); ++i) acc[i] += c * part[i];
    }
    return Polynomial(f, std::move(acc));
  }
  Polynomial l = combine(node.left, scaled);
  Polynomial r = combine(node.right, scaled);
  return l * nodes_[node.right].product + r * nodes_[node.left].product;
}

Polynomial LagrangeDomain::interpolate(std::span<const FieldElement> values) const {
  if (values.size() != m_) {
    throw Error(Errc::kDimensionMismatch, "expected " + std::to_string(m_) + " values, got " +
                                              std::to_string(values.size()));
  }
  std::vector<FieldElement> scaled;
  scaled.reserve(m_);
  for (std::size_t q = 0; q < m_; ++q) {
    check_fields(*field_, values[q].field());
    scaled.push_back(values[q] * weights_[q]);
  }
  return combine(root_, scaled);
}

std::vector<FieldElement> LagrangeDomain::basis_at(const FieldElement& z) const {
  check_fields(*field_, z.field());
  const PrimeField& f = *field_;
  std::vector<FieldElement> diffs;
  diffs.reserve(m_);
  FieldElement t = f.one();
  for (std::size_t q = 1; q <= m_; ++q) {
    diffs.push_back(z - f.element(static_cast<std::int64_t>(q)));
    t *= diffs.back();
  }
  std::vector<FieldElement> out(m_, f.zero());
  if (t.is_zero()) {
    // z is one of the points: the basis is an indicator vector.
    for (std::size_t q = 0; q < m_; ++q) {
      if (diffs[q].is_zero()) out[q] = f.one();
    }
    return out;
  }
  std::vector<FieldElement> inv = batch_inverse(diffs);
  for (std::size_t q = 0; q < m_; ++q) out[q] = t * weights_[q] * inv[q];
  return out;
}

}  // namespace zkit
