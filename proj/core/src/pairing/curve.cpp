#include "zkit/pairing/curve.hpp"

#include <sstream>

#include "curve_kernel.hpp"

namespace zkit::pairing {
namespace detail {

std::unique_ptr<CurveKernelBase> make_curve_kernel(const PrimeField& fq, const mpz_class& order,
                                                   const mpz_class& cofactor) {
  std::unique_ptr<CurveKernelBase> k;
  ZKIT_LIMB_DISPATCH(fq.limb_count(), (k = std::make_unique<CurveKernel<N>>(fq, order, cofactor)));
  return k;
}

}  // namespace detail

namespace {

using detail::AffinePoint;
using detail::Exponent;
using detail::Fq2Value;

mpz_class find_cofactor(const mpz_class& p) {
  const mpz_class floor_bound = mpz_class(1) << 62;
  mpz_class h = 4;
  if (h * p < floor_bound) {
    h = (floor_bound + p - 1) / p;
    h = ((h + 3) / 4) * 4;
  }
  for (;; h += 4) {
    if (h % p == 0) continue;
    mpz_class q = h * p - 1;
    if (mpz_probab_prime_p(q.get_mpz_t(), 64) != 0) return h;
  }
}

std::vector<std::uint64_t> mpz_limbs(const mpz_class& v) {
  std::vector<std::uint64_t> out((mpz_sizeinbase(v.get_mpz_t(), 2) + 63) / 64, 0);
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
  return out;
}

std::vector<Limbs> scalar_limbs(std::span<const FieldElement> ks) {
  std::vector<Limbs> out;
  out.reserve(ks.size());
  for (const auto& k : ks) out.push_back(k.canonical_limbs());
  return out;
}

}  // namespace

const CurveBackend& CurveBackend::get(const PrimeField& fr) {
  return static_cast<const CurveBackend&>(backend(BackendKind::kCurve, fr));
}

CurveBackend::~CurveBackend() = default;

CurveBackend::CurveBackend(const PrimeField& fr) : Backend(fr) {
  h_ = find_cofactor(fr.modulus());
  fq_ = &PrimeField::get(mpz_class(h_ * fr.modulus() - 1));
  kernel_ = detail::make_curve_kernel(*fq_, fr.modulus(), h_);

  // First x = 1, 2, ... with x^3 + x a nonzero square whose point, times the
  // cofactor, is not the identity.
  const mpz_class sqrt_exp = (fq_->modulus() + 1) / 4;
  const auto h_limbs = mpz_limbs(h_);
  for (std::int64_t xi = 1;; ++xi) {
    FieldElement x = fq_->element(xi);
    FieldElement rhs = x * x * x + x;
    if (rhs.is_zero()) continue;
    FieldElement y = rhs.pow(sqrt_exp);
    if (y * y != rhs) continue;
    AffinePoint pt{x.montgomery_limbs(), y.montgomery_limbs(), false};
    AffinePoint g = kernel_->mul(pt, Exponent{h_limbs, mpz_sizeinbase(h_.get_mpz_t(), 2)});
    if (!g.inf) {
      kernel_->set_generator(g);
      generator_ = make_element(g.x, g.y, false);
      break;
    }
  }
}

std::string CurveBackend::descriptor() const { return "curve:q=" + fq_->modulus_hex(); }

std::vector<GroupElement> CurveBackend::encode_batch(std::span<const FieldElement> as) const {
  for (const auto& a : as) {
    if (&a.field() != &scalar_field()) {
      throw Error(Errc::kModulusMismatch, "encode: value is not in the scalar field");
    }
  }
  auto ks = scalar_limbs(as);
  auto pts = kernel_->fixed_base(ks);
  std::vector<GroupElement> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(make_element(p.x, p.y, p.inf));
  return out;
}

GroupElement CurveBackend::msm(std::span<const GroupElement> points,
                               std::span<const FieldElement> scalars) const {
  if (points.size() != scalars.size()) {
    throw Error(Errc::kDimensionMismatch, "msm: point and scalar counts differ");
  }
  std::vector<AffinePoint> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    check_mine(p);
    pts.push_back(AffinePoint{x_of(p), y_of(p), infinity_of(p)});
  }
  auto r = kernel_->msm(pts, scalar_limbs(scalars));
  return make_element(r.x, r.y, r.inf);
}

std::string CurveBackend::to_text(const GroupElement& e) const {
  check_mine(e);
  if (infinity_of(e)) return "1,0,0";
  auto [x, y] = *affine(e);
  return "0," + x.to_hex() + "," + y.to_hex();
}

GroupElement CurveBackend::from_text(std::string_view text) const {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  if (parts.size() != 3 || (parts[0] != "0" && parts[0] != "1")) {
    throw Error(Errc::kFormatError, "curve point must be '<inf>,<x>,<y>'");
  }
  if (parts[0] == "1") {
    if (parts[1] != "0" || parts[2] != "0") {
      throw Error(Errc::kFormatError, "point at infinity must be written '1,0,0'");
    }
    return identity();
  }
  GroupElement e = from_affine(fq_->from_hex(parts[1]), fq_->from_hex(parts[2]));
  if (!mul_integer(e, scalar_field().modulus()).is_identity()) {
    throw Error(Errc::kPointNotOnCurve, "point is not in the prime-order subgroup");
  }
  return e;
}

GroupElement CurveBackend::from_affine(const FieldElement& x, const FieldElement& y) const {
  if (&x.field() != fq_ || &y.field() != fq_) {
    throw Error(Errc::kModulusMismatch, "coordinates are not in the curve's base field");
  }
  if (y * y != x * x * x + x) {
    throw Error(Errc::kPointNotOnCurve, "(" + x.to_hex() + ", " + y.to_hex() + ") is not on y^2 = x^3 + x");
  }
  return make_element(x.montgomery_limbs(), y.montgomery_limbs(), false);
}

std::optional<std::pair<FieldElement, FieldElement>> CurveBackend::affine(
    const GroupElement& e) const {
  check_mine(e);
  if (infinity_of(e)) return std::nullopt;
  return std::pair{FieldElement::from_montgomery_limbs(*fq_, x_of(e)),
                   FieldElement::from_montgomery_limbs(*fq_, y_of(e))};
}

std::pair<FieldElement, FieldElement> CurveBackend::target_components(
    const TargetElement& t) const {
  check_mine(t);
  return {FieldElement::from_montgomery_limbs(*fq_, a_of(t)),
          FieldElement::from_montgomery_limbs(*fq_, b_of(t))};
}

TargetElement CurveBackend::target_pow_integer(const TargetElement& t, const mpz_class& n) const {
  check_mine(t);
  auto limbs = mpz_limbs(n);
  auto r = kernel_->fq2_pow(Fq2Value{a_of(t), b_of(t)},
                            Exponent{limbs, mpz_sizeinbase(n.get_mpz_t(), 2)});
  return make_target(r.a, r.b);
}

GroupElement CurveBackend::mul_integer(const GroupElement& e, const mpz_class& n) const {
  check_mine(e);
  auto limbs = mpz_limbs(n);
  auto r = kernel_->mul(AffinePoint{x_of(e), y_of(e), infinity_of(e)},
                        Exponent{limbs, mpz_sizeinbase(n.get_mpz_t(), 2)});
  return make_element(r.x, r.y, r.inf);
}

bool CurveBackend::is_identity(const GroupElement& e) const { return infinity_of(e); }

GroupElement CurveBackend::add(const GroupElement& a, const GroupElement& b) const {
  auto r = kernel_->add(AffinePoint{x_of(a), y_of(a), infinity_of(a)},
                        AffinePoint{x_of(b), y_of(b), infinity_of(b)});
  return make_element(r.x, r.y, r.inf);
}

GroupElement CurveBackend::negate(const GroupElement& a) const {
  auto r = kernel_->negate(AffinePoint{x_of(a), y_of(a), infinity_of(a)});
  return make_element(r.x, r.y, r.inf);
}

GroupElement CurveBackend::scalar_mul(const GroupElement& a, const FieldElement& k) const {
  Limbs limbs = k.canonical_limbs();
  auto r = kernel_->mul(AffinePoint{x_of(a), y_of(a), infinity_of(a)},
                        Exponent{limbs, scalar_field().bit_length()});
  return make_element(r.x, r.y, r.inf);
}

GroupElement CurveBackend::identity_element() const { return make_element(Limbs{}, Limbs{}, true); }

GroupElement CurveBackend::generator_element() const { return *generator_; }

TargetElement CurveBackend::do_pair(const GroupElement& x, const GroupElement& y) const {
  auto r = kernel_->pair(AffinePoint{x_of(x), y_of(x), infinity_of(x)},
                         AffinePoint{x_of(y), y_of(y), infinity_of(y)});
  return make_target(r.a, r.b);
}

TargetElement CurveBackend::target_mul(const TargetElement& a, const TargetElement& b) const {
  auto r = kernel_->fq2_mul(Fq2Value{a_of(a), b_of(a)}, Fq2Value{a_of(b), b_of(b)});
  return make_target(r.a, r.b);
}

TargetElement CurveBackend::target_pow(const TargetElement& a, const FieldElement& k) const {
  Limbs limbs = k.canonical_limbs();
  auto r = kernel_->fq2_pow(Fq2Value{a_of(a), b_of(a)},
                            Exponent{limbs, scalar_field().bit_length()});
  return make_target(r.a, r.b);
}

TargetElement CurveBackend::target_identity() const {
  auto r = kernel_->fq2_one();
  return make_target(r.a, r.b);
}

}  // namespace zkit::pairing
