#include "zkit/pairing/transparent.hpp"

namespace zkit::pairing {

const TransparentBackend& TransparentBackend::get(const PrimeField& fr) {
  return static_cast<const TransparentBackend&>(backend(BackendKind::kTransparent, fr));
}

GroupElement TransparentBackend::from_exponent(const FieldElement& a) const {
  return make_element(a.montgomery_limbs(), Limbs{}, false);
}

TargetElement TransparentBackend::target_from_exponent(const FieldElement& a) const {
  return make_target(a.montgomery_limbs(), Limbs{});
}

FieldElement TransparentBackend::exponent(const GroupElement& e) const {
  check_mine(e);
  return FieldElement::from_montgomery_limbs(scalar_field(), x_of(e));
}

FieldElement TransparentBackend::exponent(const TargetElement& t) const {
  check_mine(t);
  return FieldElement::from_montgomery_limbs(scalar_field(), a_of(t));
}

std::vector<GroupElement> TransparentBackend::encode_batch(
    std::span<const FieldElement> as) const {
  std::vector<GroupElement> out;
  out.reserve(as.size());
  for (const auto& a : as) {
    if (&a.field() != &scalar_field()) {
      throw Error(Errc::kModulusMismatch, "encode: value is not in the scalar field");
    }
    out.push_back(from_exponent(a));
  }
  return out;
}

GroupElement TransparentBackend::msm(std::span<const GroupElement> points,
                                     std::span<const FieldElement> scalars) const {
  if (points.size() != scalars.size()) {
    throw Error(Errc::kDimensionMismatch, "msm: point and scalar counts differ");
  }
  FieldElement acc = scalar_field().zero();
  for (std::size_t i = 0; i < points.size(); ++i) acc += exponent(points[i]) * scalars[i];
  return from_exponent(acc);
}

std::string TransparentBackend::to_text(const GroupElement& e) const {
  return exponent(e).to_hex();
}

GroupElement TransparentBackend::from_text(std::string_view text) const {
  return from_exponent(scalar_field().from_hex(text));
}

bool TransparentBackend::is_identity(const GroupElement& e) const { return exponent(e).is_zero(); }

GroupElement TransparentBackend::add(const GroupElement& a, const GroupElement& b) const {
  return from_exponent(exponent(a) + exponent(b));
}

GroupElement TransparentBackend::negate(const GroupElement& a) const {
  return from_exponent(-exponent(a));
}

GroupElement TransparentBackend::scalar_mul(const GroupElement& a, const FieldElement& k) const {
  return from_exponent(exponent(a) * k);
}

GroupElement TransparentBackend::identity_element() const {
  return from_exponent(scalar_field().zero());
}

GroupElement TransparentBackend::generator_element() const {
  return from_exponent(scalar_field().one());
}

TargetElement TransparentBackend::do_pair(const GroupElement& x, const GroupElement& y) const {
  return target_from_exponent(exponent(x) * exponent(y));
}

TargetElement TransparentBackend::target_mul(const TargetElement& a, const TargetElement& b) const {
  return target_from_exponent(exponent(a) + exponent(b));
}

TargetElement TransparentBackend::target_pow(const TargetElement& a, const FieldElement& k) const {
  return target_from_exponent(exponent(a) * k);
}

TargetElement TransparentBackend::target_identity() const {
  return target_from_exponent(scalar_field().zero());
}

}  // namespace zkit::pairing
