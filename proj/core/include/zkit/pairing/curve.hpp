#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "zkit/pairing/backend.hpp"

namespace zkit::pairing {

namespace detail {
class CurveKernelBase;
}

/// Supersingular curve y^2 = x^3 + x over F_q, q = 3 (mod 4), whose group
/// of q + 1 points contains the order-p subgroup G. The pairing is the
/// reduced Tate pairing composed with the distortion map
/// (x, y) -> (-x, i*y), landing in F_{q^2} = F_q[i]/(i^2 + 1).
///
/// q = h*p - 1 where h is the smallest multiple of 4 with p not dividing h,
/// h*p >= 2^62 and q prime. Parameters are demonstrative only.
class CurveBackend final : public Backend {
 public:
  static const CurveBackend& get(const PrimeField& fr);
  ~CurveBackend() override;

  BackendKind kind() const override { return BackendKind::kCurve; }
  std::string descriptor() const override;

  const PrimeField& base_field() const { return *fq_; }
  /// h = (q + 1) / p.
  const mpz_class& cofactor() const { return h_; }

  std::vector<GroupElement> encode_batch(std::span<const FieldElement> as) const override;
  GroupElement msm(std::span<const GroupElement> points,
                   std::span<const FieldElement> scalars) const override;

  std::string to_text(const GroupElement& e) const override;
  GroupElement from_text(std::string_view text) const override;

  /// A point of E(F_q) given in affine coordinates. Only checks the curve
  /// equation, so points outside G are allowed (group-law tests). Throws
  /// PointNotOnCurve.
  GroupElement from_affine(const FieldElement& x, const FieldElement& y) const;
  /// Affine coordinates, or nullopt for the point at infinity.
  std::optional<std::pair<FieldElement, FieldElement>> affine(const GroupElement& e) const;
  /// Real and imaginary part of a target element.
  std::pair<FieldElement, FieldElement> target_components(const TargetElement& t) const;
  /// t^n for an arbitrary non-negative integer n.
  TargetElement target_pow_integer(const TargetElement& t, const mpz_class& n) const;
  /// n * P for an arbitrary non-negative integer n.
  GroupElement mul_integer(const GroupElement& e, const mpz_class& n) const;

 private:
  explicit CurveBackend(const PrimeField& fr);
  friend const Backend& backend(BackendKind, const PrimeField&);

  bool is_identity(const GroupElement& e) const override;
  GroupElement add(const GroupElement& a, const GroupElement& b) const override;
  GroupElement negate(const GroupElement& a) const override;
  GroupElement scalar_mul(const GroupElement& a, const FieldElement& k) const override;
  GroupElement identity_element() const override;
  GroupElement generator_element() const override;
  TargetElement do_pair(const GroupElement& x, const GroupElement& y) const override;
  TargetElement target_mul(const TargetElement& a, const TargetElement& b) const override;
  TargetElement target_pow(const TargetElement& a, const FieldElement& k) const override;
  TargetElement target_identity() const override;

  const PrimeField* fq_;
  mpz_class h_;
  std::optional<GroupElement> generator_;
  std::unique_ptr<detail::CurveKernelBase> kernel_;
};

}  // namespace zkit::pairing
