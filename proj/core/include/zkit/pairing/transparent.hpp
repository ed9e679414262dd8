#pragma once

#include "zkit/pairing/backend.hpp"

namespace zkit::pairing {

/// Exponent-tracking bilinear group: E(a) is represented by a itself and
/// e(E(a), E(b)) by a * b in F_p. Every algebraic law the protocol relies on
/// holds exactly, and discrete logarithms are trivial.
///
/// NOT CRYPTOGRAPHIC. It exists to test protocol logic exactly and quickly.
class TransparentBackend final : public Backend {
 public:
  static const TransparentBackend& get(const PrimeField& fr);

  BackendKind kind() const override { return BackendKind::kTransparent; }
  std::string descriptor() const override { return "transparent"; }

  std::vector<GroupElement> encode_batch(std::span<const FieldElement> as) const override;
  GroupElement msm(std::span<const GroupElement> points,
                   std::span<const FieldElement> scalars) const override;

  std::string to_text(const GroupElement& e) const override;
  GroupElement from_text(std::string_view text) const override;

  /// Test introspection: a with e == E(a), and c with t == e(E(1), E(1))^c.
  FieldElement exponent(const GroupElement& e) const;
  FieldElement exponent(const TargetElement& t) const;

 private:
  explicit TransparentBackend(const PrimeField& fr) : Backend(fr) {}
  friend const Backend& backend(BackendKind, const PrimeField&);

  GroupElement from_exponent(const FieldElement& a) const;
  TargetElement target_from_exponent(const FieldElement& a) const;

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
};

}  // namespace zkit::pairing
