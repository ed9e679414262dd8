#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zkit/detail/montgomery.hpp"
#include "zkit/error.hpp"
#include "zkit/rng.hpp"

namespace zkit {

/// Widest supported modulus, in 64-bit limbs. Scalar fields go up to 256
/// bits; pairing base fields need a few bits more than their scalar field.
inline constexpr std::size_t kMaxLimbs = 6;
using Limbs = std::array<std::uint64_t, kMaxLimbs>;

class FieldElement;

/// A prime field F_p. Instances are interned: `get` returns the same object
/// for the same modulus, lives for the whole program, and field identity is
/// pointer identity.
class PrimeField {
 public:
  /// Validates primality (probabilistic, 64 rounds) once per modulus.
  /// Throws NotPrime, FieldTooSmall (p < 3) or FieldTooLarge.
  static const PrimeField& get(const mpz_class& modulus);
  static const PrimeField& get(std::uint64_t modulus);

  /// Named presets: "p101", "p10007", "bn254-scalar".
  static const PrimeField& preset(std::string_view name);
  static std::vector<std::string> preset_names();
  /// A preset name, a 0x-prefixed hex modulus, or a decimal modulus.
  static const PrimeField& from_spec(std::string_view spec);

  PrimeField(const PrimeField&) = delete;
  PrimeField& operator=(const PrimeField&) = delete;

  const mpz_class& modulus() const { return modulus_; }
  std::string modulus_hex() const;
  std::size_t bit_length() const { return bits_; }
  std::size_t limb_count() const { return limbs_; }

  FieldElement zero() const;
  FieldElement one() const;
  /// Reduces any integer (including negative ones) into [0, p).
  FieldElement element(const mpz_class& value) const;
  FieldElement element(std::int64_t value) const;
  /// Parses canonical lowercase/uppercase hex without prefix; value must be
  /// < p (FormatError otherwise).
  FieldElement from_hex(std::string_view hex) const;
  /// Accepts decimal or 0x-prefixed hex; negative decimals are reduced.
  FieldElement parse(std::string_view text) const;
  FieldElement random(Rng& rng) const;
  FieldElement random_nonzero(Rng& rng) const;

  const Limbs& modulus_limbs() const { return p_; }
  std::uint64_t montgomery_inverse() const { return pinv_; }

 private:
  explicit PrimeField(const mpz_class& modulus);
  friend class FieldElement;

  Limbs to_montgomery(const Limbs& plain) const;
  Limbs from_montgomery(const Limbs& mont) const;

  mpz_class modulus_;
  std::size_t bits_ = 0;
  std::size_t limbs_ = 0;
  Limbs p_{};
  Limbs r2_{};   // 2^(128 * limbs) mod p
  Limbs one_{};  // 2^(64 * limbs) mod p, Montgomery form of 1
  std::uint64_t pinv_ = 0;
};

/// An element of a PrimeField, stored in Montgomery form. Elements of
/// different fields never combine: mixing them throws ModulusMismatch.
class FieldElement {
 public:
  const PrimeField& field() const { return *field_; }

  mpz_class to_mpz() const;
  /// Lowercase big-endian hex, no prefix; zero is "0".
  std::string to_hex() const;
  std::string to_decimal() const;
  /// The canonical value if it fits in 64 bits.
  std::optional<std::uint64_t> to_u64() const;
  /// The canonical value as little-endian limbs (scalar recoding).
  Limbs canonical_limbs() const;

  bool is_zero() const;

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  FieldElement operator-() const;

  /// Throws InversionOfZero for zero.
  FieldElement inverse() const;
  FieldElement pow(const mpz_class& exponent) const;
  FieldElement pow(std::uint64_t exponent) const;
  FieldElement square() const { return *this * *this; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.v_ == b.v_;
  }
  /// Orders by canonical integer value (fields must match).
  friend bool canonical_less(const FieldElement& a, const FieldElement& b);

  std::size_t hash() const;

  // Raw Montgomery-form access for bulk kernels (polynomial multiplication,
  // serialization of curve points). Not a stable interface.
  const Limbs& montgomery_limbs() const { return v_; }
  static FieldElement from_montgomery_limbs(const PrimeField& f, const Limbs& v) {
    return FieldElement(&f, v);
  }

 private:
  FieldElement(const PrimeField* f, const Limbs& v) : field_(f), v_(v) {}
  friend class PrimeField;

  void check_same(const FieldElement& o) const {
    if (field_ != o.field_) throw_mismatch();
  }
  [[noreturn]] static void throw_mismatch();

  const PrimeField* field_;
  Limbs v_;
};

/// Inverts every element with a single field inversion. Throws
/// InversionOfZero if any element is zero.
std::vector<FieldElement> batch_inverse(std::span<const FieldElement> xs);

// ---------------------------------------------------------------------------

namespace detail {

#define ZKIT_LIMB_DISPATCH(n, CALL) \
  switch (n) {                      \
    case 1: { constexpr std::size_t N = 1; CALL; } break; \
    case 2: { constexpr std::size_t N = 2; CALL; } break; \
    case 3: { constexpr std::size_t N = 3; CALL; } break; \
    case 4: { constexpr std::size_t N = 4; CALL; } break; \
    case 5: { constexpr std::size_t N = 5; CALL; } break; \
    default: { constexpr std::size_t N = 6; CALL; } break; \
  }

}  // namespace detail

inline FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  const auto* p = field_->p_.data();
  ZKIT_LIMB_DISPATCH(field_->limbs_,
                     (detail::mod_add<N>(v_.data(), v_.data(), o.v_.data(), p)));
  return *this;
}

inline FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  const auto* p = field_->p_.data();
  ZKIT_LIMB_DISPATCH(field_->limbs_,
                     (detail::mod_sub<N>(v_.data(), v_.data(), o.v_.data(), p)));
  return *this;
}

inline FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same(o);
  const auto* p = field_->p_.data();
  const auto pinv = field_->pinv_;
  Limbs r{};
  ZKIT_LIMB_DISPATCH(field_->limbs_,
                     (detail::mont_mul<N>(r.data(), v_.data(), o.v_.data(), p, pinv)));
  v_ = r;
  return *this;
}

inline FieldElement FieldElement::operator-() const {
  FieldElement z(field_, Limbs{});
  z -= *this;
  return z;
}

inline bool FieldElement::is_zero() const {
  for (auto limb : v_) {
    if (limb != 0) return false;
  }
  return true;
}

}  // namespace zkit

template <>
struct std::hash<zkit::FieldElement> {
  std::size_t operator()(const zkit::FieldElement& x) const { return x.hash(); }
};
