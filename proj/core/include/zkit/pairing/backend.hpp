#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zkit/field.hpp"

namespace zkit::pairing {

class Backend;

enum class BackendKind { kTransparent, kCurve };

std::string_view backend_kind_name(BackendKind kind);
/// "transparent" or "curve"; throws FormatError otherwise.
BackendKind parse_backend_kind(std::string_view name);

/// An element of the source group G of a backend, written additively:
/// encode(a) + encode(b) == encode(a + b), encode(a) * k == encode(a * k).
/// Values are canonical, so == is group equality.
class GroupElement {
 public:
  const Backend& backend() const { return *backend_; }
  bool is_identity() const;

  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-(const GroupElement& o) const;
  GroupElement operator-() const;
  GroupElement operator*(const FieldElement& k) const;
  GroupElement& operator+=(const GroupElement& o) { return *this = *this + o; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.backend_ == b.backend_ && a.infinity_ == b.infinity_ && a.x_ == b.x_ &&
           a.y_ == b.y_;
  }

  /// Hex text form (see Backend::to_text).
  std::string to_text() const;

 private:
  friend class Backend;
  GroupElement(const Backend* b, const Limbs& x, const Limbs& y, bool infinity)
      : backend_(b), x_(x), y_(y), infinity_(infinity) {}

  const Backend* backend_;
  Limbs x_;
  Limbs y_;
  bool infinity_;
};

/// An element of the target group G_T, written multiplicatively.
class TargetElement {
 public:
  const Backend& backend() const { return *backend_; }

  TargetElement operator*(const TargetElement& o) const;
  TargetElement pow(const FieldElement& k) const;
  bool is_one() const;

  friend bool operator==(const TargetElement& a, const TargetElement& b) {
    return a.backend_ == b.backend_ && a.a_ == b.a_ && a.b_ == b.b_;
  }

 private:
  friend class Backend;
  TargetElement(const Backend* b, const Limbs& a, const Limbs& c)
      : backend_(b), a_(a), b_(c) {}

  const Backend* backend_;
  Limbs a_;
  Limbs b_;
};

/// A symmetric bilinear group of prime order p with encoding
/// E(a) = a * generator and pairing e : G x G -> G_T.
///
/// Backends are interned per (kind, scalar field) and live for the whole
/// program. Group operations are pure; the pairing counter is atomic.
class Backend {
 public:
  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;
  virtual ~Backend() = default;

  virtual BackendKind kind() const = 0;
  /// Self-describing parameter string, e.g. "transparent" or
  /// "curve:q=<hex>" (the scalar field is recorded separately).
  virtual std::string descriptor() const = 0;
  const PrimeField& scalar_field() const { return *fr_; }

  GroupElement identity() const;
  /// E(1).
  GroupElement generator() const;
  GroupElement encode(const FieldElement& a) const;
  /// E(a_i) for every i; amortizes normalization.
  virtual std::vector<GroupElement> encode_batch(std::span<const FieldElement> as) const;
  /// sum_i k_i * P_i.
  virtual GroupElement msm(std::span<const GroupElement> points,
                           std::span<const FieldElement> scalars) const;

  /// e(x, y); increments the pairing counter by one. Throws BackendMismatch
  /// for elements of another backend.
  TargetElement pair(const GroupElement& x, const GroupElement& y) const;
  TargetElement target_one() const;

  std::uint64_t pairing_count() const { return pairings_.load(std::memory_order_relaxed); }
  void reset_pairing_count() const { pairings_.store(0, std::memory_order_relaxed); }

  /// Canonical text of an element. Transparent: the exponent in hex. Curve:
  /// "<inf>,<x>,<y>" with inf = 0 or 1 and affine coordinates in hex.
  virtual std::string to_text(const GroupElement& e) const = 0;
  /// Inverse of to_text. Throws FormatError on malformed text and
  /// PointNotOnCurve for points outside the prime-order subgroup.
  virtual GroupElement from_text(std::string_view text) const = 0;

 protected:
  explicit Backend(const PrimeField& fr) : fr_(&fr) {}

  virtual bool is_identity(const GroupElement& e) const = 0;
  virtual GroupElement add(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement negate(const GroupElement& a) const = 0;
  virtual GroupElement scalar_mul(const GroupElement& a, const FieldElement& k) const = 0;
  virtual GroupElement identity_element() const = 0;
  virtual GroupElement generator_element() const = 0;
  virtual TargetElement do_pair(const GroupElement& x, const GroupElement& y) const = 0;
  virtual TargetElement target_mul(const TargetElement& a, const TargetElement& b) const = 0;
  virtual TargetElement target_pow(const TargetElement& a, const FieldElement& k) const = 0;
  virtual TargetElement target_identity() const = 0;

  GroupElement make_element(const Limbs& x, const Limbs& y, bool infinity) const {
    return GroupElement(this, x, y, infinity);
  }
  static const Limbs& x_of(const GroupElement& e) { return e.x_; }
  static const Limbs& y_of(const GroupElement& e) { return e.y_; }
  static bool infinity_of(const GroupElement& e) { return e.infinity_; }
  TargetElement make_target(const Limbs& a, const Limbs& b) const {
    return TargetElement(this, a, b);
  }
  static const Limbs& a_of(const TargetElement& t) { return t.a_; }
  static const Limbs& b_of(const TargetElement& t) { return t.b_; }

  void check_mine(const GroupElement& e) const;
  void check_mine(const TargetElement& t) const;

 private:
  friend class GroupElement;
  friend class TargetElement;

  const PrimeField* fr_;
  mutable std::atomic<std::uint64_t> pairings_{0};
};

/// The interned backend of the given kind over scalar field `fr`.
const Backend& backend(BackendKind kind, const PrimeField& fr);

}  // namespace zkit::pairing
