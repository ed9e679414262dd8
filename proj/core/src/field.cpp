#include "zkit/field.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace zkit {
namespace {

constexpr int kPrimalityRounds = 64;

const char* const kBn254Scalar =
    "21888242871839275222246405745257275088548364400416034343698204186575808495617";

Limbs to_limbs(const mpz_class& v) {
  Limbs out{};
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
  return out;
}

mpz_class from_limbs(const Limbs& v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), kMaxLimbs, -1, sizeof(std::uint64_t), 0, 0, v.data());
  return out;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

PrimeField::PrimeField(const mpz_class& modulus) : modulus_(modulus) {
  bits_ = mpz_sizeinbase(modulus_.get_mpz_t(), 2);
  limbs_ = (bits_ + 63) / 64;
  p_ = to_limbs(modulus_);

  // -p^{-1} mod 2^64 by Newton iteration (p is odd).
  std::uint64_t inv = 1;
  for (int i = 0; i < 7; ++i) inv *= 2 - p_[0] * inv;
  pinv_ = ~inv + 1;

  mpz_class r = mpz_class(1) << (64 * limbs_);
  one_ = to_limbs(mpz_class(r % modulus_));
  r2_ = to_limbs(mpz_class((r * r) % modulus_));
}

const PrimeField& PrimeField::get(const mpz_class& modulus) {
  if (modulus < 3) {
    throw Error(Errc::kFieldTooSmall, "modulus must be an odd prime >= 3");
  }
  if (mpz_sizeinbase(modulus.get_mpz_t(), 2) > 64 * kMaxLimbs) {
    throw Error(Errc::kFieldTooLarge,
                "modulus wider than " + std::to_string(64 * kMaxLimbs) + " bits");
  }
  static std::map<std::string, std::unique_ptr<PrimeField>> registry;
  const std::string key = modulus.get_str(16);
  std::lock_guard lock(registry_mutex());
  if (auto it = registry.find(key); it != registry.end()) return *it->second;
  if (mpz_probab_prime_p(modulus.get_mpz_t(), kPrimalityRounds) == 0) {
    throw Error(Errc::kNotPrime, key + " is not prime");
  }
  auto [it, _] = registry.emplace(key, std::unique_ptr<PrimeField>(new PrimeField(modulus)));
  return *it->second;
}

const PrimeField& PrimeField::get(std::uint64_t modulus) {
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, -1, sizeof(modulus), 0, 0, &modulus);
  return get(m);
}

const PrimeField& PrimeField::preset(std::string_view name) {
  if (name == "p101") return get(std::uint64_t{101});
  if (name == "p10007") return get(std::uint64_t{10007});
  if (name == "bn254-scalar") return get(mpz_class(kBn254Scalar));
  throw Error(Errc::kFormatError, "unknown field preset '" + std::string(name) + "'");
}

std::vector<std::string> PrimeField::preset_names() {
  return {"p101", "p10007", "bn254-scalar"};
}

const PrimeField& PrimeField::from_spec(std::string_view spec) {
  for (const auto& name : preset_names()) {
    if (spec == name) return preset(name);
  }
  mpz_class m;
  std::string text(spec);
  int rc = (text.rfind("0x", 0) == 0) ? m.set_str(text.substr(2), 16) : m.set_str(text, 10);
  if (rc != 0 || text.empty()) {
    throw Error(Errc::kFormatError, "bad field modulus '" + text + "'");
  }
  return get(m);
}

std::string PrimeField::modulus_hex() const { return modulus_.get_str(16); }

Limbs PrimeField::to_montgomery(const Limbs& plain) const {
  Limbs r{};
  ZKIT_LIMB_DISPATCH(limbs_, (detail::mont_mul<N>(r.data(), plain.data(), r2_.data(),
                                                   p_.data(), pinv_)));
  return r;
}

Limbs PrimeField::from_montgomery(const Limbs& mont) const {
  Limbs one{};
  one[0] = 1;
  Limbs r{};
  ZKIT_LIMB_DISPATCH(limbs_, (detail::mont_mul<N>(r.data(), mont.data(), one.data(),
                                                   p_.data(), pinv_)));
  return r;
}

FieldElement PrimeField::zero() const { return FieldElement(this, Limbs{}); }

FieldElement PrimeField::one() const { return FieldElement(this, one_); }

FieldElement PrimeField::element(const mpz_class& value) const {
  mpz_class reduced = value % modulus_;
  if (reduced < 0) reduced += modulus_;
  return FieldElement(this, to_montgomery(to_limbs(reduced)));
}

FieldElement PrimeField::element(std::int64_t value) const {
  if (value >= 0) {
    Limbs plain{};
    plain[0] = static_cast<std::uint64_t>(value);
    if (limbs_ > 1 || plain[0] < p_[0]) {
      return FieldElement(this, to_montgomery(plain));
    }
  }
  return element(mpz_class(std::to_string(value)));
}

FieldElement PrimeField::from_hex(std::string_view hex) const {
  mpz_class v;
  if (hex.empty() || v.set_str(std::string(hex), 16) != 0 || v < 0) {
    throw Error(Errc::kFormatError, "bad hex field element '" + std::string(hex) + "'");
  }
  if (v >= modulus_) {
    throw Error(Errc::kFormatError, "field element " + std::string(hex) + " not below modulus");
  }
  return FieldElement(this, to_montgomery(to_limbs(v)));
}

FieldElement PrimeField::parse(std::string_view text) const {
  std::string s(text);
  mpz_class v;
  int rc;
  if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) {
    rc = v.set_str(s.substr(2), 16);
  } else {
    rc = v.set_str(s, 10);
  }
  if (rc != 0 || s.empty()) {
    throw Error(Errc::kFormatError, "bad field value '" + s + "'");
  }
  return element(v);
}

FieldElement PrimeField::random(Rng& rng) const {
  const std::size_t top_bits = bits_ - 64 * (limbs_ - 1);
  const std::uint64_t top_mask = top_bits == 64 ? ~0ULL : ((1ULL << top_bits) - 1);
  for (;;) {
    Limbs v{};
    for (std::size_t i = 0; i < limbs_; ++i) v[i] = rng.next_u64();
    v[limbs_ - 1] &= top_mask;
    bool below = false;
    for (std::size_t i = limbs_; i-- > 0;) {
      if (v[i] != p_[i]) {
        below = v[i] < p_[i];
        break;
      }
    }
    // Uniform plain values map bijectively onto Montgomery forms, so the
    // candidate can be used as the stored representation directly.
    if (below) return FieldElement(this, v);
  }
}

FieldElement PrimeField::random_nonzero(Rng& rng) const {
  for (;;) {
    FieldElement x = random(rng);
    if (!x.is_zero()) return x;
  }
}

// ---------------------------------------------------------------------------

void FieldElement::throw_mismatch() {
  throw Error(Errc::kModulusMismatch, "operands belong to different fields");
}

mpz_class FieldElement::to_mpz() const { return from_limbs(field_->from_montgomery(v_)); }

std::string FieldElement::to_hex() const { return to_mpz().get_str(16); }

std::string FieldElement::to_decimal() const { return to_mpz().get_str(10); }

Limbs FieldElement::canonical_limbs() const { return field_->from_montgomery(v_); }

std::optional<std::uint64_t> FieldElement::to_u64() const {
  Limbs plain = field_->from_montgomery(v_);
  for (std::size_t i = 1; i < kMaxLimbs; ++i) {
    if (plain[i] != 0) return std::nullopt;
  }
  return plain[0];
}

FieldElement FieldElement::pow(const mpz_class& exponent) const {
  if (exponent < 0) return inverse().pow(mpz_class(-exponent));
  FieldElement result = field_->one();
  const std::size_t bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result *= result;
    if (mpz_tstbit(exponent.get_mpz_t(), i)) result *= *this;
  }
  return result;
}

FieldElement FieldElement::pow(std::uint64_t exponent) const {
  FieldElement result = field_->one();
  FieldElement base = *this;
  while (exponent != 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(Errc::kInversionOfZero, "zero has no inverse");
  return pow(mpz_class(field_->modulus_ - 2));
}

bool canonical_less(const FieldElement& a, const FieldElement& b) {
  a.check_same(b);
  return a.to_mpz() < b.to_mpz();
}

std::size_t FieldElement::hash() const {
  std::size_t h = std::hash<const void*>{}(field_);
  for (auto limb : v_) h = h * 0x9e3779b97f4a7c15ULL + limb;
  return h;
}

std::vector<FieldElement> batch_inverse(std::span<const FieldElement> xs) {
  std::vector<FieldElement> out;
  if (xs.empty()) return out;
  out.reserve(xs.size());
  FieldElement acc = xs[0].field().one();
  for (const auto& x : xs) {
    if (x.is_zero()) throw Error(Errc::kInversionOfZero, "zero in batch inversion");
    out.push_back(acc);
    acc *= x;
  }
  FieldElement inv = acc.inverse();
  for (std::size_t i = xs.size(); i-- > 0;) {
    out[i] *= inv;
    inv *= xs[i];
  }
  return out;
}

}  // namespace zkit
