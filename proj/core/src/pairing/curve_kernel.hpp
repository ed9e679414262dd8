#pragma once

// Hot-path arithmetic for the supersingular curve backend: F_q and F_q^2 on
// raw Montgomery limbs, Jacobian point arithmetic, fixed-base and
// multi-scalar multiplication, and the Miller loop.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "zkit/detail/montgomery.hpp"
#include "zkit/field.hpp"

namespace zkit::pairing::detail {

using zkit::detail::u64;

/// Affine point over F_q, coordinates in Montgomery form.
struct AffinePoint {
  Limbs x{};
  Limbs y{};
  bool inf = true;
};

/// a + b*i in F_q^2, Montgomery form.
struct Fq2Value {
  Limbs a{};
  Limbs b{};
};

/// Non-negative integer as little-endian limbs; `bits` bounds its length.
struct Exponent {
  std::span<const u64> limbs;
  std::size_t bits;

  bool bit(std::size_t i) const {
    return i / 64 < limbs.size() && ((limbs[i / 64] >> (i % 64)) & 1);
  }
  unsigned window(std::size_t lo, unsigned width) const {
    unsigned v = 0;
    for (unsigned j = 0; j < width; ++j) v |= static_cast<unsigned>(bit(lo + j)) << j;
    return v;
  }
};

class CurveKernelBase {
 public:
  virtual ~CurveKernelBase() = default;

  virtual void set_generator(const AffinePoint& g) = 0;
  virtual bool on_curve(const AffinePoint& p) const = 0;
  virtual AffinePoint add(const AffinePoint& a, const AffinePoint& b) const = 0;
  virtual AffinePoint negate(const AffinePoint& a) const = 0;
  virtual AffinePoint mul(const AffinePoint& a, Exponent k) const = 0;
  /// k_i * generator for every k_i (each < 2^scalar_bits).
  virtual std::vector<AffinePoint> fixed_base(std::span<const Limbs> ks) const = 0;
  virtual AffinePoint msm(std::span<const AffinePoint> points,
                          std::span<const Limbs> ks) const = 0;
  virtual Fq2Value pair(const AffinePoint& p, const AffinePoint& q) const = 0;
  virtual Fq2Value fq2_mul(const Fq2Value& x, const Fq2Value& y) const = 0;
  virtual Fq2Value fq2_pow(const Fq2Value& x, Exponent k) const = 0;
  virtual Fq2Value fq2_one() const = 0;
};

std::unique_ptr<CurveKernelBase> make_curve_kernel(const PrimeField& fq, const mpz_class& order,
                                                   const mpz_class& cofactor);

template <std::size_t N>
class CurveKernel final : public CurveKernelBase {
  using F = std::array<u64, N>;
  struct Jac {
    F X{}, Y{}, Z{};  // Z == 0 is the point at infinity
  };
  struct Aff {
    F x{}, y{};
    bool inf = true;
  };
  struct F2 {
    F a{}, b{};
  };

 public:
  CurveKernel(const PrimeField& fq, const mpz_class& order, const mpz_class& cofactor)
      : qinv_(fq.montgomery_inverse()),
        order_bits_(mpz_sizeinbase(order.get_mpz_t(), 2)),
        order_(to_vec(order)),
        cofactor_(to_vec(cofactor)),
        cofactor_bits_(mpz_sizeinbase(cofactor.get_mpz_t(), 2)),
        q_minus_2_(to_vec(fq.modulus() - 2)),
        q_minus_2_bits_(mpz_sizeinbase(q_minus_2_mpz(fq).get_mpz_t(), 2)) {
    for (std::size_t i = 0; i < N; ++i) q_[i] = fq.modulus_limbs()[i];
    one_ = narrow(fq.one().montgomery_limbs());
  }

  void set_generator(const AffinePoint& g) override { gen_ = narrow(g); }

  bool on_curve(const AffinePoint& p) const override {
    if (p.inf) return true;
    Aff a = narrow(p);
    F rhs = add(mul(sqr(a.x), a.x), a.x);
    return sqr(a.y) == rhs;
  }

  AffinePoint add(const AffinePoint& a, const AffinePoint& b) const override {
    return widen(normalize(madd(to_jac(narrow(a)), narrow(b))));
  }

  AffinePoint negate(const AffinePoint& a) const override {
    Aff r = narrow(a);
    if (!r.inf) r.y = sub(F{}, r.y);
    return widen(r);
  }

  AffinePoint mul(const AffinePoint& a, Exponent k) const override {
    return widen(normalize(mul_jac(narrow(a), k)));
  }

  std::vector<AffinePoint> fixed_base(std::span<const Limbs> ks) const override {
    std::call_once(table_once_, [this] { build_table(); });
    std::vector<Jac> acc(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      Exponent e{ks[i], order_bits_};
      for (std::size_t w = 0; w < windows_; ++w) {
        unsigned d = e.window(w * kTableBits, kTableBits);
        if (d != 0) acc[i] = madd(acc[i], table_[w * kTableSize + d - 1]);
      }
    }
    return widen(normalize_batch(acc));
  }

  AffinePoint msm(std::span<const AffinePoint> points,
                  std::span<const Limbs> ks) const override {
    std::vector<Aff> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(narrow(p));
    const std::size_t n = pts.size();
    if (n == 0) return AffinePoint{};
    const unsigned c = n < 16 ? 2u
                              : std::min<unsigned>(16u, static_cast<unsigned>(std::bit_width(n)) - 2);
    const std::size_t windows = (order_bits_ + c - 1) / c;
    Jac result;
    std::vector<Jac> buckets(std::size_t{1} << c);
    for (std::size_t w = windows; w-- > 0;) {
      for (unsigned j = 0; j < c; ++j) result = dbl(result);
      std::fill(buckets.begin(), buckets.end(), Jac{});
      for (std::size_t i = 0; i < n; ++i) {
        unsigned d = Exponent{ks[i], order_bits_}.window(w * c, c);
        if (d != 0) buckets[d] = madd(buckets[d], pts[i]);
      }
      Jac running, sum;
      for (std::size_t d = buckets.size() - 1; d >= 1; --d) {
        running = add_jac(running, buckets[d]);
        sum = add_jac(sum, running);
      }
      result = add_jac(result, sum);
    }
    return widen(normalize(result));
  }

  // Reduced Tate pairing e(P, phi(Q)) with phi(x, y) = (-x, i*y). Vertical
  // lines and all F_q-valued factors vanish under the final exponentiation,
  // so lines are evaluated up to F_q scalars.
  Fq2Value pair(const AffinePoint& pw, const AffinePoint& qw) const override {
    Aff P = narrow(pw), Q = narrow(qw);
    if (P.inf || Q.inf) return fq2_one();
    F2 f{one_, F{}};
    Jac T = to_jac(P);
    for (std::size_t i = order_bits_ - 1; i-- > 0;) {
      // Tangent at T: l = M*(xQ*ZZ + X) - 2*YY + i*(yQ*2YZ*ZZ).
      F XX = sqr(T.X), YY = sqr(T.Y), ZZ = sqr(T.Z);
      F M = add(add(add(XX, XX), XX), sqr(ZZ));
      F Z3 = sub(sub(sqr(add(T.Y, T.Z)), YY), ZZ);
      F2 line{sub(mul(M, add(mul(Q.x, ZZ), T.X)), add(YY, YY)), mul(mul(Q.y, Z3), ZZ)};
      f = f2_mul(f2_sqr(f), line);
      T = dbl(T);
      if (Exponent{order_, order_bits_}.bit(i)) {
        // Chord through T and P: l = R*(xQ + xP) - yP*D + i*(yQ*D), D = Z*H.
        F Z1Z1 = sqr(T.Z);
        F H = sub(mul(P.x, Z1Z1), T.X);
        F R = sub(mul(mul(P.y, T.Z), Z1Z1), T.Y);
        if (!is_zero(H)) {
          F D = mul(T.Z, H);
          F2 l{sub(mul(R, add(Q.x, P.x)), mul(P.y, D)), mul(Q.y, D)};
          f = f2_mul(f, l);
        }
        T = madd(T, P);
      }
    }
    // f^(q-1) = conj(f) / f, then raise to (q+1)/p.
    F norm = add(sqr(f.a), sqr(f.b));
    if (is_zero(norm)) return fq2_one();
    F ninv = inv(norm);
    F2 finv{mul(f.a, ninv), sub(F{}, mul(f.b, ninv))};
    F2 conj{f.a, sub(F{}, f.b)};
    F2 g = f2_mul(conj, finv);
    return widen(f2_pow(g, Exponent{cofactor_, cofactor_bits_}));
  }

  Fq2Value fq2_mul(const Fq2Value& x, const Fq2Value& y) const override {
    return widen(f2_mul(narrow(x), narrow(y)));
  }

  Fq2Value fq2_pow(const Fq2Value& x, Exponent k) const override {
    return widen(f2_pow(narrow(x), k));
  }

  Fq2Value fq2_one() const override { return widen(F2{one_, F{}}); }

 private:
  static constexpr unsigned kTableBits = 8;
  static constexpr std::size_t kTableSize = (std::size_t{1} << kTableBits) - 1;

  static std::vector<u64> to_vec(const mpz_class& v) {
    std::vector<u64> out((mpz_sizeinbase(v.get_mpz_t(), 2) + 63) / 64, 0);
    std::size_t count = 0;
    mpz_export(out.data(), &count, -1, sizeof(u64), 0, 0, v.get_mpz_t());
    return out;
  }

  static mpz_class q_minus_2_mpz(const PrimeField& fq) { return fq.modulus() - 2; }

  static F narrow(const Limbs& l) {
    F r;
    for (std::size_t i = 0; i < N; ++i) r[i] = l[i];
    return r;
  }
  static Limbs widen(const F& f) {
    Limbs r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = f[i];
    return r;
  }
  static Aff narrow(const AffinePoint& p) { return Aff{narrow(p.x), narrow(p.y), p.inf}; }
  static AffinePoint widen(const Aff& a) {
    return a.inf ? AffinePoint{} : AffinePoint{widen(a.x), widen(a.y), false};
  }
  static std::vector<AffinePoint> widen(const std::vector<Aff>& v) {
    std::vector<AffinePoint> out;
    out.reserve(v.size());
    for (const auto& a : v) out.push_back(widen(a));
    return out;
  }
  static F2 narrow(const Fq2Value& v) { return F2{narrow(v.a), narrow(v.b)}; }
  static Fq2Value widen(const F2& v) { return Fq2Value{widen(v.a), widen(v.b)}; }

  // F_q
  F mul(const F& a, const F& b) const {
    F r;
    zkit::detail::mont_mul<N>(r.data(), a.data(), b.data(), q_.data(), qinv_);
    return r;
  }
  F sqr(const F& a) const { return mul(a, a); }
  F add(const F& a, const F& b) const {
    F r;
    zkit::detail::mod_add<N>(r.data(), a.data(), b.data(), q_.data());
    return r;
  }
  F sub(const F& a, const F& b) const {
    F r;
    zkit::detail::mod_sub<N>(r.data(), a.data(), b.data(), q_.data());
    return r;
  }
  static bool is_zero(const F& a) {
    for (auto l : a) {
      if (l) return false;
    }
    return true;
  }
  F pow(const F& a, Exponent e) const {
    F r = one_;
    for (std::size_t i = e.bits; i-- > 0;) {
      r = sqr(r);
      if (e.bit(i)) r = mul(r, a);
    }
    return r;
  }
  F inv(const F& a) const { return pow(a, Exponent{q_minus_2_, q_minus_2_bits_}); }

  // F_q^2 with i^2 = -1
  F2 f2_mul(const F2& x, const F2& y) const {
    F ac = mul(x.a, y.a), bd = mul(x.b, y.b);
    F cross = mul(add(x.a, x.b), add(y.a, y.b));
    return F2{sub(ac, bd), sub(sub(cross, ac), bd)};
  }
  F2 f2_sqr(const F2& x) const {
    F ab = mul(x.a, x.b);
    return F2{mul(add(x.a, x.b), sub(x.a, x.b)), add(ab, ab)};
  }
  F2 f2_pow(const F2& x, Exponent e) const {
    F2 r{one_, F{}};
    for (std::size_t i = e.bits; i-- > 0;) {
      r = f2_sqr(r);
      if (e.bit(i)) r = f2_mul(r, x);
    }
    return r;
  }

  // Points, y^2 = x^3 + x (a = 1)
  Jac to_jac(const Aff& a) const { return a.inf ? Jac{} : Jac{a.x, a.y, one_}; }

  Jac dbl(const Jac& p) const {
    if (is_zero(p.Z)) return p;
    F XX = sqr(p.X), YY = sqr(p.Y), YYYY = sqr(YY), ZZ = sqr(p.Z);
    F S = sub(sub(sqr(add(p.X, YY)), XX), YYYY);
    S = add(S, S);
    F M = add(add(add(XX, XX), XX), sqr(ZZ));
    F T = sub(sqr(M), add(S, S));
    F Y8 = add(YYYY, YYYY);
    Y8 = add(Y8, Y8);
    Y8 = add(Y8, Y8);
    Jac r;
    r.X = T;
    r.Y = sub(mul(M, sub(S, T)), Y8);
    r.Z = sub(sub(sqr(add(p.Y, p.Z)), YY), ZZ);
    return r;
  }

  Jac madd(const Jac& p, const Aff& q) const {
    if (q.inf) return p;
    if (is_zero(p.Z)) return to_jac(q);
    F Z1Z1 = sqr(p.Z);
    F U2 = mul(q.x, Z1Z1);
    F S2 = mul(mul(q.y, p.Z), Z1Z1);
    F H = sub(U2, p.X);
    F r = sub(S2, p.Y);
    if (is_zero(H)) return is_zero(r) ? dbl(p) : Jac{};
    F HH = sqr(H);
    F I = add(HH, HH);
    I = add(I, I);
    F J = mul(H, I);
    r = add(r, r);
    F V = mul(p.X, I);
    Jac out;
    out.X = sub(sub(sqr(r), J), add(V, V));
    F YJ = mul(p.Y, J);
    out.Y = sub(mul(r, sub(V, out.X)), add(YJ, YJ));
    out.Z = sub(sub(sqr(add(p.Z, H)), Z1Z1), HH);
    return out;
  }

  Jac add_jac(const Jac& p, const Jac& q) const {
    if (is_zero(p.Z)) return q;
    if (is_zero(q.Z)) return p;
    F Z1Z1 = sqr(p.Z), Z2Z2 = sqr(q.Z);
    F U1 = mul(p.X, Z2Z2), U2 = mul(q.X, Z1Z1);
    F S1 = mul(mul(p.Y, q.Z), Z2Z2), S2 = mul(mul(q.Y, p.Z), Z1Z1);
    F H = sub(U2, U1);
    F r = sub(S2, S1);
    if (is_zero(H)) return is_zero(r) ? dbl(p) : Jac{};
    F H2 = add(H, H);
    F I = sqr(H2);
    F J = mul(H, I);
    r = add(r, r);
    F V = mul(U1, I);
    Jac out;
    out.X = sub(sub(sqr(r), J), add(V, V));
    F SJ = mul(S1, J);
    out.Y = sub(mul(r, sub(V, out.X)), add(SJ, SJ));
    out.Z = mul(sub(sub(sqr(add(p.Z, q.Z)), Z1Z1), Z2Z2), H);
    return out;
  }

  Jac mul_jac(const Aff& a, Exponent k) const {
    Jac r;
    for (std::size_t i = k.bits; i-- > 0;) {
      r = dbl(r);
      if (k.bit(i)) r = madd(r, a);
    }
    return r;
  }

  Aff normalize(const Jac& p) const {
    if (is_zero(p.Z)) return Aff{};
    F zi = inv(p.Z), zi2 = sqr(zi);
    return Aff{mul(p.X, zi2), mul(p.Y, mul(zi2, zi)), false};
  }

  std::vector<Aff> normalize_batch(const std::vector<Jac>& ps) const {
    std::vector<F> prefix(ps.size());
    F acc = one_;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      prefix[i] = acc;
      if (!is_zero(ps[i].Z)) acc = mul(acc, ps[i].Z);
    }
    F inv_acc = inv(acc);
    std::vector<Aff> out(ps.size());
    for (std::size_t i = ps.size(); i-- > 0;) {
      if (is_zero(ps[i].Z)) continue;
      F zi = mul(inv_acc, prefix[i]);
      inv_acc = mul(inv_acc, ps[i].Z);
      F zi2 = sqr(zi);
      out[i] = Aff{mul(ps[i].X, zi2), mul(ps[i].Y, mul(zi2, zi)), false};
    }
    return out;
  }

  // table_[w * kTableSize + d - 1] = d * 2^(8w) * G
  void build_table() const {
    windows_ = (order_bits_ + kTableBits - 1) / kTableBits;
    std::vector<Jac> entries;
    entries.reserve(windows_ * kTableSize);
    Jac base = to_jac(gen_);
    for (std::size_t w = 0; w < windows_; ++w) {
      Aff base_aff = normalize(base);
      Jac acc = base;
      for (std::size_t d = 1; d <= kTableSize; ++d) {
        entries.push_back(acc);
        acc = madd(acc, base_aff);
      }
      base = acc;
    }
    table_ = normalize_batch(entries);
  }

  F q_{};
  F one_{};
  u64 qinv_;
  std::size_t order_bits_;
  std::vector<u64> order_;
  std::vector<u64> cofactor_;
  std::size_t cofactor_bits_;
  std::vector<u64> q_minus_2_;
  std::size_t q_minus_2_bits_;
  Aff gen_;
  mutable std::once_flag table_once_;
  mutable std::size_t windows_ = 0;
  mutable std::vector<Aff> table_;
};

}  // namespace zkit::pairing::detail
