#pragma once

// Fixed-width limb kernels for Montgomery arithmetic. N is the number of
// 64-bit limbs actually used by the modulus; inputs are fully reduced (< p).

#include <cstddef>
#include <cstdint>

namespace zkit::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

template <std::size_t N>
inline bool geq(const u64* a, const u64* b) {
  for (std::size_t i = N; i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return true;
}

template <std::size_t N>
inline u64 sub_n(u64* r, const u64* a, const u64* b) {
  u64 borrow = 0;
  for (std::size_t i = 0; i < N; ++i) {
    u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    r[i] = static_cast<u64>(d);
    borrow = static_cast<u64>(d >> 64) & 1;
  }
  return borrow;
}

template <std::size_t N>
inline u64 add_n(u64* r, const u64* a, const u64* b) {
  u64 carry = 0;
  for (std::size_t i = 0; i < N; ++i) {
    u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    r[i] = static_cast<u64>(s);
    carry = static_cast<u64>(s >> 64);
  }
  return carry;
}

template <std::size_t N>
inline void mod_add(u64* r, const u64* a, const u64* b, const u64* p) {
  u64 t[N];
  u64 carry = add_n<N>(t, a, b);
  if (carry || geq<N>(t, p)) {
    sub_n<N>(r, t, p);
  } else {
    for (std::size_t i = 0; i < N; ++i) r[i] = t[i];
  }
}

template <std::size_t N>
inline void mod_sub(u64* r, const u64* a, const u64* b, const u64* p) {
  u64 t[N];
  if (sub_n<N>(t, a, b)) {
    add_n<N>(r, t, p);
  } else {
    for (std::size_t i = 0; i < N; ++i) r[i] = t[i];
  }
}

// CIOS Montgomery product: r = a * b * 2^(-64N) mod p.
// `pinv` is -p^(-1) mod 2^64.
template <std::size_t N>
inline void mont_mul(u64* r, const u64* a, const u64* b, const u64* p,
                     u64 pinv) {
  u64 t[N + 2] = {};
  for (std::size_t i = 0; i < N; ++i) {
    u64 carry = 0;
    for (std::size_t j = 0; j < N; ++j) {
      u128 s = static_cast<u128>(a[i]) * b[j] + t[j] + carry;
      t[j] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    u128 s = static_cast<u128>(t[N]) + carry;
    t[N] = static_cast<u64>(s);
    t[N + 1] = static_cast<u64>(s >> 64);

    const u64 m = t[0] * pinv;
    s = static_cast<u128>(m) * p[0] + t[0];
    carry = static_cast<u64>(s >> 64);
    for (std::size_t j = 1; j < N; ++j) {
      s = static_cast<u128>(m) * p[j] + t[j] + carry;
      t[j - 1] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    s = static_cast<u128>(t[N]) + carry;
    t[N - 1] = static_cast<u64>(s);
    t[N] = t[N + 1] + static_cast<u64>(s >> 64);
  }
  if (t[N] != 0 || geq<N>(t, p)) {
    sub_n<N>(r, t, p);
  } else {
    for (std::size_t i = 0; i < N; ++i) r[i] = t[i];
  }
}

}  // namespace zkit::detail
