#include "zkit/pinocchio.hpp"

#include <algorithm>

namespace zkit::pinocchio {
namespace {

void check_compatible(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s) {
  if (&ek.backend().scalar_field() != &qap.field()) {
    throw Error(Errc::kModulusMismatch, "evaluation key and QAP use different fields");
  }
  if (ek.num_wires() != qap.num_wires() || s.size() != qap.num_wires()) {
    throw Error(Errc::kDimensionMismatch, "evaluation key, QAP and witness disagree on the wire count");
  }
}

Proof assemble(const EvaluationKey& ek, const circuit::Witness& s, const Qap::Combined& c,
               const Polynomial& h, const Polynomial& t, const FieldElement& d1,
               const FieldElement& d2, const FieldElement& d3) {
  const Backend& be = ek.backend();
  Polynomial hz = h;
  if (!d1.is_zero() || !d2.is_zero() || !d3.is_zero()) {
    hz += c.v * d1 + c.u * d2 + t * (d1 * d2) - Polynomial::constant(d3);
  }
  const auto& coeffs = hz.coeffs();
  if (coeffs.size() > ek.powers.size()) {
    throw Error(Errc::kDimensionMismatch, "quotient degree exceeds the published powers of z");
  }
  std::span<const FieldElement> sv = s.values();
  std::span<const GroupElement> powers(ek.powers.data(), coeffs.size());
  std::span<const GroupElement> alpha_powers(ek.alpha_powers.data(), coeffs.size());

  Proof p{ek.digest,
          be.msm(ek.u, sv) + ek.t * d1,
          be.msm(ek.alpha_u, sv) + ek.alpha_t * d1,
          be.msm(ek.v, sv) + ek.t * d2,
          be.msm(ek.alpha_v, sv) + ek.alpha_t * d2,
          be.msm(ek.w, sv) + ek.t * d3,
          be.msm(ek.alpha_w, sv) + ek.alpha_t * d3,
          be.msm(powers, coeffs),
          be.msm(alpha_powers, coeffs),
          be.msm(ek.beta_u, sv) + be.msm(ek.beta_v, sv) + be.msm(ek.beta_w, sv) +
              ek.beta_u_t * d1 + ek.beta_v_t * d2 + ek.beta_w_t * d3};
  return p;
}

Proof prove_impl(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s,
                 const FieldElement& d1, const FieldElement& d2, const FieldElement& d3,
                 bool checked) {
  check_compatible(ek, qap, s);
  auto c = qap.combine(s);
  auto [h, r] = poly_divrem(c.u * c.v - c.w, qap.t());
  if (checked && !r.is_zero()) {
    throw Error(Errc::kNotSatisfying, "witness does not satisfy the QAP; no proof emitted");
  }
  return assemble(ek, s, c, h, qap.t(), d1, d2, d3);
}

}  // namespace

KeyPair setup(const Backend& backend, const Qap& qap, Rng& rng) {
  const PrimeField& f = qap.field();
  if (&backend.scalar_field() != &f) {
    throw Error(Errc::kModulusMismatch, "backend scalar field differs from the QAP field");
  }
  const FieldElement alpha = f.random_nonzero(rng);
  const FieldElement beta_u = f.random_nonzero(rng);
  const FieldElement beta_v = f.random_nonzero(rng);
  const FieldElement beta_w = f.random_nonzero(rng);
  const FieldElement gamma = f.random_nonzero(rng);
  FieldElement z = f.random_nonzero(rng);
  while (poly_eval(qap.t(), z).is_zero()) z = f.random_nonzero(rng);

  const auto ev = qap.evaluate_at(z);
  const std::size_t n = qap.num_wires();
  const std::size_t d = std::max(qap.num_constraints(), n);

  std::vector<FieldElement> scalars;
  scalars.reserve(2 * (d + 1) + 9 * n + 12);
  FieldElement zi = f.one();
  for (std::size_t i = 0; i <= d; ++i, zi *= z) scalars.push_back(zi);
  zi = f.one();
  for (std::size_t i = 0; i <= d; ++i, zi *= z) scalars.push_back(alpha * zi);
  for (const auto* family : {&ev.u, &ev.v, &ev.w}) {
    const FieldElement& beta = family == &ev.u ? beta_u : family == &ev.v ? beta_v : beta_w;
    for (const auto& x : *family) scalars.push_back(x);
    for (const auto& x : *family) scalars.push_back(alpha * x);
    for (const auto& x : *family) scalars.push_back(beta * x);
  }
  const FieldElement& t = ev.t;
  for (const auto& x : {t, alpha * t, beta_u * t, beta_v * t, beta_w * t}) scalars.push_back(x);
  for (const auto& x : {f.one(), alpha, t, gamma, beta_u * gamma, beta_v * gamma, beta_w * gamma}) {
    scalars.push_back(x);
  }

  const auto enc = backend.encode_batch(scalars);
  auto it = enc.begin();
  auto take = [&](std::size_t count) {
    std::vector<GroupElement> out(it, it + static_cast<std::ptrdiff_t>(count));
    it += static_cast<std::ptrdiff_t>(count);
    return out;
  };
  auto next = [&] { return *it++; };

  const std::string digest = circuit_digest(qap.constraint_system());
  auto powers = take(d + 1);
  auto alpha_powers = take(d + 1);
  auto u = take(n), alpha_u = take(n), beta_u_i = take(n);
  auto v = take(n), alpha_v = take(n), beta_v_i = take(n);
  auto w = take(n), alpha_w = take(n), beta_w_i = take(n);
  GroupElement et = next(), ealpha_t = next(), ebu_t = next(), ebv_t = next(), ebw_t = next();
  GroupElement one = next(), ealpha = next(), vt = next(), egamma = next(), ebug = next(),
               ebvg = next(), ebwg = next();

  return KeyPair{
      EvaluationKey{digest, std::move(powers), std::move(alpha_powers), std::move(u),
                    std::move(alpha_u), std::move(beta_u_i), std::move(v), std::move(alpha_v),
                    std::move(beta_v_i), std::move(w), std::move(alpha_w), std::move(beta_w_i),
                    et, ealpha_t, ebu_t, ebv_t, ebw_t},
      VerificationKey{digest, one, ealpha, vt, egamma, ebug, ebvg, ebwg}};
}

Proof prove(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s) {
  const FieldElement zero = qap.field().zero();
  return prove_impl(ek, qap, s, zero, zero, zero, true);
}

Proof prove_shifted(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s,
                    const FieldElement& d1, const FieldElement& d2, const FieldElement& d3) {
  return prove_impl(ek, qap, s, d1, d2, d3, true);
}

Proof prove_zk(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s, Rng& rng) {
  const PrimeField& f = qap.field();
  FieldElement d1 = f.random(rng);
  FieldElement d2 = f.random(rng);
  FieldElement d3 = f.random(rng);
  return prove_impl(ek, qap, s, d1, d2, d3, true);
}

Proof prove_unchecked(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s) {
  const FieldElement zero = qap.field().zero();
  return prove_impl(ek, qap, s, zero, zero, zero, false);
}

bool verify(const VerificationKey& vk, const Proof& proof) {
  if (vk.digest != proof.digest) {
    throw Error(Errc::kDigestMismatch, "verification key and proof are for different circuits");
  }
  const Backend& be = vk.backend();
  auto e = [&](const GroupElement& a, const GroupElement& b) { return be.pair(a, b); };

  bool ok = true;
  ok &= e(proof.u_alpha, vk.one) == e(proof.u, vk.alpha);
  ok &= e(proof.v_alpha, vk.one) == e(proof.v, vk.alpha);
  ok &= e(proof.w_alpha, vk.one) == e(proof.w, vk.alpha);
  ok &= e(proof.h_alpha, vk.one) == e(proof.h, vk.alpha);
  ok &= e(proof.k, vk.gamma) ==
        e(proof.u, vk.beta_u_gamma) * e(proof.v, vk.beta_v_gamma) * e(proof.w, vk.beta_w_gamma);
  ok &= e(proof.u, proof.v) == e(proof.w, vk.one) * e(vk.t, proof.h);
  return ok;
}

}  // namespace zkit::pinocchio
