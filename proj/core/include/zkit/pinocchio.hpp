#pragma once

#include <array>
#include <string>
#include <vector>

#include "zkit/pairing/backend.hpp"
#include "zkit/qap.hpp"

namespace zkit::pinocchio {

using pairing::Backend;
using pairing::GroupElement;

/// Prover-side common reference string for one QAP, d = max(m, n):
///   E(z^i), E(alpha z^i)                         i = 0..d
///   E(u_i(z)), E(alpha u_i(z)), E(beta_u u_i(z))  every wire i, same for v, w
///   E(t(z)), E(alpha t(z)), E(beta_{u,v,w} t(z))  for the shifted proof
struct EvaluationKey {
  std::string digest;
  std::vector<GroupElement> powers, alpha_powers;
  std::vector<GroupElement> u, alpha_u, beta_u;
  std::vector<GroupElement> v, alpha_v, beta_v;
  std::vector<GroupElement> w, alpha_w, beta_w;
  GroupElement t, alpha_t, beta_u_t, beta_v_t, beta_w_t;

  const Backend& backend() const { return t.backend(); }
  std::size_t num_wires() const { return u.size(); }
  friend bool operator==(const EvaluationKey&, const EvaluationKey&) = default;
};

struct VerificationKey {
  std::string digest;
  GroupElement one, alpha, t, gamma, beta_u_gamma, beta_v_gamma, beta_w_gamma;

  const Backend& backend() const { return one.backend(); }
  friend bool operator==(const VerificationKey&, const VerificationKey&) = default;
};

/// The prover's message: nine group elements.
struct Proof {
  static constexpr std::size_t kElementCount = 9;
  static constexpr std::array<const char*, kElementCount> kElementNames = {
      "u", "u_alpha", "v", "v_alpha", "w", "w_alpha", "h", "h_alpha", "k"};

  std::string digest;
  GroupElement u, u_alpha, v, v_alpha, w, w_alpha, h, h_alpha, k;

  std::array<GroupElement, kElementCount> elements() const {
    return {u, u_alpha, v, v_alpha, w, w_alpha, h, h_alpha, k};
  }
  static Proof from_elements(std::string digest, const std::array<GroupElement, kElementCount>& e) {
    return Proof{std::move(digest), e[0], e[1], e[2], e[3], e[4], e[5], e[6], e[7], e[8]};
  }
  const Backend& backend() const { return u.backend(); }
  friend bool operator==(const Proof&, const Proof&) = default;
};

struct KeyPair {
  EvaluationKey ek;
  VerificationKey vk;
};

/// SHA-256 over the canonical serialization of the constraint system,
/// lowercase hex. Binds keys and proofs to one circuit.
std::string circuit_digest(const circuit::ConstraintSystem& cs);

/// Samples alpha, beta_u, beta_v, beta_w, gamma, z from F_p* (z again until
/// t(z) != 0) and publishes the keys. The sampled values never leave this
/// call. Throws FieldTooSmall if 2m >= p and BackendMismatch if the
/// backend's scalar field is not the QAP's field.
KeyPair setup(const Backend& backend, const Qap& qap, Rng& rng);

/// Honest proof. Every element is a linear combination of key entries; z
/// itself is never needed. Throws NotSatisfying before emitting anything.
Proof prove(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s);

/// Proof for u + d1 t, v + d2 t, w + d3 t with
/// h_z = h + d1 v + d2 u + d1 d2 t - d3. Zero shifts give `prove`.
Proof prove_shifted(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s,
                    const FieldElement& d1, const FieldElement& d2, const FieldElement& d3);

/// Zero-knowledge proof with uniformly random shifts drawn from `rng`.
Proof prove_zk(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s, Rng& rng);

/// Runs the honest prover algorithm on any witness, dropping the remainder of
/// the division by t. Models a cheating prover in soundness experiments.
Proof prove_unchecked(const EvaluationKey& ek, const Qap& qap, const circuit::Witness& s);

/// Evaluates all three checks (always 15 pairings):
///   e(pi', E(1)) = e(pi, E(alpha))   for pi in u, v, w, h           8
///   e(pi_k, E(gamma)) = e(pi_u, E(bu g)) e(pi_v, E(bv g)) e(pi_w, E(bw g))  4
///   e(pi_u, pi_v) = e(pi_w, E(1)) e(E(t(z)), pi_h)                  3
/// Throws DigestMismatch if key and proof name different circuits and
/// BackendMismatch if they live in different groups.
bool verify(const VerificationKey& vk, const Proof& proof);

/// Number of pairings evaluated by `verify`.
inline constexpr std::size_t kVerifyPairings = 15;

}  // namespace zkit::pinocchio
