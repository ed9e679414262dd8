#include <gtest/gtest.h>

#include <set>

#include "support/pipeline.hpp"
#include "support/random_circuit.hpp"
#include "zkit/pairing/curve.hpp"
#include "zkit/pairing/transparent.hpp"
#include "zkit/pinocchio.hpp"
#include "zkit/serialize.hpp"

namespace zkit::pinocchio {
namespace {

using pairing::BackendKind;
using pairing::TransparentBackend;
using testing::compile;
using testing::kProduct3;
using testing::witness_of;

class PinocchioTest : public ::testing::TestWithParam<BackendKind> {
 protected:
  const Backend& be(const PrimeField& f) const { return pairing::backend(GetParam(), f); }
};

TEST_P(PinocchioTest, WorkedExampleEndToEnd) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  Rng rng(1);
  auto keys = setup(be(f), c.qap, rng);
  auto s = witness_of(f, {1, 2, 3, 4, 6, 24});
  auto proof = prove(keys.ek, c.qap, s);
  EXPECT_EQ(proof.elements().size(), 9u);
  EXPECT_TRUE(verify(keys.vk, proof));

  s.set(5, f.element(25));
  try {
    prove(keys.ek, c.qap, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotSatisfying);
  }
}

TEST_P(PinocchioTest, KeyInternalConsistency) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  Rng rng(2);
  auto [ek, vk] = setup(be(f), c.qap, rng);
  const auto& B = be(f);
  auto alpha_pair = [&](const GroupElement& x, const GroupElement& ax) {
    return B.pair(x, vk.alpha) == B.pair(ax, vk.one);
  };
  ASSERT_EQ(ek.powers.size(), std::max(c.qap.num_constraints(), c.qap.num_wires()) + 1);
  EXPECT_EQ(ek.powers[0], vk.one);
  for (std::size_t i = 0; i < ek.powers.size(); ++i) {
    EXPECT_TRUE(alpha_pair(ek.powers[i], ek.alpha_powers[i])) << i;
  }
  for (std::size_t i = 0; i < ek.num_wires(); ++i) {
    EXPECT_TRUE(alpha_pair(ek.u[i], ek.alpha_u[i])) << i;
    EXPECT_TRUE(alpha_pair(ek.v[i], ek.alpha_v[i])) << i;
    EXPECT_TRUE(alpha_pair(ek.w[i], ek.alpha_w[i])) << i;
    // e(E(beta_u u_i), E(gamma)) = e(E(u_i), E(beta_u gamma))
    EXPECT_TRUE(B.pair(ek.beta_u[i], vk.gamma) == B.pair(ek.u[i], vk.beta_u_gamma)) << i;
    EXPECT_TRUE(B.pair(ek.beta_v[i], vk.gamma) == B.pair(ek.v[i], vk.beta_v_gamma)) << i;
    EXPECT_TRUE(B.pair(ek.beta_w[i], vk.gamma) == B.pair(ek.w[i], vk.beta_w_gamma)) << i;
  }
  EXPECT_TRUE(alpha_pair(ek.t, ek.alpha_t));
  EXPECT_EQ(ek.t, vk.t);
  EXPECT_FALSE(vk.t.is_identity());
  // t(z) = (z-1)(z-2) must match the published powers.
  EXPECT_EQ(ek.t, ek.powers[2] - ek.powers[1] * f.element(3) + ek.powers[0] * f.element(2));
}

TEST_P(PinocchioTest, SetupIsDeterministic) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  Rng r1(7), r2(7), r3(8);
  auto a = setup(be(f), c.qap, r1);
  auto b = setup(be(f), c.qap, r2);
  auto d = setup(be(f), c.qap, r3);
  EXPECT_EQ(io::save_evaluation_key(a.ek), io::save_evaluation_key(b.ek));
  EXPECT_EQ(io::save_verification_key(a.vk), io::save_verification_key(b.vk));
  EXPECT_NE(io::save_verification_key(a.vk), io::save_verification_key(d.vk));
  auto s = witness_of(f, {1, 2, 3, 4, 6, 24});
  EXPECT_TRUE(verify(a.vk, prove(a.ek, c.qap, s)));
  EXPECT_TRUE(verify(d.vk, prove(d.ek, c.qap, s)));
}

TEST_P(PinocchioTest, VerifyUsesFifteenPairings) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  Rng rng(3);
  auto keys = setup(be(f), c.qap, rng);
  auto proof = prove(keys.ek, c.qap, witness_of(f, {1, 2, 3, 4, 6, 24}));
  for (bool tamper : {false, true}) {
    Proof p = proof;
    if (tamper) p.u = p.u + be(f).generator();
    be(f).reset_pairing_count();
    EXPECT_EQ(verify(keys.vk, p), !tamper);
    EXPECT_EQ(be(f).pairing_count(), kVerifyPairings);
  }
}

TEST_P(PinocchioTest, MixedCoefficientVectorsFailConsistencyCheck) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  Rng rng(4);
  auto keys = setup(be(f), c.qap, rng);
  const auto& B = be(f);
  auto s = witness_of(f, {1, 2, 3, 4, 6, 24});
  auto s2 = witness_of(f, {1, 1, 24, 24, 6, 24});
  Proof p = prove(keys.ek, c.qap, s);
  p.u = B.msm(keys.ek.u, s2.values());
  p.u_alpha = B.msm(keys.ek.alpha_u, s2.values());
  // The alpha checks still pass; only the beta-gamma equation catches it.
  EXPECT_TRUE(B.pair(p.u_alpha, keys.vk.one) == B.pair(p.u, keys.vk.alpha));
  EXPECT_FALSE(B.pair(p.k, keys.vk.gamma) ==
               B.pair(p.u, keys.vk.beta_u_gamma) * B.pair(p.v, keys.vk.beta_v_gamma) *
                   B.pair(p.w, keys.vk.beta_w_gamma));
  EXPECT_FALSE(verify(keys.vk, p));
}

TEST_P(PinocchioTest, AllZeroWitness) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  Rng rng(5);
  auto keys = setup(be(f), c.qap, rng);
  auto proof = prove(keys.ek, c.qap, witness_of(f, {1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(proof.u, keys.ek.u[0]);
  EXPECT_EQ(proof.v, keys.ek.v[0]);
  EXPECT_EQ(proof.w, keys.ek.w[0]);
  EXPECT_TRUE(proof.h.is_identity());
  EXPECT_TRUE(verify(keys.vk, proof));
}

TEST_P(PinocchioTest, ZeroShiftReproducesPlainProof) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  Rng rng(6);
  auto keys = setup(be(f), c.qap, rng);
  auto s = witness_of(f, {1, 2, 3, 4, 6, 24});
  auto plain = prove(keys.ek, c.qap, s);
  auto shifted = prove_shifted(keys.ek, c.qap, s, f.zero(), f.zero(), f.zero());
  EXPECT_EQ(io::save_proof(plain), io::save_proof(shifted));

  for (int i = 0; i < 20; ++i) {
    auto zk = prove_zk(keys.ek, c.qap, s, rng);
    EXPECT_TRUE(verify(keys.vk, zk));
    EXPECT_NE(zk, plain);
  }
}

TEST_P(PinocchioTest, CompletenessOnRandomCircuits) {
  for (const char* name : {"p10007", "bn254-scalar"}) {
    const auto& f = PrimeField::preset(name);
    Rng rng(seed_from_label(name));
    for (int trial = 0; trial < 10; ++trial) {
      auto rc = testing::random_circuit(rng, f.modulus(), 1 + rng.uniform(3), 1 + rng.uniform(8));
      auto c = compile(rc.source, f);
      circuit::InputMap in;
      for (const auto& x : rc.inputs) in.emplace(x, f.random(rng));
      auto s = circuit::eval_witness(c.ast, in);
      auto keys = setup(be(f), c.qap, rng);
      ASSERT_TRUE(verify(keys.vk, prove(keys.ek, c.qap, s))) << rc.source;
      ASSERT_TRUE(verify(keys.vk, prove_zk(keys.ek, c.qap, s, rng))) << rc.source;
    }
  }
}

TEST_P(PinocchioTest, DigestMismatchIsRefused) {
  const auto& f = PrimeField::preset("p101");
  auto a = compile(kProduct3, f);
  auto b = compile("signal in x; signal out y; y <- x * x;", f);
  Rng rng(9);
  auto ka = setup(be(f), a.qap, rng);
  auto kb = setup(be(f), b.qap, rng);
  auto proof = prove(ka.ek, a.qap, witness_of(f, {1, 2, 3, 4, 6, 24}));
  try {
    verify(kb.vk, proof);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDigestMismatch);
  }
}

TEST_P(PinocchioTest, SerializationRoundTrips) {
  const auto& f = PrimeField::preset("p10007");
  auto c = compile(kProduct3, f);
  Rng rng(10);
  auto keys = setup(be(f), c.qap, rng);
  auto s = witness_of(f, {1, 2, 3, 4, 6, 24});
  auto proof = prove_zk(keys.ek, c.qap, s, rng);

  auto ek_text = io::save_evaluation_key(keys.ek);
  auto vk_text = io::save_verification_key(keys.vk);
  auto proof_text = io::save_proof(proof);
  EXPECT_EQ(io::load_evaluation_key(ek_text), keys.ek);
  EXPECT_EQ(io::save_evaluation_key(io::load_evaluation_key(ek_text)), ek_text);
  EXPECT_EQ(io::load_verification_key(vk_text), keys.vk);
  EXPECT_EQ(io::save_verification_key(io::load_verification_key(vk_text)), vk_text);
  EXPECT_EQ(io::load_proof(proof_text), proof);
  EXPECT_EQ(io::save_proof(io::load_proof(proof_text)), proof_text);
  EXPECT_EQ(io::parse(proof_text)["payload"]["elements"].size(), 9u);
  EXPECT_TRUE(verify(io::load_verification_key(vk_text), io::load_proof(proof_text)));
}

INSTANTIATE_TEST_SUITE_P(Backends, PinocchioTest,
                         ::testing::Values(BackendKind::kTransparent, BackendKind::kCurve),
                         [](const auto& info) { return std::string(backend_kind_name(info.param)); });

TEST(Pinocchio, ShiftIsBijectionOverP101) {
  const auto& f = PrimeField::preset("p101");
  const auto& B = TransparentBackend::get(f);
  auto c = compile(kProduct3, f);
  Rng rng(11);
  auto keys = setup(B, c.qap, rng);
  ASSERT_FALSE(B.exponent(keys.vk.t).is_zero());
  auto s = witness_of(f, {1, 2, 3, 4, 6, 24});
  std::set<std::uint64_t> seen;
  for (std::int64_t d1 = 0; d1 < 101; ++d1) {
    auto p = prove_shifted(keys.ek, c.qap, s, f.element(d1), f.random(rng), f.random(rng));
    ASSERT_TRUE(verify(keys.vk, p)) << d1;
    seen.insert(*B.exponent(p.u).to_u64());
  }
  EXPECT_EQ(seen.size(), 101u);
}

TEST(Pinocchio, CheatingProverRarelyAccepted) {
  // Non-satisfying witness with the honest algorithm: accepted only when z is
  // a root of the remainder, which has degree <= m - 1 = 1.
  const auto& f = PrimeField::preset("p101");
  const auto& B = TransparentBackend::get(f);
  auto c = compile(kProduct3, f);
  Rng rng(12);
  const int trials = 2000;
  auto run = [&](const circuit::Witness& bad) {
    int accepted = 0;
    for (int i = 0; i < trials; ++i) {
      auto keys = setup(B, c.qap, rng);
      accepted += verify(keys.vk, prove_unchecked(keys.ek, c.qap, bad));
    }
    return accepted;
  };
  // Gate errors (-1, -3): remainder 1 - 2x, root 1/2 = 51 is one of the 98
  // admissible z (nonzero, not 1 or 2), so the rate is about 1/98.
  int accepted = run(witness_of(f, {1, 2, 3, 4, 7, 31}));
  EXPECT_GE(accepted, 5);
  EXPECT_LE(accepted, 45);
  // Error only in gate 2: the remainder vanishes at x = 1 alone, a root of t
  // that setup never picks.
  EXPECT_EQ(run(witness_of(f, {1, 2, 3, 4, 6, 25})), 0);
}

TEST(Pinocchio, BackendFieldMismatch) {
  auto c = compile(kProduct3, PrimeField::preset("p101"));
  Rng rng(13);
  EXPECT_THROW(setup(TransparentBackend::get(PrimeField::preset("p10007")), c.qap, rng), Error);
}

TEST(Serialization, ConstraintSystemAndQapRoundTrip) {
  const auto& f = PrimeField::preset("p101");
  auto c = compile(kProduct3, f);
  const auto& cs = c.qap.constraint_system();
  auto text = io::save_constraint_system(cs);
  EXPECT_EQ(io::load_constraint_system(text), cs);
  EXPECT_EQ(io::save_constraint_system(io::load_constraint_system(text)), text);

  auto qtext = io::save_qap(c.qap);
  auto doc = io::parse(qtext);
  EXPECT_EQ(doc["payload"]["u"][1], io::Json::array({"2", "64"}));  // 2 - x over F_101
  auto loaded = io::load_qap(qtext);
  EXPECT_EQ(io::save_qap(loaded), qtext);
  EXPECT_EQ(io::load_qap(text).constraint_system(), cs);

  doc["payload"]["u"][1][0] = "3";
  EXPECT_THROW(io::load_qap(io::dump(doc)), Error);
}

TEST(Serialization, WitnessAndInputs) {
  const auto& f = PrimeField::preset("p101");
  auto s = witness_of(f, {1, 2, 3, 4, 6, 24});
  auto text = io::save_witness(s);
  EXPECT_EQ(io::load_witness(text), s);
  auto in = io::parse_inputs(f, R"({"a": 5, "b": "0x10", "c": "-1"})");
  EXPECT_EQ(in.at("a"), f.element(5));
  EXPECT_EQ(in.at("b"), f.element(16));
  EXPECT_EQ(in.at("c"), f.element(100));
}

TEST(Serialization, RejectsMalformedDocuments) {
  auto expect_format = [](const std::string& text) {
    try {
      io::load_proof(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kFormatError) << text;
    }
  };
  expect_format("not json");
  expect_format(R"({"format": "other"})");
  expect_format(R"({"format": "zkit", "version": 2, "kind": "proof"})");
  expect_format(R"({"format": "zkit", "version": 1, "kind": "witness", "field": "65",
                    "backend": "", "digest": "", "payload": {}})");
  expect_format(R"({"format": "zkit", "version": 1, "kind": "proof", "field": "65",
                    "backend": "curve:q=17", "digest": "", "payload": {}})");
}

TEST(Serialization, Sha256KnownAnswer) {
  EXPECT_EQ(io::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace zkit::pinocchio
