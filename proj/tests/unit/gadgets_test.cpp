#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "zkit/circuit/parser.hpp"
#include "zkit/circuit/r1cs.hpp"
#include "zkit/gadgets/circuits.hpp"
#include "zkit/pairing/backend.hpp"
#include "zkit/pinocchio.hpp"
#include "zkit/qap.hpp"
#include "zkit/rng.hpp"
#include "zkit/serialize.hpp"

namespace zkit::gadgets {
namespace {

using circuit::CircuitAst;
using circuit::InputMap;
using circuit::eval_witness;
using circuit::flatten;

const PrimeField& bn254() { return PrimeField::preset("bn254-scalar"); }
const PrimeField& p10007() { return PrimeField::preset("p10007"); }

CircuitAst parse(std::string_view src, const PrimeField& f) {
  return circuit::parse_circuit(src, f, &standard_templates());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reference MiMC on plain big integers, written from the definition.
struct MimcOracle {
  mpz_class p;
  std::vector<mpz_class> c;

  explicit MimcOracle(const mpz_class& modulus) : p(modulus) {
    mpz_class s = 0;
    for (char ch : std::string("zkit.mimc.feistel")) s = s * 256 + static_cast<unsigned char>(ch);
    c.assign(220, 0);
    mpz_class l = s % p, r = 0;
    for (int i = 1; i < 219; ++i) {
      std::vector<mpz_class> zero(220, 0);
      permute(l, r, 0, zero);
      c[i] = l;
    }
  }

  mpz_class pow5(const mpz_class& x) const {
    mpz_class y;
    mpz_powm_ui(y.get_mpz_t(), x.get_mpz_t(), 5, p.get_mpz_t());
    return y;
  }

  void permute(mpz_class& l, mpz_class& r, const mpz_class& k,
               const std::vector<mpz_class>& consts) const {
    for (int i = 0; i < 220; ++i) {
      mpz_class t = pow5((l + k + consts[i]) % p);
      if (i < 219) {
        mpz_class nl = (r + t) % p;
        r = l;
        l = nl;
      } else {
        r = (r + t) % p;
      }
    }
  }

  mpz_class hash(const std::vector<mpz_class>& ins) const {
    mpz_class l = 0, r = 0;
    for (const auto& x : ins) {
      l = (l + x) % p;
      permute(l, r, 0, c);
    }
    return l;
  }
};

TEST(Mimc, ConstantsShape) {
  const auto& c = mimc_constants(bn254());
  ASSERT_EQ(c.size(), kMimcRounds);
  EXPECT_TRUE(c.front().is_zero());
  EXPECT_TRUE(c.back().is_zero());
  for (std::size_t i = 1; i + 1 < c.size(); ++i) EXPECT_FALSE(c[i].is_zero()) << i;
}

TEST(Mimc, MatchesBigIntegerOracle) {
  for (const char* name : {"p10007", "bn254-scalar"}) {
    const auto& f = PrimeField::preset(name);
    MimcOracle oracle(f.modulus());
    const auto& c = mimc_constants(f);
    for (std::size_t i = 0; i < kMimcRounds; ++i) {
      ASSERT_EQ(c[i].to_mpz(), oracle.c[i]) << name << " constant " << i;
    }
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<FieldElement> ins;
      std::vector<mpz_class> raw;
      for (int j = 0; j <= trial % 3; ++j) {
        ins.push_back(f.random(rng));
        raw.push_back(ins.back().to_mpz());
      }
      EXPECT_EQ(mimc_hash(ins).to_mpz(), oracle.hash(raw)) << name;
    }
  }
}

TEST(Mimc, RegressionVectors) {
  auto vectors = nlohmann::json::parse(read_file(ZKIT_FIXTURE_DIR "/mimc_vectors.json"));
  ASSERT_FALSE(vectors.empty());
  for (const auto& v : vectors) {
    const auto& f = PrimeField::preset(v["field"].get<std::string>());
    std::vector<FieldElement> ins;
    for (const auto& x : v["inputs"]) ins.push_back(f.element(mpz_class(x.get<std::string>())));
    auto outs = mimc_sponge(ins, f.element(mpz_class(v["key"].get<std::string>())),
                            v["outputs"].size());
    for (std::size_t i = 0; i < outs.size(); ++i) {
      EXPECT_EQ(outs[i].to_hex(), v["outputs"][i].get<std::string>()) << v.dump();
    }
  }
  const auto& f = bn254();
  EXPECT_EQ(mimc_hash({f.element(5)}).to_mpz(), MimcOracle(f.modulus()).hash({mpz_class(5)}));
  EXPECT_EQ(mimc_hash({f.element(5)}), mimc_hash({f.element(5)}));
}

TEST(Mimc, IncompatibleField) {
  const auto& f = PrimeField::preset("p101");  // 5 | 100
  try {
    mimc_hash({f.element(1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIncompatibleField);
  }
}

TEST(Mimc, CircuitMatchesNative) {
  const auto& f = bn254();
  auto ast = parse(
      "signal in x; signal in y; signal in k; signal out h0; signal out h1;\n"
      "component s = mimc_sponge(2, 2)(x, y, k);\n"
      "h0 <- s.outs[0];\nh1 <- s.outs[1];\n",
      f);
  auto cs = flatten(ast);
  // Two absorptions plus one squeeze, three constraints per round.
  EXPECT_EQ(cs.num_constraints(), 3 * 3 * kMimcRounds + 2);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    FieldElement x = f.random(rng), y = f.random(rng), k = f.random(rng);
    auto w = eval_witness(ast, {{"x", x}, {"y", y}, {"k", k}});
    ASSERT_TRUE(circuit::check_constraints(cs, w));
    std::vector<FieldElement> ins{x, y};
    auto expect = mimc_sponge(ins, k, 2);
    EXPECT_EQ(w[*cs.wire_index("h0")], expect[0]);
    EXPECT_EQ(w[*cs.wire_index("h1")], expect[1]);
  }
}

TEST(Num2Bits, MatchesIntegerBits) {
  const auto& f = p10007();
  auto ast = parse("signal in x; component n = num2bits(8)(x);\n"
                   "signal out top; top <- n.out[7];\n", f);
  auto cs = flatten(ast);
  for (int x = 0; x < 256; ++x) {
    auto w = eval_witness(ast, {{"x", f.element(x)}});
    ASSERT_TRUE(circuit::check_constraints(cs, w));
    for (int i = 0; i < 8; ++i) {
      EXPECT_EQ(w[*cs.wire_index("n.b" + std::to_string(i))], f.element((x >> i) & 1));
    }
  }
  try {
    eval_witness(ast, {{"x", f.element(256)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kRangeViolation);
  }
}

TEST(LessThan, ExhaustiveSixBit) {
  const auto& f = p10007();
  auto ast = parse("signal in a; signal in b; signal out o;\n"
                   "component lt = less_than(6)(a, b);\no <- lt.out;\n", f);
  auto cs = flatten(ast);
  std::size_t o = *cs.wire_index("o");
  for (int a = 0; a < 64; ++a) {
    for (int b = 0; b < 64; ++b) {
      auto w = eval_witness(ast, {{"a", f.element(a)}, {"b", f.element(b)}});
      ASSERT_EQ(w[o], f.element(a < b ? 1 : 0)) << a << " " << b;
      ASSERT_TRUE(circuit::check_constraints(cs, w));
      w.set(o, f.one() - w[o]);
      ASSERT_FALSE(circuit::check_constraints(cs, w));
    }
  }
}

TEST(LessThan, OperandRangeChecked) {
  const auto& f = p10007();
  auto ast = parse("signal in a; signal in b; signal out o;\n"
                   "component lt = less_than(6)(a, b);\no <- lt.out;\n", f);
  for (auto [a, b] : {std::pair{64, 3}, std::pair{3, 64}, std::pair{10006, 0}}) {
    try {
      eval_witness(ast, {{"a", f.element(a)}, {"b", f.element(b)}});
      FAIL() << a << " " << b;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kRangeViolation);
    }
  }
}

TEST(LessThan, FieldTooSmall) {
  const auto& f = PrimeField::preset("p101");
  try {
    parse("signal in a; signal in b; component lt = less_than(6)(a, b);\n"
          "signal out o; o <- lt.out;", f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIncompatibleField);
  }
}

TEST(Modulo, ExhaustiveAgainstIntegerDivision) {
  const auto& f = p10007();
  auto ast = parse("signal in x; signal out q; signal out r;\n"
                   "component m = modulo(7, 4)(x, 13);\n"
                   "q <- m.quotient;\nr <- m.remainder;\n", f);
  auto cs = flatten(ast);
  std::size_t q = *cs.wire_index("q"), r = *cs.wire_index("r");
  for (int x = 0; x < 1000; ++x) {
    auto w = eval_witness(ast, {{"x", f.element(x)}});
    ASSERT_EQ(w[q], f.element(x / 13));
    ASSERT_EQ(w[r], f.element(x % 13));
    ASSERT_TRUE(circuit::check_constraints(cs, w));
    w.set(r, w[r] + f.one());
    ASSERT_FALSE(circuit::check_constraints(cs, w));
  }
  try {
    eval_witness(ast, {{"x", f.element(13 * 128)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kRangeViolation);
  }
}

TEST(Modulo, SmallDivision) {
  const auto& f = p10007();
  auto ast = parse("signal in x; signal out q; signal out r;\n"
                   "component m = modulo(7, 4)(x, 13);\n"
                   "q <- m.quotient;\nr <- m.remainder;\n", f);
  auto cs = flatten(ast);
  auto w = eval_witness(ast, {{"x", f.element(27)}});
  EXPECT_EQ(w[*cs.wire_index("q")], f.element(2));
  EXPECT_EQ(w[*cs.wire_index("r")], f.element(1));
  w = eval_witness(ast, {{"x", f.zero()}});
  EXPECT_EQ(w[*cs.wire_index("q")], f.zero());
  EXPECT_EQ(w[*cs.wire_index("r")], f.zero());
}

TEST(Modulo, DivisorZero) {
  const auto& f = p10007();
  auto ast = parse("signal in x; signal in d; signal out r;\n"
                   "component m = modulo(7, 4)(x, d);\nr <- m.remainder;\n", f);
  try {
    eval_witness(ast, {{"x", f.element(5)}, {"d", f.zero()}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDivisorZero);
  }
}

TEST(DualMux, SelectsAndRejectsNonBit) {
  const auto& f = p10007();
  auto ast = parse("signal in a; signal in b; signal in s; signal out x; signal out y;\n"
                   "component m = dual_mux()(a, b, s);\nx <- m.out[0];\ny <- m.out[1];\n", f);
  auto cs = flatten(ast);
  auto run = [&](int s) {
    auto w = eval_witness(ast, {{"a", f.element(3)}, {"b", f.element(9)}, {"s", f.element(s)}});
    EXPECT_TRUE(circuit::check_constraints(cs, w));
    return std::pair{w[*cs.wire_index("x")], w[*cs.wire_index("y")]};
  };
  EXPECT_EQ(run(0), (std::pair{f.element(3), f.element(9)}));
  EXPECT_EQ(run(1), (std::pair{f.element(9), f.element(3)}));
  try {
    eval_witness(ast, {{"a", f.element(3)}, {"b", f.element(9)}, {"s", f.element(2)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kAssertionFailed);
  }
}

// Every satisfying assignment over a small field has a bit selector and bit
// outputs.
TEST(BitSoundness, ExhaustiveOverSmallField) {
  {
    const auto& f = PrimeField::get(mpz_class(7));
    auto cs = flatten(parse("signal in a; signal in b; signal in s; signal out x; signal out y;\n"
                            "component m = dual_mux()(a, b, s);\n"
                            "x <- m.out[0];\ny <- m.out[1];\n",
                            f));
    std::size_t n = cs.num_wires() - 1, total = 1, satisfied = 0;
    for (std::size_t i = 0; i < n; ++i) total *= 7;
    std::size_t s_wire = *cs.wire_index("s");
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<FieldElement> vals{f.one()};
      for (std::size_t c = code, i = 0; i < n; ++i, c /= 7) vals.push_back(f.element(c % 7));
      circuit::Witness w(f, vals);
      if (circuit::check_constraints(cs, w)) {
        ++satisfied;
        ASSERT_TRUE(w[s_wire].is_zero() || w[s_wire] == f.one());
      }
    }
    EXPECT_EQ(satisfied, 2u * 7 * 7);
  }
  {
    const auto& f = PrimeField::get(mpz_class(11));
    auto cs = flatten(parse("signal in x; component n = num2bits(3)(x);\n", f));
    std::size_t total = 1, satisfied = 0;
    for (std::size_t i = 1; i < cs.num_wires(); ++i) total *= 11;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<FieldElement> vals{f.one()};
      for (std::size_t c = code, i = 1; i < cs.num_wires(); ++i, c /= 11) {
        vals.push_back(f.element(c % 11));
      }
      circuit::Witness w(f, vals);
      if (!circuit::check_constraints(cs, w)) continue;
      ++satisfied;
      for (int i = 0; i < 3; ++i) {
        auto bit = w[*cs.wire_index("n.b" + std::to_string(i))];
        ASSERT_TRUE(bit.is_zero() || bit == f.one());
      }
    }
    // x in [0, 8), one decomposition each.
    EXPECT_EQ(satisfied, 8u);
  }
}

TEST(Merkle, DepthTwoExample) {
  const auto& f = p10007();
  MerkleTree tree(f, 2);
  for (int i = 1; i <= 4; ++i) tree.append(f.element(i * 10));
  FieldElement root = merkle_node(merkle_node(f.element(10), f.element(20)),
                                  merkle_node(f.element(30), f.element(40)));
  EXPECT_EQ(tree.root(), root);
  auto ast = parse("signal public in leaf; signal public in root;\n"
                   "signal public in e0; signal public in e1; signal public in i0; signal public in i1;\n"
                   "component m = merkle_inclusion(2)(leaf, root, e0, e1, i0, i1);\n", f);
  auto cs = flatten(ast);
  for (std::size_t idx = 0; idx < 4; ++idx) {
    auto p = tree.path(idx);
    InputMap in{{"leaf", p.leaf}, {"root", root},
                {"e0", p.elements[0]}, {"e1", p.elements[1]},
                {"i0", f.element(p.indices[0])}, {"i1", f.element(p.indices[1])}};
    EXPECT_TRUE(circuit::check_constraints(cs, eval_witness(ast, in)));
    for (const char* flip : {"i0", "i1"}) {
      InputMap bad = in;
      bad.insert_or_assign(flip, f.one() - bad.at(flip));
      EXPECT_NE(merkle_fold(p.leaf, p.elements,
                            std::vector<std::uint8_t>{
                                static_cast<std::uint8_t>(bad.at("i0").to_mpz().get_ui()),
                                static_cast<std::uint8_t>(bad.at("i1").to_mpz().get_ui())}),
                root);
      try {
        eval_witness(ast, bad);
        ADD_FAILURE() << idx << " " << flip;
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::kAssertionFailed);
      }
    }
  }
}

TEST(Merkle, TreeMatchesFullRebuild) {
  const auto& f = p10007();
  MerkleTree tree(f, 4);
  Rng rng(3);
  std::vector<FieldElement> leaves;
  auto rebuild = [&] {
    std::vector<FieldElement> level(16, f.zero());
    std::copy(leaves.begin(), leaves.end(), level.begin());
    while (level.size() > 1) {
      std::vector<FieldElement> up;
      for (std::size_t i = 0; i < level.size(); i += 2) {
        up.push_back(mimc_sponge(std::vector{level[i], level[i + 1]}, f.zero(), 1)[0]);
      }
      level = up;
    }
    return level[0];
  };
  EXPECT_EQ(tree.root(), rebuild());
  for (int i = 0; i < 16; ++i) {
    leaves.push_back(f.random(rng));
    EXPECT_EQ(tree.append(leaves.back()), static_cast<std::size_t>(i));
    EXPECT_EQ(tree.root(), rebuild());
    for (int j = 0; j <= i; ++j) {
      auto p = tree.path(j);
      EXPECT_EQ(merkle_fold(p.leaf, p.elements, p.indices), tree.root());
    }
  }
  try {
    tree.append(f.one());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTreeFull);
  }
}

InputMap bid_inputs(const MerklePath& p, const FieldElement& account, const FieldElement& value,
                    const FieldElement& bid) {
  InputMap in{{"leaf", p.leaf}, {"root", p.root}, {"account", account},
              {"value", value}, {"bid", bid}};
  const PrimeField& f = account.field();
  for (std::size_t i = 0; i < p.elements.size(); ++i) {
    in.emplace("pathElements[" + std::to_string(i) + "]", p.elements[i]);
    in.emplace("pathIndices[" + std::to_string(i) + "]", f.element(p.indices[i]));
  }
  return in;
}

TEST(BidVerifier, DepthSixteenAcceptsAndRejects) {
  const auto& f = bn254();
  auto ast = bid_verifier_circuit(f);
  auto cs = flatten(ast);
  MerkleTree tree(f, 16);
  for (int i = 0; i < 5; ++i) tree.append(mimc_hash({f.element(100 + i), f.element(500)}));
  FieldElement account = f.element(103), value = f.element(500);
  tree.append(mimc_hash({account, value}));
  for (int i = 0; i < 3; ++i) tree.append(mimc_hash({f.element(200 + i), f.element(7)}));
  auto path = tree.path(5);

  auto w = eval_witness(ast, bid_inputs(path, account, value, f.element(400)));
  EXPECT_TRUE(circuit::check_constraints(cs, w));
  EXPECT_EQ(w[*cs.wire_index("outValid")], f.zero());
  EXPECT_EQ(w[*cs.wire_index("finalBid")], f.element(400));
  EXPECT_EQ(w[*cs.wire_index("hashP")], path.leaf);

  w = eval_witness(ast, bid_inputs(path, account, value, f.element(501)));
  EXPECT_EQ(w[*cs.wire_index("outValid")], f.one());

  for (std::size_t level : {0u, 7u, 15u}) {
    auto bad = path;
    bad.indices[level] ^= 1;
    try {
      eval_witness(ast, bid_inputs(bad, account, value, f.element(400)));
      FAIL() << level;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kAssertionFailed);
    }
  }
  // Any other pre-image changes the leaf.
  for (auto [acc, val] : {std::pair{account, f.element(2000)}, std::pair{f.element(7), value}}) {
    try {
      eval_witness(ast, bid_inputs(path, acc, val, f.element(400)));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kAssertionFailed);
    }
  }
  try {
    eval_witness(ast, bid_inputs(path, account, value, f.element(1 << 11)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kRangeViolation);
  }

  auto restored = io::load_constraint_system(io::save_constraint_system(cs));
  EXPECT_EQ(restored, cs);
}

TEST(BidVerifier, AcceptsHonestBid) {
  const auto& f = bn254();
  auto ast = bid_verifier_circuit(f, {.depth = 2});
  auto cs = flatten(ast);
  MerkleTree tree(f, 2);
  tree.append(mimc_hash({f.element(7), f.element(500)}));
  auto w = eval_witness(ast, bid_inputs(tree.path(0), f.element(7), f.element(500), f.element(300)));
  EXPECT_TRUE(circuit::check_constraints(cs, w));
  // As wired: outValid = value < bid.
  EXPECT_EQ(w[*cs.wire_index("outValid")], f.zero());
  EXPECT_EQ(w[*cs.wire_index("finalBid")], f.element(300));
}

TEST(BidVerifier, SaltedAndTaggedVariants) {
  const auto& f = bn254();
  auto ast = bid_verifier_circuit(f, {.depth = 3, .salted = true, .tagged = true});
  auto cs = flatten(ast);
  MerkleTree tree(f, 3);
  FieldElement account = f.element(1), value = f.element(90), salt = f.element(777);
  tree.append(mimc_hash({account, value, salt}));
  auto in = bid_inputs(tree.path(0), account, value, f.element(50));
  in.emplace("salt", salt);
  in.emplace("auctionId", f.element(4));
  auto w = eval_witness(ast, in);
  EXPECT_TRUE(circuit::check_constraints(cs, w));
  EXPECT_EQ(w[*cs.wire_index("bidderTag")], mimc_hash({tree.path(0).leaf, f.element(4)}));
}

TEST(Cards, DrawMatchesModularFormula) {
  const auto& f = bn254();
  auto ast = card_draw_circuit(f);
  auto cs = flatten(ast);
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    mpz_class seed = mpz_class(std::to_string(rng.next_u64()));
    mpz_class bh = mpz_class(i) * 0x1234567 + 17;
    auto w = eval_witness(ast, {{"seed", f.element(seed)}, {"blockhash", f.element(bh)}});
    ASSERT_TRUE(circuit::check_constraints(cs, w));
    mpz_class card = (seed + bh) % 13 + 1;
    EXPECT_EQ(w[*cs.wire_index("card")], f.element(card));
    EXPECT_EQ(w[*cs.wire_index("cardCommit")], mimc_hash({f.element(card)}));
    EXPECT_EQ(w[*cs.wire_index("seedCommit")], mimc_hash({f.element(seed)}));
  }
}

TEST(Cards, DrawExamples) {
  const auto& f = bn254();
  auto ast = card_draw_circuit(f);
  auto cs = flatten(ast);
  auto w = eval_witness(ast, {{"seed", f.element(20)}, {"blockhash", f.element(7)}});
  EXPECT_EQ(w[*cs.wire_index("card")], f.element(2));
  EXPECT_EQ(w[*cs.wire_index("cardCommit")], mimc_hash({f.element(2)}));
  EXPECT_EQ(w[*cs.wire_index("seedCommit")], mimc_hash({f.element(20)}));
  EXPECT_EQ(eval_witness(ast, {{"seed", f.element(20)}, {"blockhash", f.element(7)}}), w);
  w = eval_witness(ast, {{"seed", f.zero()}, {"blockhash", f.zero()}});
  EXPECT_EQ(w[*cs.wire_index("card")], f.one());
}

TEST(Cards, CompareRevealsOnlyOrder) {
  const auto& f = bn254();
  auto ast = card_compare_circuit(f);
  auto cs = flatten(ast);
  for (int p = 1; p <= 13; ++p) {
    for (int d = 1; d <= 13; ++d) {
      auto w = eval_witness(ast, {{"playerCard", f.element(p)},
                                  {"playerCardCommit", mimc_hash({f.element(p)})},
                                  {"dealerCard", f.element(d)}});
      ASSERT_TRUE(circuit::check_constraints(cs, w));
      EXPECT_EQ(w[*cs.wire_index("outValid")], f.element(p < d ? 1 : 0));
    }
  }
  try {
    eval_witness(ast, {{"playerCard", f.element(4)},
                       {"playerCardCommit", mimc_hash({f.element(5)})},
                       {"dealerCard", f.element(9)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kAssertionFailed);
  }
}

InputMap hand_inputs(const PrimeField& f, std::vector<int> old_hand, std::vector<int> new_hand,
                     int drawn, const FieldElement& rho) {
  auto elems = [&](const std::vector<int>& v) {
    std::vector<FieldElement> out;
    for (int x : v) out.push_back(f.element(x));
    return out;
  };
  InputMap in{{"oldCommit", hand_commitment(elems(old_hand))},
              {"newCommit", hand_commitment(elems(new_hand))},
              {"drawn", f.element(drawn)},
              {"drawnCommit", mimc_hash({f.element(drawn)})},
              {"rho", rho}};
  for (std::size_t i = 0; i < old_hand.size(); ++i) {
    in.emplace("oldHand[" + std::to_string(i) + "]", f.element(old_hand[i]));
    in.emplace("newHand[" + std::to_string(i) + "]", f.element(new_hand[i]));
  }
  return in;
}

TEST(Cards, HandPermutation) {
  const auto& f = bn254();
  auto ast = hand_permutation_circuit(f, 3);
  auto cs = flatten(ast);
  FieldElement rho = mimc_hash({f.element(42)});
  auto accepts = [&](std::vector<int> o, std::vector<int> n, int d) {
    try {
      auto w = eval_witness(ast, hand_inputs(f, o, n, d, rho));
      return circuit::check_constraints(cs, w);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kAssertionFailed);
      return false;
    }
  };
  EXPECT_TRUE(accepts({3, 7, 0}, {3, 7, 5}, 5));
  EXPECT_TRUE(accepts({3, 7, 0}, {5, 3, 7}, 5));
  EXPECT_TRUE(accepts({3, 7, 0}, {3, 7, 0}, 0));
  EXPECT_FALSE(accepts({3, 7, 0}, {3, 7, 9}, 5));
  EXPECT_FALSE(accepts({3, 7, 0}, {3, 5, 5}, 5));
  EXPECT_FALSE(accepts({3, 7, 0}, {3, 7, 0}, 5));

  // Skip the commitment checks: the product identity alone must reject.
  Rng rng(21);
  auto product = [&](std::vector<int> xs, const FieldElement& r) {
    FieldElement acc = f.one();
    for (int x : xs) acc *= r - f.element(x);
    return acc;
  };
  for (int i = 0; i < 50; ++i) {
    FieldElement r = f.random(rng);
    EXPECT_EQ(product({3, 7, 0, 5}, r), product({3, 7, 5, 0}, r));
    EXPECT_NE(product({3, 7, 0, 5}, r), product({3, 7, 6, 0}, r));
    EXPECT_FALSE(accepts({3, 7, 0}, {3, 7, 6}, 5));
  }
}

TEST(Pipeline, GadgetCircuitProvesAndRejectsTampering) {
  const auto& f = bn254();
  auto ast = card_compare_circuit(f);
  auto cs = flatten(ast);
  auto spec = circuit::specialize(cs, {{"playerCardCommit", mimc_hash({f.element(9)})},
                                       {"dealerCard", f.element(4)},
                                       {"outValid", f.zero()}});
  Qap qap(spec.cs);
  for (auto kind : {pairing::BackendKind::kTransparent, pairing::BackendKind::kCurve}) {
    Rng rng(8);
    auto keys = pinocchio::setup(pairing::backend(kind, f), qap, rng);
    auto w = eval_witness(ast, {{"playerCard", f.element(9)},
                                {"playerCardCommit", mimc_hash({f.element(9)})},
                                {"dealerCard", f.element(4)}});
    auto s = circuit::project(w, spec.kept);
    EXPECT_TRUE(pinocchio::verify(keys.vk, pinocchio::prove_zk(keys.ek, qap, s, rng)));
    for (std::size_t i : {1u, 5u, 100u}) {
      auto bad = s;
      bad.set(i, s[i] + f.one());
      try {
        pinocchio::prove(keys.ek, qap, bad);
        ADD_FAILURE() << i;
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::kNotSatisfying);
      }
    }
  }
}

TEST(Dsl, SourcesMatchBuilders) {
  const auto& f = bn254();
  const std::string dir = ZKIT_REPO_DIR "/circuits/";
  EXPECT_EQ(flatten(parse(read_file(dir + "card_compare.zkc"), f)),
            flatten(card_compare_circuit(f)));
  EXPECT_EQ(flatten(parse(read_file(dir + "card_draw.zkc"), f)), flatten(card_draw_circuit(f)));
  EXPECT_EQ(flatten(parse(read_file(dir + "bid_verifier.zkc"), f)),
            flatten(bid_verifier_circuit(f)));
}

TEST(Dsl, TemplateShapeErrors) {
  const auto& f = p10007();
  for (const char* src : {"signal in a; component c = less_than()(a, a);",
                          "signal in a; component c = less_than(4)(a);",
                          "signal in a; component c = mimc(0)(a);",
                          "signal in a; component c = merkle_inclusion(2)(a, a, a);"}) {
    try {
      parse(src, f);
      FAIL() << src;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kSyntaxError) << src;
    }
  }
}

}  // namespace
}  // namespace zkit::gadgets
