#include "zkit/gadgets/circuits.hpp"

namespace zkit::gadgets {
namespace {

using circuit::CircuitAst;
using circuit::Quadratic;
using circuit::TemplateOutputs;
using circuit::Visibility;

std::string indexed(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

LC declared(CircuitBuilder& b, std::string_view name, Visibility v) {
  return b.signal(b.declare(name, v));
}

LC output(CircuitBuilder& b, std::string_view name, const LC& value) {
  std::size_t index = b.declare(name, Visibility::kOutput);
  b.assign(index, Quadratic(value));
  return b.signal(index);
}

LC hash_in_scope(CircuitBuilder& b, std::string name, std::span<const LC> ins) {
  auto s = b.scope(std::move(name));
  return mimc_hash(b, ins);
}

}  // namespace

CircuitAst bid_verifier_circuit(const PrimeField& f, const BidVerifierOptions& opt) {
  CircuitBuilder b(f);
  LC leaf = declared(b, "leaf", Visibility::kPublicInput);
  LC root = declared(b, "root", Visibility::kPublicInput);
  std::vector<LC> elements, indices;
  for (std::size_t i = 0; i < opt.depth; ++i) {
    elements.push_back(declared(b, indexed("pathElements", i), Visibility::kPublicInput));
  }
  for (std::size_t i = 0; i < opt.depth; ++i) {
    indices.push_back(declared(b, indexed("pathIndices", i), Visibility::kPublicInput));
  }
  LC auction_id = b.lc(0);
  if (opt.tagged) auction_id = declared(b, "auctionId", Visibility::kPublicInput);
  LC account = declared(b, "account", Visibility::kPrivateInput);
  LC value = declared(b, "value", Visibility::kPrivateInput);
  LC bid = declared(b, "bid", Visibility::kPrivateInput);

  std::vector<LC> preimage{account, value};
  if (opt.salted) preimage.push_back(declared(b, "salt", Visibility::kPrivateInput));
  LC hashed = output(b, "hashP", hash_in_scope(b, "leafHash", preimage));
  b.assert_equal(Quadratic(hashed), Quadratic(leaf));

  {
    auto s = b.scope("merkle");
    merkle_inclusion(b, leaf, root, elements, indices);
  }
  LC below = [&] {
    auto s = b.scope("greater");
    return less_than(b, value, bid, opt.value_bits);
  }();
  output(b, "outValid", below);
  output(b, "finalBid", bid);
  if (opt.tagged) {
    LC ins[] = {leaf, auction_id};
    output(b, "bidderTag", hash_in_scope(b, "tag", ins));
  }
  return std::move(b).finish();
}

CircuitAst card_draw_circuit(const PrimeField& f, std::size_t quotient_bits) {
  CircuitBuilder b(f);
  LC seed = declared(b, "seed", Visibility::kPrivateInput);
  LC blockhash = declared(b, "blockhash", Visibility::kPublicInput);
  std::size_t card_index = b.declare("card", Visibility::kInternal);
  DivMod dm = [&] {
    auto s = b.scope("cardCalculator");
    return modulo(b, seed + blockhash, b.lc(13), quotient_bits, 4);
  }();
  b.assign(card_index, Quadratic(dm.remainder + f.one()));
  LC card = b.signal(card_index);
  LC c[] = {card};
  output(b, "cardCommit", hash_in_scope(b, "cardHash", c));
  LC sd[] = {seed};
  output(b, "seedCommit", hash_in_scope(b, "seedHash", sd));
  return std::move(b).finish();
}

CircuitAst card_compare_circuit(const PrimeField& f) {
  CircuitBuilder b(f);
  LC card = declared(b, "playerCard", Visibility::kPrivateInput);
  LC commit = declared(b, "playerCardCommit", Visibility::kPublicInput);
  LC dealer = declared(b, "dealerCard", Visibility::kPublicInput);
  LC c[] = {card};
  LC hashed = output(b, "outCardCommit", hash_in_scope(b, "cardHash", c));
  b.assert_equal(Quadratic(hashed), Quadratic(commit));
  LC below = [&] {
    auto s = b.scope("greater");
    return less_than(b, card, dealer, 11);
  }();
  output(b, "outValid", below);
  return std::move(b).finish();
}

CircuitAst hand_permutation_circuit(const PrimeField& f, std::size_t hand_size) {
  if (hand_size == 0) throw Error(Errc::kDimensionMismatch, "hand size must be positive");
  CircuitBuilder b(f);
  std::vector<LC> old_hand, new_hand;
  for (std::size_t i = 0; i < hand_size; ++i) {
    old_hand.push_back(declared(b, indexed("oldHand", i), Visibility::kPrivateInput));
  }
  for (std::size_t i = 0; i < hand_size; ++i) {
    new_hand.push_back(declared(b, indexed("newHand", i), Visibility::kPrivateInput));
  }
  LC drawn = declared(b, "drawn", Visibility::kPrivateInput);
  LC old_commit = declared(b, "oldCommit", Visibility::kPublicInput);
  LC new_commit = declared(b, "newCommit", Visibility::kPublicInput);
  LC drawn_commit = declared(b, "drawnCommit", Visibility::kPublicInput);
  LC rho = declared(b, "rho", Visibility::kPublicInput);

  b.assert_equal(Quadratic(hash_in_scope(b, "oldHash", old_hand)), Quadratic(old_commit));
  b.assert_equal(Quadratic(hash_in_scope(b, "newHash", new_hand)), Quadratic(new_commit));
  LC d[] = {drawn};
  b.assert_equal(Quadratic(hash_in_scope(b, "drawnHash", d)), Quadratic(drawn_commit));

  LC lhs = rho - drawn;
  LC rhs = rho;
  for (std::size_t i = 0; i < hand_size; ++i) {
    lhs = b.mul(indexed("lhs", i), lhs, rho - old_hand[i]);
    if (i + 1 < hand_size) rhs = b.mul(indexed("rhs", i), rhs, rho - new_hand[i]);
  }
  b.assert_equal(Quadratic(lhs), Quadratic(rhs, rho - new_hand.back(), b.lc(0)));
  return std::move(b).finish();
}

FieldElement hand_commitment(std::span<const FieldElement> hand) { return mimc_hash(hand); }

namespace {

void expect_shape(std::string_view name, std::span<const std::uint64_t> params,
                  std::size_t n_params, std::span<const LC> args, std::size_t n_args,
                  SourceLocation where) {
  if (params.size() != n_params) {
    throw Error(Errc::kSyntaxError,
                std::string(name) + " takes " + std::to_string(n_params) + " parameter(s)", where);
  }
  if (args.size() != n_args) {
    throw Error(Errc::kSyntaxError,
                std::string(name) + " takes " + std::to_string(n_args) + " argument(s)", where);
  }
}

circuit::TemplateRegistry make_registry() {
  circuit::TemplateRegistry r;
  r.add("num2bits", [](CircuitBuilder& b, auto params, auto args, SourceLocation where) {
    expect_shape("num2bits", params, 1, args, 1, where);
    auto bits = num2bits(b, args[0], params[0]);
    TemplateOutputs out;
    for (std::size_t i = 0; i < bits.size(); ++i) out.emplace_back(indexed("out", i), bits[i]);
    return out;
  });
  r.add("less_than", [](CircuitBuilder& b, auto params, auto args, SourceLocation where) {
    expect_shape("less_than", params, 1, args, 2, where);
    return TemplateOutputs{{"out", less_than(b, args[0], args[1], params[0])}};
  });
  r.add("modulo", [](CircuitBuilder& b, auto params, auto args, SourceLocation where) {
    expect_shape("modulo", params, 2, args, 2, where);
    auto dm = modulo(b, args[0], args[1], params[0], params[1]);
    return TemplateOutputs{{"quotient", dm.quotient}, {"remainder", dm.remainder}};
  });
  r.add("dual_mux", [](CircuitBuilder& b, auto params, auto args, SourceLocation where) {
    expect_shape("dual_mux", params, 0, args, 3, where);
    auto [o0, o1] = dual_mux(b, args[0], args[1], args[2]);
    return TemplateOutputs{{"out[0]", o0}, {"out[1]", o1}};
  });
  r.add("mimc_sponge", [](CircuitBuilder& b, auto params, auto args, SourceLocation where) {
    if (params.size() != 2 || params[0] == 0 || params[1] == 0) {
      throw Error(Errc::kSyntaxError, "mimc_sponge takes (n_inputs, n_outputs), both positive",
                  where);
    }
    expect_shape("mimc_sponge", params, 2, args, params[0] + 1, where);
    auto outs = mimc_sponge(b, args.first(params[0]), args.back(), params[1]);
    TemplateOutputs out;
    for (std::size_t i = 0; i < outs.size(); ++i) out.emplace_back(indexed("outs", i), outs[i]);
    return out;
  });
  r.add("mimc", [](CircuitBuilder& b, auto params, auto args, SourceLocation where) {
    if (params.size() != 1 || params[0] == 0) {
      throw Error(Errc::kSyntaxError, "mimc takes one positive parameter", where);
    }
    expect_shape("mimc", params, 1, args, params[0], where);
    return TemplateOutputs{{"out", mimc_hash(b, args)}};
  });
  r.add("merkle_inclusion", [](CircuitBuilder& b, auto params, auto args, SourceLocation where) {
    if (params.size() != 1 || params[0] == 0) {
      throw Error(Errc::kSyntaxError, "merkle_inclusion takes one positive parameter", where);
    }
    std::size_t d = params[0];
    expect_shape("merkle_inclusion", params, 1, args, 2 + 2 * d, where);
    LC root = merkle_inclusion(b, args[0], args[1], args.subspan(2, d), args.subspan(2 + d, d));
    return TemplateOutputs{{"root", root}};
  });
  return r;
}

}  // namespace

const circuit::TemplateRegistry& standard_templates() {
  static const circuit::TemplateRegistry registry = make_registry();
  return registry;
}

}  // namespace zkit::gadgets
