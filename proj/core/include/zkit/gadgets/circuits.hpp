#pragma once

#include "zkit/circuit/ast.hpp"
#include "zkit/gadgets/basic.hpp"
#include "zkit/gadgets/merkle.hpp"
#include "zkit/gadgets/mimc.hpp"

namespace zkit::gadgets {

struct BidVerifierOptions {
  std::size_t depth = 16;
  std::size_t value_bits = 11;
  /// Leaf = H(account, value, salt) instead of H(account, value).
  bool salted = false;
  /// Adds public input auctionId and output bidderTag = H(leaf, auctionId).
  bool tagged = false;
};

/// Membership and solvency proof for a sealed bid.
///   public in:  leaf, root, pathElements[i], pathIndices[i] (, auctionId)
///   private in: account, value, bid (, salt)
///   out:        hashP = H(account, value [, salt]), asserted equal to leaf
///               outValid = value < bid
///               finalBid = bid (, bidderTag)
/// A bid is acceptable when outValid = 0.
circuit::CircuitAst bid_verifier_circuit(const PrimeField& f, const BidVerifierOptions& opt = {});

/// card = ((seed + blockhash) mod 13) + 1.
///   private in: seed; public in: blockhash
///   out: cardCommit = H(card), seedCommit = H(seed)
/// seed + blockhash must be below 2^(quotient_bits + 4).
circuit::CircuitAst card_draw_circuit(const PrimeField& f, std::size_t quotient_bits = 128);

/// private in: playerCard; public in: playerCardCommit, dealerCard
/// out: outCardCommit = H(playerCard) (asserted equal to playerCardCommit),
///      outValid = playerCard < dealerCard
circuit::CircuitAst card_compare_circuit(const PrimeField& f);

/// Hand update by one drawn card; empty slots hold 0.
///   private in: oldHand[i], newHand[i], drawn
///   public in:  oldCommit, newCommit, drawnCommit, rho
/// Constrains H(oldHand) = oldCommit, H(newHand) = newCommit,
/// H(drawn) = drawnCommit and
///   (rho - drawn) prod (rho - oldHand[i]) = rho prod (rho - newHand[i]),
/// i.e. newHand is oldHand with one empty slot replaced by the drawn card,
/// up to order (except with probability about hand_size / p over rho).
circuit::CircuitAst hand_permutation_circuit(const PrimeField& f, std::size_t hand_size);

/// Hand commitment: mimc_hash over the slots.
FieldElement hand_commitment(std::span<const FieldElement> hand);

/// The gadget library as DSL templates. Parameters and arguments:
///   num2bits(n)(x)                       -> out[0..n-1]
///   less_than(n)(a, b)                   -> out
///   modulo(qbits, dbits)(x, d)           -> quotient, remainder
///   dual_mux()(in0, in1, s)              -> out[0], out[1]
///   mimc_sponge(n_in, n_out)(ins..., k)  -> outs[0..n_out-1]
///   mimc(n_in)(ins...)                   -> out
///   merkle_inclusion(depth)(leaf, root, pathElements..., pathIndices...) -> root
const circuit::TemplateRegistry& standard_templates();

}  // namespace zkit::gadgets
