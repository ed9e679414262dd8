#pragma once

#include <span>
#include <utility>
#include <vector>

#include "zkit/circuit/ast.hpp"

namespace zkit::gadgets {

using circuit::CircuitBuilder;
using LC = circuit::LinearCombination;

inline constexpr std::size_t kMimcRounds = 220;

/// Round constants c_0..c_219 of the MiMC Feistel permutation over `f`.
/// c_0 = c_219 = 0; c_1..c_218 are successive left halves of iterating the
/// constant-free permutation on (s, 0), where s is the ASCII string
/// "zkit.mimc.feistel" read as a big-endian integer. Throws IncompatibleField
/// unless gcd(5, p - 1) = 1 (x^5 must be a permutation).
const std::vector<FieldElement>& mimc_constants(const PrimeField& f);

/// One Feistel permutation: each round maps (xL, xR) to
/// (xR + (xL + k + c_i)^5, xL), except the last, which keeps xL in place.
std::pair<FieldElement, FieldElement> mimc_feistel(const FieldElement& xl, const FieldElement& xr,
                                                   const FieldElement& k);

/// Sponge over the Feistel permutation: absorb inputs into the left half one
/// at a time, squeeze `n_outputs` left halves.
std::vector<FieldElement> mimc_sponge(std::span<const FieldElement> ins, const FieldElement& k,
                                      std::size_t n_outputs);

/// mimc_sponge(ins, 0, 1)[0].
FieldElement mimc_hash(std::span<const FieldElement> ins);
FieldElement mimc_hash(std::initializer_list<FieldElement> ins);

/// In-circuit sponge; 3 constraints per round. Declares its signals under
/// the builder's current scope ("p0.r17.t2", ...).
std::vector<LC> mimc_sponge(CircuitBuilder& b, std::span<const LC> ins, const LC& k,
                            std::size_t n_outputs);
LC mimc_hash(CircuitBuilder& b, std::span<const LC> ins);

}  // namespace zkit::gadgets
