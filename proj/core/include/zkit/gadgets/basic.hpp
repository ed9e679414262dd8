#pragma once

#include <utility>
#include <vector>

#include "zkit/gadgets/mimc.hpp"

namespace zkit::gadgets {

// Every gadget declares its signals relative to the builder's current scope.
// Instantiate each one inside a fresh `b.scope(...)` to keep names unique.

/// Little-endian bit decomposition of x; n + 1 constraints. Witness
/// evaluation raises RangeViolation if x >= 2^n.
std::vector<LC> num2bits(CircuitBuilder& b, const LC& x, std::size_t n);

/// 1 if a < c, else 0, for a, c < 2^n. Both operands are range-checked, so
/// an out-of-range operand is unsatisfiable rather than silently wrapping.
/// Throws IncompatibleField unless 2^(n+1) < p.
LC less_than(CircuitBuilder& b, const LC& a, const LC& c, std::size_t n);

struct DivMod {
  LC quotient;
  LC remainder;
};

/// dividend = quotient * divisor + remainder with quotient < 2^quotient_bits
/// and remainder < divisor < 2^divisor_bits. Throws IncompatibleField unless
/// 2^(quotient_bits + divisor_bits) < p, which rules out wraparound.
DivMod modulo(CircuitBuilder& b, const LC& dividend, const LC& divisor, std::size_t quotient_bits,
              std::size_t divisor_bits);

/// (in0, in1) if s = 0, (in1, in0) if s = 1; s is constrained to a bit.
std::pair<LC, LC> dual_mux(CircuitBuilder& b, const LC& in0, const LC& in1, const LC& s);

}  // namespace zkit::gadgets
