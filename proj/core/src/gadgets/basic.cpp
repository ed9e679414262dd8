#include "zkit/gadgets/basic.hpp"

namespace zkit::gadgets {
namespace {

using circuit::Quadratic;
using circuit::Visibility;

void require_bits(const PrimeField& f, std::size_t bits, const char* what) {
  if (mpz_sizeinbase(f.modulus().get_mpz_t(), 2) <= bits) {
    throw Error(Errc::kIncompatibleField, std::string(what) + " needs 2^" + std::to_string(bits) +
                                              " < p; p = " + f.modulus().get_str());
  }
}

FieldElement pow2(const PrimeField& f, std::size_t k) { return f.element(mpz_class(1) << k); }

}  // namespace

std::vector<LC> num2bits(CircuitBuilder& b, const LC& x, std::size_t n) {
  const PrimeField& f = b.field();
  std::vector<LC> bits;
  LC sum = b.lc(0);
  for (std::size_t i = 0; i < n; ++i) {
    LC bit = b.hinted("b" + std::to_string(i), "bit",
                      {x, b.lc(static_cast<std::int64_t>(i)), b.lc(static_cast<std::int64_t>(n))});
    b.assert_bit(bit);
    sum += bit * pow2(f, i);
    bits.push_back(std::move(bit));
  }
  b.assert_equal(Quadratic(sum), Quadratic(x));
  return bits;
}

LC less_than(CircuitBuilder& b, const LC& a, const LC& c, std::size_t n) {
  require_bits(b.field(), n + 1, "less_than");
  {
    auto s = b.scope("a");
    num2bits(b, a, n);
  }
  {
    auto s = b.scope("b");
    num2bits(b, c, n);
  }
  auto s = b.scope("diff");
  auto bits = num2bits(b, a + pow2(b.field(), n) - c, n + 1);
  return b.lc(1) - bits[n];
}

DivMod modulo(CircuitBuilder& b, const LC& dividend, const LC& divisor, std::size_t quotient_bits,
              std::size_t divisor_bits) {
  require_bits(b.field(), quotient_bits + divisor_bits, "modulo");
  LC q = b.hinted("quotient", "idiv", {dividend, divisor});
  LC r = b.hinted("remainder", "imod", {dividend, divisor});
  {
    auto s = b.scope("q");
    num2bits(b, q, quotient_bits);
  }
  LC lt = [&] {
    auto s = b.scope("lt");
    return less_than(b, r, divisor, divisor_bits);
  }();
  b.assert_equal(Quadratic(lt), Quadratic(b.lc(1)));
  b.assert_equal(Quadratic(q, divisor, r), Quadratic(dividend));
  return {q, r};
}

std::pair<LC, LC> dual_mux(CircuitBuilder& b, const LC& in0, const LC& in1, const LC& s) {
  b.assert_bit(s);
  std::size_t out0 = b.declare("out0", Visibility::kInternal);
  std::size_t out1 = b.declare("out1", Visibility::kInternal);
  b.assign(out0, Quadratic(in1 - in0, s, in0));
  b.assign(out1, Quadratic(in0 - in1, s, in1));
  return {b.signal(out0), b.signal(out1)};
}

}  // namespace zkit::gadgets
