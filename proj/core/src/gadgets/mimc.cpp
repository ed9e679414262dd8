#include "zkit/gadgets/mimc.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace zkit::gadgets {
namespace {

using circuit::Quadratic;

constexpr std::string_view kConstantSeed = "zkit.mimc.feistel";

FieldElement pow5(const FieldElement& x) {
  FieldElement x2 = x * x;
  return x2 * x2 * x;
}

std::vector<FieldElement> derive_constants(const PrimeField& f) {
  mpz_class seed;
  mpz_import(seed.get_mpz_t(), kConstantSeed.size(), 1, 1, 0, 0, kConstantSeed.data());
  std::vector<FieldElement> c(kMimcRounds, f.zero());
  FieldElement xl = f.element(seed), xr = f.zero();
  for (std::size_t r = 1; r + 1 < kMimcRounds; ++r) {
    for (std::size_t i = 0; i < kMimcRounds; ++i) {
      FieldElement t = pow5(xl);
      if (i + 1 < kMimcRounds) {
        FieldElement next = xr + t;
        xr = xl;
        xl = next;
      } else {
        xr += t;
      }
    }
    c[r] = xl;
  }
  return c;
}

}  // namespace

const std::vector<FieldElement>& mimc_constants(const PrimeField& f) {
  static std::mutex mu;
  static std::map<const PrimeField*, std::unique_ptr<std::vector<FieldElement>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[&f];
  if (!slot) {
    mpz_class g;
    mpz_class pm1 = f.modulus() - 1;
    mpz_gcd_ui(g.get_mpz_t(), pm1.get_mpz_t(), 5);
    if (g != 1) {
      throw Error(Errc::kIncompatibleField,
                  "MiMC needs gcd(5, p - 1) = 1; p = " + f.modulus().get_str());
    }
    slot = std::make_unique<std::vector<FieldElement>>(derive_constants(f));
  }
  return *slot;
}

std::pair<FieldElement, FieldElement> mimc_feistel(const FieldElement& xl_in,
                                                   const FieldElement& xr_in,
                                                   const FieldElement& k) {
  const auto& c = mimc_constants(xl_in.field());
  FieldElement xl = xl_in, xr = xr_in;
  for (std::size_t i = 0; i < kMimcRounds; ++i) {
    FieldElement t = pow5(xl + k + c[i]);
    if (i + 1 < kMimcRounds) {
      FieldElement next = xr + t;
      xr = xl;
      xl = next;
    } else {
      xr += t;
    }
  }
  return {xl, xr};
}

std::vector<FieldElement> mimc_sponge(std::span<const FieldElement> ins, const FieldElement& k,
                                      std::size_t n_outputs) {
  if (ins.empty() || n_outputs == 0) {
    throw Error(Errc::kDimensionMismatch, "mimc_sponge needs at least one input and one output");
  }
  const PrimeField& f = k.field();
  FieldElement xl = f.zero(), xr = f.zero();
  for (const auto& in : ins) std::tie(xl, xr) = mimc_feistel(xl + in, xr, k);
  std::vector<FieldElement> outs{xl};
  while (outs.size() < n_outputs) {
    std::tie(xl, xr) = mimc_feistel(xl, xr, k);
    outs.push_back(xl);
  }
  return outs;
}

FieldElement mimc_hash(std::span<const FieldElement> ins) {
  if (ins.empty()) throw Error(Errc::kDimensionMismatch, "mimc_hash needs an input");
  return mimc_sponge(ins, ins.front().field().zero(), 1).front();
}

FieldElement mimc_hash(std::initializer_list<FieldElement> ins) {
  return mimc_hash(std::span<const FieldElement>(ins.begin(), ins.size()));
}

namespace {

std::pair<LC, LC> feistel_gadget(CircuitBuilder& b, LC xl, LC xr, const LC& k) {
  const auto& c = mimc_constants(b.field());
  for (std::size_t i = 0; i < kMimcRounds; ++i) {
    auto round = b.scope("r" + std::to_string(i));
    LC t = xl + k + c[i];
    LC t2 = b.mul("t2", t, t);
    LC t4 = b.mul("t4", t2, t2);
    if (i + 1 < kMimcRounds) {
      std::size_t out = b.declare("xL", circuit::Visibility::kInternal);
      b.assign(out, Quadratic(t4, t, xr));
      xr = xl;
      xl = b.signal(out);
    } else {
      std::size_t out = b.declare("xR", circuit::Visibility::kInternal);
      b.assign(out, Quadratic(t4, t, xr));
      xr = b.signal(out);
    }
  }
  return {xl, xr};
}

}  // namespace

std::vector<LC> mimc_sponge(CircuitBuilder& b, std::span<const LC> ins, const LC& k,
                            std::size_t n_outputs) {
  if (ins.empty() || n_outputs == 0) {
    throw Error(Errc::kDimensionMismatch, "mimc_sponge needs at least one input and one output");
  }
  LC xl = b.lc(0), xr = b.lc(0);
  std::size_t perm = 0;
  for (const auto& in : ins) {
    auto s = b.scope("p" + std::to_string(perm++));
    std::tie(xl, xr) = feistel_gadget(b, xl + in, xr, k);
  }
  std::vector<LC> outs{xl};
  while (outs.size() < n_outputs) {
    auto s = b.scope("p" + std::to_string(perm++));
    std::tie(xl, xr) = feistel_gadget(b, xl, xr, k);
    outs.push_back(xl);
  }
  return outs;
}

LC mimc_hash(CircuitBuilder& b, std::span<const LC> ins) {
  return mimc_sponge(b, ins, b.lc(0), 1).front();
}

}  // namespace zkit::gadgets
