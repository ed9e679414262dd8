#include <benchmark/benchmark.h>

#include "zkit/circuit/r1cs.hpp"
#include "zkit/gadgets/circuits.hpp"
#include "zkit/gadgets/merkle.hpp"
#include "zkit/gadgets/mimc.hpp"

namespace zkit {
namespace {

const PrimeField& bn254() { return PrimeField::preset("bn254-scalar"); }

void BM_MimcHash2(benchmark::State& state) {
  FieldElement a = bn254().element(1), b = bn254().element(2);
  for (auto _ : state) {
    a = gadgets::mimc_hash({a, b});
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_MimcHash2);

void BM_MerkleAppend(benchmark::State& state) {
  for (auto _ : state) {
    gadgets::MerkleTree tree(bn254(), 16);
    for (int i = 0; i < 64; ++i) tree.append(bn254().element(i + 1));
    benchmark::DoNotOptimize(tree.root());
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_MerkleAppend)->Unit(benchmark::kMillisecond);

void BM_BidCircuitBuild(benchmark::State& state) {
  gadgets::BidVerifierOptions opt;
  opt.depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto ast = gadgets::bid_verifier_circuit(bn254(), opt);
    benchmark::DoNotOptimize(circuit::flatten(ast));
  }
}
BENCHMARK(BM_BidCircuitBuild)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace zkit
