// The distribution's prebuilt benchmark_main archive is LTO bytecode tied to
// another compiler release, so the entry point is compiled here.
#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
