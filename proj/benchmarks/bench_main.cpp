#include <benchmark/benchmark.h>

// Local main instead of benchmark::benchmark_main: some distributions ship
// libbenchmark_main.a as LTO bytecode tied to one compiler patch level.
BENCHMARK_MAIN();
