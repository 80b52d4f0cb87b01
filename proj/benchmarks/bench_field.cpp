#include <benchmark/benchmark.h>

#include <random>

#include "psl2q/field.hpp"

using namespace psl2q;

namespace {

const Field& field_for(int64_t kind) {
  switch (kind) {
    case 0: return make_field(251, 1);
    case 1: return make_field(3, 7);     // 2187
    default: return make_field(2, 16);   // 65536
  }
}

}  // namespace

static void BM_FieldMul(benchmark::State& state) {
  const Field& F = field_for(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<FieldElem> xs;
  for (int i = 0; i < 1024; ++i) xs.push_back(F.from_code(rng() % F.q()));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xs[i & 1023] * xs[(i + 1) & 1023]);
    ++i;
  }
}
BENCHMARK(BM_FieldMul)->Arg(0)->Arg(1)->Arg(2);

static void BM_FieldInv(benchmark::State& state) {
  const Field& F = field_for(state.range(0));
  std::mt19937_64 rng(2);
  std::vector<FieldElem> xs;
  while (xs.size() < 1024) {
    uint64_t c = rng() % F.q();
    if (c) xs.push_back(F.from_code(c));
  }
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(F.inv(xs[i & 1023]));
    ++i;
  }
}
BENCHMARK(BM_FieldInv)->Arg(0)->Arg(1)->Arg(2);

static void BM_Sqrt(benchmark::State& state) {
  const Field& F = field_for(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<FieldElem> xs;
  for (int i = 0; i < 1024; ++i) {
    FieldElem a = F.from_code(rng() % F.q());
    xs.push_back(a * a);
  }
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(F.sqrt(xs[i & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Sqrt)->Arg(0)->Arg(1)->Arg(2);

static void BM_SolveMonicQuadratic(benchmark::State& state) {
  const Field& F = field_for(state.range(0));
  std::mt19937_64 rng(4);
  std::vector<std::pair<FieldElem, FieldElem>> in;
  for (int i = 0; i < 1024; ++i)
    in.push_back({F.from_code(rng() % F.q()), F.from_code(rng() % F.q())});
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(F.solve_monic_quadratic(in[i & 1023].first, in[i & 1023].second));
    ++i;
  }
}
BENCHMARK(BM_SolveMonicQuadratic)->Arg(0)->Arg(1)->Arg(2);
