#include <benchmark/benchmark.h>

#include "psl2q/oracle.hpp"

using namespace psl2q;

namespace {

Group group_for(uint64_t q) {
  auto [p, e] = prime_power(q);
  return group_ctx(make_field(p, e));
}

}  // namespace

static void BM_EnumerateGroup(benchmark::State& state) {
  Group g = group_for(state.range(0));
  for (auto _ : state) {
    GroupTable t = enumerate_group(g);
    benchmark::DoNotOptimize(t.elements.size());
  }
  state.SetItemsProcessed(state.iterations() * (int64_t)g.order);
}
BENCHMARK(BM_EnumerateGroup)->Arg(13)->Arg(27)->Arg(49)->Unit(benchmark::kMillisecond);

static void BM_ClassSquareBrute(benchmark::State& state) {
  Group g = group_for(state.range(0));
  GroupTable t = enumerate_group(g);
  ClassId unip = class_id(g, canon(Mat2::upper_unipotent(g.F().one())));
  for (auto _ : state) benchmark::DoNotOptimize(class_square_brute(t, unip));
}
BENCHMARK(BM_ClassSquareBrute)->Arg(13)->Arg(27)->Unit(benchmark::kMillisecond);

static void BM_PairClosure(benchmark::State& state) {
  Group g = group_for(state.range(0));
  ClassId ss;
  for (auto& [id, size] : all_class_ids(g)) {
    (void)size;
    if (id.kind == ElemType::Nonsplit && class_order(g, id) > 2) ss = id;
  }
  auto cert = generating_pair_in_class(g, ss, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(generated_subgroup(g, cert->elements[0], cert->elements[1]).size());
}
BENCHMARK(BM_PairClosure)->Arg(13)->Arg(27)->Unit(benchmark::kMillisecond);

static void BM_VerifyAll(benchmark::State& state) {
  for (auto _ : state) {
    VerifyReport r = verify_all(state.range(0), 1);
    benchmark::DoNotOptimize(r.all_ok());
  }
}
BENCHMARK(BM_VerifyAll)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
