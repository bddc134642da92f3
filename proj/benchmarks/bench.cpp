#include <benchmark/benchmark.h>

#include <random>

#include "lm/equivalence.hpp"
#include "lm/gen.hpp"
#include "lm/proofnets.hpp"
#include "lm/reduction.hpp"
#include "lm/typing.hpp"

using namespace lm;

namespace {

std::vector<Object> sample(std::size_t maxSize, bool typable, std::size_t n) {
  std::mt19937_64 rng(1);
  GenConfig cfg;
  cfg.maxSize = maxSize;
  cfg.requireTypable = typable;
  std::vector<Object> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen_object(cfg, i % 2 ? Sort::Command : Sort::Term, rng));
  return out;
}

void BM_PlainNormalForm(benchmark::State& st) {
  auto objs = sample(static_cast<std::size_t>(st.range(0)), false, 64);
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(plain_normal_form(objs[i++ % objs.size()]));
}
BENCHMARK(BM_PlainNormalForm)->Arg(10)->Arg(20)->Arg(40);

void BM_Infer(benchmark::State& st) {
  auto objs = sample(static_cast<std::size_t>(st.range(0)), true, 64);
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(infer(objs[i++ % objs.size()]));
}
BENCHMARK(BM_Infer)->Arg(10)->Arg(20);

void BM_SigmaEquiv(benchmark::State& st) {
  std::mt19937_64 rng(2);
  GenConfig cfg;
  cfg.maxSize = static_cast<std::size_t>(st.range(0));
  std::vector<EquivPair> pairs;
  for (int i = 0; i < 16; ++i) pairs.push_back(gen_equiv_pair(cfg, 2, rng));
  std::size_t i = 0;
  for (auto _ : st) {
    auto& p = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(sigma_equiv(p.o, p.p));
  }
}
BENCHMARK(BM_SigmaEquiv)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_TranslateNormalNet(benchmark::State& st) {
  auto objs = sample(static_cast<std::size_t>(st.range(0)), true, 32);
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(canonical_mnf(translate_object(objs[i++ % objs.size()])));
}
BENCHMARK(BM_TranslateNormalNet)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_Generate(benchmark::State& st) {
  std::mt19937_64 rng(3);
  GenConfig cfg;
  cfg.maxSize = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(gen_object(cfg, Sort::Term, rng));
}
BENCHMARK(BM_Generate)->Arg(12)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
