#include <benchmark/benchmark.h>

#include "wreathlab/chabauty.hpp"
#include "wreathlab/stability.hpp"
#include "wreathlab/weiss.hpp"

namespace {

using namespace wreathlab;

WreathGroup lamplighter() {
  FgAbelianGroup q(1, {}, {"t"});
  FgAbelianGroup b(0, {2});
  QSet x(q, {AbelianSubgroup::trivial(q)});
  return WreathGroup(q, b, x);
}

GoursatTriplet flagship_subgroup(const WreathGroup& g) {
  return GoursatTriplet::make(g, AbelianSubgroup::trivial(g.qgroup()),
                              Submodule::laurent(g.module(), PolyFp{2, {1, 1}}), {});
}

void bm_hermite(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(42);
  lat::Mat cols;
  for (std::size_t j = 0; j < n; ++j) {
    lat::Vec c(n);
    for (auto& x : c) x = rng.range(-50, 50);
    cols.push_back(std::move(c));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(lat::hermite(cols, n));
  }
}
BENCHMARK(bm_hermite)->Arg(4)->Arg(8)->Arg(16);

void bm_hamming(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  std::vector<std::uint32_t> im(n);
  for (std::size_t i = 0; i < n; ++i) im[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(im[i - 1], im[rng.below(i)]);
  Permutation a(im);
  Permutation b = a.inverse();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamming(a, b));
  }
}
BENCHMARK(bm_hamming)->Arg(64)->Arg(4096);

void bm_triplet_conjugate(benchmark::State& state) {
  WreathGroup g = lamplighter();
  Scheme scheme = build_scheme(g, flagship_subgroup(g));
  StageData st = stage(scheme, static_cast<unsigned>(state.range(0)));
  Rng rng(3);
  GroupElement f = st.f_i.sample(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(triplet_conjugate(st.k_i, f));
  }
}
BENCHMARK(bm_triplet_conjugate)->Arg(4)->Arg(8);

void bm_p_statistic_exact(benchmark::State& state) {
  WreathGroup g = lamplighter();
  Scheme scheme = build_scheme(g, flagship_subgroup(g));
  StageData st = stage(scheme, static_cast<unsigned>(state.range(0)));
  auto f_elems = st.f_i.elements();
  GroupElement word = g.embed(g.module().delta(XPoint{0, AbelianElement{{0}}},
                                               g.base().element({1})));
  for (auto _ : state) {
    benchmark::DoNotOptimize(p_statistic_exact(word, st.k_i, scheme.h, f_elems));
  }
}
BENCHMARK(bm_p_statistic_exact)->Arg(6)->Arg(10);

void bm_structured_folner(benchmark::State& state) {
  WreathGroup g = lamplighter();
  Scheme scheme = build_scheme(g, flagship_subgroup(g));
  StageData st = stage(scheme, static_cast<unsigned>(state.range(0)));
  GroupElement word = g.make(g.qgroup().element({1}),
                             g.module().delta(XPoint{0, AbelianElement{{0}}},
                                              g.base().element({1})));
  for (auto _ : state) {
    benchmark::DoNotOptimize(folner_defect(st.f_i, word));
  }
}
BENCHMARK(bm_structured_folner)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
