#include <benchmark/benchmark.h>

#include "rlstream/generate.hpp"
#include "rlstream/materialize.hpp"
#include "rlstream/window_engine.hpp"

using namespace rlstream;

namespace {

struct Fixture {
  TBox tbox = gen::bench_tbox();
  Stream stream;
  std::shared_ptr<const RuleSet> rules = std::make_shared<const RuleSet>(tbox);

  explicit Fixture(int ticks) {
    gen::Rng rng(42);
    stream = gen::bench_stream(rng, ticks, 20);
  }
};

const Fixture& fixture() {
  static const Fixture f(200);
  return f;
}

void BM_MaterializeSerial(benchmark::State& state) {
  const auto& f = fixture();
  std::span<const MomentaryABox> batch(f.stream.data(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(materialize_batch_serial(batch, f.tbox));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MaterializeParallel(benchmark::State& state) {
  const auto& f = fixture();
  std::span<const MomentaryABox> batch(f.stream.data(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(materialize_batch(batch, f.tbox));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Width 20 ticks; the argument is the slide length.
std::vector<WindowExtent> extents_for(int slide) {
  return window_extents({Timestamp::from_integer(20), Timestamp::from_integer(slide), Timestamp::from_integer(21)},
                        fixture().stream.back().timestamp);
}

void BM_SlideIncremental(benchmark::State& state) {
  const auto& f = fixture();
  auto extents = extents_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    WindowModel wm(extents.front(), f.rules);
    for (const auto& e : extents) slide(wm, f.stream, e);
    benchmark::DoNotOptimize(wm.occurrences().size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(extents.size()));
}

void BM_SlideScratch(benchmark::State& state) {
  const auto& f = fixture();
  auto extents = extents_for(static_cast<int>(state.range(0)));
  for (auto _ : state)
    for (const auto& e : extents) benchmark::DoNotOptimize(build_window_model(f.stream, e, f.rules).occurrences().size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(extents.size()));
}

}  // namespace

BENCHMARK(BM_MaterializeSerial)->Arg(20)->Arg(200)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MaterializeParallel)->Arg(20)->Arg(200)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SlideIncremental)->Arg(2)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlideScratch)->Arg(2)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
