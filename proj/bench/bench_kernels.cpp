// Serial reference vs OpenMP kernels on a Burgers snapshot set.
//   ./bench_kernels --benchmark_filter=Gram

#include <benchmark/benchmark.h>

#include "cerom/fe1d.hpp"
#include "cerom/kernels.hpp"
#include "cerom/pod.hpp"

namespace {

struct Fixture {
  cerom::Mesh1D mesh;
  cerom::SnapshotSet set;
  cerom::PodBasis basis;
};

const Fixture &fixture() {
  static const Fixture f = [] {
    Fixture out;
    out.mesh = cerom::build_mesh(2048);
    cerom::DnsOptions opts;
    opts.nu = 0.1;
    opts.t_end = 0.4;
    out.set = cerom::dns_solve(out.mesh, opts,
                               cerom::initial_condition(cerom::InitialCondition::step, opts.nu, out.mesh));
    cerom::PodOptions pod;
    pod.pinned_d = 16;
    out.basis = cerom::compute_pod(out.set, pod);
    return out;
  }();
  return f;
}

void BM_GramSerial(benchmark::State &state) {
  const auto &f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(cerom::serial::snapshot_gram(f.set.Y, f.set.mass));
}

void BM_GramParallel(benchmark::State &state) {
  const auto &f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(cerom::parallel::snapshot_gram(f.set.Y, f.set.mass));
}

void BM_LoadsSerial(benchmark::State &state) {
  const auto &f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(cerom::serial::convection_loads(f.mesh, f.set.Y));
}

void BM_LoadsParallel(benchmark::State &state) {
  const auto &f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(cerom::parallel::convection_loads(f.mesh, f.set.Y));
}

void BM_TrilinearSerial(benchmark::State &state) {
  const auto &f = fixture();
  const auto r = static_cast<Eigen::Index>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(cerom::serial::trilinear_tensor(f.mesh, f.basis.Phi, r));
}

void BM_TrilinearParallel(benchmark::State &state) {
  const auto &f = fixture();
  const auto r = static_cast<Eigen::Index>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(cerom::parallel::trilinear_tensor(f.mesh, f.basis.Phi, r));
}

} // namespace

BENCHMARK(BM_GramSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LoadsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LoadsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrilinearSerial)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrilinearParallel)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
