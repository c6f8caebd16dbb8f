// Serial reference kernels against the OpenMP versions, plus one full energy
// evaluation on the reference dataset.

#include <random>

#include <benchmark/benchmark.h>

#include "riskgroups/energy.hpp"
#include "riskgroups/kernels.hpp"
#include "riskgroups/proposal.hpp"
#include "riskgroups/synthetic.hpp"

using namespace riskgroups;
namespace kn = riskgroups::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

kn::CodeLists random_lists(std::size_t rows, std::size_t codes) {
  std::mt19937_64 rng(1);
  kn::CodeLists lists;
  std::vector<CodeIndex> row;
  for (std::size_t r = 0; r < rows; ++r) {
    row.clear();
    for (CodeIndex c = 0; c < codes; ++c)
      if (rng() % 20 == 0) row.push_back(c);
    lists.push_row(row);
  }
  return lists;
}

template <bool Parallel>
void BM_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(n, 1), b = random_vector(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kn::parallel::dot(a, b) : kn::serial::dot(a, b));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * 2 * sizeof(double)));
}

template <bool Parallel>
void BM_multiply_transpose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = 16;
  const auto q = random_vector(n * cols, 3), v = random_vector(n, 4);
  std::vector<double> out(cols);
  for (auto _ : state) {
    if (Parallel)
      kn::parallel::multiply_transpose({q.data(), n, cols}, v, out);
    else
      kn::serial::multiply_transpose({q.data(), n, cols}, v, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_group_dummies(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t codes = 100, k = 10;
  const auto lists = random_lists(n, codes);
  std::vector<GroupLabel> assign(codes);
  for (std::size_t c = 0; c < codes; ++c) assign[c] = static_cast<GroupLabel>(c % k);
  std::vector<double> out(n * k);
  for (auto _ : state) {
    if (Parallel)
      kn::parallel::fill_group_dummies(lists, assign, {out.data(), n, k});
    else
      kn::serial::fill_group_dummies(lists, assign, {out.data(), n, k});
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_sum_abs_diff(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(n, 5), b = random_vector(n, 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? kn::parallel::sum_abs_diff(a, b) : kn::serial::sum_abs_diff(a, b));
}

void BM_energy_reference(benchmark::State& state) {
  const auto s = generate_synthetic(reference_generator_config());
  const auto data = make_split(s.data, SplitPlan::holdout(0.8, 7));
  const EnergyModel model(data, ModelSpec::demographics());
  Rng rng(1);
  const auto p = random_partition(s.data.vocabulary, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(model(p));
}

}  // namespace

BENCHMARK(BM_dot<false>)->Name("dot/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_dot<true>)->Name("dot/parallel")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_multiply_transpose<false>)->Name("multiply_transpose/serial")->Range(1 << 12, 1 << 18);
BENCHMARK(BM_multiply_transpose<true>)->Name("multiply_transpose/parallel")->Range(1 << 12, 1 << 18);
BENCHMARK(BM_group_dummies<false>)->Name("group_dummies/serial")->Range(1 << 12, 1 << 18);
BENCHMARK(BM_group_dummies<true>)->Name("group_dummies/parallel")->Range(1 << 12, 1 << 18);
BENCHMARK(BM_sum_abs_diff<false>)->Name("sum_abs_diff/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_sum_abs_diff<true>)->Name("sum_abs_diff/parallel")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_energy_reference)->Name("energy/reference_dataset")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
