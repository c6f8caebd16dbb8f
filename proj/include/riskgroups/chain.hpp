#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riskgroups/energy.hpp"
#include "riskgroups/partition.hpp"
#include "riskgroups/proposal.hpp"

namespace riskgroups {

// T(i) = max(floor, initial * decay^i). decay = 1 is the constant-temperature
// Metropolis-Hastings chain; decay < 1 is geometric annealing.
struct TemperatureSchedule {
  double initial = 1000.0;
  double decay = 1.0;
  double floor = 0.0;

  static TemperatureSchedule constant(double t) { return {t, 1.0, 0.0}; }
  double at(std::size_t iteration) const;
  void validate() const;
};

struct ChainConfig {
  std::size_t iterations = 1000;
  TemperatureSchedule temperature;
  std::uint64_t seed = 0;
  // Seed partition; uniform random assignment when absent.
  std::optional<Partition> initial;
  ProposalConfig proposal;
  // Bounded memo of assignment -> energy; 0 disables it.
  std::size_t cache_capacity = 4096;

  void validate(std::size_t n_codes) const;
};

struct TraceRecord {
  std::size_t iter = 0;
  std::size_t j = 0;
  double e_cur = 0.0;
  // Absent when the proposal or its energy evaluation failed.
  std::optional<double> e_prop;
  double alpha = 0.0;
  bool accepted = false;
  double e_best = 0.0;
};

struct ChainTrace {
  std::vector<TraceRecord> records;
  double initial_energy = 0.0;
  std::size_t accepted = 0;
  // "iteration N: message" for every proposal that was rejected because it failed.
  std::vector<std::string> failures;
  double wall_seconds = 0.0;

  double acceptance_rate() const;
  // Energy of the chain state after every iteration.
  std::vector<double> state_energies() const;
};

struct ChainResult {
  Partition best_partition;
  double best_energy;
  Partition final_partition;
  ChainTrace trace;
};

// min{1, exp((current - proposed) / T)}; the proposal kernel is symmetric so
// the Hastings correction cancels. Throws ChainError on nonfinite energies
// and UsageError on T <= 0.
double acceptance_ratio(double current_energy, double proposed_energy, double temperature);

using EnergyFunction = std::function<double(const Partition&)>;
// Invoked after every iteration with the record and the post-step state.
using StepCallback = std::function<void(const TraceRecord&, const Partition&)>;

ChainResult run_chain(const EnergyFunction& energy, const VocabularyPtr& vocabulary, const ChainConfig& cfg,
                      const StepCallback& on_step = {});
ChainResult run_chain(const EnergyModel& model, const ChainConfig& cfg, const StepCallback& on_step = {});

struct EnergyStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

EnergyStats summarize(const std::vector<double>& values);

struct ChainOutcome {
  std::uint64_t seed = 0;
  std::optional<ChainResult> result;
  std::string error;
  EnergyStats stats;
};

struct MultistartResult {
  std::vector<ChainOutcome> chains;
  std::optional<std::size_t> winner;
  // Pooled over the state energies of every successful chain.
  EnergyStats pooled;
};

// Chain i runs with seed cfg.seed + i. Chains run on up to `threads` workers
// (0 = OpenMP default); results are merged by chain index, so the outcome does
// not depend on scheduling. A failing chain does not stop its siblings.
MultistartResult run_multistart(const EnergyModel& model, const ChainConfig& cfg, std::size_t chains,
                                int threads = 0,
                                const std::function<StepCallback(std::size_t)>& make_callback = {});

}  // namespace riskgroups
