#include "riskgroups/chain.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include <omp.h>

#include "riskgroups/error.hpp"

namespace riskgroups {
namespace {

struct AssignmentHash {
  std::size_t operator()(const std::vector<GroupLabel>& a) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto g : a) {
      h ^= g;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

class EnergyMemo {
 public:
  explicit EnergyMemo(std::size_t capacity) : capacity_(capacity) {}

  double get(const Partition& p, const EnergyFunction& energy) {
    if (capacity_ == 0) return energy(p);
    std::vector<GroupLabel> key(p.assignment().begin(), p.assignment().end());
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    const double e = energy(p);
    if (table_.size() >= capacity_) table_.clear();
    table_.emplace(std::move(key), e);
    return e;
  }

 private:
  std::size_t capacity_;
  std::unordered_map<std::vector<GroupLabel>, double, AssignmentHash> table_;
};

}  // namespace

double TemperatureSchedule::at(std::size_t iteration) const {
  if (decay == 1.0) return initial;
  return std::max(floor, initial * std::pow(decay, static_cast<double>(iteration)));
}

void TemperatureSchedule::validate() const {
  if (!(initial > 0.0) || !std::isfinite(initial)) throw UsageError("temperature must be positive and finite");
  if (!(decay > 0.0 && decay <= 1.0)) throw UsageError("temperature decay must lie in (0, 1]");
  if (!(floor >= 0.0) || !std::isfinite(floor)) throw UsageError("temperature floor must be nonnegative");
  if (decay < 1.0 && !(floor > 0.0)) throw UsageError("a decaying schedule needs a positive floor");
}

void ChainConfig::validate(std::size_t n_codes) const {
  if (iterations < 1) throw UsageError("chain needs at least one iteration");
  temperature.validate();
  proposal.validate(n_codes);
  if (initial) {
    if (initial->k() != proposal.k)
      throw UsageError("initial partition has k=" + std::to_string(initial->k()) + " but the proposal uses k=" +
                       std::to_string(proposal.k));
    if (initial->size() != n_codes) throw UsageError("initial partition does not cover the vocabulary");
  }
}

double ChainTrace::acceptance_rate() const {
  return records.empty() ? 0.0 : static_cast<double>(accepted) / static_cast<double>(records.size());
}

std::vector<double> ChainTrace::state_energies() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.accepted ? *r.e_prop : r.e_cur);
  return out;
}

double acceptance_ratio(double current_energy, double proposed_energy, double temperature) {
  if (!(temperature > 0.0) || std::isnan(temperature)) throw UsageError("temperature must be positive");
  if (!std::isfinite(current_energy) || !std::isfinite(proposed_energy))
    throw ChainError("nonfinite energy in acceptance ratio");
  const double delta = current_energy - proposed_energy;
  if (delta >= 0.0) return 1.0;
  return std::exp(delta / temperature);
}

ChainResult run_chain(const EnergyFunction& energy, const VocabularyPtr& vocabulary, const ChainConfig& cfg,
                      const StepCallback& on_step) {
  if (!vocabulary) throw UsageError("chain needs a vocabulary");
  cfg.validate(vocabulary->size());
  const auto start = std::chrono::steady_clock::now();

  Rng rng(cfg.seed);
  Partition current = cfg.initial ? *cfg.initial : random_partition(vocabulary, cfg.proposal.k, rng);
  const DistanceDistribution jdist(cfg.proposal.lambda, cfg.proposal.distance_cap(vocabulary->size()));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EnergyMemo memo(cfg.cache_capacity);

  double current_energy = memo.get(current, energy);
  if (!std::isfinite(current_energy)) throw ChainError("initial partition has a nonfinite energy");

  ChainTrace trace;
  trace.initial_energy = current_energy;
  trace.records.reserve(cfg.iterations);
  Partition best = current;
  double best_energy = current_energy;

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    TraceRecord rec;
    rec.iter = it;
    rec.e_cur = current_energy;
    std::optional<Partition> proposal;
    try {
      auto drawn = sample_neighbor(current, cfg.proposal, jdist, rng);
      rec.j = drawn.distance;
      const double e = memo.get(drawn.partition, energy);
      if (!std::isfinite(e)) throw ChainError("nonfinite energy");
      rec.e_prop = e;
      rec.alpha = acceptance_ratio(current_energy, e, cfg.temperature.at(it));
      proposal = std::move(drawn.partition);
    } catch (const std::exception& ex) {
      trace.failures.push_back("iteration " + std::to_string(it) + ": " + ex.what());
      rec.e_prop.reset();
      rec.alpha = 0.0;
    }
    const double u = unit(rng);
    if (proposal && rec.e_prop) {
      if (*rec.e_prop < best_energy) {
        best_energy = *rec.e_prop;
        best = *proposal;
      }
      if (u < rec.alpha) {
        rec.accepted = true;
        current = std::move(*proposal);
        current_energy = *rec.e_prop;
        ++trace.accepted;
      }
    }
    rec.e_best = best_energy;
    trace.records.push_back(rec);
    if (on_step) on_step(trace.records.back(), current);
  }

  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return ChainResult{std::move(best), best_energy, std::move(current), std::move(trace)};
}

ChainResult run_chain(const EnergyModel& model, const ChainConfig& cfg, const StepCallback& on_step) {
  return run_chain([&model](const Partition& p) { return model(p); }, model.vocabulary(), cfg, on_step);
}

EnergyStats summarize(const std::vector<double>& values) {
  EnergyStats s;
  s.count = values.size();
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

MultistartResult run_multistart(const EnergyModel& model, const ChainConfig& cfg, std::size_t chains, int threads,
                                const std::function<StepCallback(std::size_t)>& make_callback) {
  if (chains < 1) throw UsageError("multistart needs at least one chain");
  cfg.validate(model.vocabulary()->size());
  MultistartResult out;
  out.chains.resize(chains);
  const auto n = static_cast<std::ptrdiff_t>(chains);
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& slot = out.chains[static_cast<std::size_t>(i)];
    ChainConfig chain_cfg = cfg;
    chain_cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
    slot.seed = chain_cfg.seed;
    try {
      StepCallback cb = make_callback ? make_callback(static_cast<std::size_t>(i)) : StepCallback{};
      slot.result = run_chain(model, chain_cfg, cb);
      slot.stats = summarize(slot.result->trace.state_energies());
    } catch (const std::exception& ex) {
      slot.error = ex.what();
    }
  }

  std::vector<double> pooled;
  for (std::size_t i = 0; i < chains; ++i) {
    const auto& slot = out.chains[i];
    if (!slot.result) continue;
    if (!out.winner || slot.result->best_energy < out.chains[*out.winner].result->best_energy) out.winner = i;
    const auto energies = slot.result->trace.state_energies();
    pooled.insert(pooled.end(), energies.begin(), energies.end());
  }
  out.pooled = summarize(pooled);
  return out;
}

}  // namespace riskgroups
