#include "riskgroups/proposal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "riskgroups/counting.hpp"
#include "riskgroups/error.hpp"

namespace riskgroups {

void ProposalConfig::validate(std::size_t n) const {
  if (k < 2) throw UsageError("proposal k must be at least 2, got " + std::to_string(k));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw UsageError("proposal lambda must be a positive finite number");
  if (max_distance && (*max_distance < 1 || *max_distance > n))
    throw UsageError("max_distance must lie in [1, " + std::to_string(n) + "], got " +
                     std::to_string(*max_distance));
  if (max_empty_retries < 1) throw UsageError("max_empty_retries must be positive");
  if (forbid_empty && n < static_cast<std::size_t>(k))
    throw UsageError("forbid_empty needs at least k codes");
}

std::size_t ProposalConfig::distance_cap(std::size_t n) const { return max_distance ? std::min(*max_distance, n) : n; }

DistanceDistribution::DistanceDistribution(double lambda, std::size_t cap) : cap_(cap) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("Poisson mean must be positive and finite");
  std::vector<double> raw(cap + 1);
  const double log_lambda = std::log(lambda);
  for (std::size_t j = 0; j <= cap; ++j)
    raw[j] = static_cast<double>(j) * log_lambda - lambda - std::lgamma(static_cast<double>(j) + 1.0);
  const double peak = *std::max_element(raw.begin(), raw.end());
  double total = 0.0;
  for (double r : raw) total += std::exp(r - peak);
  const double log_norm = peak + std::log(total);
  log_pmf_.resize(cap + 1);
  pmf_.resize(cap + 1);
  cdf_.resize(cap + 1);
  double running = 0.0;
  for (std::size_t j = 0; j <= cap; ++j) {
    log_pmf_[j] = raw[j] - log_norm;
    pmf_[j] = std::exp(log_pmf_[j]);
    running += pmf_[j];
    cdf_[j] = running;
  }
  cdf_.back() = 1.0;
}

double DistanceDistribution::log_pmf(std::size_t j) const {
  return j <= cap_ ? log_pmf_[j] : -std::numeric_limits<double>::infinity();
}

std::size_t DistanceDistribution::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return cap_;
  return static_cast<std::size_t>(it - cdf_.begin());
}

Partition sample_at_distance(const Partition& p, std::size_t j, Rng& rng) {
  const std::size_t n = p.size();
  if (j > n) throw UsageError("cannot move " + std::to_string(j) + " of " + std::to_string(n) + " codes");
  Partition q = p;
  if (j == 0) return q;
  // Partial Fisher-Yates: the first i slots hold the codes already moved.
  std::vector<CodeIndex> pool(n);
  std::iota(pool.begin(), pool.end(), CodeIndex{0});
  std::uniform_int_distribution<int> other_label(0, p.k() - 2);
  for (std::size_t i = 0; i < j; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
    const CodeIndex c = pool[i];
    auto label = static_cast<GroupLabel>(other_label(rng));
    if (label >= p[c]) ++label;
    q.set(c, label);
  }
  return q;
}

Partition sample_at_distance(const Partition& p, std::size_t j, const ProposalConfig& cfg, Rng& rng) {
  if (!cfg.forbid_empty) return sample_at_distance(p, j, rng);
  for (int attempt = 0; attempt < cfg.max_empty_retries; ++attempt) {
    Partition q = sample_at_distance(p, j, rng);
    if (!q.has_empty_group()) return q;
  }
  throw ChainError("no proposal with all groups nonempty at distance " + std::to_string(j) + " after " +
                   std::to_string(cfg.max_empty_retries) + " draws");
}

Proposal sample_neighbor(const Partition& p, const ProposalConfig& cfg, const DistanceDistribution& jdist,
                         Rng& rng) {
  if (cfg.k != p.k()) throw UsageError("proposal k does not match partition k");
  const std::size_t j = jdist.sample(rng);
  return Proposal{sample_at_distance(p, j, cfg, rng), j};
}

Proposal sample_neighbor(const Partition& p, const ProposalConfig& cfg, Rng& rng) {
  cfg.validate(p.size());
  DistanceDistribution jdist(cfg.lambda, cfg.distance_cap(p.size()));
  return sample_neighbor(p, cfg, jdist, rng);
}

double log_proposal_probability(const Partition& p, const Partition& q, const ProposalConfig& cfg) {
  if (cfg.forbid_empty) throw UsageError("proposal probability is undefined for the forbid_empty kernel");
  if (p.k() != cfg.k || q.k() != cfg.k) throw UsageError("proposal probability requires k to match the config");
  cfg.validate(p.size());
  const std::size_t j = reassignment_distance(p, q);
  DistanceDistribution jdist(cfg.lambda, cfg.distance_cap(p.size()));
  if (j > jdist.cap()) return -std::numeric_limits<double>::infinity();
  return jdist.log_pmf(j) - log_count_at_distance(p.size(), p.k(), j);
}

double proposal_probability(const Partition& p, const Partition& q, const ProposalConfig& cfg) {
  return std::exp(log_proposal_probability(p, q, cfg));
}

Partition random_partition(VocabularyPtr vocabulary, int k, Rng& rng) {
  if (!vocabulary) throw UsageError("random partition requires a vocabulary");
  if (k < 2) throw UsageError("partition group count must be at least 2");
  std::uniform_int_distribution<int> label(0, k - 1);
  std::vector<GroupLabel> assign(vocabulary->size());
  for (auto& g : assign) g = static_cast<GroupLabel>(label(rng));
  return Partition(std::move(vocabulary), k, std::move(assign));
}

}  // namespace riskgroups
