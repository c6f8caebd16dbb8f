#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "riskgroups/partition.hpp"

namespace riskgroups {

using Rng = std::mt19937_64;

struct ProposalConfig {
  int k = 2;
  // Mean of the Poisson distance distribution.
  double lambda = 1.0;
  // Upper bound on the proposal distance; the code count when absent.
  std::optional<std::size_t> max_distance;
  // Reject proposals that leave a group empty and redraw at the same distance.
  bool forbid_empty = false;
  // Redraw budget for forbid_empty before giving up on an iteration.
  int max_empty_retries = 10000;

  // Throws UsageError for lambda <= 0, max_distance outside [1, n], or k < 2.
  void validate(std::size_t n) const;
  std::size_t distance_cap(std::size_t n) const;
};

// Poisson(lambda) conditioned on [0, cap]. Sampling by inversion on the
// conditioned law is equivalent in distribution to redrawing a plain Poisson
// until it lands in range, without the unbounded loop when lambda >> cap.
class DistanceDistribution {
 public:
  DistanceDistribution(double lambda, std::size_t cap);

  std::size_t cap() const { return cap_; }
  double pmf(std::size_t j) const { return j <= cap_ ? pmf_[j] : 0.0; }
  double log_pmf(std::size_t j) const;
  std::size_t sample(Rng& rng) const;

 private:
  std::size_t cap_;
  std::vector<double> log_pmf_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

struct Proposal {
  Partition partition;
  std::size_t distance;
};

// Moves exactly j distinct codes, chosen uniformly without replacement, each to
// a uniformly chosen label other than its current one. The result is uniform
// on the distance-j sphere around p.
Partition sample_at_distance(const Partition& p, std::size_t j, Rng& rng);

// As sample_at_distance, honouring cfg.forbid_empty by redrawing at the same j.
// Throws ChainError if the redraw budget is exhausted.
Partition sample_at_distance(const Partition& p, std::size_t j, const ProposalConfig& cfg, Rng& rng);

// One draw of the proposal kernel: j from the truncated Poisson, then a
// uniform neighbor at distance j.
Proposal sample_neighbor(const Partition& p, const ProposalConfig& cfg, Rng& rng);
Proposal sample_neighbor(const Partition& p, const ProposalConfig& cfg, const DistanceDistribution& jdist,
                         Rng& rng);

// Q(p, q) = P[J = j] / (C(n, j) (k-1)^j) with j the reassignment distance.
// Only defined for the kernel without forbid_empty (the restricted sphere is
// not symmetric); throws UsageError otherwise.
double proposal_probability(const Partition& p, const Partition& q, const ProposalConfig& cfg);
double log_proposal_probability(const Partition& p, const Partition& q, const ProposalConfig& cfg);

// Each code's label i.i.d. uniform over [0, k).
Partition random_partition(VocabularyPtr vocabulary, int k, Rng& rng);

}  // namespace riskgroups
