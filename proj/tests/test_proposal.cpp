#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "doctest.h"
#include "riskgroups/counting.hpp"
#include "riskgroups/error.hpp"
#include "riskgroups/proposal.hpp"
#include "support.hpp"

using namespace riskgroups;

namespace {

double chi_square_p_value(const std::map<std::vector<GroupLabel>, long>& counts, std::size_t cells, long draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(cells);
  double stat = 0.0;
  for (const auto& [state, observed] : counts) stat += (observed - expected) * (observed - expected) / expected;
  stat += static_cast<double>(cells - counts.size()) * expected;  // unseen cells
  boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("truncated Poisson matches the conditioned law") {
  for (double lambda : {0.5, 3.0, 25.0, 100.0}) {
    for (std::size_t cap : {1u, 4u, 40u}) {
      DistanceDistribution d(lambda, cap);
      boost::math::poisson_distribution<double> pois(lambda);
      const double mass = boost::math::cdf(pois, static_cast<double>(cap));
      double total = 0.0;
      for (std::size_t j = 0; j <= cap; ++j) {
        const double expected = boost::math::pdf(pois, static_cast<double>(j)) / mass;
        CHECK(d.pmf(j) == doctest::Approx(expected).epsilon(1e-9));
        if (expected > 1e-300) CHECK(d.log_pmf(j) == doctest::Approx(std::log(expected)).epsilon(1e-9));
        total += d.pmf(j);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(d.pmf(cap + 1) == 0.0);
    }
  }
  CHECK_THROWS_AS(DistanceDistribution(0.0, 3), UsageError);
}

TEST_CASE("distance sampler frequencies follow the pmf") {
  DistanceDistribution d(3.0, 6);
  Rng rng(17);
  std::vector<long> tally(7, 0);
  const long draws = 200000;
  for (long i = 0; i < draws; ++i) ++tally[d.sample(rng)];
  double stat = 0.0;
  for (std::size_t j = 0; j <= 6; ++j) {
    const double e = d.pmf(j) * draws;
    stat += (tally[j] - e) * (tally[j] - e) / e;
  }
  CHECK(boost::math::cdf(boost::math::complement(boost::math::chi_squared(6.0), stat)) > 0.001);
}

TEST_CASE("sample_at_distance moves exactly j codes") {
  Rng rng(1);
  auto v = testing::letters(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_partition(v, 4, rng);
    const std::size_t j = rng() % 13;
    auto q = sample_at_distance(p, j, rng);
    CHECK(reassignment_distance(p, q) == j);
  }
  CHECK_THROWS_AS(sample_at_distance(Partition::uniform(v, 2), 13, rng), UsageError);
}

TEST_CASE("neighbors are uniform on the distance sphere") {
  auto v = testing::letters(4);
  Partition p(v, 3, {0, 1, 2, 0});
  Rng rng(2024);
  for (std::size_t j : {1u, 2u}) {
    std::map<std::vector<GroupLabel>, long> counts;
    const long draws = 40000;
    for (long i = 0; i < draws; ++i) {
      auto q = sample_at_distance(p, j, rng);
      ++counts[{q.assignment().begin(), q.assignment().end()}];
    }
    const auto cells = count_at_distance(4, 3, j).convert_to<std::size_t>();
    CHECK(counts.size() == cells);
    CHECK(chi_square_p_value(counts, cells, draws) > 0.001);
  }
}

TEST_CASE("proposal probability is symmetric and normalized") {
  auto v = testing::letters(4);
  ProposalConfig cfg{2, 1.5, std::nullopt, false, 10000};
  const auto states = testing::all_assignments(4, 2);
  Partition p(v, 2, states[5]);
  double total = 0.0;
  for (const auto& s : states) {
    Partition q(v, 2, s);
    CHECK(proposal_probability(p, q, cfg) == proposal_probability(q, p, cfg));
    CHECK(std::log(proposal_probability(p, q, cfg)) ==
          doctest::Approx(log_proposal_probability(p, q, cfg)).epsilon(1e-12));
    total += proposal_probability(p, q, cfg);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  cfg.max_distance = 2;
  Partition far(v, 2, {static_cast<GroupLabel>(1 - states[5][0]), static_cast<GroupLabel>(1 - states[5][1]),
                       static_cast<GroupLabel>(1 - states[5][2]), states[5][3]});
  CHECK(proposal_probability(p, far, cfg) == 0.0);
  cfg.forbid_empty = true;
  CHECK_THROWS_AS(proposal_probability(p, far, cfg), UsageError);
}

TEST_CASE("forbid_empty keeps every group occupied") {
  auto v = testing::letters(6);
  ProposalConfig cfg{3, 4.0, std::nullopt, true, 10000};
  Rng rng(8);
  Partition p(v, 3, {0, 1, 2, 0, 1, 2});
  for (int i = 0; i < 500; ++i) {
    auto prop = sample_neighbor(p, cfg, rng);
    CHECK_FALSE(prop.partition.has_empty_group());
    CHECK(reassignment_distance(p, prop.partition) == prop.distance);
    p = prop.partition;
  }
  // Three codes can never occupy four groups.
  ProposalConfig impossible{4, 2.0, std::nullopt, true, 50};
  auto tiny = testing::letters(3);
  CHECK_THROWS_AS(sample_at_distance(Partition(tiny, 4, {0, 1, 2}), 2, impossible, rng), ChainError);
}

TEST_CASE("proposal config validation") {
  ProposalConfig cfg;
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(cfg.validate(5), UsageError);
  cfg.lambda = 1.0;
  cfg.max_distance = 0;
  CHECK_THROWS_AS(cfg.validate(5), UsageError);
  cfg.max_distance = 6;
  CHECK_THROWS_AS(cfg.validate(5), UsageError);
  cfg.max_distance = 3;
  CHECK(cfg.distance_cap(5) == 3);
  cfg.k = 1;
  CHECK_THROWS_AS(cfg.validate(5), UsageError);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  auto v = testing::letters(20);
  ProposalConfig cfg{5, 3.0, std::nullopt, false, 10000};
  Rng a(77), b(77);
  auto p = random_partition(v, 5, a);
  auto q = random_partition(v, 5, b);
  CHECK(p == q);
  for (int i = 0; i < 50; ++i) {
    auto x = sample_neighbor(p, cfg, a);
    auto y = sample_neighbor(q, cfg, b);
    CHECK(x.partition == y.partition);
    CHECK(x.distance == y.distance);
  }
}
