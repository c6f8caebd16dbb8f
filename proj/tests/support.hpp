#pragma once

// Shared fixtures and brute-force oracles for the unit tests.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "riskgroups/dataset.hpp"
#include "riskgroups/partition.hpp"
#include "riskgroups/synthetic.hpp"

namespace testing {

using namespace riskgroups;

inline VocabularyPtr letters(std::size_t n) {
  std::vector<std::string> codes;
  for (std::size_t i = 0; i < n; ++i) codes.push_back(synthetic_code_name(i));
  return make_vocabulary(codes);
}

// Every labeled assignment of n codes to k labels, in base-k counting order.
inline std::vector<std::vector<GroupLabel>> all_assignments(std::size_t n, int k) {
  std::vector<std::vector<GroupLabel>> out;
  std::vector<GroupLabel> a(n, 0);
  while (true) {
    out.push_back(a);
    std::size_t i = 0;
    while (i < n && a[i] == k - 1) a[i++] = 0;
    if (i == n) break;
    ++a[i];
  }
  return out;
}

// Label-invariant distance by trying every relabeling of q's groups onto p's.
inline std::size_t brute_force_gusfield(const Partition& p, const Partition& q) {
  const int labels = std::max(p.k(), q.k());
  std::vector<int> perm(static_cast<std::size_t>(labels));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = p.size();
  do {
    std::size_t differ = 0;
    for (std::size_t c = 0; c < p.size(); ++c)
      differ += perm[q[static_cast<CodeIndex>(c)]] != p[static_cast<CodeIndex>(c)] ? 1 : 0;
    best = std::min(best, differ);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Small dataset on the default schema with a planted signal and zero noise.
inline SyntheticData small_synthetic(std::size_t n_codes, int k, std::size_t rows, double noise, std::uint64_t seed) {
  GeneratorConfig g;
  g.n_codes = n_codes;
  g.k_true = k;
  g.n_rows = rows;
  g.intercept = 1000.0;
  g.sex_effect = -50.0;
  g.age_effects.assign(g.schema.age_groups.size(), 0.0);
  for (std::size_t a = 0; a < g.age_effects.size(); ++a) g.age_effects[a] = 40.0 * static_cast<double>(a);
  g.residence_effects = {0.0, -30.0, 120.0};
  g.group_effects.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) g.group_effects[static_cast<std::size_t>(i)] = 500.0 * (i + 1);
  g.mean_codes_per_row = 1.5;
  g.noise_sd = noise;
  g.seed = seed;
  return generate_synthetic(g);
}

}  // namespace testing
