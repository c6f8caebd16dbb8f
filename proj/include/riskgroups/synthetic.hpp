#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskgroups/dataset.hpp"
#include "riskgroups/partition.hpp"

namespace riskgroups {

struct GeneratorConfig {
  std::size_t n_codes = 40;
  int k_true = 4;
  std::size_t n_rows = 10000;

  Schema schema = Schema::defaults();
  // Population shares; defaults follow the training-set means of the claims panel.
  double male_share = 0.443;
  std::vector<double> age_shares;
  std::vector<double> residence_shares;

  double intercept = 0.0;
  double sex_effect = 0.0;
  std::vector<double> age_effects;        // one per age label
  std::vector<double> residence_effects;  // one per residence label
  std::vector<double> group_effects;      // one per planted group

  // Explicit per-code Bernoulli rates. When empty, rates are spread around
  // mean_codes_per_row / n_codes with relative heterogeneity `prevalence_spread`.
  std::vector<double> prevalence;
  double mean_codes_per_row = 2.0;
  double prevalence_spread = 0.5;
  // Gaussian-copula correlation between codes of the same planted group.
  double comorbidity = 0.0;

  double noise_sd = 0.0;
  std::uint64_t seed = 1;
  // Separate stream for the additive noise; derived from seed when absent.
  std::optional<std::uint64_t> noise_seed;

  // Throws UsageError on inconsistent lengths or out-of-range rates.
  void validate() const;
  // Fills empty share/effect vectors with defaults sized to the schema.
  GeneratorConfig resolved() const;
};

struct TrueCoefficients {
  double intercept = 0.0;
  double sex = 0.0;
  std::vector<double> age;
  std::vector<double> residence;
  std::vector<double> group;
};

struct SyntheticData {
  Dataset data;
  Partition planted;
  TrueCoefficients coefficients;
  std::vector<double> prevalence;
};

SyntheticData generate_synthetic(const GeneratorConfig& cfg);

// Opaque ICD-style code names: A00, A01, ..., A99, B00, ...
std::string synthetic_code_name(std::size_t index);

// Settings of the end-to-end reference dataset: 10,000 rows, 40 codes and
// four planted groups with effects of at least three noise standard deviations.
GeneratorConfig reference_generator_config(std::uint64_t seed = 2024);

}  // namespace riskgroups
