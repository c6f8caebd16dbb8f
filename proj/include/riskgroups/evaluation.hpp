#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskgroups/dataset.hpp"
#include "riskgroups/design.hpp"

namespace riskgroups {

struct LadderSpec {
  std::string name;
  ModelSpec spec;
};

struct NamedPartition {
  std::string name;
  Partition partition;
};

// sex+residence, demographics, then demographics plus each partition.
std::vector<LadderSpec> spec_ladder(const std::vector<NamedPartition>& partitions);

struct SpecScores {
  std::string name;
  std::vector<double> fold_mae;
  double mean_mae = 0.0;
  // MAE of the pooled out-of-fold predictions on the rows whose observed
  // expenditure is in the bottom / top tenth.
  double lower_decile_mae = 0.0;
  double upper_decile_mae = 0.0;
  double mean_prediction = 0.0;  // pooled out-of-fold mean of y-hat
  double test_ratio = 0.0;       // pooled out-of-fold predictive ratio
  std::vector<double> train_ratio;  // per fold, in-sample
};

struct CvReport {
  int folds = 0;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t decile_rows = 0;
  double mean_expenditure = 0.0;
  std::vector<SpecScores> specs;
  // relative_mae[a][b] = 100 * (mean_mae_a - mean_mae_b) / mean_mae_b
  std::vector<std::vector<double>> relative_mae;
};

// k-fold cross-validation of every ladder entry. Folds are assigned from
// person ids alone; any split already attached to `data` is ignored.
CvReport cross_validate(const Dataset& data, const std::vector<LadderSpec>& ladder, int folds, std::uint64_t seed,
                        int threads = 1);

}  // namespace riskgroups
