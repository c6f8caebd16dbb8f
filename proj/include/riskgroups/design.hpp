#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskgroups/dataset.hpp"
#include "riskgroups/kernels.hpp"
#include "riskgroups/partition.hpp"

namespace riskgroups {

// Feature blocks of the pooled regression. Without a partition the model is
// demographics-only.
struct ModelSpec {
  bool use_sex = true;
  bool use_age = true;
  bool use_residence = true;
  std::optional<Partition> partition;

  static ModelSpec sex_residence() { return {true, false, true, std::nullopt}; }
  static ModelSpec demographics() { return {true, true, true, std::nullopt}; }
  static ModelSpec with_partition(Partition p) { return {true, true, true, std::move(p)}; }

  void validate() const;
};

struct ColumnInfo {
  enum class Block { sex, age, residence, group };
  Block block;
  // Level index within the block (age/residence label, group label); 0 for sex.
  int level = 0;
  std::string name;
};

struct Design {
  Eigen::MatrixXd x;  // column-major, no intercept column
  Eigen::VectorXd y;
  std::vector<ColumnInfo> columns;
};

// Bit g is set iff the row's history contains a code of group g.
std::vector<bool> build_group_dummies(const PredictionRow& row, const Partition& p);

// Columns: [sex] + age one-hot without the first level + residence one-hot
// without the first level + all k group dummies.
std::vector<ColumnInfo> design_columns(const Dataset& data, const ModelSpec& spec);
std::size_t demographic_column_count(const Dataset& data, const ModelSpec& spec);

// Writes the demographic columns of `rows` into out (rows.size() x demographic_column_count).
void fill_demographics(const Dataset& data, std::span<const std::size_t> rows, const ModelSpec& spec,
                       kernels::ColumnBlock out);

kernels::CodeLists gather_histories(const Dataset& data, std::span<const std::size_t> rows);

struct SplitSelector {
  enum class Part { all, train, test };
  Part part = Part::all;
  int round = 0;

  static SplitSelector all() { return {Part::all, 0}; }
  static SplitSelector train(int round = 0) { return {Part::train, round}; }
  static SplitSelector test(int round = 0) { return {Part::test, round}; }
};

std::vector<std::size_t> select_rows(const Dataset& data, SplitSelector selector);

// Throws UsageError when the selection is empty and DataError when the
// partition's vocabulary does not cover the dataset's codes.
Design build_design_matrix(const Dataset& data, std::span<const std::size_t> rows, const ModelSpec& spec);
Design build_design_matrix(const Dataset& data, SplitSelector selector, const ModelSpec& spec);

// Throws DataError naming the first codes that differ.
void require_partition_matches(const Dataset& data, const Partition& p);

}  // namespace riskgroups
