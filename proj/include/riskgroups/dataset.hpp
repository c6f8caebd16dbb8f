#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riskgroups/partition.hpp"

namespace riskgroups {

// Declared label sets and loader options for the dataset CSV.
struct Schema {
  std::vector<std::string> age_groups;
  std::vector<std::string> residence_groups;
  // Codes with fewer positive rows are removed from the vocabulary.
  std::size_t min_code_count = 50;
  // When present, codes outside this list are a data error.
  std::optional<std::vector<std::string>> vocabulary;

  // Age bands of the Colombian contributive-regime tables and the three
  // residence areas.
  static Schema defaults();
};

struct PredictionRow {
  std::string person_id;
  std::uint8_t sex = 0;
  std::uint16_t age_group = 0;
  std::uint8_t residence_group = 0;
  // Sorted, distinct vocabulary indices of codes seen in prior periods.
  std::vector<CodeIndex> history;
  double expenditure = 0.0;
};

struct SplitPlan {
  enum class Kind { holdout, kfold };
  Kind kind = Kind::holdout;
  double train_fraction = 0.8;
  int folds = 5;
  std::uint64_t seed = 0;

  static SplitPlan holdout(double train_fraction, std::uint64_t seed);
  static SplitPlan kfold(int folds, std::uint64_t seed);
  void validate() const;
};

// Per-row fold ids. For a holdout plan fold 0 is train and fold 1 is test;
// for k-fold plans fold f is the test set of round f.
struct SplitAssignment {
  SplitPlan plan;
  std::vector<int> fold;

  int rounds() const { return plan.kind == SplitPlan::Kind::holdout ? 1 : plan.folds; }
  std::vector<std::size_t> train_rows(int round = 0) const;
  std::vector<std::size_t> test_rows(int round = 0) const;
};

struct Dataset {
  VocabularyPtr vocabulary;
  std::vector<std::string> age_labels;
  std::vector<std::string> residence_labels;
  std::vector<PredictionRow> rows;
  std::optional<SplitAssignment> split;

  std::size_t size() const { return rows.size(); }
  // Throws DataError if a row violates the label sets or vocabulary.
  void validate() const;
};

struct LoadReport {
  std::size_t rows = 0;
  std::size_t vocabulary_size = 0;
  // (code, rows containing it) before screening, in vocabulary order.
  std::vector<std::pair<std::string, std::size_t>> prevalence;
  std::vector<std::string> screened_out;
};

Dataset read_dataset(std::istream& in, const Schema& schema, LoadReport* report = nullptr,
                     const std::string& source = "<stream>");
Dataset load_dataset(const std::filesystem::path& path, const Schema& schema, LoadReport* report = nullptr);

void write_dataset(std::ostream& out, const Dataset& data);

// Deterministic in (person_id, seed): reordering the file never moves a row
// to another fold.
SplitAssignment assign_split(const Dataset& data, const SplitPlan& plan);
Dataset make_split(Dataset data, const SplitPlan& plan);

std::uint64_t split_key(const std::string& person_id, std::uint64_t seed);

// Shortest round-trip decimal form, shared by every text writer.
std::string format_double(double value);

}  // namespace riskgroups
