#include "riskgroups/design.hpp"

#include <algorithm>

#include "riskgroups/error.hpp"

namespace riskgroups {

void ModelSpec::validate() const {
  if (!use_sex && !use_age && !use_residence && !partition)
    throw UsageError("model spec must enable at least one feature block");
}

std::vector<bool> build_group_dummies(const PredictionRow& row, const Partition& p) {
  std::vector<bool> bits(static_cast<std::size_t>(p.k()), false);
  for (auto c : row.history) {
    if (c >= p.size())
      throw DataError("row '" + row.person_id + "' references code index " + std::to_string(c) +
                      " outside the partition vocabulary");
    bits[p[c]] = true;
  }
  return bits;
}

void require_partition_matches(const Dataset& data, const Partition& p) {
  if (data.vocabulary == p.vocabulary() || *data.vocabulary == *p.vocabulary()) return;
  std::vector<std::string> unknown, missing;
  for (const auto& code : data.vocabulary->codes())
    if (!p.vocabulary()->contains(code)) unknown.push_back(code);
  for (const auto& code : p.vocabulary()->codes())
    if (!data.vocabulary->contains(code)) missing.push_back(code);
  std::string msg = "partition vocabulary does not match the dataset";
  auto list = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size() && i < 10; ++i) s += (i ? ", " : "") + v[i];
    if (v.size() > 10) s += ", ...";
    return s;
  };
  if (!unknown.empty()) msg += "; dataset codes absent from partition: " + list(unknown);
  if (!missing.empty()) msg += "; partition codes absent from dataset: " + list(missing);
  if (unknown.empty() && missing.empty()) msg += "; codes are ordered differently";
  throw DataError(msg);
}

std::size_t demographic_column_count(const Dataset& data, const ModelSpec& spec) {
  std::size_t n = 0;
  if (spec.use_sex) n += 1;
  if (spec.use_age) n += data.age_labels.size() - 1;
  if (spec.use_residence) n += data.residence_labels.size() - 1;
  return n;
}

std::vector<ColumnInfo> design_columns(const Dataset& data, const ModelSpec& spec) {
  std::vector<ColumnInfo> cols;
  if (spec.use_sex) cols.push_back({ColumnInfo::Block::sex, 0, "sex"});
  if (spec.use_age)
    for (std::size_t a = 1; a < data.age_labels.size(); ++a)
      cols.push_back({ColumnInfo::Block::age, static_cast<int>(a), "age:" + data.age_labels[a]});
  if (spec.use_residence)
    for (std::size_t r = 1; r < data.residence_labels.size(); ++r)
      cols.push_back({ColumnInfo::Block::residence, static_cast<int>(r), "residence:" + data.residence_labels[r]});
  if (spec.partition)
    for (int g = 0; g < spec.partition->k(); ++g)
      cols.push_back({ColumnInfo::Block::group, g, "group:" + std::to_string(g)});
  return cols;
}

void fill_demographics(const Dataset& data, std::span<const std::size_t> rows, const ModelSpec& spec,
                       kernels::ColumnBlock out) {
  if (out.rows != rows.size() || out.cols != demographic_column_count(data, spec))
    throw UsageError("demographic block has the wrong shape");
  std::fill(out.data, out.data + out.rows * out.cols, 0.0);
  const std::size_t n_age = data.age_labels.size();
  const std::size_t n_res = data.residence_labels.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = data.rows.at(rows[i]);
    std::size_t col = 0;
    if (spec.use_sex) out.column(col++)[i] = row.sex;
    if (spec.use_age) {
      if (row.age_group > 0) out.column(col + row.age_group - 1)[i] = 1.0;
      col += n_age - 1;
    }
    if (spec.use_residence) {
      if (row.residence_group > 0) out.column(col + row.residence_group - 1)[i] = 1.0;
      col += n_res - 1;
    }
  }
}

kernels::CodeLists gather_histories(const Dataset& data, std::span<const std::size_t> rows) {
  kernels::CodeLists lists;
  lists.offsets.reserve(rows.size() + 1);
  for (auto r : rows) lists.push_row(data.rows.at(r).history);
  return lists;
}

std::vector<std::size_t> select_rows(const Dataset& data, SplitSelector selector) {
  if (selector.part == SplitSelector::Part::all) {
    std::vector<std::size_t> all(data.rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  if (!data.split) throw UsageError("dataset has no split assignment");
  return selector.part == SplitSelector::Part::train ? data.split->train_rows(selector.round)
                                                     : data.split->test_rows(selector.round);
}

Design build_design_matrix(const Dataset& data, std::span<const std::size_t> rows, const ModelSpec& spec) {
  spec.validate();
  if (rows.empty()) throw UsageError("cannot build a design matrix for an empty split");
  if (spec.partition) require_partition_matches(data, *spec.partition);
  Design d;
  d.columns = design_columns(data, spec);
  const std::size_t n = rows.size();
  const std::size_t demo = demographic_column_count(data, spec);
  d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d.columns.size()));
  fill_demographics(data, rows, spec, {d.x.data(), n, demo});
  if (spec.partition) {
    const auto lists = gather_histories(data, rows);
    kernels::parallel::fill_group_dummies(lists, spec.partition->assignment(),
                                          {d.x.data() + demo * n, n, static_cast<std::size_t>(spec.partition->k())});
  }
  d.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) d.y[static_cast<Eigen::Index>(i)] = data.rows[rows[i]].expenditure;
  return d;
}

Design build_design_matrix(const Dataset& data, SplitSelector selector, const ModelSpec& spec) {
  const auto rows = select_rows(data, selector);
  return build_design_matrix(data, rows, spec);
}

}  // namespace riskgroups
