#include "riskgroups/energy.hpp"

#include <cmath>

#include "riskgroups/error.hpp"

namespace riskgroups {

namespace par = kernels::parallel;

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::mae: return "mae";
    case LossKind::mse: return "mse";
    case LossKind::fitted_ss: return "fitted_ss";
  }
  return "mae";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "mae") return LossKind::mae;
  if (text == "mse") return LossKind::mse;
  if (text == "fitted_ss") return LossKind::fitted_ss;
  throw UsageError("unknown loss kind '" + std::string(text) + "' (expected mae, mse or fitted_ss)");
}

EnergyModel::EnergyModel(const Dataset& data, const ModelSpec& features, LossKind kind, int round)
    : vocabulary_(data.vocabulary),
      features_(features),
      kind_(kind),
      demo_cols_(demographic_column_count(data, features)),
      prefix_(begin_fit(1)) {
  features_.partition.reset();
  if (!data.split) throw UsageError("energy evaluation needs a train/test split");
  const auto train = data.split->train_rows(round);
  const auto test = data.split->test_rows(round);
  if (train.empty() || test.empty()) throw UsageError("energy evaluation needs nonempty train and test rows");

  train_codes_ = gather_histories(data, train);
  test_codes_ = gather_histories(data, test);
  for (auto r : train) y_train_.push_back(data.rows[r].expenditure);
  for (auto r : test) y_test_.push_back(data.rows[r].expenditure);
  demo_train_.resize(train.size() * demo_cols_);
  demo_test_.resize(test.size() * demo_cols_);
  fill_demographics(data, train, features_, {demo_train_.data(), train.size(), demo_cols_});
  fill_demographics(data, test, features_, {demo_test_.data(), test.size(), demo_cols_});

  prefix_ = begin_fit(train.size());
  append_columns(prefix_, {demo_train_.data(), train.size(), demo_cols_});
}

void EnergyModel::check(const std::optional<Partition>& partition) const {
  if (!partition) {
    if (demo_cols_ == 0) throw UsageError("feature template without demographics needs a partition");
    return;
  }
  if (partition->vocabulary() != vocabulary_ && !(*partition->vocabulary() == *vocabulary_))
    throw DataError("partition vocabulary does not match the energy model's dataset");
}

FittedModel EnergyModel::fit(const std::optional<Partition>& partition) const {
  check(partition);
  OlsPrefix prefix = prefix_;
  if (partition) {
    const std::size_t n = y_train_.size();
    const auto k = static_cast<std::size_t>(partition->k());
    std::vector<double> dummies(n * k);
    par::fill_group_dummies(train_codes_, partition->assignment(), {dummies.data(), n, k});
    append_columns(prefix, {dummies.data(), n, k});
  }
  return finish_fit(prefix, y_train_);
}

std::vector<double> EnergyModel::predict_test(const FittedModel& model,
                                              const std::optional<Partition>& partition) const {
  check(partition);
  const std::size_t n = y_test_.size();
  const std::size_t k = partition ? static_cast<std::size_t>(partition->k()) : 0;
  std::vector<double> x(n * (demo_cols_ + k));
  std::copy(demo_test_.begin(), demo_test_.end(), x.begin());
  if (partition) par::fill_group_dummies(test_codes_, partition->assignment(), {x.data() + n * demo_cols_, n, k});
  std::vector<double> yhat(n);
  model.predict({x.data(), n, demo_cols_ + k}, yhat);
  return yhat;
}

EnergyReport EnergyModel::evaluate(const std::optional<Partition>& partition) const {
  const FittedModel model = fit(partition);
  const auto yhat = predict_test(model, partition);
  EnergyReport report;
  report.kind = kind_;
  report.train_rows = y_train_.size();
  report.test_rows = y_test_.size();
  const double n_train = static_cast<double>(report.train_rows);
  const double n_test = static_cast<double>(report.test_rows);
  switch (kind_) {
    case LossKind::mae: {
      const std::vector<double> zeros(model.residual.size(), 0.0);
      report.train_loss = par::sum_abs_diff(model.residual, zeros) / n_train;
      report.test_loss = par::sum_abs_diff(y_test_, yhat) / n_test;
      report.value = report.test_loss;
      break;
    }
    case LossKind::mse:
      report.train_loss = model.rss / n_train;
      report.test_loss = par::sum_sq_diff(y_test_, yhat) / n_test;
      report.value = report.test_loss;
      break;
    case LossKind::fitted_ss:
      report.train_loss = model.rss;
      report.test_loss = par::sum_sq_diff(y_test_, yhat);
      report.value = report.train_loss;
      break;
  }
  return report;
}

EnergyReport energy(const Dataset& data, const ModelSpec& spec, LossKind kind) {
  spec.validate();
  if (spec.partition) require_partition_matches(data, *spec.partition);
  EnergyModel model(data, spec, kind);
  return model.evaluate(spec.partition);
}

double aggregate_predictive_ratio(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) throw UsageError("predictive ratio needs equal-length vectors");
  double observed = 0.0, predicted = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    observed += y[i];
    predicted += yhat[i];
  }
  if (observed == 0.0) throw UsageError("predictive ratio is undefined when observed expenditure sums to zero");
  return predicted / observed;
}

double aggregate_predictive_ratio(const Dataset& data, std::span<const std::size_t> rows, const ModelSpec& spec,
                                  const FittedModel& model) {
  const auto design = build_design_matrix(data, rows, spec);
  const auto yhat = model.predict(design.x);
  return aggregate_predictive_ratio({design.y.data(), static_cast<std::size_t>(design.y.size())}, yhat);
}

double mean_absolute_error(std::span<const double> y, std::span<const double> yhat) {
  if (y.empty() || y.size() != yhat.size()) throw UsageError("MAE needs equal-length nonempty vectors");
  return par::sum_abs_diff(y, yhat) / static_cast<double>(y.size());
}

}  // namespace riskgroups
