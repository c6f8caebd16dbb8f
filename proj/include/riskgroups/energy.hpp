#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskgroups/dataset.hpp"
#include "riskgroups/design.hpp"
#include "riskgroups/ols.hpp"
#include "riskgroups/partition.hpp"

namespace riskgroups {

// mae/mse score the held-out rows; fitted_ss is the training residual sum of
// squares of the local linear model.
enum class LossKind { mae, mse, fitted_ss };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view text);

struct EnergyReport {
  LossKind kind = LossKind::mae;
  double train_loss = 0.0;  // same metric as test_loss, on the estimation rows
  double test_loss = 0.0;
  double value = 0.0;       // the scalar consumed by the chain
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

// Maps partitions to energies for one dataset, split round, and feature
// template. Everything that does not depend on the partition (row lists,
// demographic columns, the QR of the intercept and demographic block) is
// computed once; evaluation only appends the k group columns. Immutable after
// construction and safe to share between threads.
class EnergyModel {
 public:
  EnergyModel(const Dataset& data, const ModelSpec& features, LossKind kind = LossKind::mae, int round = 0);

  LossKind loss_kind() const { return kind_; }
  const VocabularyPtr& vocabulary() const { return vocabulary_; }
  std::size_t train_rows() const { return y_train_.size(); }
  std::size_t test_rows() const { return y_test_.size(); }

  // partition may be empty only when the feature template has demographics.
  EnergyReport evaluate(const std::optional<Partition>& partition) const;
  double operator()(const Partition& p) const { return evaluate(p).value; }

  FittedModel fit(const std::optional<Partition>& partition) const;
  // Predictions for the held-out rows, in split order.
  std::vector<double> predict_test(const FittedModel& model, const std::optional<Partition>& partition) const;
  std::span<const double> test_response() const { return y_test_; }
  std::span<const double> train_response() const { return y_train_; }

 private:
  void check(const std::optional<Partition>& partition) const;

  VocabularyPtr vocabulary_;
  ModelSpec features_;
  LossKind kind_;
  std::size_t demo_cols_;
  kernels::CodeLists train_codes_, test_codes_;
  std::vector<double> y_train_, y_test_;
  std::vector<double> demo_train_, demo_test_;
  OlsPrefix prefix_;
};

// Fits on the train part of the dataset's split (round 0) and scores the test part.
EnergyReport energy(const Dataset& data, const ModelSpec& spec, LossKind kind = LossKind::mae);

// Sum of predictions over sum of observed responses. Throws UsageError when
// the observed total is zero.
double aggregate_predictive_ratio(std::span<const double> y, std::span<const double> yhat);
double aggregate_predictive_ratio(const Dataset& data, std::span<const std::size_t> rows, const ModelSpec& spec,
                                  const FittedModel& model);

double mean_absolute_error(std::span<const double> y, std::span<const double> yhat);

}  // namespace riskgroups
