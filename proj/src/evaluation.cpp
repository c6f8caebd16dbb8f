#include "riskgroups/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskgroups/energy.hpp"
#include "riskgroups/error.hpp"

namespace riskgroups {

std::vector<LadderSpec> spec_ladder(const std::vector<NamedPartition>& partitions) {
  std::vector<LadderSpec> ladder{{"sex+residence", ModelSpec::sex_residence()},
                                 {"demographics", ModelSpec::demographics()}};
  for (const auto& p : partitions) ladder.push_back({"demographics+" + p.name, ModelSpec::with_partition(p.partition)});
  return ladder;
}

CvReport cross_validate(const Dataset& input, const std::vector<LadderSpec>& ladder, int folds, std::uint64_t seed,
                        int threads) {
  if (ladder.empty()) throw UsageError("cross-validation needs at least one specification");
  for (const auto& entry : ladder) {
    entry.spec.validate();
    if (entry.spec.partition) require_partition_matches(input, *entry.spec.partition);
  }
  const Dataset data = make_split(input, SplitPlan::kfold(folds, seed));
  const std::size_t n = data.size();
  const std::size_t n_specs = ladder.size();

  // One out-of-fold prediction per (spec, row), filled fold by fold.
  std::vector<std::vector<double>> oof(n_specs, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> fold_mae(n_specs, std::vector<double>(static_cast<std::size_t>(folds)));
  std::vector<std::vector<double>> train_ratio(n_specs, std::vector<double>(static_cast<std::size_t>(folds)));
  std::vector<std::string> errors(n_specs * static_cast<std::size_t>(folds));

  const auto tasks = static_cast<std::ptrdiff_t>(n_specs * static_cast<std::size_t>(folds));
  const int workers = std::max(threads, 1);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    const auto s = static_cast<std::size_t>(t) / static_cast<std::size_t>(folds);
    const int f = static_cast<int>(static_cast<std::size_t>(t) % static_cast<std::size_t>(folds));
    try {
      const auto& spec = ladder[s].spec;
      const EnergyModel model(data, spec, LossKind::mae, f);
      const FittedModel fit = model.fit(spec.partition);
      const auto yhat = model.predict_test(fit, spec.partition);
      const auto test = data.split->test_rows(f);
      for (std::size_t i = 0; i < test.size(); ++i) oof[s][test[i]] = yhat[i];
      fold_mae[s][static_cast<std::size_t>(f)] = mean_absolute_error(model.test_response(), yhat);
      const auto y = model.train_response();
      double observed = 0.0, residual = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        observed += y[i];
        residual += fit.residual[i];
      }
      train_ratio[s][static_cast<std::size_t>(f)] = (observed - residual) / observed;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(t)] = ladder[s].name + ", fold " + std::to_string(f) + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DegenerateDesignError("cross-validation failed for " + e);

  CvReport report;
  report.folds = folds;
  report.seed = seed;
  report.rows = n;

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = data.rows[i].expenditure;
  report.mean_expenditure = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
  const std::size_t tenth = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(n))));
  report.decile_rows = tenth;

  auto subset_mae = [&](const std::vector<double>& pred, std::size_t begin, std::size_t end) {
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) total += std::abs(y[order[i]] - pred[order[i]]);
    return total / static_cast<double>(end - begin);
  };

  for (std::size_t s = 0; s < n_specs; ++s) {
    SpecScores scores;
    scores.name = ladder[s].name;
    scores.fold_mae = fold_mae[s];
    scores.mean_mae =
        std::accumulate(fold_mae[s].begin(), fold_mae[s].end(), 0.0) / static_cast<double>(folds);
    scores.lower_decile_mae = subset_mae(oof[s], 0, tenth);
    scores.upper_decile_mae = subset_mae(oof[s], n - tenth, n);
    scores.mean_prediction = std::accumulate(oof[s].begin(), oof[s].end(), 0.0) / static_cast<double>(n);
    scores.test_ratio = aggregate_predictive_ratio(y, oof[s]);
    scores.train_ratio = train_ratio[s];
    report.specs.push_back(std::move(scores));
  }
  report.relative_mae.assign(n_specs, std::vector<double>(n_specs, 0.0));
  for (std::size_t a = 0; a < n_specs; ++a)
    for (std::size_t b = 0; b < n_specs; ++b)
      report.relative_mae[a][b] =
          a == b ? 0.0 : 100.0 * (report.specs[a].mean_mae - report.specs[b].mean_mae) / report.specs[b].mean_mae;
  return report;
}

}  // namespace riskgroups
