#include "riskgroups/ols.hpp"

#include <cmath>
#include <string>

#include "riskgroups/error.hpp"

namespace riskgroups {

namespace par = kernels::parallel;

IncrementalQr::IncrementalQr(std::size_t rows, double tolerance) : rows_(rows), tolerance_(tolerance) {
  if (rows == 0) throw UsageError("least squares needs at least one row");
}

bool IncrementalQr::append(std::span<const double> x) {
  if (x.size() != rows_) throw UsageError("column length does not match the factorisation");
  const double norm0 = std::sqrt(par::dot(x, x));
  if (!(norm0 > 0.0)) return false;
  if (r_.size() == rows_) return false;

  std::vector<double> v(x.begin(), x.end());
  std::vector<double> coeff(r_.size(), 0.0);
  if (!r_.empty()) {
    std::vector<double> pass(r_.size());
    for (int sweep = 0; sweep < 2; ++sweep) {
      par::multiply_transpose(basis(), v, pass);
      par::subtract_product(basis(), pass, v);
      for (std::size_t i = 0; i < pass.size(); ++i) coeff[i] += pass[i];
    }
  }
  const double norm = std::sqrt(par::dot(v, v));
  if (!(norm > tolerance_ * norm0)) return false;

  for (auto& e : v) e /= norm;
  q_.insert(q_.end(), v.begin(), v.end());
  coeff.push_back(norm);
  r_.push_back(std::move(coeff));
  return true;
}

IncrementalQr::Solution IncrementalQr::solve(std::span<const double> y) const {
  if (y.size() != rows_) throw UsageError("response length does not match the factorisation");
  const std::size_t m = r_.size();
  std::vector<double> residual(y.begin(), y.end());
  std::vector<double> qty(m, 0.0), pass(m);
  if (m > 0) {
    for (int sweep = 0; sweep < 2; ++sweep) {
      par::multiply_transpose(basis(), residual, pass);
      par::subtract_product(basis(), pass, residual);
      for (std::size_t i = 0; i < m; ++i) qty[i] += pass[i];
    }
  }
  // Back substitution on the upper-triangular R.
  std::vector<double> beta(m, 0.0);
  for (std::size_t jj = m; jj-- > 0;) {
    double s = qty[jj];
    for (std::size_t c = jj + 1; c < m; ++c) s -= r_[c][jj] * beta[c];
    beta[jj] = s / r_[jj][jj];
  }
  const double rss = par::dot(residual, residual);
  return Solution{std::move(beta), std::move(residual), rss};
}

OlsPrefix begin_fit(std::size_t rows) {
  OlsPrefix prefix{IncrementalQr(rows), {}, {}, 0};
  std::vector<double> ones(rows, 1.0);
  prefix.qr.append(ones);
  return prefix;
}

void append_columns(OlsPrefix& prefix, kernels::ConstColumnBlock columns) {
  if (columns.cols > 0 && columns.rows != prefix.qr.rows())
    throw UsageError("design block has " + std::to_string(columns.rows) + " rows, expected " +
                     std::to_string(prefix.qr.rows()));
  for (std::size_t j = 0; j < columns.cols; ++j) {
    const std::size_t index = prefix.columns++;
    if (prefix.qr.append({columns.column(j), columns.rows}))
      prefix.retained.push_back(index);
    else
      prefix.dropped.push_back(index);
  }
}

FittedModel finish_fit(const OlsPrefix& prefix, std::span<const double> y) {
  if (prefix.columns > 0 && prefix.retained.empty())
    throw DegenerateDesignError("all " + std::to_string(prefix.columns) + " design columns were dropped");
  auto solution = prefix.qr.solve(y);
  FittedModel model;
  model.intercept = solution.coefficients[0];
  model.coefficients.assign(prefix.columns, 0.0);
  for (std::size_t i = 0; i < prefix.retained.size(); ++i)
    model.coefficients[prefix.retained[i]] = solution.coefficients[i + 1];
  model.retained = prefix.retained;
  model.dropped = prefix.dropped;
  model.rss = solution.rss;
  model.rows = prefix.qr.rows();
  model.residual = std::move(solution.residual);
  return model;
}

FittedModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw UsageError("design and response lengths differ");
  auto prefix = begin_fit(static_cast<std::size_t>(x.rows()));
  append_columns(prefix, {x.data(), static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols())});
  return finish_fit(prefix, {y.data(), static_cast<std::size_t>(y.size())});
}

void FittedModel::predict(kernels::ConstColumnBlock x, std::span<double> out) const {
  if (x.cols != coefficients.size()) throw UsageError("design has a different column count than the model");
  if (out.size() != x.rows) throw UsageError("prediction buffer has the wrong length");
  par::affine_predict(x, coefficients, intercept, out);
}

std::vector<double> FittedModel::predict(const Eigen::MatrixXd& x) const {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  predict({x.data(), static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols())}, out);
  return out;
}

}  // namespace riskgroups
