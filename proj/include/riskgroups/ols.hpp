#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskgroups/kernels.hpp"

namespace riskgroups {

// Relative threshold of the column rank test: a column is dropped when the
// norm of its component orthogonal to the columns already kept is at most
// this fraction of its own norm.
inline constexpr double kRankTolerance = 1e-10;

// Thin QR factorisation built one column at a time (classical Gram-Schmidt
// with one reorthogonalisation pass). Columns are tested in the order given,
// so exactly collinear columns are dropped first-kept deterministically.
class IncrementalQr {
 public:
  explicit IncrementalQr(std::size_t rows, double tolerance = kRankTolerance);

  std::size_t rows() const { return rows_; }
  std::size_t rank() const { return r_.size(); }

  // Returns false (and leaves the factorisation untouched) when x is in the
  // span of the kept columns.
  bool append(std::span<const double> x);

  struct Solution {
    // Coefficients for the kept columns, in append order.
    std::vector<double> coefficients;
    std::vector<double> residual;
    double rss = 0.0;
  };
  Solution solve(std::span<const double> y) const;

 private:
  std::size_t rows_;
  double tolerance_;
  std::vector<double> q_;               // rows_ x rank, column-major
  std::vector<std::vector<double>> r_;  // column j holds R(0..j, j)

  kernels::ConstColumnBlock basis() const { return {q_.data(), rows_, r_.size()}; }
};

struct FittedModel {
  double intercept = 0.0;
  // One weight per design column; exactly zero for dropped columns.
  std::vector<double> coefficients;
  std::vector<std::size_t> retained;
  std::vector<std::size_t> dropped;
  double rss = 0.0;
  std::size_t rows = 0;
  // y minus the fitted values on the estimation rows.
  std::vector<double> residual;

  std::size_t coefficient_count() const { return retained.size() + 1; }
  std::vector<double> predict(const Eigen::MatrixXd& x) const;
  void predict(kernels::ConstColumnBlock x, std::span<double> out) const;
};

// OLS with an implicit intercept column. Throws DegenerateDesignError when
// every design column is rejected and UsageError on shape mismatches.
FittedModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Partially built fit: the intercept plus any design columns appended so far.
// Copying a prefix and extending it yields the same bits as fitting the full
// design from scratch.
struct OlsPrefix {
  IncrementalQr qr;
  std::vector<std::size_t> retained;
  std::vector<std::size_t> dropped;
  std::size_t columns = 0;
};

OlsPrefix begin_fit(std::size_t rows);
void append_columns(OlsPrefix& prefix, kernels::ConstColumnBlock columns);
FittedModel finish_fit(const OlsPrefix& prefix, std::span<const double> y);

}  // namespace riskgroups
