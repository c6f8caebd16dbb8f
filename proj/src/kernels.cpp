#include "riskgroups/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "riskgroups/error.hpp"

namespace riskgroups::kernels {
namespace {

constexpr std::size_t kParallelThreshold = 4096;

std::size_t block_count(std::size_t rows) { return (rows + kReductionBlock - 1) / kReductionBlock; }

void check_dummy_shape(const CodeLists& lists, std::span<const GroupLabel> assign, ColumnBlock out) {
  if (out.rows != lists.rows()) throw UsageError("dummy block row count does not match code lists");
  for (auto c : lists.codes)
    if (c >= assign.size()) throw UsageError("code index outside the partition");
}

// Fixed-block reduction of f over [0, rows); partials combined in block order.
template <typename F>
double blocked_sum(std::size_t rows, F f) {
  const std::size_t blocks = block_count(rows);
  if (blocks <= 1) return f(std::size_t{0}, rows);
  std::vector<double> partial(blocks);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (rows >= kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    partial[static_cast<std::size_t>(b)] = f(lo, std::min(rows, lo + kReductionBlock));
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

namespace serial {

void fill_group_dummies(const CodeLists& lists, std::span<const GroupLabel> assign, ColumnBlock out) {
  check_dummy_shape(lists, assign, out);
  std::fill(out.data, out.data + out.rows * out.cols, 0.0);
  for (std::size_t r = 0; r < out.rows; ++r)
    for (auto c : lists.row(r)) {
      const auto g = assign[c];
      if (g >= out.cols) throw UsageError("group label outside dummy block");
      out.column(g)[r] = 1.0;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void multiply_transpose(ConstColumnBlock q, std::span<const double> v, std::span<double> out) {
  for (std::size_t j = 0; j < q.cols; ++j) out[j] = dot({q.column(j), q.rows}, v);
}

void subtract_product(ConstColumnBlock q, std::span<const double> c, std::span<double> v) {
  for (std::size_t j = 0; j < q.cols; ++j) {
    const double* col = q.column(j);
    for (std::size_t r = 0; r < q.rows; ++r) v[r] -= col[r] * c[j];
  }
}

void affine_predict(ConstColumnBlock x, std::span<const double> beta, double intercept, std::span<double> out) {
  std::fill(out.begin(), out.end(), intercept);
  for (std::size_t j = 0; j < x.cols; ++j) {
    const double* col = x.column(j);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] += col[r] * beta[j];
  }
}

double sum_abs_diff(std::span<const double> y, std::span<const double> yhat) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - yhat[i]);
  return s;
}

double sum_sq_diff(std::span<const double> y, std::span<const double> yhat) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - yhat[i];
    s += d * d;
  }
  return s;
}

}  // namespace serial

namespace parallel {

void fill_group_dummies(const CodeLists& lists, std::span<const GroupLabel> assign, ColumnBlock out) {
  check_dummy_shape(lists, assign, out);
  for (auto c : lists.codes)
    if (assign[c] >= out.cols) throw UsageError("group label outside dummy block");
  const auto rows = static_cast<std::ptrdiff_t>(out.rows);
#pragma omp parallel for schedule(static) if (out.rows >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::size_t g = 0; g < out.cols; ++g) out.column(g)[r] = 0.0;
    for (auto c : lists.row(static_cast<std::size_t>(r))) out.column(assign[c])[r] = 1.0;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

void multiply_transpose(ConstColumnBlock q, std::span<const double> v, std::span<double> out) {
  const std::size_t blocks = block_count(q.rows);
  const std::size_t m = q.cols;
  std::vector<double> partial(std::max<std::size_t>(blocks, 1) * m, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (q.rows >= kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(q.rows, lo + kReductionBlock);
    for (std::size_t j = 0; j < m; ++j) {
      const double* col = q.column(j);
      double s = 0.0;
      for (std::size_t r = lo; r < hi; ++r) s += col[r] * v[r];
      partial[static_cast<std::size_t>(b) * m + j] = s;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) s += partial[b * m + j];
    out[j] = s;
  }
}

void subtract_product(ConstColumnBlock q, std::span<const double> c, std::span<double> v) {
  const auto rows = static_cast<std::ptrdiff_t>(q.rows);
#pragma omp parallel for schedule(static) if (q.rows >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    double acc = v[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < q.cols; ++j) acc -= q.column(j)[r] * c[j];
    v[static_cast<std::size_t>(r)] = acc;
  }
}

void affine_predict(ConstColumnBlock x, std::span<const double> beta, double intercept, std::span<double> out) {
  const auto rows = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static) if (x.rows >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    double acc = intercept;
    for (std::size_t j = 0; j < x.cols; ++j) acc += x.column(j)[r] * beta[j];
    out[static_cast<std::size_t>(r)] = acc;
  }
}

double sum_abs_diff(std::span<const double> y, std::span<const double> yhat) {
  return blocked_sum(y.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::abs(y[i] - yhat[i]);
    return s;
  });
}

double sum_sq_diff(std::span<const double> y, std::span<const double> yhat) {
  return blocked_sum(y.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = y[i] - yhat[i];
      s += d * d;
    }
    return s;
  });
}

}  // namespace parallel

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace riskgroups::kernels
