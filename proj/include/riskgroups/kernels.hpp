#pragma once

// Row-parallel kernels behind design-matrix assembly, the QR fit, and loss
// evaluation. `parallel` is the OpenMP implementation used at runtime;
// `serial` is the straightforward reference kept for tests and benchmarks.
//
// Parallel reductions sum fixed-size row blocks and combine the partials in
// block order, so results are bit-identical for every thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "riskgroups/partition.hpp"

namespace riskgroups::kernels {

inline constexpr std::size_t kReductionBlock = 2048;

// Compressed per-row code lists (CSR layout).
struct CodeLists {
  std::vector<std::size_t> offsets{0};
  std::vector<CodeIndex> codes;

  std::size_t rows() const { return offsets.size() - 1; }
  std::span<const CodeIndex> row(std::size_t i) const {
    return {codes.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  void push_row(std::span<const CodeIndex> row_codes) {
    codes.insert(codes.end(), row_codes.begin(), row_codes.end());
    offsets.push_back(codes.size());
  }
};

// Column-major view: element (r, c) at data[c * rows + r].
struct ColumnBlock {
  double* data;
  std::size_t rows;
  std::size_t cols;
  double* column(std::size_t c) const { return data + c * rows; }
};

struct ConstColumnBlock {
  const double* data;
  std::size_t rows;
  std::size_t cols;
  const double* column(std::size_t c) const { return data + c * rows; }
};

namespace serial {

// out(r, g) = 1 iff some code of row r has label g; out is rows x k.
void fill_group_dummies(const CodeLists& lists, std::span<const GroupLabel> assign, ColumnBlock out);
double dot(std::span<const double> a, std::span<const double> b);
// out = Q^T v
void multiply_transpose(ConstColumnBlock q, std::span<const double> v, std::span<double> out);
// v -= Q c
void subtract_product(ConstColumnBlock q, std::span<const double> c, std::span<double> v);
// out = intercept + X beta
void affine_predict(ConstColumnBlock x, std::span<const double> beta, double intercept, std::span<double> out);
double sum_abs_diff(std::span<const double> y, std::span<const double> yhat);
double sum_sq_diff(std::span<const double> y, std::span<const double> yhat);

}  // namespace serial

namespace parallel {

void fill_group_dummies(const CodeLists& lists, std::span<const GroupLabel> assign, ColumnBlock out);
double dot(std::span<const double> a, std::span<const double> b);
void multiply_transpose(ConstColumnBlock q, std::span<const double> v, std::span<double> out);
void subtract_product(ConstColumnBlock q, std::span<const double> c, std::span<double> v);
void affine_predict(ConstColumnBlock x, std::span<const double> beta, double intercept, std::span<double> out);
double sum_abs_diff(std::span<const double> y, std::span<const double> yhat);
double sum_sq_diff(std::span<const double> y, std::span<const double> yhat);

}  // namespace parallel

// Thread count used by the parallel kernels; 0 leaves the OpenMP default.
void set_thread_count(int threads);
int thread_count();

}  // namespace riskgroups::kernels
