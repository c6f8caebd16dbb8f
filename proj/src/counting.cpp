#include "riskgroups/counting.hpp"

#include <cmath>
#include <string>

#include "riskgroups/error.hpp"

namespace riskgroups {
namespace {

void check_args(std::size_t n, int k, std::size_t j) {
  if (k < 2) throw UsageError("group count must be at least 2, got " + std::to_string(k));
  if (j > n) throw UsageError("distance " + std::to_string(j) + " exceeds code count " + std::to_string(n));
}

}  // namespace

BigInt binomial(std::size_t n, std::size_t j) {
  if (j > n) return 0;
  if (j > n - j) j = n - j;
  BigInt result = 1;
  // Each partial product is itself a binomial coefficient, so the division is exact.
  for (std::size_t i = 1; i <= j; ++i) {
    result *= n - j + i;
    result /= i;
  }
  return result;
}

BigInt count_at_distance(std::size_t n, int k, std::size_t j) {
  check_args(n, k, j);
  BigInt base = k - 1;
  return binomial(n, j) * boost::multiprecision::pow(base, static_cast<unsigned>(j));
}

BigInt count_within_distance(std::size_t n, int k, std::size_t j) {
  check_args(n, k, j);
  BigInt total = 0;
  for (std::size_t i = 0; i <= j; ++i) total += count_at_distance(n, k, i);
  return total;
}

double log_count_at_distance(std::size_t n, int k, std::size_t j) {
  check_args(n, k, j);
  const double nd = static_cast<double>(n);
  const double jd = static_cast<double>(j);
  return std::lgamma(nd + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) +
         jd * std::log(static_cast<double>(k - 1));
}

}  // namespace riskgroups
