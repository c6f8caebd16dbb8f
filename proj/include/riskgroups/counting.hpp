#pragma once

#include <cstddef>

#include <boost/multiprecision/cpp_int.hpp>

namespace riskgroups {

using BigInt = boost::multiprecision::cpp_int;

// Exact C(n, j).
BigInt binomial(std::size_t n, std::size_t j);

// Number of labeled k-partitions at reassignment distance exactly j from any
// fixed partition of n codes: C(n, j) (k-1)^j.
BigInt count_at_distance(std::size_t n, int k, std::size_t j);

// Sum of count_at_distance over 0..j.
BigInt count_within_distance(std::size_t n, int k, std::size_t j);

// log(count_at_distance), evaluated in floating point for large n.
double log_count_at_distance(std::size_t n, int k, std::size_t j);

}  // namespace riskgroups
