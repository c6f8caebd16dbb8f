#include "riskgroups/partition.hpp"

#include <algorithm>
#include <limits>

#include "riskgroups/error.hpp"

namespace riskgroups {

Vocabulary::Vocabulary(std::vector<std::string> codes) : codes_(std::move(codes)) {
  if (codes_.empty()) throw UsageError("vocabulary must contain at least one code");
  index_.reserve(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i].empty()) throw UsageError("vocabulary codes must be nonempty");
    auto [it, inserted] = index_.emplace(codes_[i], static_cast<CodeIndex>(i));
    if (!inserted) throw UsageError("duplicate vocabulary code '" + codes_[i] + "'");
  }
}

std::optional<CodeIndex> Vocabulary::find(std::string_view code) const {
  auto it = index_.find(std::string(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VocabularyPtr make_vocabulary(std::vector<std::string> codes) {
  return std::make_shared<const Vocabulary>(std::move(codes));
}

Partition::Partition(VocabularyPtr vocabulary, int k, std::vector<GroupLabel> assignment)
    : vocabulary_(std::move(vocabulary)), k_(k), assign_(std::move(assignment)) {
  if (!vocabulary_) throw UsageError("partition requires a vocabulary");
  if (k_ < 2 || k_ > std::numeric_limits<GroupLabel>::max())
    throw UsageError("partition group count must be at least 2, got " + std::to_string(k_));
  if (assign_.size() != vocabulary_->size())
    throw UsageError("partition assigns " + std::to_string(assign_.size()) + " codes but vocabulary has " +
                     std::to_string(vocabulary_->size()));
  for (std::size_t c = 0; c < assign_.size(); ++c) {
    if (assign_[c] >= k_)
      throw UsageError("code '" + vocabulary_->code(static_cast<CodeIndex>(c)) + "' has label " +
                       std::to_string(assign_[c]) + " outside [0, " + std::to_string(k_ - 1) + "]");
  }
}

Partition Partition::uniform(VocabularyPtr vocabulary, int k) {
  const auto n = vocabulary ? vocabulary->size() : 0;
  return Partition(std::move(vocabulary), k, std::vector<GroupLabel>(n, 0));
}

Partition Partition::with(CodeIndex c, GroupLabel g) const {
  Partition copy = *this;
  copy.set(c, g);
  return copy;
}

void Partition::set(CodeIndex c, GroupLabel g) {
  if (g >= k_) throw UsageError("label " + std::to_string(g) + " outside partition range");
  assign_.at(c) = g;
}

std::vector<std::size_t> Partition::group_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
  for (auto g : assign_) ++sizes[g];
  return sizes;
}

bool Partition::has_empty_group() const {
  auto sizes = group_sizes();
  return std::find(sizes.begin(), sizes.end(), 0u) != sizes.end();
}

std::uint64_t Partition::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(k_));
  for (auto g : assign_) {
    mix(g & 0xffu);
    mix(g >> 8);
  }
  return h;
}

void require_same_vocabulary(const Partition& p, const Partition& q) {
  if (p.vocabulary() != q.vocabulary() && !(*p.vocabulary() == *q.vocabulary()))
    throw UsageError("partitions are defined over different vocabularies");
}

std::size_t reassignment_distance(const Partition& p, const Partition& q) {
  require_same_vocabulary(p, q);
  if (p.k() != q.k())
    throw UsageError("reassignment distance requires equal group counts (" + std::to_string(p.k()) + " vs " +
                     std::to_string(q.k()) + ")");
  auto a = p.assignment();
  auto b = q.assignment();
  std::size_t d = 0;
  for (std::size_t c = 0; c < a.size(); ++c) d += a[c] != b[c];
  return d;
}

// Hungarian algorithm (potentials form) on a square cost matrix, minimising.
std::vector<int> max_weight_matching(std::span<const long long> weights, int rows, int cols) {
  if (rows < 0 || cols < 0 || weights.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw UsageError("matching weight matrix has inconsistent shape");
  const int n = std::max(rows, cols);
  if (n == 0) return {};
  auto cost = [&](int i, int j) -> long long {
    if (i >= rows || j >= cols) return 0;
    return -weights[static_cast<std::size_t>(i) * cols + j];
  };
  constexpr long long inf = std::numeric_limits<long long>::max() / 4;
  // 1-based arrays; p[j] is the row matched to column j.
  std::vector<long long> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      long long delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> match(static_cast<std::size_t>(rows), -1);
  for (int j = 1; j <= n; ++j) {
    const int i = p[j] - 1;
    if (i < rows && j - 1 < cols) match[static_cast<std::size_t>(i)] = j - 1;
  }
  return match;
}

std::size_t gusfield_distance(const Partition& p, const Partition& q) {
  require_same_vocabulary(p, q);
  const int kp = p.k();
  const int kq = q.k();
  std::vector<long long> overlap(static_cast<std::size_t>(kp) * kq, 0);
  auto a = p.assignment();
  auto b = q.assignment();
  for (std::size_t c = 0; c < a.size(); ++c) ++overlap[static_cast<std::size_t>(a[c]) * kq + b[c]];
  const auto match = max_weight_matching(overlap, kp, kq);
  long long kept = 0;
  for (int i = 0; i < kp; ++i) {
    if (match[i] >= 0) kept += overlap[static_cast<std::size_t>(i) * kq + match[i]];
  }
  return a.size() - static_cast<std::size_t>(kept);
}

}  // namespace riskgroups
