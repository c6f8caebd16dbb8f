#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace riskgroups {

using GroupLabel = std::uint16_t;
using CodeIndex = std::uint32_t;

// Ordered set of distinct category codes. Indices are stable for the
// lifetime of the object and are what partitions and datasets refer to.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> codes);

  std::size_t size() const { return codes_.size(); }
  const std::string& code(CodeIndex i) const { return codes_.at(i); }
  const std::vector<std::string>& codes() const { return codes_; }

  std::optional<CodeIndex> find(std::string_view code) const;
  bool contains(std::string_view code) const { return find(code).has_value(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.codes_ == b.codes_; }

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, CodeIndex> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

VocabularyPtr make_vocabulary(std::vector<std::string> codes);

// Labeled k-partition of a vocabulary: every code carries exactly one label in
// [0, k). Groups are identifiable, so relabelings are distinct partitions, and
// groups may be empty.
class Partition {
 public:
  Partition(VocabularyPtr vocabulary, int k, std::vector<GroupLabel> assignment);

  // All codes in group 0.
  static Partition uniform(VocabularyPtr vocabulary, int k);

  int k() const { return k_; }
  std::size_t size() const { return assign_.size(); }
  const VocabularyPtr& vocabulary() const { return vocabulary_; }

  GroupLabel operator[](CodeIndex c) const { return assign_[c]; }
  std::span<const GroupLabel> assignment() const { return assign_; }

  // Returns a copy with code c moved to group g.
  Partition with(CodeIndex c, GroupLabel g) const;
  void set(CodeIndex c, GroupLabel g);

  std::vector<std::size_t> group_sizes() const;
  bool has_empty_group() const;

  // FNV-1a over the assignment vector; used for energy memoisation.
  std::uint64_t hash() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.k_ == b.k_ && a.assign_ == b.assign_ &&
           (a.vocabulary_ == b.vocabulary_ || *a.vocabulary_ == *b.vocabulary_);
  }

 private:
  VocabularyPtr vocabulary_;
  int k_;
  std::vector<GroupLabel> assign_;
};

// Throws UsageError unless p and q are defined over the same vocabulary.
void require_same_vocabulary(const Partition& p, const Partition& q);

// Number of codes whose label differs. Requires equal vocabularies and k.
std::size_t reassignment_distance(const Partition& p, const Partition& q);

// Label-invariant partition distance: n minus the weight of a maximum matching
// between the groups of p and q, weighted by intersection size. k may differ.
std::size_t gusfield_distance(const Partition& p, const Partition& q);

// Maximum-weight assignment on a rows x cols weight matrix (row-major).
// Returns, for every row, the matched column or -1. Exposed for tests.
std::vector<int> max_weight_matching(std::span<const long long> weights, int rows, int cols);

}  // namespace riskgroups
