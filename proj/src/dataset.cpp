#include "riskgroups/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "riskgroups/error.hpp"

namespace riskgroups {
namespace {

constexpr const char* kHeader = "person_id,sex,age_group,residence_group,expenditure,codes";

std::vector<std::string_view> split_view(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

int label_index(const std::vector<std::string>& labels, std::string_view value) {
  auto it = std::find(labels.begin(), labels.end(), value);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

struct RawRow {
  std::size_t line;
  PredictionRow row;
  std::vector<std::string> codes;
};

}  // namespace

Schema Schema::defaults() {
  Schema s;
  s.age_groups = {"0-1",   "2-4",   "5-18",  "19-44", "45-49", "50-54",
                  "55-59", "60-64", "65-69", "70-74", "74+"};
  s.residence_groups = {"urban", "normal", "special"};
  return s;
}

SplitPlan SplitPlan::holdout(double train_fraction, std::uint64_t seed) {
  SplitPlan p;
  p.kind = Kind::holdout;
  p.train_fraction = train_fraction;
  p.seed = seed;
  return p;
}

SplitPlan SplitPlan::kfold(int folds, std::uint64_t seed) {
  SplitPlan p;
  p.kind = Kind::kfold;
  p.folds = folds;
  p.seed = seed;
  return p;
}

void SplitPlan::validate() const {
  if (kind == Kind::holdout && !(train_fraction > 0.0 && train_fraction < 1.0))
    throw UsageError("holdout train fraction must lie in (0, 1)");
  if (kind == Kind::kfold && folds < 2) throw UsageError("k-fold split needs at least 2 folds");
}

std::vector<std::size_t> SplitAssignment::train_rows(int round) const {
  if (round < 0 || round >= rounds()) throw UsageError("split round out of range");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    const bool test = plan.kind == SplitPlan::Kind::holdout ? fold[i] == 1 : fold[i] == round;
    if (!test) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> SplitAssignment::test_rows(int round) const {
  if (round < 0 || round >= rounds()) throw UsageError("split round out of range");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    const bool test = plan.kind == SplitPlan::Kind::holdout ? fold[i] == 1 : fold[i] == round;
    if (test) out.push_back(i);
  }
  return out;
}

void Dataset::validate() const {
  if (!vocabulary) throw DataError("dataset has no vocabulary");
  if (rows.empty()) throw DataError("dataset has no rows");
  for (const auto& r : rows) {
    if (r.sex > 1) throw DataError("row '" + r.person_id + "': sex must be 0 or 1");
    if (r.age_group >= age_labels.size()) throw DataError("row '" + r.person_id + "': age group out of range");
    if (r.residence_group >= residence_labels.size())
      throw DataError("row '" + r.person_id + "': residence group out of range");
    if (!(r.expenditure >= 0.0) || !std::isfinite(r.expenditure))
      throw DataError("row '" + r.person_id + "': expenditure must be finite and nonnegative");
    for (auto c : r.history)
      if (c >= vocabulary->size()) throw DataError("row '" + r.person_id + "': code index out of range");
  }
  if (split && split->fold.size() != rows.size()) throw DataError("split assignment does not cover every row");
}

Dataset read_dataset(std::istream& in, const Schema& schema, LoadReport* report, const std::string& source) {
  if (schema.age_groups.empty() || schema.residence_groups.empty())
    throw UsageError("schema must declare age and residence label sets");
  auto where = [&source](std::size_t line) { return source + ":" + std::to_string(line) + ": "; };

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError(where(1) + "empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw DataError(where(1) + "expected header '" + std::string(kHeader) + "'");

  std::vector<RawRow> raw;
  std::unordered_map<std::string, std::size_t> seen_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_view(line, ',');
    if (fields.size() != 6)
      throw DataError(where(line_no) + "expected 6 fields, found " + std::to_string(fields.size()));
    RawRow r{line_no, {}, {}};
    r.row.person_id = std::string(fields[0]);
    if (r.row.person_id.empty()) throw DataError(where(line_no) + "empty person_id");
    auto [dup, fresh] = seen_ids.emplace(r.row.person_id, line_no);
    if (!fresh)
      throw DataError(where(line_no) + "duplicate person_id '" + r.row.person_id + "' (first seen on line " +
                      std::to_string(dup->second) + ")");
    if (fields[1] == "0" || fields[1] == "1") {
      r.row.sex = fields[1] == "1";
    } else {
      throw DataError(where(line_no) + "sex must be 0 or 1, got '" + std::string(fields[1]) + "'");
    }
    const int age = label_index(schema.age_groups, fields[2]);
    if (age < 0) throw DataError(where(line_no) + "unknown age_group '" + std::string(fields[2]) + "'");
    r.row.age_group = static_cast<std::uint16_t>(age);
    const int res = label_index(schema.residence_groups, fields[3]);
    if (res < 0) throw DataError(where(line_no) + "unknown residence_group '" + std::string(fields[3]) + "'");
    r.row.residence_group = static_cast<std::uint8_t>(res);
    double y = 0.0;
    const auto exp_field = fields[4];
    auto [ptr, ec] = std::from_chars(exp_field.data(), exp_field.data() + exp_field.size(), y);
    if (ec != std::errc() || ptr != exp_field.data() + exp_field.size() || !std::isfinite(y) || y < 0.0)
      throw DataError(where(line_no) + "expenditure must be a nonnegative number, got '" + std::string(exp_field) +
                      "'");
    r.row.expenditure = y;
    if (!fields[5].empty()) {
      for (auto code : split_view(fields[5], ';')) {
        if (code.empty()) throw DataError(where(line_no) + "empty code in codes list");
        r.codes.emplace_back(code);
      }
    }
    raw.push_back(std::move(r));
  }
  if (raw.empty()) throw DataError(where(line_no) + "no data rows");

  // Full vocabulary before screening: declared order, or sorted observed codes.
  std::vector<std::string> base;
  if (schema.vocabulary) {
    base = *schema.vocabulary;
  } else {
    std::map<std::string, int> observed;
    for (const auto& r : raw)
      for (const auto& c : r.codes) observed.emplace(c, 0);
    for (auto& [code, unused] : observed) base.push_back(code);
  }
  std::unordered_map<std::string, std::size_t> base_index;
  for (std::size_t i = 0; i < base.size(); ++i) base_index.emplace(base[i], i);

  std::vector<std::size_t> counts(base.size(), 0);
  std::vector<std::vector<std::size_t>> histories(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto& h = histories[i];
    for (const auto& c : raw[i].codes) {
      auto it = base_index.find(c);
      if (it == base_index.end())
        throw DataError(where(raw[i].line) + "code '" + c + "' is not in the declared vocabulary");
      h.push_back(it->second);
    }
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    for (auto c : h) ++counts[c];
  }

  std::vector<std::string> kept;
  std::vector<long> remap(base.size(), -1);
  LoadReport local;
  for (std::size_t i = 0; i < base.size(); ++i) {
    local.prevalence.emplace_back(base[i], counts[i]);
    if (counts[i] >= schema.min_code_count) {
      remap[i] = static_cast<long>(kept.size());
      kept.push_back(base[i]);
    } else {
      local.screened_out.push_back(base[i]);
    }
  }
  if (kept.empty()) throw DataError(source + ": no code reaches min_code_count=" + std::to_string(schema.min_code_count));

  Dataset data;
  data.vocabulary = make_vocabulary(std::move(kept));
  data.age_labels = schema.age_groups;
  data.residence_labels = schema.residence_groups;
  data.rows.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    PredictionRow row = std::move(raw[i].row);
    for (auto c : histories[i])
      if (remap[c] >= 0) row.history.push_back(static_cast<CodeIndex>(remap[c]));
    data.rows.push_back(std::move(row));
  }
  local.rows = data.rows.size();
  local.vocabulary_size = data.vocabulary->size();
  if (report) *report = std::move(local);
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  return read_dataset(in, schema, report, path.string());
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << kHeader << '\n';
  for (const auto& r : data.rows) {
    out << r.person_id << ',' << int{r.sex} << ',' << data.age_labels.at(r.age_group) << ','
        << data.residence_labels.at(r.residence_group) << ',' << format_double(r.expenditure) << ',';
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      if (i) out << ';';
      out << data.vocabulary->code(r.history[i]);
    }
    out << '\n';
  }
}

std::uint64_t split_key(const std::string& person_id, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : person_id) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  // splitmix64 finaliser over the id hash and seed.
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SplitAssignment assign_split(const Dataset& data, const SplitPlan& plan) {
  plan.validate();
  const std::size_t n = data.rows.size();
  if (n == 0) throw UsageError("cannot split an empty dataset");
  std::vector<std::pair<std::uint64_t, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {split_key(data.rows[i].person_id, plan.seed), i};
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return data.rows[a.second].person_id < data.rows[b.second].person_id;
  });

  SplitAssignment out{plan, std::vector<int>(n, 0)};
  if (plan.kind == SplitPlan::Kind::holdout) {
    const auto train = static_cast<std::size_t>(std::llround(plan.train_fraction * static_cast<double>(n)));
    if (train == 0 || train == n)
      throw UsageError("holdout fraction leaves an empty train or test split for " + std::to_string(n) + " rows");
    for (std::size_t r = train; r < n; ++r) out.fold[order[r].second] = 1;
  } else {
    if (static_cast<std::size_t>(plan.folds) > n)
      throw UsageError("fold count " + std::to_string(plan.folds) + " exceeds row count " + std::to_string(n));
    for (std::size_t r = 0; r < n; ++r) out.fold[order[r].second] = static_cast<int>(r % plan.folds);
  }
  return out;
}

Dataset make_split(Dataset data, const SplitPlan& plan) {
  data.split = assign_split(data, plan);
  return data;
}

}  // namespace riskgroups
