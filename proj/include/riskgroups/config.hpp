#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskgroups/dataset.hpp"
#include "riskgroups/energy.hpp"
#include "riskgroups/error.hpp"
#include "riskgroups/synthetic.hpp"

namespace riskgroups {

// Malformed run configuration; the message starts with the JSON pointer of
// the offending value.
class ConfigError : public UsageError {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : UsageError((path.empty() ? "/" : path) + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ChainSettings {
  std::size_t iterations = 1000;
  std::size_t chains = 1;
  std::uint64_t seed = 1;
  // "random", or a partition CSV path resolved against the config directory.
  std::optional<std::filesystem::path> initial;
  bool forbid_empty = false;
  std::optional<std::size_t> max_distance;
  LossKind loss = LossKind::mae;
  std::size_t cache_size = 4096;
  double decay = 1.0;
  double floor = 0.0;
};

struct GridSettings {
  std::vector<int> k{2};
  std::vector<double> lambda{5.0};
  // Defaults to 1000 for random seeds and 100 for file seeds when left empty.
  std::vector<double> temperature;
};

struct NamedPartitionPath {
  std::string name;
  std::filesystem::path path;
};

struct CvSettings {
  int folds = 5;
  std::uint64_t seed = 11;
  std::vector<NamedPartitionPath> partitions;
};

struct RunConfig {
  std::filesystem::path base_dir;
  std::optional<std::filesystem::path> dataset;
  std::optional<GeneratorConfig> generator;
  Schema schema = Schema::defaults();
  double train_fraction = 0.8;
  std::uint64_t split_seed = 7;
  bool use_sex = true;
  bool use_age = true;
  bool use_residence = true;
  ChainSettings chain;
  GridSettings grid;
  CvSettings cv;
  std::optional<std::filesystem::path> out;
  int threads = 0;
  // The document as given, echoed into run summaries.
  nlohmann::ordered_json echo;
};

RunConfig parse_run_config(const nlohmann::ordered_json& doc, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

// Generator settings; "preset": "reference" starts from the reference dataset.
GeneratorConfig parse_generator_config(const nlohmann::ordered_json& node, const std::string& path,
                                       const Schema& schema);

nlohmann::ordered_json to_json(const TrueCoefficients& coefficients, const Dataset& data);

}  // namespace riskgroups
