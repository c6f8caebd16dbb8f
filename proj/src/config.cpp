#include "riskgroups/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>

namespace riskgroups {
namespace {

using Json = nlohmann::ordered_json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

void expect_object(const Json& node, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(child(path, key), "unknown key");
  }
}

double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

std::uint64_t as_u64(const Json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    throw ConfigError(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

bool as_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_numbers(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<std::string> as_strings(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], path + "/" + std::to_string(i)));
  return out;
}

template <typename F>
void with(const Json& node, const std::string& path, const char* key, F f) {
  if (auto it = node.find(key); it != node.end() && !it->is_null()) f(*it, child(path, key));
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

Schema parse_schema(const Json& node, const std::string& path) {
  expect_object(node, path, {"age_groups", "residence_groups", "min_code_count", "vocabulary"});
  Schema s = Schema::defaults();
  with(node, path, "age_groups", [&](const Json& v, const std::string& p) {
    s.age_groups = as_strings(v, p);
    if (s.age_groups.empty()) throw ConfigError(p, "must not be empty");
  });
  with(node, path, "residence_groups", [&](const Json& v, const std::string& p) {
    s.residence_groups = as_strings(v, p);
    if (s.residence_groups.empty()) throw ConfigError(p, "must not be empty");
  });
  with(node, path, "min_code_count",
       [&](const Json& v, const std::string& p) { s.min_code_count = static_cast<std::size_t>(as_u64(v, p)); });
  with(node, path, "vocabulary", [&](const Json& v, const std::string& p) { s.vocabulary = as_strings(v, p); });
  return s;
}

}  // namespace

GeneratorConfig parse_generator_config(const Json& node, const std::string& path, const Schema& schema) {
  expect_object(node, path,
                {"preset", "n_codes", "k_true", "n_rows", "male_share", "age_shares", "residence_shares", "intercept",
                 "sex_effect", "age_effects", "residence_effects", "group_effects", "prevalence",
                 "mean_codes_per_row", "prevalence_spread", "comorbidity", "noise_sd", "seed", "noise_seed"});
  GeneratorConfig g;
  g.schema = schema;
  with(node, path, "preset", [&](const Json& v, const std::string& p) {
    if (as_string(v, p) != "reference") throw ConfigError(p, "unknown preset (expected \"reference\")");
    g = reference_generator_config();
    g.schema = schema;
  });
  with(node, path, "n_codes", [&](const Json& v, const std::string& p) { g.n_codes = as_u64(v, p); });
  with(node, path, "k_true", [&](const Json& v, const std::string& p) {
    const auto k = as_u64(v, p);
    if (k > 65535) throw ConfigError(p, "too large");
    g.k_true = static_cast<int>(k);
  });
  with(node, path, "n_rows", [&](const Json& v, const std::string& p) { g.n_rows = as_u64(v, p); });
  with(node, path, "male_share", [&](const Json& v, const std::string& p) { g.male_share = as_number(v, p); });
  with(node, path, "age_shares", [&](const Json& v, const std::string& p) { g.age_shares = as_numbers(v, p); });
  with(node, path, "residence_shares",
       [&](const Json& v, const std::string& p) { g.residence_shares = as_numbers(v, p); });
  with(node, path, "intercept", [&](const Json& v, const std::string& p) { g.intercept = as_number(v, p); });
  with(node, path, "sex_effect", [&](const Json& v, const std::string& p) { g.sex_effect = as_number(v, p); });
  with(node, path, "age_effects", [&](const Json& v, const std::string& p) { g.age_effects = as_numbers(v, p); });
  with(node, path, "residence_effects",
       [&](const Json& v, const std::string& p) { g.residence_effects = as_numbers(v, p); });
  with(node, path, "group_effects", [&](const Json& v, const std::string& p) { g.group_effects = as_numbers(v, p); });
  with(node, path, "prevalence", [&](const Json& v, const std::string& p) { g.prevalence = as_numbers(v, p); });
  with(node, path, "mean_codes_per_row",
       [&](const Json& v, const std::string& p) { g.mean_codes_per_row = as_number(v, p); });
  with(node, path, "prevalence_spread",
       [&](const Json& v, const std::string& p) { g.prevalence_spread = as_number(v, p); });
  with(node, path, "comorbidity", [&](const Json& v, const std::string& p) { g.comorbidity = as_number(v, p); });
  with(node, path, "noise_sd", [&](const Json& v, const std::string& p) { g.noise_sd = as_number(v, p); });
  with(node, path, "seed", [&](const Json& v, const std::string& p) { g.seed = as_u64(v, p); });
  with(node, path, "noise_seed", [&](const Json& v, const std::string& p) { g.noise_seed = as_u64(v, p); });
  g = g.resolved();
  try {
    g.validate();
  } catch (const UsageError& e) {
    throw ConfigError(path, e.what());
  }
  return g;
}

RunConfig parse_run_config(const Json& doc, const std::filesystem::path& base_dir) {
  const std::string root;
  expect_object(doc, root,
                {"dataset", "generator", "schema", "split", "features", "chain", "grid", "cv", "out", "threads"});
  RunConfig cfg;
  cfg.base_dir = base_dir;
  cfg.echo = doc;

  with(doc, root, "schema", [&](const Json& v, const std::string& p) { cfg.schema = parse_schema(v, p); });
  with(doc, root, "dataset",
       [&](const Json& v, const std::string& p) { cfg.dataset = resolve(base_dir, as_string(v, p)); });
  with(doc, root, "generator", [&](const Json& v, const std::string& p) {
    cfg.generator = parse_generator_config(v, p, cfg.schema);
  });
  with(doc, root, "out", [&](const Json& v, const std::string& p) { cfg.out = resolve(base_dir, as_string(v, p)); });
  with(doc, root, "threads", [&](const Json& v, const std::string& p) {
    const auto t = as_u64(v, p);
    if (t > 4096) throw ConfigError(p, "unreasonable thread count");
    cfg.threads = static_cast<int>(t);
  });

  with(doc, root, "split", [&](const Json& node, const std::string& path) {
    expect_object(node, path, {"train_fraction", "seed"});
    with(node, path, "train_fraction", [&](const Json& v, const std::string& p) {
      cfg.train_fraction = as_number(v, p);
      if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) throw ConfigError(p, "must lie in (0, 1)");
    });
    with(node, path, "seed", [&](const Json& v, const std::string& p) { cfg.split_seed = as_u64(v, p); });
  });

  with(doc, root, "features", [&](const Json& node, const std::string& path) {
    expect_object(node, path, {"sex", "age", "residence"});
    with(node, path, "sex", [&](const Json& v, const std::string& p) { cfg.use_sex = as_bool(v, p); });
    with(node, path, "age", [&](const Json& v, const std::string& p) { cfg.use_age = as_bool(v, p); });
    with(node, path, "residence", [&](const Json& v, const std::string& p) { cfg.use_residence = as_bool(v, p); });
  });

  with(doc, root, "chain", [&](const Json& node, const std::string& path) {
    expect_object(node, path,
                  {"iterations", "chains", "seed", "initial", "forbid_empty", "max_distance", "loss", "cache_size",
                   "decay", "floor"});
    auto& c = cfg.chain;
    with(node, path, "iterations", [&](const Json& v, const std::string& p) {
      c.iterations = as_u64(v, p);
      if (c.iterations < 1) throw ConfigError(p, "must be at least 1");
    });
    with(node, path, "chains", [&](const Json& v, const std::string& p) {
      c.chains = as_u64(v, p);
      if (c.chains < 1) throw ConfigError(p, "must be at least 1");
    });
    with(node, path, "seed", [&](const Json& v, const std::string& p) { c.seed = as_u64(v, p); });
    with(node, path, "initial", [&](const Json& v, const std::string& p) {
      const auto s = as_string(v, p);
      if (s != "random") c.initial = resolve(base_dir, s);
    });
    with(node, path, "forbid_empty", [&](const Json& v, const std::string& p) { c.forbid_empty = as_bool(v, p); });
    with(node, path, "max_distance", [&](const Json& v, const std::string& p) {
      c.max_distance = as_u64(v, p);
      if (*c.max_distance < 1) throw ConfigError(p, "must be at least 1");
    });
    with(node, path, "loss", [&](const Json& v, const std::string& p) {
      try {
        c.loss = parse_loss_kind(as_string(v, p));
      } catch (const ConfigError&) {
        throw;
      } catch (const UsageError& e) {
        throw ConfigError(p, e.what());
      }
    });
    with(node, path, "cache_size", [&](const Json& v, const std::string& p) { c.cache_size = as_u64(v, p); });
    with(node, path, "decay", [&](const Json& v, const std::string& p) {
      c.decay = as_number(v, p);
      if (!(c.decay > 0.0 && c.decay <= 1.0)) throw ConfigError(p, "must lie in (0, 1]");
    });
    with(node, path, "floor", [&](const Json& v, const std::string& p) {
      c.floor = as_number(v, p);
      if (!(c.floor >= 0.0)) throw ConfigError(p, "must be nonnegative");
    });
    if (c.decay < 1.0 && !(c.floor > 0.0)) throw ConfigError(child(path, "floor"), "a decaying schedule needs floor > 0");
  });

  with(doc, root, "grid", [&](const Json& node, const std::string& path) {
    expect_object(node, path, {"k", "lambda", "temperature"});
    with(node, path, "k", [&](const Json& v, const std::string& p) {
      if (!v.is_array() || v.empty()) throw ConfigError(p, "expected a nonempty array of integers");
      cfg.grid.k.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto k = as_u64(v[i], p + "/" + std::to_string(i));
        if (k < 2 || k > 65535) throw ConfigError(p + "/" + std::to_string(i), "k must lie in [2, 65535]");
        cfg.grid.k.push_back(static_cast<int>(k));
      }
    });
    with(node, path, "lambda", [&](const Json& v, const std::string& p) {
      cfg.grid.lambda = as_numbers(v, p);
      if (cfg.grid.lambda.empty()) throw ConfigError(p, "must not be empty");
      for (std::size_t i = 0; i < cfg.grid.lambda.size(); ++i)
        if (!(cfg.grid.lambda[i] > 0.0)) throw ConfigError(p + "/" + std::to_string(i), "lambda must be positive");
    });
    with(node, path, "temperature", [&](const Json& v, const std::string& p) {
      cfg.grid.temperature = as_numbers(v, p);
      if (cfg.grid.temperature.empty()) throw ConfigError(p, "must not be empty");
      for (std::size_t i = 0; i < cfg.grid.temperature.size(); ++i)
        if (!(cfg.grid.temperature[i] > 0.0))
          throw ConfigError(p + "/" + std::to_string(i), "temperature must be positive");
    });
  });
  if (cfg.grid.temperature.empty()) cfg.grid.temperature = {cfg.chain.initial ? 100.0 : 1000.0};

  with(doc, root, "cv", [&](const Json& node, const std::string& path) {
    expect_object(node, path, {"folds", "seed", "partitions"});
    with(node, path, "folds", [&](const Json& v, const std::string& p) {
      const auto f = as_u64(v, p);
      if (f < 2 || f > 1000) throw ConfigError(p, "folds must lie in [2, 1000]");
      cfg.cv.folds = static_cast<int>(f);
    });
    with(node, path, "seed", [&](const Json& v, const std::string& p) { cfg.cv.seed = as_u64(v, p); });
    with(node, path, "partitions", [&](const Json& v, const std::string& p) {
      if (!v.is_array()) throw ConfigError(p, "expected an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string ip = p + "/" + std::to_string(i);
        expect_object(v[i], ip, {"name", "path"});
        if (!v[i].contains("name") || !v[i].contains("path")) throw ConfigError(ip, "needs name and path");
        cfg.cv.partitions.push_back(
            {as_string(v[i]["name"], ip + "/name"), resolve(base_dir, as_string(v[i]["path"], ip + "/path"))});
      }
    });
  });

  if (!cfg.use_sex && !cfg.use_age && !cfg.use_residence)
    throw ConfigError("/features", "at least one demographic block must stay enabled");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_run_config(doc, base);
}

nlohmann::ordered_json to_json(const TrueCoefficients& c, const Dataset& data) {
  Json j;
  j["intercept"] = c.intercept;
  j["sex"] = c.sex;
  Json age = Json::object();
  for (std::size_t i = 0; i < c.age.size(); ++i) age[data.age_labels.at(i)] = c.age[i];
  j["age"] = age;
  Json res = Json::object();
  for (std::size_t i = 0; i < c.residence.size(); ++i) res[data.residence_labels.at(i)] = c.residence[i];
  j["residence"] = res;
  j["group"] = c.group;
  return j;
}

}  // namespace riskgroups
