#include "riskgroups/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "json.hpp"
#include "riskgroups/chain.hpp"
#include "riskgroups/config.hpp"
#include "riskgroups/dataset.hpp"
#include "riskgroups/energy.hpp"
#include "riskgroups/error.hpp"
#include "riskgroups/evaluation.hpp"
#include "riskgroups/kernels.hpp"
#include "riskgroups/partition_io.hpp"
#include "riskgroups/synthetic.hpp"
#include "riskgroups/trace_io.hpp"

namespace riskgroups {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

class Log {
 public:
  Log(std::ostream& os, bool quiet) : os_(os), quiet_(quiet) {}
  void info(const std::string& message) const {
    if (!quiet_) os_ << message << '\n';
  }
  // Warnings are printed even in quiet mode.
  void warn(const std::string& message) const { os_ << "warning: " << message << '\n'; }

 private:
  std::ostream& os_;
  bool quiet_;
};

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

RunConfig load_config(const CommandOptions& options) {
  if (!options.config) throw UsageError("--config is required");
  return load_run_config(*options.config);
}

fs::path output_dir(const CommandOptions& options, const RunConfig& cfg) {
  if (options.out) return *options.out;
  if (cfg.out) return *cfg.out;
  throw UsageError("no output directory: pass --out or set \"out\" in the config");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory '" + dir.string() + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct LoadedData {
  Dataset data;
  std::vector<std::string> screened_out;
  Json info;
};

LoadedData load_data(const RunConfig& cfg, const Log& log) {
  LoadedData out;
  if (cfg.dataset) {
    LoadReport report;
    out.data = load_dataset(*cfg.dataset, cfg.schema, &report);
    out.screened_out = report.screened_out;
    for (const auto& code : report.screened_out)
      log.warn("code " + code + " has fewer than " + std::to_string(cfg.schema.min_code_count) +
               " positive rows and was removed from the vocabulary");
    out.info["source"] = "file";
  } else if (cfg.generator) {
    out.data = generate_synthetic(*cfg.generator).data;
    out.info["source"] = "generator";
  } else {
    throw ConfigError("", "needs either \"dataset\" or \"generator\"");
  }
  out.info["rows"] = out.data.size();
  out.info["vocabulary_size"] = out.data.vocabulary->size();
  out.info["screened_out"] = out.screened_out;
  log.info("loaded " + std::to_string(out.data.size()) + " rows over " +
           std::to_string(out.data.vocabulary->size()) + " codes");
  return out;
}

ModelSpec feature_template(const RunConfig& cfg) {
  ModelSpec spec{cfg.use_sex, cfg.use_age, cfg.use_residence, std::nullopt};
  return spec;
}

Json stats_json(const EnergyStats& s) {
  Json j;
  j["count"] = s.count;
  j["min"] = s.min;
  j["max"] = s.max;
  j["mean"] = s.mean;
  j["std"] = s.std;
  return j;
}

std::string cell_name(int k, double lambda, double temperature) {
  return "k" + std::to_string(k) + "_lambda" + format_double(lambda) + "_T" + format_double(temperature);
}

std::string partition_csv(const Partition& p) {
  std::ostringstream os;
  write_partition(os, p);
  return os.str();
}

constexpr std::size_t kMaxListedFailures = 20;

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw DataError("write failed on '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

int resolve_threads(std::optional<int> flag, int config_threads) {
  if (flag) {
    if (*flag < 1) throw UsageError("--threads must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv(kThreadsEnv); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096)
      throw UsageError(std::string(kThreadsEnv) + " must be a positive integer, got '" + env + "'");
    return static_cast<int>(v);
  }
  if (config_threads > 0) return config_threads;
  return std::max(1, omp_get_max_threads());
}

int cmd_generate(const CommandOptions& options, std::ostream& os) {
  const Log log(os, options.quiet);
  const RunConfig cfg = load_config(options);
  if (!cfg.generator) throw ConfigError("/generator", "generate needs a generator section");
  GeneratorConfig gen = *cfg.generator;
  if (options.seed) gen.seed = *options.seed;
  const fs::path out = output_dir(options, cfg);
  ensure_dir(out);

  const SyntheticData synthetic = generate_synthetic(gen);
  std::ostringstream data;
  write_dataset(data, synthetic.data);
  write_file_atomic(out / "dataset.csv", data.str());
  write_file_atomic(out / "planted_partition.csv", partition_csv(synthetic.planted));
  Json coefficients = to_json(synthetic.coefficients, synthetic.data);
  coefficients["seed"] = gen.seed;
  coefficients["prevalence"] = synthetic.prevalence;
  write_file_atomic(out / "true_coefficients.json", dump(coefficients));
  log.info("wrote " + std::to_string(synthetic.data.size()) + " rows, planted k=" + std::to_string(gen.k_true) +
           " partition and coefficients to " + out.string());
  return kExitOk;
}

int cmd_optimize(const CommandOptions& options, std::ostream& os) {
  const Log log(os, options.quiet);
  RunConfig cfg = load_config(options);
  if (options.seed) cfg.chain.seed = *options.seed;
  const int threads = resolve_threads(options.threads, cfg.threads);
  kernels::set_thread_count(threads);
  const fs::path out = output_dir(options, cfg);

  LoadedData loaded = load_data(cfg, log);
  const Dataset data = make_split(std::move(loaded.data), SplitPlan::holdout(cfg.train_fraction, cfg.split_seed));
  const EnergyModel model(data, feature_template(cfg), cfg.chain.loss);
  ensure_dir(out / "cells");

  Json summary;
  summary["config"] = cfg.echo;
  summary["chain_seed"] = cfg.chain.seed;
  Json dataset = loaded.info;
  dataset["train_rows"] = model.train_rows();
  dataset["test_rows"] = model.test_rows();
  dataset["train_fraction"] = cfg.train_fraction;
  dataset["split_seed"] = cfg.split_seed;
  summary["dataset"] = dataset;
  summary["loss"] = std::string(to_string(cfg.chain.loss));
  Json cells = Json::array();
  Json timing_cells = Json::array();
  std::size_t failed_cells = 0, total_cells = 0;
  const auto run_start = std::chrono::steady_clock::now();

  for (int k : cfg.grid.k) {
    for (double lambda : cfg.grid.lambda) {
      for (double temperature : cfg.grid.temperature) {
        ++total_cells;
        const std::string name = cell_name(k, lambda, temperature);
        const fs::path rel = fs::path("cells") / name;
        Json cell;
        cell["name"] = name;
        cell["k"] = k;
        cell["lambda"] = lambda;
        cell["temperature"] = temperature;
        cell["iterations"] = cfg.chain.iterations;
        Json timing;
        timing["cell"] = name;
        Json chain_seconds = Json::array();
        try {
          ensure_dir(out / rel);
          ChainConfig cc;
          cc.iterations = cfg.chain.iterations;
          cc.temperature = {temperature, cfg.chain.decay, cfg.chain.floor};
          cc.seed = cfg.chain.seed;
          cc.proposal.k = k;
          cc.proposal.lambda = lambda;
          cc.proposal.max_distance = cfg.chain.max_distance;
          cc.proposal.forbid_empty = cfg.chain.forbid_empty;
          cc.cache_capacity = cfg.chain.cache_size;
          if (cfg.chain.initial) {
            PartitionReadOptions ro;
            ro.k = k;
            ro.ignorable = loaded.screened_out;
            cc.initial = load_partition(*cfg.chain.initial, model.vocabulary(), ro).partition;
          }

          const std::size_t chains = cfg.chain.chains;
          std::vector<std::unique_ptr<TraceWriter>> writers;
          for (std::size_t i = 0; i < chains; ++i)
            writers.push_back(
                std::make_unique<TraceWriter>(out / rel / ("chain_" + std::to_string(i) + ".trace.jsonl")));
          auto make_callback = [&writers](std::size_t i) -> StepCallback {
            TraceWriter* w = writers[i].get();
            return [w](const TraceRecord& r, const Partition&) { w->write(r); };
          };
          log.info("cell " + name + ": " + std::to_string(chains) + " chain(s) x " +
                   std::to_string(cfg.chain.iterations) + " iterations");
          const MultistartResult result = run_multistart(model, cc, chains, threads, make_callback);
          for (auto& w : writers) w->close();

          Json chain_list = Json::array();
          for (std::size_t i = 0; i < chains; ++i) {
            const auto& slot = result.chains[i];
            const std::string stem = "chain_" + std::to_string(i);
            Json c;
            c["chain"] = i;
            c["seed"] = slot.seed;
            c["trace"] = (rel / (stem + ".trace.jsonl")).generic_string();
            if (!slot.result) {
              c["status"] = "failed";
              c["error"] = slot.error;
              chain_seconds.push_back(nullptr);
              log.warn("cell " + name + " chain " + std::to_string(i) + " failed: " + slot.error);
            } else {
              const auto& r = *slot.result;
              write_file_atomic(out / rel / (stem + ".best.csv"), partition_csv(r.best_partition));
              c["status"] = "ok";
              c["best_partition"] = (rel / (stem + ".best.csv")).generic_string();
              c["best_energy"] = r.best_energy;
              c["initial_energy"] = r.trace.initial_energy;
              c["final_energy"] = r.trace.records.empty() ? r.trace.initial_energy
                                                          : r.trace.state_energies().back();
              c["accepted"] = r.trace.accepted;
              c["acceptance_rate"] = r.trace.acceptance_rate();
              c["failed_proposals"] = r.trace.failures.size();
              Json failures = Json::array();
              for (std::size_t f = 0; f < std::min(kMaxListedFailures, r.trace.failures.size()); ++f)
                failures.push_back(r.trace.failures[f]);
              c["failures"] = failures;
              c["energies"] = stats_json(slot.stats);
              chain_seconds.push_back(r.trace.wall_seconds);
            }
            chain_list.push_back(c);
          }
          cell["chains"] = chain_list;
          cell["table"] = stats_json(result.pooled);
          if (!result.winner) throw ChainError("every chain failed");
          const auto& winner = *result.chains[*result.winner].result;
          write_file_atomic(out / rel / "best.csv", partition_csv(winner.best_partition));
          Json w;
          w["chain"] = *result.winner;
          w["seed"] = result.chains[*result.winner].seed;
          w["best_energy"] = winner.best_energy;
          w["partition"] = (rel / "best.csv").generic_string();
          cell["winner"] = w;
          cell["status"] = "ok";
          log.info("cell " + name + ": best energy " + format_double(winner.best_energy));
        } catch (const std::exception& e) {
          ++failed_cells;
          cell["status"] = "failed";
          cell["error"] = e.what();
          log.warn("cell " + name + " failed: " + e.what());
        }
        timing["chains"] = chain_seconds;
        timing_cells.push_back(timing);
        cells.push_back(cell);
      }
    }
  }
  summary["cells"] = cells;
  summary["failed_cells"] = failed_cells;
  write_file_atomic(out / "summary.json", dump(summary));

  Json timing;
  timing["threads"] = threads;
  timing["cells"] = timing_cells;
  timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
  write_file_atomic(out / "timing.json", dump(timing));

  if (failed_cells == total_cells) {
    log.warn("every grid cell failed");
    return kExitGridFailure;
  }
  log.info("wrote " + (out / "summary.json").string());
  return kExitOk;
}

int cmd_cv(const CommandOptions& options, std::ostream& os) {
  const Log log(os, options.quiet);
  RunConfig cfg = load_config(options);
  if (options.seed) cfg.cv.seed = *options.seed;
  const int threads = resolve_threads(options.threads, cfg.threads);
  kernels::set_thread_count(threads);
  const fs::path out = output_dir(options, cfg);

  LoadedData loaded = load_data(cfg, log);
  std::vector<NamedPartition> partitions;
  PartitionReadOptions ro;
  ro.ignorable = loaded.screened_out;
  for (const auto& entry : cfg.cv.partitions)
    partitions.push_back({entry.name, load_partition(entry.path, loaded.data.vocabulary, ro).partition});
  ensure_dir(out);

  const auto ladder = spec_ladder(partitions);
  const CvReport report = cross_validate(loaded.data, ladder, cfg.cv.folds, cfg.cv.seed, threads);

  // Holdout energies under the optimize split, for re-scoring learned partitions.
  const Dataset holdout = make_split(loaded.data, SplitPlan::holdout(cfg.train_fraction, cfg.split_seed));
  const EnergyModel model(holdout, feature_template(cfg), cfg.chain.loss);
  Json rescored = Json::array();
  for (const auto& p : partitions) {
    const auto e = model.evaluate(p.partition);
    Json r;
    r["name"] = p.name;
    r["k"] = p.partition.k();
    r["loss"] = std::string(to_string(cfg.chain.loss));
    r["energy"] = e.value;
    r["train_loss"] = e.train_loss;
    r["test_loss"] = e.test_loss;
    rescored.push_back(r);
  }

  Json j;
  j["config"] = cfg.echo;
  j["folds"] = report.folds;
  j["seed"] = report.seed;
  j["rows"] = report.rows;
  j["mean_expenditure"] = report.mean_expenditure;
  j["decile_rows"] = report.decile_rows;
  j["decile_base"] = "pooled out-of-fold predictions; deciles ranked by observed expenditure";
  Json specs = Json::array();
  std::vector<std::string> names;
  for (const auto& s : report.specs) {
    names.push_back(s.name);
    Json e;
    e["name"] = s.name;
    e["fold_mae"] = s.fold_mae;
    e["mean_mae"] = s.mean_mae;
    e["lower_decile_mae"] = s.lower_decile_mae;
    e["upper_decile_mae"] = s.upper_decile_mae;
    e["mean_prediction"] = s.mean_prediction;
    e["predictive_ratio"] = s.test_ratio;
    e["train_predictive_ratio"] = s.train_ratio;
    specs.push_back(e);
  }
  j["specs"] = specs;
  Json rel;
  rel["names"] = names;
  rel["matrix"] = report.relative_mae;
  j["relative_mae"] = rel;
  j["holdout_energy"] = rescored;
  write_file_atomic(out / "cv_report.json", dump(j));

  std::ostringstream md;
  md << "# Cross-validation report\n\n";
  md << report.folds << "-fold cross-validation over " << report.rows << " rows (fold seed " << report.seed
     << "). Mean observed expenditure: " << fixed(report.mean_expenditure, 2) << ".\n\n";
  md << "Decile columns use the pooled out-of-fold predictions. Rows are ranked by observed expenditure and the "
     << report.decile_rows << " lowest and highest form the lower and upper deciles.\n\n";
  md << "## Mean absolute error\n\n| Specification | Fold-mean MAE | Lower decile | Upper decile |";
  for (int f = 0; f < report.folds; ++f) md << " Fold " << f << " |";
  md << "\n|---|---:|---:|---:|";
  for (int f = 0; f < report.folds; ++f) md << "---:|";
  md << "\n";
  for (const auto& s : report.specs) {
    md << "| " << s.name << " | " << fixed(s.mean_mae, 2) << " | " << fixed(s.lower_decile_mae, 2) << " | "
       << fixed(s.upper_decile_mae, 2) << " |";
    for (double v : s.fold_mae) md << ' ' << fixed(v, 2) << " |";
    md << "\n";
  }
  md << "\n## Relative MAE (%)\n\nEntry (row a, column b) is 100 * (MAE_a - MAE_b) / MAE_b.\n\n|  |";
  for (const auto& n : names) md << ' ' << n << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < names.size(); ++i) md << "---:|";
  md << "\n";
  for (std::size_t a = 0; a < names.size(); ++a) {
    md << "| " << names[a] << " |";
    for (double v : report.relative_mae[a]) md << ' ' << fixed(v, 2) << " |";
    md << "\n";
  }
  md << "\n## Predictive ratios\n\n| Specification | Mean prediction | PR (out-of-fold) | PR (train, min) | PR (train, "
        "max) |\n|---|---:|---:|---:|---:|\n";
  for (const auto& s : report.specs) {
    const auto [lo, hi] = std::minmax_element(s.train_ratio.begin(), s.train_ratio.end());
    md << "| " << s.name << " | " << fixed(s.mean_prediction, 2) << " | " << fixed(s.test_ratio, 4) << " | "
       << fixed(*lo, 6) << " | " << fixed(*hi, 6) << " |\n";
  }
  if (!partitions.empty()) {
    md << "\n## Holdout energy\n\nLoss " << to_string(cfg.chain.loss) << " on the " << format_double(cfg.train_fraction)
       << " train split with seed " << cfg.split_seed << ".\n\n| Partition | k | Energy |\n|---|---:|---:|\n";
    for (const auto& r : rescored)
      md << "| " << r["name"].get<std::string>() << " | " << r["k"].get<int>() << " | "
         << format_double(r["energy"].get<double>()) << " |\n";
  }
  write_file_atomic(out / "cv_report.md", md.str());
  log.info("wrote " + (out / "cv_report.json").string() + " and cv_report.md");
  return kExitOk;
}

namespace {

struct ReportChain {
  std::string cell;
  std::string label;
  std::optional<std::uint64_t> seed;
  fs::path trace;
};

}  // namespace

int cmd_report(const CommandOptions& options, std::ostream& os) {
  const Log log(os, options.quiet);
  fs::path dir;
  if (options.out) {
    dir = *options.out;
  } else {
    const RunConfig cfg = load_config(options);
    dir = output_dir(options, cfg);
  }
  if (!fs::is_directory(dir)) throw DataError("run directory '" + dir.string() + "' does not exist");
  if (fs::is_empty(dir)) throw DataError("run directory '" + dir.string() + "' is empty");

  std::vector<std::string> warnings;
  std::optional<Json> summary;
  const fs::path summary_path = dir / "summary.json";
  if (fs::exists(summary_path)) {
    std::ifstream in(summary_path);
    try {
      summary = Json::parse(in);
      if (!summary->is_object() || !summary->contains("cells") || !(*summary)["cells"].is_array())
        throw DataError("no cells array");
    } catch (const std::exception& e) {
      summary.reset();
      warnings.push_back("summary.json is unreadable (" + std::string(e.what()) + "); grid tables omitted");
    }
  } else {
    warnings.push_back("summary.json is missing; grid tables omitted");
  }

  std::vector<ReportChain> chains;
  if (summary) {
    for (const auto& cell : (*summary)["cells"]) {
      const std::string name = cell.value("name", "?");
      if (!cell.contains("chains")) continue;
      for (const auto& c : cell["chains"]) {
        ReportChain rc;
        rc.cell = name;
        rc.label = "chain " + std::to_string(c.value("chain", 0));
        if (c.contains("seed")) rc.seed = c["seed"].get<std::uint64_t>();
        rc.trace = dir / c.value("trace", "");
        chains.push_back(rc);
      }
    }
  } else {
    std::vector<fs::path> found;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().filename().string().ends_with(".trace.jsonl"))
        found.push_back(entry.path());
    std::sort(found.begin(), found.end());
    for (const auto& p : found) {
      ReportChain rc;
      rc.cell = fs::relative(p.parent_path(), dir).generic_string();
      rc.label = p.filename().string();
      rc.trace = p;
      chains.push_back(rc);
    }
    if (chains.empty()) throw DataError("run directory '" + dir.string() + "' has no summary.json and no traces");
  }

  std::ostringstream md;
  md << "# Run report\n\n";
  std::ostringstream body;
  if (summary) {
    const auto& s = *summary;
    if (s.contains("dataset")) {
      const auto& d = s["dataset"];
      body << "Dataset: " << d.value("rows", std::size_t{0}) << " rows, " << d.value("vocabulary_size", std::size_t{0})
           << " codes, " << d.value("train_rows", std::size_t{0}) << " train / " << d.value("test_rows", std::size_t{0})
           << " test rows. Loss: " << s.value("loss", "?") << ".\n\n";
    }
    body << "## Grid\n\n| Cell | k | lambda | T | Iterations | Min | Max | Mean | Std | Best | Status |\n"
         << "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---|\n";
    for (const auto& cell : s["cells"]) {
      body << "| " << cell.value("name", "?") << " | " << cell.value("k", 0) << " | "
           << format_double(cell.value("lambda", 0.0)) << " | " << format_double(cell.value("temperature", 0.0))
           << " | " << cell.value("iterations", std::size_t{0}) << " | ";
      if (cell.contains("table") && cell.contains("winner")) {
        const auto& t = cell["table"];
        body << fixed(t["min"].get<double>(), 2) << " | " << fixed(t["max"].get<double>(), 2) << " | "
             << fixed(t["mean"].get<double>(), 2) << " | " << fixed(t["std"].get<double>(), 2) << " | "
             << fixed(cell["winner"]["best_energy"].get<double>(), 2);
      } else {
        body << " |  |  |  | ";
      }
      body << " | " << cell.value("status", "?");
      if (cell.contains("error")) body << ": " << cell["error"].get<std::string>();
      body << " |\n";
    }
    body << "\n";
  }

  body << "## Chains\n\n| Cell | Chain | Seed | Records | Accepted | Acceptance rate | Best energy |\n"
       << "|---|---|---:|---:|---:|---:|---:|\n";
  std::ostringstream series;
  series << "## Energy series\n\nState energy after each sampled iteration and the best energy so far, copied from "
            "the traces.\n";
  for (const auto& c : chains) {
    const TraceReadResult trace = read_trace(c.trace);
    for (const auto& w : trace.warnings) warnings.push_back(w);
    const auto& recs = trace.records;
    std::size_t accepted = 0;
    for (const auto& r : recs) accepted += r.accepted ? 1 : 0;
    body << "| " << c.cell << " | " << c.label << " | " << (c.seed ? std::to_string(*c.seed) : "") << " | "
         << recs.size() << " | " << accepted << " | ";
    if (recs.empty()) {
      body << " | |\n";
      continue;
    }
    body << fixed(static_cast<double>(accepted) / static_cast<double>(recs.size()), 4) << " | "
         << format_double(recs.back().e_best) << " |\n";

    series << "\n### " << c.cell << ", " << c.label << "\n\n```csv\niter,e_state,e_best\n";
    const std::size_t stride = std::max<std::size_t>(1, (recs.size() + 99) / 100);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (i % stride != 0 && i + 1 != recs.size()) continue;
      const auto& r = recs[i];
      series << r.iter << ',' << format_double(r.accepted ? *r.e_prop : r.e_cur) << ','
             << format_double(r.e_best) << '\n';
    }
    series << "```\n";
  }

  if (!warnings.empty()) {
    md << "## Warnings\n\nThis report is partial.\n\n";
    for (const auto& w : warnings) md << "- " << w << "\n";
    md << "\n";
  }
  md << body.str() << "\n" << series.str();
  write_file_atomic(dir / "report.md", md.str());
  for (const auto& w : warnings) log.warn(w);
  log.info("wrote " + (dir / "report.md").string());
  return kExitOk;
}

int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err) {
  try {
    if (name == "generate") return cmd_generate(options, log);
    if (name == "optimize") return cmd_optimize(options, log);
    if (name == "cv") return cmd_cv(options, log);
    if (name == "report") return cmd_report(options, log);
    err << "error: unknown command '" << name << "'\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace riskgroups
