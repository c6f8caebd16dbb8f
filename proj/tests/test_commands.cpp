#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "riskgroups/commands.hpp"
#include "riskgroups/error.hpp"
#include "riskgroups/evaluation.hpp"
#include "riskgroups/partition_io.hpp"
#include "riskgroups/trace_io.hpp"
#include "support.hpp"

using namespace riskgroups;
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("riskgroups-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

int run(std::string_view cmd, CommandOptions o) {
  std::ostringstream log, err;
  o.quiet = true;
  return run_command(cmd, o, log, err);
}

CommandOptions with_config(const fs::path& config) {
  CommandOptions o;
  o.config = config;
  return o;
}

// Small reference-style dataset and a two-cell grid.
void write_small_run(const fs::path& dir) {
  write(dir / "gen.json", R"({"generator": {"preset": "reference", "n_rows": 2000, "seed": 5}, "out": "data"})");
  write(dir / "run.json", R"({
    "dataset": "data/dataset.csv",
    "schema": {"min_code_count": 10},
    "chain": {"iterations": 40, "chains": 2, "seed": 3},
    "grid": {"k": [2, 4], "lambda": [3], "temperature": [100]},
    "cv": {"folds": 3, "partitions": [{"name": "planted", "path": "data/planted_partition.csv"}]}
  })");
}

}  // namespace

TEST_CASE("trace records round-trip and keep key order") {
  TraceRecord r{7, 3, 1.5, std::nullopt, 0.0, false, 1.25};
  const auto line = format_trace_record(r);
  CHECK(line == R"({"iter":7,"j":3,"e_cur":1.5,"e_prop":null,"alpha":0.0,"accepted":false,"e_best":1.25})");
  const auto back = parse_trace_record(line);
  CHECK(back.iter == 7);
  CHECK_FALSE(back.e_prop);
  r.e_prop = 0.1 + 0.2;
  r.alpha = 1.0 / 3.0;
  const auto exact = parse_trace_record(format_trace_record(r));
  CHECK(*exact.e_prop == 0.1 + 0.2);
  CHECK(exact.alpha == 1.0 / 3.0);
  CHECK_THROWS_AS(parse_trace_record("{\"iter\":1}"), DataError);
}

TEST_CASE("a truncated trace yields its valid prefix") {
  TempDir tmp("trace");
  const auto path = tmp.path / "t.jsonl";
  {
    TraceWriter w(path, 1);
    for (std::size_t i = 0; i < 5; ++i) w.write(TraceRecord{i, 1, 2.0, 1.0, 1.0, true, 1.0});
    w.close();
  }
  auto text = slurp(path);
  write(path, text.substr(0, text.size() - 20));
  const auto result = read_trace(path);
  CHECK(result.records.size() == 4);
  CHECK(result.warnings.size() == 1);
  CHECK(read_trace(tmp.path / "missing.jsonl").warnings.size() == 1);
}

TEST_CASE("cross-validation report shape") {
  const auto s = testing::small_synthetic(12, 3, 1500, 100.0, 4);
  const auto ladder = spec_ladder({{"planted", s.planted}});
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[2].name == "demographics+planted");
  const auto report = cross_validate(s.data, ladder, 5, 1, 1);
  CHECK(report.specs.size() == 3);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(report.relative_mae[a][a] == 0.0);
    CHECK(report.specs[a].fold_mae.size() == 5);
    for (double pr : report.specs[a].train_ratio) CHECK(pr == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(report.relative_mae[0][1] ==
        doctest::Approx(100.0 * (report.specs[0].mean_mae - report.specs[1].mean_mae) / report.specs[1].mean_mae));
  CHECK(report.specs[2].mean_mae < report.specs[1].mean_mae);
  CHECK(report.decile_rows == 150);
  // Parallel folds give the same numbers.
  const auto threaded = cross_validate(s.data, ladder, 5, 1, 3);
  CHECK(threaded.specs[2].fold_mae == report.specs[2].fold_mae);
}

TEST_CASE("generate, optimize, cv and report") {
  TempDir tmp("cli");
  write_small_run(tmp.path);
  REQUIRE(run("generate", with_config(tmp.path / "gen.json")) == kExitOk);
  for (const char* f : {"dataset.csv", "planted_partition.csv", "true_coefficients.json"})
    CHECK(fs::exists(tmp.path / "data" / f));

  // Rerun into another directory: byte-identical files.
  auto again = with_config(tmp.path / "gen.json");
  again.out = tmp.path / "data2";
  REQUIRE(run("generate", again) == kExitOk);
  CHECK(slurp(tmp.path / "data" / "dataset.csv") == slurp(tmp.path / "data2" / "dataset.csv"));
  auto reseeded = again;
  reseeded.seed = 6;
  reseeded.out = tmp.path / "data3";
  REQUIRE(run("generate", reseeded) == kExitOk);
  CHECK(slurp(tmp.path / "data" / "dataset.csv") != slurp(tmp.path / "data3" / "dataset.csv"));

  auto opt = with_config(tmp.path / "run.json");
  opt.out = tmp.path / "run";
  REQUIRE(run("optimize", opt) == kExitOk);
  const auto summary = Json::parse(slurp(tmp.path / "run" / "summary.json"));
  REQUIRE(summary["cells"].size() == 2);
  for (const auto& cell : summary["cells"]) {
    CHECK(cell["status"] == "ok");
    const auto& t = cell["table"];
    CHECK(t["min"].get<double>() <= t["mean"].get<double>());
    CHECK(t["mean"].get<double>() <= t["max"].get<double>());
    CHECK(t["count"] == 80);
    CHECK(fs::exists(tmp.path / "run" / cell["winner"]["partition"].get<std::string>()));
  }
  CHECK(fs::exists(tmp.path / "run" / "timing.json"));

  // Re-scoring the winner through cv reproduces its energy exactly.
  const auto& cell = summary["cells"][1];
  write(tmp.path / "cv.json", R"({
    "dataset": "data/dataset.csv", "schema": {"min_code_count": 10}, "cv": {"folds": 3, "partitions": [
      {"name": "planted", "path": "data/planted_partition.csv"},
      {"name": "learned", "path": "run/)" + cell["winner"]["partition"].get<std::string>() + R"("}]}})");
  auto cv = with_config(tmp.path / "cv.json");
  cv.out = tmp.path / "cv";
  REQUIRE(run("cv", cv) == kExitOk);
  const auto cvj = Json::parse(slurp(tmp.path / "cv" / "cv_report.json"));
  CHECK(cvj["holdout_energy"][1]["energy"].get<double>() == cell["winner"]["best_energy"].get<double>());
  CHECK(cvj["specs"].size() == 4);
  CHECK(fs::exists(tmp.path / "cv" / "cv_report.md"));

  // The report's energy series is copied from the traces.
  CommandOptions rep;
  rep.out = tmp.path / "run";
  REQUIRE(run("report", rep) == kExitOk);
  const auto md = slurp(tmp.path / "run" / "report.md");
  CHECK(md.find("Acceptance rate") != std::string::npos);
  const auto trace =
      read_trace(tmp.path / "run" / summary["cells"][0]["chains"][0]["trace"].get<std::string>()).records;
  REQUIRE(trace.size() == 40);
  const auto start = md.find("```csv\niter,e_state,e_best\n");
  REQUIRE(start != std::string::npos);
  std::istringstream series(md.substr(start + 27));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(series, line) && line != "```") {
    std::istringstream fields(line);
    std::string it, state, best;
    std::getline(fields, it, ',');
    std::getline(fields, state, ',');
    std::getline(fields, best, ',');
    const auto& r = trace.at(std::stoul(it));
    CHECK(std::stod(state) == (r.accepted ? *r.e_prop : r.e_cur));
    CHECK(std::stod(best) == r.e_best);
    ++rows;
  }
  CHECK(rows == 40);

  // Damaged traces give a partial report.
  write(tmp.path / "run" / summary["cells"][0]["chains"][1]["trace"].get<std::string>(), "{broken\n");
  REQUIRE(run("report", rep) == kExitOk);
  CHECK(slurp(tmp.path / "run" / "report.md").find("This report is partial") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp("exit");
  CommandOptions none;
  CHECK(run("optimize", none) == kExitUsage);
  CHECK(run("bogus", none) == kExitUsage);

  write(tmp.path / "bad.json", R"({"chain": {"iterations": -1}})");
  CHECK(run("optimize", with_config(tmp.path / "bad.json")) == kExitUsage);
  write(tmp.path / "syntax.json", "{");
  CHECK(run("optimize", with_config(tmp.path / "syntax.json")) == kExitUsage);

  write(tmp.path / "broken.csv", "person_id,sex,age_group,residence_group,expenditure,codes\np1,9,0-1,urban,1,A\n");
  write(tmp.path / "data.json", R"({"dataset": "broken.csv", "out": "o"})");
  CHECK(run("optimize", with_config(tmp.path / "data.json")) == kExitData);

  // Every cell fails: k larger than the partition file allows.
  write(tmp.path / "gen.json", R"({"generator": {"preset": "reference", "n_rows": 500}, "out": "d"})");
  REQUIRE(run("generate", with_config(tmp.path / "gen.json")) == kExitOk);
  write(tmp.path / "fail.json", R"({"dataset": "d/dataset.csv", "schema": {"min_code_count": 1}, "out": "f",
      "chain": {"iterations": 5, "initial": "d/planted_partition.csv"}, "grid": {"k": [2, 3]}})");
  CHECK(run("optimize", with_config(tmp.path / "fail.json")) == kExitGridFailure);
  const auto s = Json::parse(slurp(tmp.path / "f" / "summary.json"));
  CHECK(s["failed_cells"] == 2);

  // One of two cells fails: the run still succeeds and records the failure.
  write(tmp.path / "partial.json", R"({"dataset": "d/dataset.csv", "schema": {"min_code_count": 1}, "out": "p",
      "chain": {"iterations": 5, "initial": "d/planted_partition.csv"}, "grid": {"k": [3, 4]}})");
  CHECK(run("optimize", with_config(tmp.path / "partial.json")) == kExitOk);
  CHECK(Json::parse(slurp(tmp.path / "p" / "summary.json"))["failed_cells"] == 1);

  CommandOptions rep;
  rep.out = tmp.path / "empty";
  fs::create_directories(*rep.out);
  CHECK(run("report", rep) == kExitData);
  rep.out = tmp.path / "absent";
  CHECK(run("report", rep) == kExitData);

  write(tmp.path / "cv.json", R"({"dataset": "d/dataset.csv", "schema": {"min_code_count": 1}, "out": "c",
      "cv": {"partitions": [{"name": "x", "path": "x.csv"}]}})");
  write(tmp.path / "x.csv", "code,group\nA00,0\nNOPE,1\n");
  CHECK(run("cv", with_config(tmp.path / "cv.json")) == kExitData);
}

TEST_CASE("thread count resolution") {
  ::unsetenv(kThreadsEnv);
  CHECK(resolve_threads(3, 5) == 3);
  CHECK(resolve_threads(std::nullopt, 5) == 5);
  CHECK(resolve_threads(std::nullopt, 0) >= 1);
  ::setenv(kThreadsEnv, "2", 1);
  CHECK(resolve_threads(std::nullopt, 5) == 2);
  CHECK(resolve_threads(4, 5) == 4);
  ::setenv(kThreadsEnv, "lots", 1);
  CHECK_THROWS_AS(resolve_threads(std::nullopt, 5), UsageError);
  ::unsetenv(kThreadsEnv);
  CHECK_THROWS_AS(resolve_threads(0, 1), UsageError);
}
