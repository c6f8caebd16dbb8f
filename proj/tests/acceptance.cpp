// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "riskgroups/chain.hpp"
#include "riskgroups/commands.hpp"
#include "riskgroups/counting.hpp"
#include "riskgroups/energy.hpp"
#include "riskgroups/evaluation.hpp"
#include "riskgroups/ols.hpp"
#include "riskgroups/proposal.hpp"
#include "riskgroups/synthetic.hpp"

using namespace riskgroups;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

VocabularyPtr codes(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(synthetic_code_name(i));
  return make_vocabulary(names);
}

std::vector<std::vector<GroupLabel>> enumerate(std::size_t n, int k) {
  std::vector<std::vector<GroupLabel>> out;
  std::vector<GroupLabel> a(n, 0);
  while (true) {
    out.push_back(a);
    std::size_t i = 0;
    while (i < n && a[i] == k - 1) a[i++] = 0;
    if (i == n) return out;
    ++a[i];
  }
}

std::size_t hamming(const std::vector<GroupLabel>& a, std::span<const GroupLabel> b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

std::string fmt(const char* format, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

Outcome counting_oracle() {
  Rng rng(1);
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (int k = 2; k <= 4; ++k) {
      const auto states = enumerate(n, k);
      const auto center = random_partition(codes(n), k, rng);
      std::vector<long long> tally(n + 1, 0);
      for (const auto& s : states) ++tally[hamming(s, center.assignment())];
      BigInt total = 0;
      for (std::size_t j = 0; j <= n; ++j) {
        if (count_at_distance(n, k, j) != tally[j])
          return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " j=" + std::to_string(j)};
        total += count_at_distance(n, k, j);
        ++cases;
      }
      if (total != boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(n)))
        return {false, "sum over j differs from k^n at n=" + std::to_string(n)};
    }
  return {true, std::to_string(cases) + " (n, k, j) cases equal enumeration; sums equal k^n"};
}

Outcome sampler_uniformity() {
  const auto v = codes(5);
  Rng rng(20240501);
  const auto center = random_partition(v, 3, rng);
  std::string detail;
  bool pass = true;
  for (std::size_t j : {1u, 2u}) {
    // sample_neighbor with the distance capped at j; draws landing at
    // distance j are uniform on that sphere.
    ProposalConfig cfg{3, static_cast<double>(j), j, false, 10000};
    std::map<std::vector<GroupLabel>, long> counts;
    const long draws = 100000;
    long kept = 0;
    while (kept < draws) {
      auto prop = sample_neighbor(center, cfg, rng);
      if (prop.distance != j) continue;
      ++counts[{prop.partition.assignment().begin(), prop.partition.assignment().end()}];
      ++kept;
    }
    const auto cells = count_at_distance(5, 3, j).convert_to<long>();
    const double expected = static_cast<double>(draws) / static_cast<double>(cells);
    double stat = 0.0;
    for (const auto& [s, c] : counts) stat += (c - expected) * (c - expected) / expected;
    stat += static_cast<double>(cells - static_cast<long>(counts.size())) * expected;
    const double p = boost::math::cdf(
        boost::math::complement(boost::math::chi_squared(static_cast<double>(cells - 1)), stat));
    pass = pass && p > 0.01 && static_cast<long>(counts.size()) == cells;
    detail += "j=" + std::to_string(j) + ": " + std::to_string(cells) + " states, chi2=" + fmt("%.2f", stat) +
              ", p=" + fmt("%.3f", p) + (j == 1 ? "; " : "");
  }
  return {pass, detail};
}

Outcome proposal_symmetry() {
  const auto v = codes(6);
  Rng rng(3);
  const ProposalConfig cfg{3, 2.0, std::nullopt, false, 10000};
  std::size_t pairs = 0;
  for (std::size_t j = 0; j <= 3; ++j)
    for (int i = 0; i < 1000; ++i) {
      const auto p = random_partition(v, 3, rng);
      const auto q = sample_at_distance(p, j, rng);
      if (proposal_probability(p, q, cfg) != proposal_probability(q, p, cfg) ||
          proposal_probability(p, q, cfg) <= 0.0)
        return {false, "asymmetric pair at j=" + std::to_string(j)};
      ++pairs;
    }
  return {true, std::to_string(pairs) + " pairs, Q(p,q) == Q(q,p) exactly"};
}

Outcome stationary_distribution() {
  const auto v = codes(4);
  const double t = 10.0;
  // Fixed synthetic energy table over the 16 states, spread over [0, 3T].
  std::map<std::vector<GroupLabel>, double> table;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 3.0 * t);
  for (const auto& a : enumerate(4, 2)) table[a] = u(rng);
  auto energy = [&table](const Partition& p) {
    return table.at({p.assignment().begin(), p.assignment().end()});
  };
  double z = 0.0;
  for (const auto& [a, e] : table) z += std::exp(-e / t);

  ChainConfig cfg;
  cfg.iterations = 1000000;
  cfg.temperature = TemperatureSchedule::constant(t);
  cfg.seed = 11;
  cfg.proposal = {2, 1.0, std::nullopt, false, 10000};
  std::map<std::vector<GroupLabel>, double> visits;
  run_chain(energy, v, cfg, [&visits](const TraceRecord&, const Partition& p) {
    visits[{p.assignment().begin(), p.assignment().end()}] += 1.0;
  });
  double tv = 0.0;
  for (const auto& [a, e] : table)
    tv += std::abs(std::exp(-e / t) / z - visits[a] / static_cast<double>(cfg.iterations));
  tv *= 0.5;
  return {tv < 0.02, "TV distance " + fmt("%.5f", tv) + " over 16 states, 1e6 iterations"};
}

Outcome ols_oracle() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> mag(1.0, 3.0);
  double worst_rel = 0.0, worst_orth = 0.0;
  for (int f = 0; f < 20; ++f) {
    const Eigen::Index n = 20 + static_cast<Eigen::Index>(rng() % 181);
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 10);
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < p; ++j) x(i, j) = g(rng);
    Eigen::VectorXd beta(p + 1);
    for (Eigen::Index j = 0; j <= p; ++j) beta(j) = (rng() % 2 ? 1.0 : -1.0) * mag(rng);
    Eigen::VectorXd y = beta(0) + (x * beta.tail(p)).array();
    for (Eigen::Index i = 0; i < n; ++i) y(i) += 0.1 * g(rng);

    Eigen::MatrixXd a(n, p + 1);
    a.col(0).setOnes();
    a.rightCols(p) = x;
    const Eigen::VectorXd oracle = (a.transpose() * a).ldlt().solve(a.transpose() * y);
    const auto fit = fit_ols(x, y);
    for (Eigen::Index j = 0; j <= p; ++j) {
      const double got = j == 0 ? fit.intercept : fit.coefficients[static_cast<std::size_t>(j - 1)];
      worst_rel = std::max(worst_rel, std::abs(got - oracle(j)) / std::abs(oracle(j)));
    }
    const Eigen::Map<const Eigen::VectorXd> r(fit.residual.data(), n);
    const double scale = a.norm() * y.norm();
    worst_orth = std::max(worst_orth, (a.transpose() * r).cwiseAbs().maxCoeff() / scale);
  }
  return {worst_rel <= 1e-8 && worst_orth <= 1e-6,
          "20 fixtures: max relative coefficient error " + fmt("%.2e", worst_rel) + ", max |X'r|/scale " +
              fmt("%.2e", worst_orth)};
}

struct Reference {
  SyntheticData synthetic;
  Dataset holdout;
};

const Reference& reference() {
  static const Reference ref = [] {
    auto s = generate_synthetic(reference_generator_config());
    auto holdout = make_split(s.data, SplitPlan::holdout(0.8, 7));
    return Reference{std::move(s), std::move(holdout)};
  }();
  return ref;
}

Outcome planted_recovery() {
  const auto& ref = reference();
  const EnergyModel model(ref.holdout, ModelSpec::demographics());
  const double planted = model(ref.synthetic.planted);
  int successes = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ChainConfig cfg;
    cfg.iterations = 2000;
    cfg.temperature = TemperatureSchedule::constant(100.0);
    cfg.seed = seed;
    cfg.proposal = {4, 3.0, std::nullopt, false, 10000};
    const auto r = run_chain(model, cfg);
    const auto gus = gusfield_distance(r.best_partition, ref.synthetic.planted);
    const double ratio = r.best_energy / planted;
    if (gus <= 2 && ratio <= 1.05) ++successes;
    detail += "; seed " + std::to_string(seed) + ": d=" + std::to_string(gus) + " ratio=" + fmt("%.4f", ratio);
  }
  return {successes >= 4, std::to_string(successes) + "/5 recovered, planted MAE " + fmt("%.1f", planted) + detail};
}

Outcome ladder_ordering() {
  const auto& ref = reference();
  const auto report =
      cross_validate(ref.synthetic.data, spec_ladder({{"planted", ref.synthetic.planted}}), 5, 11, 1);
  const auto& sr = report.specs[0];
  const auto& demo = report.specs[1];
  const auto& planted = report.specs[2];
  bool pass = true;
  for (std::size_t f = 0; f < 5; ++f)
    pass = pass && planted.fold_mae[f] < demo.fold_mae[f] && demo.fold_mae[f] < sr.fold_mae[f];
  return {pass, "fold-mean MAE " + fmt("%.1f", planted.mean_mae) + " < " + fmt("%.1f", demo.mean_mae) + " < " +
                    fmt("%.1f", sr.mean_mae) + (pass ? ", strict in all 5 folds" : ", NOT strict in every fold")};
}

Outcome predictive_ratio() {
  const auto& ref = reference();
  double worst_train = 0.0, lo = INFINITY, hi = -INFINITY;
  for (const auto& entry : spec_ladder({{"planted", ref.synthetic.planted}})) {
    const EnergyModel model(ref.holdout, entry.spec);
    const auto fit = model.fit(entry.spec.partition);
    const auto y = model.train_response();
    std::vector<double> fitted(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) fitted[i] = y[i] - fit.residual[i];
    worst_train = std::max(worst_train, std::abs(aggregate_predictive_ratio(y, fitted) - 1.0));
    const double test = aggregate_predictive_ratio(model.test_response(), model.predict_test(fit, entry.spec.partition));
    lo = std::min(lo, test);
    hi = std::max(hi, test);
  }
  return {worst_train <= 1e-9 && lo >= 0.97 && hi <= 1.03,
          "train |PR-1| <= " + fmt("%.1e", worst_train) + ", test PR in [" + fmt("%.4f", lo) + ", " +
              fmt("%.4f", hi) + "]"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("riskgroups-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "run.json");
    cfg << R"({"generator": {"preset": "reference"},
              "chain": {"iterations": 300, "chains": 3, "seed": 42},
              "grid": {"k": [2, 4], "lambda": [3, 10], "temperature": [100]}})";
  }
  std::ostringstream log, err;
  CommandOptions a;
  a.config = root / "run.json";
  a.out = root / "a";
  a.quiet = true;
  a.threads = 1;
  CommandOptions b = a;
  b.out = root / "b";
  b.threads = 3;
  const int ca = run_command("optimize", a, log, err);
  const int cb = run_command("optimize", b, log, err);
  if (ca != 0 || cb != 0) return {false, "optimize failed: " + err.str()};

  std::size_t compared = 0;
  bool same = slurp(root / "a" / "summary.json") == slurp(root / "b" / "summary.json");
  ++compared;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "a");
    if (rel == "timing.json" || rel == "summary.json") continue;
    same = same && fs::exists(root / "b" / rel) && slurp(entry.path()) == slurp(root / "b" / rel);
    ++compared;
  }
  fs::remove_all(root);
  return {same, std::to_string(compared) + " files byte-identical across runs with 1 and 3 threads"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"counting oracle", counting_oracle},
      {"sampler uniformity", sampler_uniformity},
      {"proposal symmetry", proposal_symmetry},
      {"stationary distribution", stationary_distribution},
      {"OLS oracle", ols_oracle},
      {"planted-partition recovery", planted_recovery},
      {"spec-ladder ordering", ladder_ordering},
      {"aggregate predictive ratio", predictive_ratio},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s (%s; %.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
