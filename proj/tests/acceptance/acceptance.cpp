// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flowermatch/datasets.hpp"
#include "flowermatch/descriptor.hpp"
#include "flowermatch/experiments.hpp"
#include "flowermatch/matching.hpp"
#include "flowermatch/metrics.hpp"
#include "flowermatch/montecarlo.hpp"
#include "flowermatch/unscented.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace flowermatch;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Outcome chi_square_gate() {
  const double t = chi2_threshold(0.95, 2);
  return {std::abs(t - 5.9915) <= 1e-3, "chi2(0.95, 2) = " + fmt("%.6f", t)};
}

Outcome ut_linear_exactness() {
  std::mt19937_64 gen(20240601);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int l = 3 + trial % 16;
    const int m = 1 + trial % 5;
    Eigen::MatrixXd a(m, l);
    for (int i = 0; i < a.size(); ++i) a.data()[i] = nd(gen);
    Eigen::VectorXd b(m), mu(l);
    for (int i = 0; i < m; ++i) b(i) = nd(gen);
    for (int i = 0; i < l; ++i) mu(i) = nd(gen);
    const Eigen::MatrixXd p = testing::random_spd(gen, l);
    const auto set = sigma_points(mu, p, UtParams{}.with_dim(static_cast<std::size_t>(l)));
    const auto est = unscented_transform(set, [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x + b; });
    const Eigen::VectorXd want_mean = a * mu + b;
    const Eigen::MatrixXd want_cov = a * p * a.transpose();
    worst = std::max(worst, (est.mean - want_mean).norm() / want_mean.norm());
    worst = std::max(worst, testing::relative_error(est.cov, want_cov));
  }
  return {worst <= 1e-9, "worst relative error " + fmt("%.3e", worst) + " over 20 maps"};
}

Outcome ut_mc_agreement() {
  const auto r = run_noise_sweep(NoiseSweepConfig{});
  bool band = true, increasing = true;
  std::string detail = "outlier%:";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double o = r.rows[i].outlier_pct;
    band = band && o >= 4.0 && o <= 6.0;
    if (i > 0) increasing = increasing && r.rows[i].frobenius_norm > r.rows[i - 1].frobenius_norm;
    detail += fmt(" %.2f", o);
  }
  const double ratio = r.rows.back().frobenius_norm / r.rows.front().frobenius_norm;
  detail += "; frobenius " + fmt("%.3e", r.rows.front().frobenius_norm) + " -> " +
            fmt("%.3e", r.rows.back().frobenius_norm) + fmt(" (x%.0f)", ratio);
  if (!band) detail += "; band [4,6] violated";
  if (!increasing) detail += "; frobenius not strictly increasing";
  return {band && increasing && ratio > 10.0, detail};
}

Outcome padding_direction() {
  const auto r = run_padding_study(PaddingStudyConfig{});
  const bool pass = r.padded.correct_matches > r.baseline.correct_matches &&
                    r.padded.avg_false_positives > r.baseline.avg_false_positives;
  std::ostringstream d;
  d << "correct " << r.baseline.correct_matches << " -> " << r.padded.correct_matches << ", avg false positives "
    << fmt("%.2f", r.baseline.avg_false_positives) << " -> " << fmt("%.2f", r.padded.avg_false_positives);
  return {pass, d.str()};
}

Outcome self_match() {
  SyntheticDatasetConfig cfg;
  cfg.frames = 1000;
  cfg.noise = 0.01;
  const Dataset d = generate_synthetic_dataset(cfg).dataset;
  MatchRunOptions opts;
  opts.keep_pairs = false;
  const auto report = match_datasets(d, d, NoiseModel{0.01, {}}, UtParams{}, MatchConfig{}, opts);
  const double rate = static_cast<double>(report.correct_matches) / static_cast<double>(report.diagonal_pairs);
  return {rate >= 0.93, std::to_string(report.correct_matches) + "/" + std::to_string(report.diagonal_pairs) +
                            " diagonal matches (" + fmt("%.2f%%", 100.0 * rate) + ")"};
}

Outcome count_gate() {
  SyntheticDatasetConfig three;
  three.frames = 200;
  SyntheticDatasetConfig four = three;
  four.flowers = 4;
  const auto report = match_datasets(generate_synthetic_dataset(three).dataset,
                                     generate_synthetic_dataset(four).dataset, NoiseModel{}, UtParams{}, MatchConfig{});
  // A descriptor sitting exactly on the reference mean is still rejected.
  const auto dist = ut_descriptor_distribution(testing::equilateral_triangle(), NoiseModel{}, UtParams{});
  const auto at_mean = is_match(Descriptor::from_vector(dist.mean), 4, dist, MatchConfig{});
  const bool pass = report.total_matches == 0 && !at_mean.matched;
  return {pass, std::to_string(report.total_matches) + " matches over " + std::to_string(report.pairs.size()) +
                    " pairs; on-mean 4-flower descriptor " + (at_mean.matched ? "matched" : "rejected")};
}

Outcome descriptor_invariance() {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-10, 10), s(0.01, 100);
  double worst_abs = 0.0, worst_scale = 0.0;
  bool bound = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const Cluster c = testing::random_cluster(gen, 2 + trial % 9);
    const Descriptor d = compute_descriptor(c);
    auto gap = [&](const Cluster& other) {
      const Descriptor o = compute_descriptor(other);
      return std::max(std::abs(o.inertia - d.inertia), std::abs(o.avg_distance - d.avg_distance));
    };
    Cluster t = c, r = c, p = c, k = c;
    const Point3 shift(u(gen), u(gen), u(gen));
    const Eigen::Matrix3d rot = testing::random_rotation(gen);
    for (auto& q : t.points) q += shift;
    for (auto& q : r.points) q = rot * q;
    std::shuffle(p.points.begin(), p.points.end(), gen);
    const double f = s(gen);
    for (auto& q : k.points) q *= f;
    worst_abs = std::max({worst_abs, gap(t), gap(r), gap(p)});
    const Descriptor dk = compute_descriptor(k);
    worst_scale = std::max({worst_scale, std::abs(dk.avg_distance / (f * d.avg_distance) - 1.0),
                            std::abs(dk.inertia / (f * f * d.inertia) - 1.0)});
    bound = bound && d.inertia >= static_cast<double>(c.size()) * d.avg_distance * d.avg_distance * (1.0 - 1e-12);
  }
  return {worst_abs <= 1e-9 && worst_scale <= 1e-9 && bound,
          "rigid/permutation max gap " + fmt("%.2e", worst_abs) + ", scaling max rel " + fmt("%.2e", worst_scale) +
              ", inertia bound " + (bound ? "held" : "violated")};
}

Outcome calibration() {
  auto stream = rng::make_stream(kDefaultSeed, rng::Domain::InitialCluster);
  const Cluster c = simulate_initial_cluster(3, stream);
  const auto dist = ut_descriptor_distribution(c, NoiseModel{0.01, {}}, UtParams{});
  const auto samples = testing::gaussian_samples(dist, 10000, 808);
  const double pct = outlier_percentage(samples, dist, 0.95);
  return {std::abs(pct - 5.0) <= 0.6, fmt("%.2f%% outside the 95%% gate", pct)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + FLOWERMATCH_CLI_PATH + "\" " + args + " >\"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Every file under `dir`, relative path -> contents.
std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / ("fm_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(root / "data");
  const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  const fs::path log = root / "log.txt";
  // Inputs for match/describe, written once.
  if (run_cli("--seed 11 generate " + q(root / "data/ref.jsonl") + " --frames 300 --corrupt 0.02", log) != 0 ||
      run_cli("--seed 11 --noise 0.012 generate " + q(root / "data/obs.jsonl") + " --frames 300 --corrupt 0.02", log) != 0) {
    fs::remove_all(root);
    return {false, "could not generate inputs: " + slurp(log)};
  }
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "simulate"},
      {"padding-study", "padding-study"},
      {"match", "match " + q(root / "data/ref.jsonl") + " " + q(root / "data/obs.jsonl")},
      {"describe", "describe " + q(root / "data/ref.jsonl")},
      {"generate", "generate OUTDIR/gen.jsonl --frames 500 --corrupt 0.05"},
  };
  // Same flags twice with a single worker, then with all cores and with an
  // oversubscribed pool.
  const std::vector<std::string> thread_flags{"--threads 1", "--threads 1", "--threads 0", "--threads 64"};
  std::string failures;
  std::size_t files = 0;
  for (const auto& [name, args] : commands) {
    std::vector<std::vector<std::pair<std::string, std::string>>> snaps;
    for (std::size_t k = 0; k < thread_flags.size(); ++k) {
      const fs::path out = root / (name + "_" + std::to_string(k));
      fs::create_directories(out);
      std::string a = args;
      if (const auto pos = a.find("OUTDIR"); pos != std::string::npos) a.replace(pos, 6, out.string());
      if (run_cli(thread_flags[k] + " --out " + q(out) + " " + a, log) != 0) {
        failures += " " + name + "(exit)";
        break;
      }
      snaps.push_back(snapshot(out));
    }
    if (snaps.size() != thread_flags.size() || snaps.front().empty()) continue;
    files += snaps.front().size();
    for (std::size_t k = 1; k < snaps.size(); ++k) {
      if (snaps[k] != snaps.front()) {
        failures += " " + name + "(" + thread_flags[k] + ")";
        break;
      }
    }
  }
  fs::remove_all(root);
  if (!failures.empty()) return {false, "differences:" + failures};
  return {true, std::to_string(commands.size()) + " commands, " + std::to_string(files) +
                    " output files identical across 4 runs (threads 1, 1, all, 64)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"chi-square gate threshold", chi_square_gate},
      {"UT exact on linear maps", ut_linear_exactness},
      {"UT vs Monte Carlo noise sweep", ut_mc_agreement},
      {"padding raises matches and false positives", padding_direction},
      {"synthetic self-match rate", self_match},
      {"flower count gate", count_gate},
      {"descriptor invariances", descriptor_invariance},
      {"gate calibration on UT samples", calibration},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
              << fmt(" (%.2fs)", secs) << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
