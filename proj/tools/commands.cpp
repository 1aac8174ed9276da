#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flowermatch/datasets.hpp"
#include "flowermatch/error.hpp"
#include "flowermatch/experiments.hpp"
#include "flowermatch/matching.hpp"
#include "flowermatch/metrics.hpp"
#include "flowermatch/reports.hpp"

namespace flowermatch::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kStudiedMinFlowers = 3;
constexpr int kStudiedMaxFlowers = 6;

void warn_flowers(int n, std::ostream& err) {
  if (n < kStudiedMinFlowers || n > kStudiedMaxFlowers) {
    err << "warning: " << n << " flowers is outside the 3-6 range the method was designed for\n";
  }
}

void warn_alpha(const RunConfig& cfg, std::ostream& err) {
  if (!cfg.ut().alpha_in_recommended_range()) {
    err << "warning: alpha " << cfg.alpha << " is outside [1e-4, 1]\n";
  }
}

fs::path output_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.out.value_or(fs::path("."));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidConfidence, "--confidence must be a fraction in (0, 1)");
  }
  for (const double n : noise) {
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::InvalidNoise, "--noise values must be > 0");
  }
  if (padding && (!(*padding >= 0.0) || !std::isfinite(*padding))) {
    throw Error(ErrorCode::InvalidParameter, "--padding must be >= 0");
  }
  if (flowers && *flowers < 2) throw Error(ErrorCode::TooFewPoints, "--flowers must be >= 2");
  if (trials < 1) throw Error(ErrorCode::InvalidParameter, "--trials must be >= 1");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw Error(ErrorCode::InvalidParameter, "--extent must be > 0");
  ut().with_dim(3).validate();
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    NoiseSweepConfig sweep;
    if (!cfg.noise.empty()) sweep.noise_levels = cfg.noise;
    sweep.trials = cfg.trials;
    sweep.seed = cfg.seed;
    sweep.flowers = cfg.flowers.value_or(3);
    sweep.range = {0.0, cfg.extent};
    sweep.confidence = cfg.confidence;
    sweep.padding = cfg.padding.value_or(0.0);
    sweep.ut = cfg.ut();
    sweep.threads = cfg.threads;
    warn_flowers(sweep.flowers, err);
    warn_alpha(cfg, err);

    const NoiseSweepResult r = run_noise_sweep(sweep);
    const std::string csv = render([&](std::ostream& s) { write_noise_sweep_csv(s, r); });
    if (cfg.out) {
      const fs::path path = output_dir(cfg) / "noise_sweep.csv";
      write_file(path, csv);
      out << "wrote " << path.string() << " (" << r.rows.size() << " rows)\n";
    } else {
      out << csv;
    }
    return 0;
  });
}

int cmd_padding_study(const RunConfig& cfg, const PaddingStudyOptions& opts, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    if (opts.padded_noise && !(*opts.padded_noise > 0.0)) {
      throw Error(ErrorCode::InvalidNoise, "--padded-noise must be > 0");
    }
    PaddingStudyConfig study;
    study.samples = opts.samples;
    study.seed = cfg.seed;
    study.min_flowers = opts.min_flowers;
    study.max_flowers = opts.max_flowers;
    study.range = {0.0, cfg.extent};
    study.confidence = cfg.confidence;
    study.ut = cfg.ut();
    study.threads = cfg.threads;
    study.baseline = {cfg.noise_or(0.01), 0.0};
    study.padded = {opts.padded_noise.value_or(study.baseline.noise), cfg.padding.value_or(0.005)};
    warn_flowers(study.min_flowers, err);
    if (study.max_flowers != study.min_flowers) warn_flowers(study.max_flowers, err);
    warn_alpha(cfg, err);

    const PaddingStudyResult r = run_padding_study(study);
    const std::string csv = render([&](std::ostream& s) { write_padding_study_csv(s, r); });
    if (cfg.out) {
      const fs::path dir = output_dir(cfg);
      write_file(dir / "padding_study.csv", csv);
      write_file(dir / "padding_study.json", padding_study_json(r, study) + "\n");
      out << "wrote " << (dir / "padding_study.csv").string() << " and padding_study.json\n";
    } else {
      out << csv;
    }
    return 0;
  });
}

int cmd_match(const RunConfig& cfg, const MatchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    LoadOptions ref_opts;
    ref_opts.expected_count = cfg.flowers;
    ref_opts.depth_model = cfg.depth_model;
    LoadOptions obs_opts = ref_opts;
    if (opts.observed_flowers) obs_opts.expected_count = opts.observed_flowers;

    auto with_default = [](const fs::path& p, LoadOptions o) {
      try {
        return load_dataset(p, o);
      } catch (const Error& e) {
        // No header and no --flowers: fall back to the documented default.
        if (e.code() != ErrorCode::InvalidParameter || o.expected_count) throw;
        o.expected_count = 3;
        return load_dataset(p, o);
      }
    };
    const LoadedDataset ref = with_default(opts.reference, ref_opts);
    const LoadedDataset obs = with_default(opts.observed, obs_opts);
    warn_flowers(ref.dataset.declared_flower_count, err);
    warn_alpha(cfg, err);

    NoiseModel noise;
    noise.sigma = cfg.noise_or(0.01);
    MatchConfig match_cfg{cfg.confidence, cfg.padding.value_or(0.0), !opts.no_count_gate};
    MatchRunOptions run;
    run.aligned = !opts.unaligned;
    run.threads = cfg.threads;
    const MatchReport report = match_datasets(ref.dataset, obs.dataset, noise, cfg.ut(), match_cfg, run);

    const fs::path dir = output_dir(cfg);
    write_file(dir / "match_pairs.csv", render([&](std::ostream& s) { write_match_pairs_csv(s, report); }));
    write_file(dir / "match_summary.json", match_summary_json(report) + "\n");
    write_file(dir / "prune_reference.csv",
               render([&](std::ostream& s) { write_prune_report_csv(s, ref.prune); }));
    write_file(dir / "prune_observed.csv",
               render([&](std::ostream& s) { write_prune_report_csv(s, obs.prune); }));

    out << "reference " << report.reference_name << ": " << report.reference_frames << " frames ("
        << ref.prune.dropped.size() << " pruned)\n";
    out << "observed  " << report.observed_name << ": " << report.observed_frames << " frames ("
        << obs.prune.dropped.size() << " pruned)\n";
    if (report.aligned) {
      out << "diagonal matches: " << report.correct_matches << "/" << report.diagonal_pairs << "\n";
      out << "off-diagonal matches: " << report.off_diagonal_matches << "\n";
      out << "avg false positives per correct match: " << format_double(report.avg_false_positives) << "\n";
    } else {
      out << "total matches: " << report.total_matches << " (unaligned; correctness n/a)\n";
    }
    return 0;
  });
}

int cmd_describe(const RunConfig& cfg, const DescribeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    LoadOptions load;
    load.expected_count = cfg.flowers;
    load.depth_model = cfg.depth_model;
    LoadedDataset loaded;
    try {
      loaded = load_dataset(opts.dataset, load);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidParameter || load.expected_count) throw;
      load.expected_count = 3;
      loaded = load_dataset(opts.dataset, load);
    }
    const Dataset& d = loaded.dataset;
    warn_flowers(d.declared_flower_count, err);
    warn_alpha(cfg, err);
    if (opts.frame >= d.frames.size()) {
      throw Error(ErrorCode::InvalidParameter, "--frame " + std::to_string(opts.frame) + " out of range (" +
                                                   std::to_string(d.frames.size()) + " frames)");
    }

    NoiseModel noise;
    noise.sigma = cfg.noise_or(0.01);
    const Cluster& ref = d.frames[opts.frame];
    const DescriptorDistribution dist = ut_descriptor_distribution(ref, noise, cfg.ut(), cfg.padding.value_or(0.0));
    const ConfidenceEllipse ellipse = confidence_ellipse(dist.mean, dist.cov, cfg.confidence);

    const fs::path dir = output_dir(cfg);
    write_file(dir / "descriptors.csv", render([&](std::ostream& s) { write_descriptor_csv(s, d); }));
    write_file(dir / "distribution.json",
               described_distribution_json(dist, ellipse, cfg.confidence, ref.frame_id) + "\n");
    write_file(dir / "prune_report.csv", render([&](std::ostream& s) { write_prune_report_csv(s, loaded.prune); }));
    out << "described " << d.frames.size() << " frames of " << d.name << " (" << loaded.prune.dropped.size()
        << " pruned); distribution from frame " << ref.frame_id << "\n";
    return 0;
  });
}

int cmd_generate(const RunConfig& cfg, const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    SyntheticDatasetConfig gen;
    gen.frames = opts.frames;
    gen.flowers = cfg.flowers.value_or(3);
    gen.noise = cfg.noise_or(0.01);
    gen.seed = cfg.seed;
    gen.range = {0.0, cfg.extent};
    gen.corrupt_fraction = opts.corrupt;
    gen.name = opts.name;
    warn_flowers(gen.flowers, err);

    SyntheticDataset synth = generate_synthetic_frames(gen);
    Dataset d;
    d.name = gen.name;
    d.declared_flower_count = gen.flowers;
    d.frames = std::move(synth.frames);

    fs::path path = opts.output;
    if (cfg.out && path.is_relative()) path = output_dir(cfg) / path;
    save_dataset(path, d);
    out << "wrote " << d.frames.size() << " frames to " << path.string() << "\n";
    return 0;
  });
}

}  // namespace flowermatch::cli
