#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = flowermatch::cli;

int main(int argc, char** argv) {
  CLI::App app{"Flower cluster re-identification with unscented-transform tolerances", "flowermatch"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override it");

  cli::RunConfig cfg;
  std::string depth_model = "ray";
  std::optional<double> confidence_pct;

  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--confidence", cfg.confidence, "Gate confidence as a fraction in (0,1)")->capture_default_str();
  app.add_option("--confidence-pct", confidence_pct, "Gate confidence as a percentage in (0,100)");
  app.add_option("--noise", cfg.noise, "Positional noise std in meters (repeat for a grid)");
  app.add_option("--padding", cfg.padding, "Covariance diagonal padding");
  app.add_option("--alpha", cfg.alpha, "UT spread")->capture_default_str();
  app.add_option("--beta", cfg.beta, "UT prior weight")->capture_default_str();
  app.add_option("--kappa", cfg.kappa, "UT secondary scale")->capture_default_str();
  app.add_option("--flowers", cfg.flowers, "Flowers per cluster (default 3, or the dataset header)");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--extent", cfg.extent, "Side of the cube simulated flowers are drawn from (m)")
      ->capture_default_str();
  app.add_option("--depth-model", depth_model, "How raw depth is read: ray or z-axis")
      ->check(CLI::IsMember({"ray", "z-axis"}))
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "MC vs UT noise sweep (noise, frobenius_norm, outlier_pct)");

  cli::PaddingStudyOptions padding_opts;
  auto* padding = app.add_subcommand("padding-study", "Correct matches and false positives with/without padding");
  padding->add_option("--samples", padding_opts.samples, "Synthetic samples")->capture_default_str();
  padding->add_option("--min-flowers", padding_opts.min_flowers)->capture_default_str();
  padding->add_option("--max-flowers", padding_opts.max_flowers)->capture_default_str();
  padding->add_option("--padded-noise", padding_opts.padded_noise, "Noise for the padded arm (default: --noise)");

  cli::MatchOptions match_opts;
  auto* match = app.add_subcommand("match", "Match an observed dataset against a reference dataset");
  match->add_option("reference", match_opts.reference, "Reference dataset (.jsonl or .csv)")->required();
  match->add_option("observed", match_opts.observed, "Observed dataset (.jsonl or .csv)")->required();
  match->add_option("--obs-flowers", match_opts.observed_flowers, "Expected flowers in the observed dataset");
  match->add_flag("--unaligned", match_opts.unaligned, "Frame i of both datasets is not the same instant");
  match->add_flag("--no-count-gate", match_opts.no_count_gate, "Do not require equal flower counts");

  cli::DescribeOptions describe_opts;
  auto* describe = app.add_subcommand("describe", "Per-frame descriptors and a UT distribution with ellipse");
  describe->add_option("dataset", describe_opts.dataset, "Dataset (.jsonl or .csv)")->required();
  describe->add_option("--frame", describe_opts.frame, "Frame index the distribution is built from")
      ->capture_default_str();

  cli::GenerateOptions gen_opts;
  auto* generate = app.add_subcommand("generate", "Write a synthetic noisy dataset of one cluster");
  generate->add_option("output", gen_opts.output, "Output .jsonl path")->required();
  generate->add_option("--frames", gen_opts.frames)->capture_default_str();
  generate->add_option("--corrupt", gen_opts.corrupt, "Fraction of frames with a wrong detection count")
      ->capture_default_str();
  generate->add_option("--name", gen_opts.name)->capture_default_str();

  for (auto* sub : {simulate, padding, match, describe, generate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
    if (confidence_pct) {
      if (app.count("--confidence") > 0) throw CLI::ValidationError("use only one of --confidence and --confidence-pct");
      cfg.confidence = *confidence_pct / 100.0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.depth_model = depth_model == "z-axis" ? flowermatch::DepthModel::ZAxis : flowermatch::DepthModel::Ray;

  if (*simulate) return cli::cmd_simulate(cfg, std::cout, std::cerr);
  if (*padding) return cli::cmd_padding_study(cfg, padding_opts, std::cout, std::cerr);
  if (*match) return cli::cmd_match(cfg, match_opts, std::cout, std::cerr);
  if (*describe) return cli::cmd_describe(cfg, describe_opts, std::cout, std::cerr);
  if (*generate) return cli::cmd_generate(cfg, gen_opts, std::cout, std::cerr);
  return 2;
}
