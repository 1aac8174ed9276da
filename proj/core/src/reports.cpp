#include "flowermatch/reports.hpp"

#include <charconv>
#include <ostream>

#include <json.hpp>

namespace flowermatch {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  // Shortest text that parses back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_noise_sweep_csv(std::ostream& out, const NoiseSweepResult& r) {
  out << "noise,frobenius_norm,outlier_pct\n";
  for (const auto& row : r.rows) {
    out << format_double(row.noise) << ',' << format_double(row.frobenius_norm) << ','
        << format_double(row.outlier_pct) << '\n';
  }
}

void write_padding_study_csv(std::ostream& out, const PaddingStudyResult& r) {
  out << "arm,noise,padding,samples,correct_matches,avg_false_positives\n";
  auto line = [&](const char* name, const PaddingArmResult& a) {
    out << name << ',' << format_double(a.arm.noise) << ',' << format_double(a.arm.padding) << ','
        << a.samples << ',' << a.correct_matches << ',' << format_double(a.avg_false_positives) << '\n';
  };
  line("baseline", r.baseline);
  line("padded", r.padded);
}

std::string padding_study_json(const PaddingStudyResult& r, const PaddingStudyConfig& cfg) {
  auto arm = [](const PaddingArmResult& a) {
    return ordered_json{{"noise", a.arm.noise},
                        {"padding", a.arm.padding},
                        {"samples", a.samples},
                        {"correct_matches", a.correct_matches},
                        {"false_positives", a.false_positives},
                        {"avg_false_positives", a.avg_false_positives}};
  };
  ordered_json j{{"version", kSchemaVersion},
                 {"seed", cfg.seed},
                 {"confidence", cfg.confidence},
                 {"flowers", {cfg.min_flowers, cfg.max_flowers}},
                 {"baseline", arm(r.baseline)},
                 {"padded", arm(r.padded)}};
  return j.dump(2);
}

void write_match_pairs_csv(std::ostream& out, const MatchReport& r) {
  out << "ref_frame,obs_frame,d2,threshold,count_ok,matched\n";
  for (const auto& p : r.pairs) {
    out << p.ref_frame << ',' << p.result.frame_id << ',' << format_double(p.result.d2) << ','
        << format_double(p.result.threshold) << ',' << (p.result.count_ok ? 1 : 0) << ','
        << (p.result.matched ? 1 : 0) << '\n';
  }
}

std::string match_summary_json(const MatchReport& r) {
  ordered_json j{{"version", kSchemaVersion},
                 {"reference", r.reference_name},
                 {"observed", r.observed_name},
                 {"reference_frames", r.reference_frames},
                 {"observed_frames", r.observed_frames},
                 {"confidence", r.config.confidence},
                 {"threshold", r.threshold},
                 {"padding", r.config.padding},
                 {"require_count", r.config.require_count},
                 {"aligned", r.aligned},
                 {"total_matches", r.total_matches}};
  if (r.aligned) {
    j["diagonal_pairs"] = r.diagonal_pairs;
    j["correct_matches"] = r.correct_matches;
    j["off_diagonal_matches"] = r.off_diagonal_matches;
    j["avg_false_positives"] = r.avg_false_positives;
  } else {
    j["diagonal_pairs"] = nullptr;
    j["correct_matches"] = nullptr;
    j["off_diagonal_matches"] = nullptr;
    j["avg_false_positives"] = nullptr;
  }
  return j.dump(2);
}

void write_prune_report_csv(std::ostream& out, const PruneReport& r) {
  out << "frame_id,found_count\n";
  for (const auto& e : r.dropped) out << e.frame_id << ',' << e.found_count << '\n';
}

void write_descriptor_csv(std::ostream& out, const Dataset& d) {
  out << "frame_id,inertia,avg_distance\n";
  for (const auto& f : d.frames) {
    const Descriptor desc = compute_descriptor(f);
    out << f.frame_id << ',' << format_double(desc.inertia) << ',' << format_double(desc.avg_distance) << '\n';
  }
}

std::string described_distribution_json(const DescriptorDistribution& dist, const ConfidenceEllipse& ellipse,
                                        double confidence, std::int64_t frame_id) {
  ordered_json j{{"version", kSchemaVersion},
                 {"frame_id", frame_id},
                 {"mean", {dist.mean(0), dist.mean(1)}},
                 {"cov", {{dist.cov(0, 0), dist.cov(0, 1)}, {dist.cov(1, 0), dist.cov(1, 1)}}},
                 {"flower_count", dist.flower_count},
                 {"ellipse",
                  {{"confidence", confidence},
                   {"threshold", ellipse.threshold},
                   {"center", {ellipse.center(0), ellipse.center(1)}},
                   {"semi_major", ellipse.semi_major},
                   {"semi_minor", ellipse.semi_minor},
                   {"angle_rad", ellipse.angle}}}};
  return j.dump(2);
}

}  // namespace flowermatch
