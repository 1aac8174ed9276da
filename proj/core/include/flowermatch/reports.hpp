#pragma once

// CSV and JSON artifacts. Doubles are written with 17 significant digits
// so every file re-parses to the exact values.

#include <iosfwd>
#include <string>

#include "flowermatch/datasets.hpp"
#include "flowermatch/experiments.hpp"
#include "flowermatch/matching.hpp"
#include "flowermatch/metrics.hpp"

namespace flowermatch {

std::string format_double(double v);

/// noise,frobenius_norm,outlier_pct
void write_noise_sweep_csv(std::ostream& out, const NoiseSweepResult& r);

/// arm,noise,padding,samples,correct_matches,avg_false_positives
void write_padding_study_csv(std::ostream& out, const PaddingStudyResult& r);
std::string padding_study_json(const PaddingStudyResult& r, const PaddingStudyConfig& cfg);

/// ref_frame,obs_frame,d2,threshold,count_ok,matched
void write_match_pairs_csv(std::ostream& out, const MatchReport& r);

/// Totals: correct (diagonal) matches, off-diagonal matches, average false
/// positives per correct match. Correctness fields are null when unaligned.
std::string match_summary_json(const MatchReport& r);

/// frame_id,found_count
void write_prune_report_csv(std::ostream& out, const PruneReport& r);

/// frame_id,inertia,avg_distance
void write_descriptor_csv(std::ostream& out, const Dataset& d);

/// Distribution document plus the confidence ellipse used for plotting.
std::string described_distribution_json(const DescriptorDistribution& dist, const ConfidenceEllipse& ellipse,
                                        double confidence, std::int64_t frame_id);

}  // namespace flowermatch
