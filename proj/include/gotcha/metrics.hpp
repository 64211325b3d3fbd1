#pragma once

/* metrics.hpp -- performance gap, suite qualification, genuine-pass check.
 *
 * The gap statistic is what decides whether a challenge is worth issuing:
 * a challenge qualifies when detector quality on source imagery exceeds
 * quality on manipulated imagery by more than beta, on average.
 */

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gotcha/catalog.hpp"
#include "gotcha/errors.hpp"

namespace gotcha {

// Detector quality in [0, 1]; construction validates the range.
class QualityScore {
 public:
  explicit QualityScore(double value);
  double value() const { return value_; }

  friend bool operator==(const QualityScore&, const QualityScore&) = default;

 private:
  double value_;
};

struct GapConfig {
  double beta = 0.15;     // qualification margin on the mean gap
  double eta = 0.9;       // required genuine pass fraction
  double epsilon = 0.1;   // tolerated |gap| for a genuine sample to count as a pass

  void validate() const;  // DomainError outside documented ranges
};

// mean(src) - mean(fake); sequences may differ in length.
double performance_gap(std::span<const QualityScore> src_scores,
                       std::span<const QualityScore> fake_scores);

// One qualification sample: source-quality scores vs fake-quality scores.
using GapSample = std::pair<std::vector<QualityScore>, std::vector<QualityScore>>;

struct ChallengeGapStat {
  double mean_gap = 0.0;
  std::size_t n_samples = 0;

  friend bool operator==(const ChallengeGapStat&, const ChallengeGapStat&) = default;
};

struct QualificationReport {
  std::map<std::string, ChallengeGapStat> per_challenge;  // sorted by id
  std::set<std::string> qualified;                        // mean_gap > beta
  double beta = 0.0;

  friend bool operator==(const QualificationReport&, const QualificationReport&) = default;
};

// Every catalog challenge needs at least one sample (MissingGapDataError).
QualificationReport qualify_suite(const Catalog& cat,
                                  const std::map<std::string, std::vector<GapSample>>& samples,
                                  const GapConfig& cfg);

ordered_json to_json(const QualificationReport& report);
std::string serialize_report(const QualificationReport& report);

struct GenuinePassResult {
  double pass_fraction = 0.0;  // fraction of samples with |gap| < epsilon
  bool ok = false;             // pass_fraction > eta
};

// gaps_from_baseline: per challenge, |gap| observed when a genuine user
// answers. Empty map or any empty sequence raises EmptySequenceError.
GenuinePassResult calibrate_genuine_pass(const std::map<std::string, std::vector<double>>& gaps_from_baseline,
                                         const GapConfig& cfg);

}  // namespace gotcha
