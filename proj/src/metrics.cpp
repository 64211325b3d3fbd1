/* metrics.cpp -- gap statistic, qualification, genuine-pass calibration. */

#include "gotcha/metrics.hpp"

#include <cmath>

namespace gotcha {

QualityScore::QualityScore(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0)
    throw DomainError("quality score must lie in [0, 1]");
}

void GapConfig::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be > 0");
}

namespace {

double mean_of(std::span<const QualityScore> xs) {
  double sum = 0.0;
  for (const auto& x : xs) sum += x.value();
  return sum / static_cast<double>(xs.size());
}

}  // namespace

double performance_gap(std::span<const QualityScore> src_scores,
                       std::span<const QualityScore> fake_scores) {
  if (src_scores.empty() || fake_scores.empty())
    throw EmptySequenceError("performance gap needs non-empty score sequences");
  return mean_of(src_scores) - mean_of(fake_scores);
}

QualificationReport qualify_suite(const Catalog& cat,
                                  const std::map<std::string, std::vector<GapSample>>& samples,
                                  const GapConfig& cfg) {
  cfg.validate();
  QualificationReport report;
  report.beta = cfg.beta;
  for (const auto& c : cat.challenges()) {
    auto it = samples.find(c.id);
    if (it == samples.end() || it->second.empty())
      throw MissingGapDataError("no gap samples for challenge '" + c.id + "'");
    double sum = 0.0;
    for (const auto& [src, fake] : it->second) sum += performance_gap(src, fake);
    ChallengeGapStat stat;
    stat.n_samples = it->second.size();
    stat.mean_gap = sum / static_cast<double>(stat.n_samples);
    report.per_challenge[c.id] = stat;
    if (stat.mean_gap > cfg.beta) report.qualified.insert(c.id);
  }
  return report;
}

ordered_json to_json(const QualificationReport& report) {
  ordered_json per = ordered_json::object();
  for (const auto& [id, stat] : report.per_challenge) {
    ordered_json s = ordered_json::object();
    s["mean_gap"] = stat.mean_gap;
    s["n_samples"] = stat.n_samples;
    per[id] = s;
  }
  ordered_json j = ordered_json::object();
  j["beta"] = report.beta;
  j["per_challenge"] = per;
  ordered_json q = ordered_json::array();
  for (const auto& id : report.qualified) q.push_back(id);
  j["qualified"] = q;
  return j;
}

std::string serialize_report(const QualificationReport& report) {
  return to_json(report).dump(2) + "\n";
}

GenuinePassResult calibrate_genuine_pass(
    const std::map<std::string, std::vector<double>>& gaps_from_baseline, const GapConfig& cfg) {
  cfg.validate();
  if (gaps_from_baseline.empty())
    throw EmptySequenceError("genuine-pass calibration needs at least one challenge");
  std::size_t total = 0;
  std::size_t passed = 0;
  for (const auto& [id, gaps] : gaps_from_baseline) {
    if (gaps.empty())
      throw EmptySequenceError("no baseline gap samples for challenge '" + id + "'");
    for (double g : gaps) {
      ++total;
      if (std::abs(g) < cfg.epsilon) ++passed;
    }
  }
  GenuinePassResult r;
  r.pass_fraction = static_cast<double>(passed) / static_cast<double>(total);
  r.ok = r.pass_fraction > cfg.eta;
  return r;
}

}  // namespace gotcha
