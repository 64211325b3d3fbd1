#pragma once

/* simulation.hpp -- synthetic participants and population studies.
 *
 * Each pipeline profile describes how a capture pipeline behaves per
 * challenge: the realism level its output reaches, its variability, and the
 * probability it manages to comply with the request at all. The genuine
 * profile is a real person on a real camera; the others are live face-swap
 * or reenactment pipelines with characteristic weaknesses.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gotcha/catalog.hpp"
#include "gotcha/errors.hpp"
#include "gotcha/session.hpp"
#include "gotcha/trace.hpp"

namespace gotcha {

enum class PipelineKind { Genuine, LDFL, HDFL, FSGAN, LIA };

std::string_view to_string(PipelineKind v);
PipelineKind parse_pipeline_kind(std::string_view s);

struct ChallengeBehavior {
  double realism_mean = 0.5;    // [0, 1]
  double realism_std = 0.1;     // > 0
  double compliance_prob = 1.0; // [0, 1]

  friend bool operator==(const ChallengeBehavior&, const ChallengeBehavior&) = default;
};

enum class PassiveKind { Flip, NoiseAddition, ColorFilter, Cutout, FeedDuplication };

std::string_view to_string(PassiveKind v);
PassiveKind parse_passive_kind(std::string_view s);

struct PipelineProfile {
  PipelineKind kind = PipelineKind::Genuine;
  double fps_capacity = 52.0;  // total face-processing throughput, > 0
  double fps_max = 30.0;       // camera/encoder cap, > 0
  std::map<std::string, ChallengeBehavior> per_challenge;
  std::map<PassiveKind, double> passive_degradation;  // realism drop per transform

  friend bool operator==(const PipelineProfile&, const PipelineProfile&) = default;
};

PipelineProfile load_profile(const std::string& json_text);
PipelineProfile load_profile_file(const std::string& path);
ordered_json to_json(const PipelineProfile& p);

// Cross-profile invariants for a full profile set: one profile per kind,
// genuine realism dominates every fake on every challenge, genuine
// compliance is 1, fake realism ordering LDFL <= FSGAN <= HDFL per
// challenge, LIA compliance < 0.5 on expression-driven active challenges.
// DomainError naming the first violation.
void validate_profile_set(const Catalog& cat, const std::vector<PipelineProfile>& profiles);

struct TraceConfig {
  double fps = 12.0;
  double duration_s = 5.0;

  void validate() const;  // DomainError
};

// Sustainable frame rate with n faces in frame: min(fps_max, capacity / n).
// n >= 1 (DomainError).
double fps_under_load(int n_faces, const PipelineProfile& profile);

// Draws a trace for one challenge. Realism is Gaussian around the profile
// mean, clamped to [0, 1]. With probability compliance_prob the compliance
// channel ramps across 1.05x min_delta inside the verification window
// (overshooting like a real participant, and keeping the realized range
// clear of the inclusive bound); otherwise it stays flat at baseline.
// Deterministic in (profile, challenge, cfg, seed).
// UnknownChallengeError when the profile lacks the challenge.
ResponseTrace synthesize_response(const PipelineProfile& profile, const Challenge& c,
                                  const TraceConfig& cfg, std::uint64_t seed);

struct PassiveTransform {
  PassiveKind kind = PassiveKind::Flip;
  double degradation_delta = 0.0;  // realism drop for manipulated feeds, >= 0
  int extra_faces = 0;             // FeedDuplication only
};

// Effect of a passive challenge on an existing trace. Genuine feeds keep
// their realism; manipulated feeds lose degradation_delta (floored at 0).
// FeedDuplication adds extra_faces to every frame and, when the pipeline
// can no longer keep up, drops the frame rate and resamples frames to keep
// length == round(fps * duration).
ResponseTrace apply_passive(const ResponseTrace& t, const PassiveTransform& transform,
                            const PipelineProfile& profile);

// PassiveTransform for a kind using the profile's degradation table.
PassiveTransform transform_for(const PipelineProfile& profile, PassiveKind kind,
                               int extra_faces = 0);

class SimulatedParticipant final : public ResponseSource {
 public:
  SimulatedParticipant(PipelineProfile profile, std::string id, std::uint64_t seed,
                       TraceConfig cfg = {});

  std::string participant_id() const override { return id_; }
  // Seed per attempt: derive_seed(seed, step_index * 256 + attempt). Returns
  // nullopt when the configured capture duration exceeds the timeout.
  std::optional<ResponseTrace> respond(const Challenge& c, double timeout_s,
                                       std::size_t step_index, int attempt) override;

  const PipelineProfile& profile() const { return profile_; }

 private:
  PipelineProfile profile_;
  std::string id_;
  std::uint64_t seed_;
  TraceConfig cfg_;
};

struct PopulationSpec {
  std::size_t n_genuine = 40;
  std::size_t n_per_pipeline = 40;  // sessions per fake pipeline
};

struct TrajectoryPoint {
  std::size_t k = 0;       // graded steps so far, 1-based
  double mean_e = 0.0;
  double std_e = 0.0;
  std::size_t n = 0;       // sessions still alive at step k
};

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct PipelineStats {
  PipelineKind kind = PipelineKind::Genuine;
  std::size_t sessions = 0;
  std::size_t pass_count = 0;
  std::size_t fail_threshold_count = 0;
  std::size_t fail_verification_count = 0;
  double mean_e_bar = 0.0;
  double std_e_bar = 0.0;
  double auc_vs_genuine = 0.5;  // rank AUC on final E-bar; 0.5 for genuine itself
  double miss_rate = 0.0;       // fakes only: fraction ending Pass
  std::vector<TrajectoryPoint> trajectory;
  std::vector<double> final_e_bar;
};

struct PopulationReport {
  std::uint64_t seed = 0;
  PopulationSpec spec;
  SessionConfig config;
  std::vector<PipelineStats> pipelines;  // canonical kind order
  double fpr = 0.0;  // genuine sessions failing
  double fnr = 0.0;  // fake sessions passing, pooled
  std::vector<RocPoint> roc;  // pooled fakes vs genuine, swept over thresholds
};

// Runs spec-sized populations through identical session machinery, one
// simulated participant per session, seeds derived from `seed` by global
// participant index. Profiles are processed in canonical kind order.
PopulationReport monte_carlo(const PopulationSpec& spec,
                             const std::vector<PipelineProfile>& profiles,
                             const Catalog& cat, const Context& ctx,
                             const ModelPair& models, const SessionConfig& cfg,
                             std::uint64_t seed, const TraceConfig& trace_cfg = {});

// Per-challenge hardness from fake profiles: mean of (1 - realism_mean).
std::map<std::string, double> hardness_from_profiles(const std::vector<PipelineProfile>& profiles);

ordered_json to_json(const PopulationReport& r);
std::string serialize_population_report(const PopulationReport& r);
std::string trajectories_csv(const PopulationReport& r);  // pipeline,k,mean_E,std_E
std::string roc_csv(const PopulationReport& r);           // threshold,fpr,tpr

}  // namespace gotcha
