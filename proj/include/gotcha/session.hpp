#pragma once

/* session.hpp -- the challenge-response session loop.
 *
 * One session: build a cascade, issue challenges in order, verify each
 * response, grade verified responses, accumulate evidence E, and compare the
 * running mean E-bar against the decision threshold T.
 *
 * Two scoring orientations exist. Literal adds log(p) * q_bar, which is
 * never positive, so evidence of manipulation drives E down and sessions
 * fail when E-bar drops below T. ConfidencePositive (the default) adds
 * -log(1 - p) * q_bar, which is never negative, so E-bar rises with
 * suspicion and sessions fail when it exceeds T.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gotcha/cascade.hpp"
#include "gotcha/errors.hpp"
#include "gotcha/grader.hpp"
#include "gotcha/trace.hpp"

namespace gotcha {

enum class ScoreMode { Literal, ConfidencePositive };
enum class Verdict { Pass, Fail };
enum class FailReason { ThresholdExceeded, VerificationExhausted };

std::string_view to_string(ScoreMode v);
std::string_view to_string(Verdict v);
std::string_view to_string(FailReason v);
ScoreMode parse_score_mode(std::string_view s);

struct SessionConfig {
  double threshold_T = 3.0;
  std::size_t cascade_len = 14;
  double timeout_s = 10.0;
  int max_retries = 3;
  ScoreMode score_mode = ScoreMode::ConfidencePositive;
  double s = 1.0;  // grader rejection threshold on lambda
  std::uint64_t rng_seed = 0;

  void validate() const;  // DomainError

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

// Everything a session needs besides the participant: the qualified suite,
// the deployment context, per-challenge hardness, and the grader models.
struct SessionSetup {
  std::vector<Challenge> suite;
  Context ctx;
  std::map<std::string, double> hardness;
  ModelPair models;
};

struct StepRecord {
  std::string challenge_id;
  std::size_t step_index = 0;  // position in the cascade
  int retry_index = 0;         // 0 on first attempt
  bool verified = false;
  std::optional<GradeResult> grade;   // only when verified
  std::optional<double> increment;    // contribution to E, only when verified
  double timestamp_s = 0.0;           // simulated elapsed time at step end
};

struct SessionRecord {
  std::string participant_id;
  Cascade cascade;
  std::vector<StepRecord> steps;
  double e = 0.0;
  double e_bar = 0.0;
  std::size_t graded_steps = 0;
  Verdict verdict = Verdict::Pass;
  std::optional<FailReason> fail_reason;
  ScoreMode score_mode = ScoreMode::ConfidencePositive;
};

// Supplier of response traces; nullopt means the capture timed out.
class ResponseSource {
 public:
  virtual ~ResponseSource() = default;
  virtual std::string participant_id() const = 0;
  virtual std::optional<ResponseTrace> respond(const Challenge& c, double timeout_s,
                                               std::size_t step_index, int attempt) = 0;
};

// True iff the challenge's compliance channel shows a range >= min_delta
// inside some window of within_s seconds. Channel None verifies trivially.
// EmptyTraceError on an empty trace.
bool verify_response(const Challenge& c, const ResponseTrace& t);

// Evidence update. p must lie in (0, 1] (DomainError), q_bar in [0, 1].
// In ConfidencePositive mode p is clamped away from 1 before the log.
double amplify_increment(double p, double q_bar, ScoreMode mode);
double amplify(double e, double p, double q_bar, ScoreMode mode);

// Runs the full loop. A challenge failing verification is reissued up to
// max_retries times; exhausting retries fails the session
// (VerificationExhausted). Crossing the threshold fails it immediately
// (ThresholdExceeded). EmptySuiteError when no challenge survives the
// context filter.
SessionRecord run_session(ResponseSource& source, const SessionSetup& setup,
                          const SessionConfig& cfg);

// Threshold giving the target false-positive rate on genuine sessions:
// the (1 - fp) quantile of final E-bar in ConfidencePositive mode, the fp
// quantile in Literal mode. Linear interpolation between order statistics.
// Requires >= 20 records (InsufficientDataError); fp in (0, 1).
double calibrate_threshold(const std::vector<SessionRecord>& genuine_records,
                           double target_fp_rate, ScoreMode mode);

ordered_json to_json(const SessionRecord& r);
std::string serialize_session(const SessionRecord& r);  // stable bytes
// Header plus one row per step:
// participant_id,step_index,challenge_id,retry_index,verified,q_bar,p,increment,E,E_bar,verdict
std::string session_csv(const SessionRecord& r);

}  // namespace gotcha
