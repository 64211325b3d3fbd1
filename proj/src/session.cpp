/* session.cpp -- verification, evidence accumulation, the session loop. */

#include "gotcha/session.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>

namespace gotcha {

std::string_view to_string(ScoreMode v) {
  return v == ScoreMode::Literal ? "literal" : "confidence-positive";
}

std::string_view to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

std::string_view to_string(FailReason v) {
  return v == FailReason::ThresholdExceeded ? "threshold_exceeded" : "verification_exhausted";
}

ScoreMode parse_score_mode(std::string_view s) {
  if (s == "literal") return ScoreMode::Literal;
  if (s == "confidence-positive") return ScoreMode::ConfidencePositive;
  throw SchemaError("unknown score mode '" + std::string(s) + "'");
}

void SessionConfig::validate() const {
  if (!std::isfinite(threshold_T)) throw DomainError("threshold_T must be finite");
  if (cascade_len == 0) throw DomainError("cascade_len must be >= 1");
  if (!(timeout_s > 0.0) || !std::isfinite(timeout_s)) throw DomainError("timeout_s must be > 0");
  if (max_retries < 0) throw DomainError("max_retries must be >= 0");
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("s must be > 0");
}

bool verify_response(const Challenge& c, const ResponseTrace& t) {
  if (t.frames.empty()) throw EmptyTraceError("verifying an empty trace");
  if (c.compliance.channel == ComplianceChannel::None) return true;

  const double fps = t.nominal_fps;
  const double window_s = c.compliance.within_s;
  const double need = c.compliance.min_delta;
  const std::size_t n = t.frames.size();

  // Sliding max/min over windows of at most window_s seconds; frame i sits
  // at time i / fps.
  std::deque<std::size_t> maxq, minq;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < n; ++hi) {
    double v = channel_value(t.frames[hi], c.compliance.channel);
    while (!maxq.empty() && channel_value(t.frames[maxq.back()], c.compliance.channel) <= v)
      maxq.pop_back();
    maxq.push_back(hi);
    while (!minq.empty() && channel_value(t.frames[minq.back()], c.compliance.channel) >= v)
      minq.pop_back();
    minq.push_back(hi);
    while (static_cast<double>(hi - lo) / fps > window_s) {
      if (maxq.front() == lo) maxq.pop_front();
      if (minq.front() == lo) minq.pop_front();
      ++lo;
    }
    double range = channel_value(t.frames[maxq.front()], c.compliance.channel) -
                   channel_value(t.frames[minq.front()], c.compliance.channel);
    if (range >= need) return true;
  }
  return false;
}

double amplify_increment(double p, double q_bar, ScoreMode mode) {
  if (!std::isfinite(p) || !(p > 0.0) || p > 1.0)
    throw DomainError("posterior p must lie in (0, 1]");
  if (!std::isfinite(q_bar) || q_bar < 0.0 || q_bar > 1.0)
    throw DomainError("anomaly score must lie in [0, 1]");
  if (mode == ScoreMode::Literal) return std::log(p) * q_bar;
  double pc = std::min(p, 1.0 - 1e-12);
  return -std::log1p(-pc) * q_bar;
}

double amplify(double e, double p, double q_bar, ScoreMode mode) {
  return e + amplify_increment(p, q_bar, mode);
}

namespace {

bool crossed(double e_bar, double threshold, ScoreMode mode) {
  return mode == ScoreMode::ConfidencePositive ? e_bar > threshold : e_bar < threshold;
}

}  // namespace

SessionRecord run_session(ResponseSource& source, const SessionSetup& setup,
                          const SessionConfig& cfg) {
  cfg.validate();
  if (filter_eligible(setup.suite, setup.ctx).empty())
    throw EmptySuiteError("no usable challenge in the suite under this context");

  SessionRecord rec;
  rec.participant_id = source.participant_id();
  rec.score_mode = cfg.score_mode;
  rec.cascade = build_cascade(setup.suite, setup.ctx, setup.hardness, cfg.cascade_len,
                              cfg.rng_seed);

  double clock_s = 0.0;
  for (std::size_t step = 0; step < rec.cascade.items.size(); ++step) {
    const Challenge* ch = nullptr;
    for (const auto& c : setup.suite)
      if (c.id == rec.cascade.items[step].id) {
        ch = &c;
        break;
      }
    // The cascade was built from this suite, so the lookup cannot fail.

    bool step_done = false;
    for (int attempt = 0; attempt <= cfg.max_retries && !step_done; ++attempt) {
      auto trace = source.respond(*ch, cfg.timeout_s, step, attempt);
      clock_s += trace ? trace->duration_s : cfg.timeout_s;

      StepRecord sr;
      sr.challenge_id = ch->id;
      sr.step_index = step;
      sr.retry_index = attempt;
      sr.timestamp_s = clock_s;

      if (trace && verify_response(*ch, *trace)) {
        sr.verified = true;
        GradeResult g = grade(*trace, setup.models.h0, setup.models.h1, cfg.s);
        sr.grade = g;
        double inc = amplify_increment(g.p, g.q_bar, cfg.score_mode);
        sr.increment = inc;
        rec.e += inc;
        rec.graded_steps += 1;
        rec.e_bar = rec.e / static_cast<double>(rec.graded_steps);
        rec.steps.push_back(std::move(sr));
        step_done = true;
        if (crossed(rec.e_bar, cfg.threshold_T, cfg.score_mode)) {
          rec.verdict = Verdict::Fail;
          rec.fail_reason = FailReason::ThresholdExceeded;
          return rec;
        }
      } else {
        rec.steps.push_back(std::move(sr));
      }
    }
    if (!step_done) {
      rec.verdict = Verdict::Fail;
      rec.fail_reason = FailReason::VerificationExhausted;
      return rec;
    }
  }
  rec.verdict = Verdict::Pass;
  return rec;
}

double calibrate_threshold(const std::vector<SessionRecord>& genuine_records,
                           double target_fp_rate, ScoreMode mode) {
  if (!(target_fp_rate > 0.0 && target_fp_rate < 1.0))
    throw DomainError("target false-positive rate must lie in (0, 1)");
  if (genuine_records.size() < 20)
    throw InsufficientDataError("threshold calibration needs >= 20 genuine sessions");
  std::vector<double> e_bars;
  e_bars.reserve(genuine_records.size());
  for (const auto& r : genuine_records) e_bars.push_back(r.e_bar);
  std::sort(e_bars.begin(), e_bars.end());
  // ConfidencePositive fails above T, so T sits at the upper tail; Literal
  // fails below T, so it sits at the lower tail.
  double q = mode == ScoreMode::ConfidencePositive ? 1.0 - target_fp_rate : target_fp_rate;
  double h = q * static_cast<double>(e_bars.size() - 1);
  auto i = static_cast<std::size_t>(h);
  if (i + 1 >= e_bars.size()) return e_bars.back();
  double frac = h - static_cast<double>(i);
  return e_bars[i] + frac * (e_bars[i + 1] - e_bars[i]);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ordered_json to_json(const SessionRecord& r) {
  ordered_json j = ordered_json::object();
  j["participant_id"] = r.participant_id;
  j["score_mode"] = to_string(r.score_mode);
  j["cascade"] = to_json(r.cascade);
  ordered_json steps = ordered_json::array();
  for (const auto& s : r.steps) {
    ordered_json e = ordered_json::object();
    e["challenge_id"] = s.challenge_id;
    e["step_index"] = s.step_index;
    e["retry_index"] = s.retry_index;
    e["verified"] = s.verified;
    if (s.grade) {
      ordered_json g = ordered_json::object();
      g["q_bar"] = s.grade->q_bar;
      g["lambda"] = s.grade->lambda;
      g["p"] = s.grade->p;
      g["reject_h0"] = s.grade->reject_h0;
      e["grade"] = g;
    } else {
      e["grade"] = nullptr;
    }
    if (s.increment)
      e["increment"] = *s.increment;
    else
      e["increment"] = nullptr;
    e["timestamp_s"] = s.timestamp_s;
    steps.push_back(e);
  }
  j["steps"] = steps;
  j["e"] = r.e;
  j["e_bar"] = r.e_bar;
  j["graded_steps"] = r.graded_steps;
  j["verdict"] = to_string(r.verdict);
  j["fail_reason"] = r.fail_reason ? ordered_json(to_string(*r.fail_reason)) : ordered_json(nullptr);
  return j;
}

std::string serialize_session(const SessionRecord& r) { return to_json(r).dump(2) + "\n"; }

std::string session_csv(const SessionRecord& r) {
  std::string out =
      "participant_id,step_index,challenge_id,retry_index,verified,q_bar,p,increment,E,E_bar,"
      "verdict\n";
  double e = 0.0;
  double e_bar = 0.0;
  std::size_t graded = 0;
  for (const auto& s : r.steps) {
    if (s.increment) {
      e += *s.increment;
      graded += 1;
      e_bar = e / static_cast<double>(graded);
    }
    out += r.participant_id;
    out += ',' + std::to_string(s.step_index);
    out += ',' + s.challenge_id;
    out += ',' + std::to_string(s.retry_index);
    out += s.verified ? ",true" : ",false";
    out += ',';
    if (s.grade) out += fmt(s.grade->q_bar);
    out += ',';
    if (s.grade) out += fmt(s.grade->p);
    out += ',';
    if (s.increment) out += fmt(*s.increment);
    out += ',' + fmt(e);
    out += ',' + fmt(e_bar);
    out += ',';
    out += to_string(r.verdict);
    out += '\n';
  }
  return out;
}

}  // namespace gotcha
