/* simulation.cpp -- profiles, trace synthesis, populations, Monte Carlo. */

#include "gotcha/simulation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gotcha/rng.hpp"

namespace gotcha {

namespace {

constexpr std::array<std::pair<PipelineKind, std::string_view>, 5> kKinds{{
    {PipelineKind::Genuine, "genuine"},
    {PipelineKind::LDFL, "ldfl"},
    {PipelineKind::HDFL, "hdfl"},
    {PipelineKind::FSGAN, "fsgan"},
    {PipelineKind::LIA, "lia"},
}};

constexpr std::array<std::pair<PassiveKind, std::string_view>, 5> kPassives{{
    {PassiveKind::Flip, "flip"},
    {PassiveKind::NoiseAddition, "noise_addition"},
    {PassiveKind::ColorFilter, "color_filter"},
    {PassiveKind::Cutout, "cutout"},
    {PassiveKind::FeedDuplication, "feed_duplication"},
}};

// Processing order for populations; also the report row order.
constexpr std::array<PipelineKind, 5> kCanonicalOrder{
    PipelineKind::Genuine, PipelineKind::LDFL, PipelineKind::HDFL,
    PipelineKind::FSGAN, PipelineKind::LIA,
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void validate_behavior(const ChallengeBehavior& b, const std::string& where) {
  if (!(b.realism_mean >= 0.0 && b.realism_mean <= 1.0))
    throw DomainError(where + ": realism_mean must lie in [0, 1]");
  if (!(b.realism_std > 0.0) || !std::isfinite(b.realism_std))
    throw DomainError(where + ": realism_std must be > 0");
  if (!(b.compliance_prob >= 0.0 && b.compliance_prob <= 1.0))
    throw DomainError(where + ": compliance_prob must lie in [0, 1]");
}

struct RunningStat {
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    sumsq += v * v;
    n += 1;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stddev() const {
    if (n < 2) return 0.0;
    double m = mean();
    double var = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

std::string_view to_string(PipelineKind v) {
  for (const auto& [e, name] : kKinds)
    if (e == v) return name;
  return "?";
}

PipelineKind parse_pipeline_kind(std::string_view s) {
  for (const auto& [e, name] : kKinds)
    if (name == s) return e;
  throw SchemaError("unknown pipeline kind '" + std::string(s) + "'");
}

std::string_view to_string(PassiveKind v) {
  for (const auto& [e, name] : kPassives)
    if (e == v) return name;
  return "?";
}

PassiveKind parse_passive_kind(std::string_view s) {
  for (const auto& [e, name] : kPassives)
    if (name == s) return e;
  throw SchemaError("unknown passive transform '" + std::string(s) + "'");
}

void TraceConfig::validate() const {
  if (!(fps > 0.0) || !std::isfinite(fps)) throw DomainError("trace fps must be > 0");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    throw DomainError("trace duration must be > 0");
}

PipelineProfile load_profile(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("profile is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("profile: expected an object");
  static const std::set<std::string> known{"name", "fps_capacity", "fps_max", "per_challenge",
                                           "passive_degradation"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw SchemaError("profile: unknown key '" + it.key() + "'");
  for (const char* key : {"name", "fps_capacity", "fps_max", "per_challenge"})
    if (!j.contains(key)) throw SchemaError(std::string("profile: missing key '") + key + "'");

  PipelineProfile p;
  if (!j.at("name").is_string()) throw SchemaError("profile: 'name' must be a string");
  p.kind = parse_pipeline_kind(j.at("name").get<std::string>());
  if (!j.at("fps_capacity").is_number() || !j.at("fps_max").is_number())
    throw SchemaError("profile: fps fields must be numbers");
  p.fps_capacity = j.at("fps_capacity").get<double>();
  p.fps_max = j.at("fps_max").get<double>();
  if (!(p.fps_capacity > 0.0) || !std::isfinite(p.fps_capacity))
    throw DomainError("profile: fps_capacity must be > 0");
  if (!(p.fps_max > 0.0) || !std::isfinite(p.fps_max))
    throw DomainError("profile: fps_max must be > 0");

  const auto& pc = j.at("per_challenge");
  if (!pc.is_object() || pc.empty())
    throw SchemaError("profile: 'per_challenge' must be a non-empty object");
  for (auto it = pc.begin(); it != pc.end(); ++it) {
    const auto& bj = it.value();
    std::string where = "profile behavior for '" + it.key() + "'";
    if (!bj.is_object() || bj.size() != 3 || !bj.contains("realism_mean") ||
        !bj.contains("realism_std") || !bj.contains("compliance_prob"))
      throw SchemaError(where + ": expected {realism_mean, realism_std, compliance_prob}");
    for (const char* key : {"realism_mean", "realism_std", "compliance_prob"})
      if (!bj.at(key).is_number()) throw SchemaError(where + ": '" + key + "' must be a number");
    ChallengeBehavior b{bj.at("realism_mean").get<double>(), bj.at("realism_std").get<double>(),
                        bj.at("compliance_prob").get<double>()};
    validate_behavior(b, where);
    p.per_challenge[it.key()] = b;
  }

  if (j.contains("passive_degradation")) {
    const auto& pd = j.at("passive_degradation");
    if (!pd.is_object()) throw SchemaError("profile: 'passive_degradation' must be an object");
    for (auto it = pd.begin(); it != pd.end(); ++it) {
      if (!it.value().is_number())
        throw SchemaError("profile: degradation for '" + it.key() + "' must be a number");
      double d = it.value().get<double>();
      if (!(d >= 0.0) || !std::isfinite(d))
        throw DomainError("profile: degradation for '" + it.key() + "' must be >= 0");
      p.passive_degradation[parse_passive_kind(it.key())] = d;
    }
  }
  return p;
}

PipelineProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_profile(buf.str());
}

ordered_json to_json(const PipelineProfile& p) {
  ordered_json j = ordered_json::object();
  j["name"] = to_string(p.kind);
  j["fps_capacity"] = p.fps_capacity;
  j["fps_max"] = p.fps_max;
  ordered_json pc = ordered_json::object();
  for (const auto& [id, b] : p.per_challenge) {
    ordered_json bj = ordered_json::object();
    bj["realism_mean"] = b.realism_mean;
    bj["realism_std"] = b.realism_std;
    bj["compliance_prob"] = b.compliance_prob;
    pc[id] = bj;
  }
  j["per_challenge"] = pc;
  ordered_json pd = ordered_json::object();
  for (const auto& [k, d] : p.passive_degradation) pd[std::string(to_string(k))] = d;
  j["passive_degradation"] = pd;
  return j;
}

void validate_profile_set(const Catalog& cat, const std::vector<PipelineProfile>& profiles) {
  std::map<PipelineKind, const PipelineProfile*> by_kind;
  for (const auto& p : profiles)
    if (!by_kind.emplace(p.kind, &p).second)
      throw DomainError("duplicate profile for pipeline '" + std::string(to_string(p.kind)) + "'");

  for (const auto& [kind, p] : by_kind)
    for (const auto& c : cat.challenges())
      if (!p->per_challenge.count(c.id))
        throw DomainError("profile '" + std::string(to_string(kind)) +
                          "' lacks behavior for challenge '" + c.id + "'");

  auto get = [&](PipelineKind k) -> const PipelineProfile* {
    auto it = by_kind.find(k);
    return it == by_kind.end() ? nullptr : it->second;
  };
  const PipelineProfile* genuine = get(PipelineKind::Genuine);
  const PipelineProfile* ldfl = get(PipelineKind::LDFL);
  const PipelineProfile* hdfl = get(PipelineKind::HDFL);
  const PipelineProfile* fsgan = get(PipelineKind::FSGAN);
  const PipelineProfile* lia = get(PipelineKind::LIA);

  for (const auto& c : cat.challenges()) {
    if (genuine) {
      const auto& g = genuine->per_challenge.at(c.id);
      for (const auto& [kind, p] : by_kind) {
        if (kind == PipelineKind::Genuine) continue;
        if (p->per_challenge.at(c.id).realism_mean > g.realism_mean)
          throw DomainError("profile '" + std::string(to_string(kind)) +
                            "' outscores genuine realism on '" + c.id + "'");
      }
      if (c.mode == Mode::Active && g.compliance_prob != 1.0)
        throw DomainError("genuine compliance must be 1 on active challenge '" + c.id + "'");
    }
    // Anomaly ordering LDFL >= FSGAN >= HDFL means realism the other way.
    if (ldfl && fsgan && ldfl->per_challenge.at(c.id).realism_mean >
                             fsgan->per_challenge.at(c.id).realism_mean)
      throw DomainError("ldfl realism exceeds fsgan on '" + c.id + "'");
    if (fsgan && hdfl && fsgan->per_challenge.at(c.id).realism_mean >
                             hdfl->per_challenge.at(c.id).realism_mean)
      throw DomainError("fsgan realism exceeds hdfl on '" + c.id + "'");
    if (lia && c.mode == Mode::Active &&
        c.compliance.channel == ComplianceChannel::ExpressionIntensity &&
        lia->per_challenge.at(c.id).compliance_prob >= 0.5)
      throw DomainError("lia compliance must stay < 0.5 on expression challenge '" + c.id + "'");
  }
}

double fps_under_load(int n_faces, const PipelineProfile& profile) {
  if (n_faces < 1) throw DomainError("fps under load needs n_faces >= 1");
  return std::min(profile.fps_max, profile.fps_capacity / static_cast<double>(n_faces));
}

ResponseTrace synthesize_response(const PipelineProfile& profile, const Challenge& c,
                                  const TraceConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  auto it = profile.per_challenge.find(c.id);
  if (it == profile.per_challenge.end())
    throw UnknownChallengeError("profile '" + std::string(to_string(profile.kind)) +
                                "' has no behavior for challenge '" + c.id + "'");
  const ChallengeBehavior& b = it->second;

  auto n = static_cast<std::size_t>(std::llround(cfg.fps * cfg.duration_s));
  if (n == 0) n = 1;

  SplitMix64 rng(seed);
  bool comply = rng.next_bernoulli(b.compliance_prob);

  const ComplianceChannel ch = c.compliance.channel;
  // A compliant response ramps the channel inside the verification window,
  // then holds; a non-compliant one leaves only idle jitter, far below any
  // catalog min_delta. The ramp overshoots min_delta by 5% so the realized
  // range clears the inclusive verification bound even when the decimal
  // delta is not exactly representable.
  const double d = 1.05 * c.compliance.min_delta;
  bool ramping = comply && ch != ComplianceChannel::None && n >= 2;
  std::size_t ramp_len = 0;
  if (ramping) {
    ramp_len = static_cast<std::size_t>(std::floor(c.compliance.within_s * cfg.fps)) + 1;
    ramp_len = std::clamp<std::size_t>(ramp_len, 2, n);
  }

  ResponseTrace t;
  t.challenge_id = c.id;
  t.nominal_fps = cfg.fps;
  t.duration_s = cfg.duration_s;
  t.frames.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    FrameFeatures f;
    f.realism = clamp01(b.realism_mean + b.realism_std * rng.next_normal());
    f.yaw_deg = 0.8 * rng.next_normal();
    f.expression_intensity = clamp01(0.05 + 0.01 * rng.next_normal());
    f.occlusion_fraction = clamp01(0.05 + 0.01 * rng.next_normal());
    f.luminance_shift = std::clamp(0.01 * rng.next_normal(), -1.0, 1.0);
    f.n_faces = 1;
    if (ramping) {
      double pos = i < ramp_len ? static_cast<double>(i) / static_cast<double>(ramp_len - 1) : 1.0;
      switch (ch) {
        case ComplianceChannel::YawAngle: f.yaw_deg = -d / 2.0 + d * pos; break;
        case ComplianceChannel::ExpressionIntensity:
          f.expression_intensity = clamp01(0.05 + d * pos);
          break;
        case ComplianceChannel::OcclusionFraction:
          f.occlusion_fraction = clamp01(0.05 + d * pos);
          break;
        case ComplianceChannel::LuminanceShift:
          f.luminance_shift = std::clamp(-d / 2.0 + d * pos, -1.0, 1.0);
          break;
        default: break;
      }
    }
    t.frames.push_back(f);
  }
  return t;
}

PassiveTransform transform_for(const PipelineProfile& profile, PassiveKind kind, int extra_faces) {
  PassiveTransform tr;
  tr.kind = kind;
  auto it = profile.passive_degradation.find(kind);
  tr.degradation_delta = it == profile.passive_degradation.end() ? 0.0 : it->second;
  tr.extra_faces = extra_faces;
  return tr;
}

ResponseTrace apply_passive(const ResponseTrace& t, const PassiveTransform& transform,
                            const PipelineProfile& profile) {
  if (t.frames.empty()) throw EmptyTraceError("passive transform of an empty trace");
  if (!(transform.degradation_delta >= 0.0) || !std::isfinite(transform.degradation_delta))
    throw DomainError("degradation delta must be >= 0");
  if (transform.extra_faces < 0) throw DomainError("extra faces must be >= 0");

  ResponseTrace out = t;
  if (profile.kind != PipelineKind::Genuine && transform.degradation_delta > 0.0)
    for (auto& f : out.frames) f.realism = std::max(0.0, f.realism - transform.degradation_delta);

  if (transform.kind == PassiveKind::FeedDuplication && transform.extra_faces > 0) {
    int max_faces = 1;
    for (auto& f : out.frames) {
      f.n_faces += transform.extra_faces;
      max_faces = std::max(max_faces, f.n_faces);
    }
    // Capture can slow down under load but never speeds past the camera.
    double new_fps = std::min(out.nominal_fps, fps_under_load(max_faces, profile));
    if (new_fps < out.nominal_fps) {
      auto target = static_cast<std::size_t>(std::llround(new_fps * out.duration_s));
      if (target == 0) target = 1;
      std::vector<FrameFeatures> kept;
      kept.reserve(target);
      std::size_t n = out.frames.size();
      if (target == 1) {
        kept.push_back(out.frames.front());
      } else {
        for (std::size_t i = 0; i < target; ++i) {
          auto idx = static_cast<std::size_t>(std::llround(
              static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(target - 1)));
          kept.push_back(out.frames[idx]);
        }
      }
      out.frames = std::move(kept);
      out.nominal_fps = new_fps;
    }
  }
  return out;
}

SimulatedParticipant::SimulatedParticipant(PipelineProfile profile, std::string id,
                                           std::uint64_t seed, TraceConfig cfg)
    : profile_(std::move(profile)), id_(std::move(id)), seed_(seed), cfg_(cfg) {
  cfg_.validate();
}

std::optional<ResponseTrace> SimulatedParticipant::respond(const Challenge& c, double timeout_s,
                                                           std::size_t step_index, int attempt) {
  if (cfg_.duration_s > timeout_s) return std::nullopt;
  std::uint64_t s = derive_seed(seed_, step_index * 256 + static_cast<std::uint64_t>(attempt));
  return synthesize_response(profile_, c, cfg_, s);
}

std::map<std::string, double> hardness_from_profiles(
    const std::vector<PipelineProfile>& profiles) {
  std::map<std::string, double> sums;
  std::map<std::string, std::size_t> counts;
  for (const auto& p : profiles) {
    if (p.kind == PipelineKind::Genuine) continue;
    for (const auto& [id, b] : p.per_challenge) {
      sums[id] += 1.0 - b.realism_mean;
      counts[id] += 1;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [id, sum] : sums)
    out[id] = clamp01(sum / static_cast<double>(counts.at(id)));
  return out;
}

namespace {

// Rank AUC with ties counted half; orientation depends on the score mode.
double rank_auc(const std::vector<double>& genuine, const std::vector<double>& fake,
                ScoreMode mode) {
  if (genuine.empty() || fake.empty()) return 0.5;
  double wins = 0.0;
  for (double f : fake)
    for (double g : genuine) {
      if (f == g)
        wins += 0.5;
      else if ((mode == ScoreMode::ConfidencePositive) ? (f > g) : (f < g))
        wins += 1.0;
    }
  return wins / (static_cast<double>(genuine.size()) * static_cast<double>(fake.size()));
}

}  // namespace

PopulationReport monte_carlo(const PopulationSpec& spec,
                             const std::vector<PipelineProfile>& profiles, const Catalog& cat,
                             const Context& ctx, const ModelPair& models,
                             const SessionConfig& cfg, std::uint64_t seed,
                             const TraceConfig& trace_cfg) {
  cfg.validate();
  trace_cfg.validate();
  std::map<PipelineKind, const PipelineProfile*> by_kind;
  for (const auto& p : profiles)
    if (!by_kind.emplace(p.kind, &p).second)
      throw DomainError("duplicate profile for pipeline '" + std::string(to_string(p.kind)) + "'");

  SessionSetup setup;
  setup.suite = cat.challenges();
  setup.ctx = ctx;
  setup.hardness = hardness_from_profiles(profiles);
  if (setup.hardness.empty())
    for (const auto& c : cat.challenges()) setup.hardness[c.id] = 0.5;
  setup.models = models;

  PopulationReport report;
  report.seed = seed;
  report.spec = spec;
  report.config = cfg;

  std::vector<double> genuine_finals;
  std::vector<double> fake_finals;
  std::uint64_t participant_index = 0;

  for (PipelineKind kind : kCanonicalOrder) {
    auto it = by_kind.find(kind);
    if (it == by_kind.end()) continue;
    const PipelineProfile& profile = *it->second;
    std::size_t count = kind == PipelineKind::Genuine ? spec.n_genuine : spec.n_per_pipeline;

    PipelineStats stats;
    stats.kind = kind;
    stats.sessions = count;
    RunningStat final_stat;
    std::vector<std::vector<double>> e_paths;
    e_paths.reserve(count);

    for (std::size_t i = 0; i < count; ++i, ++participant_index) {
      std::uint64_t pseed = derive_seed(seed, participant_index);
      char idbuf[32];
      std::snprintf(idbuf, sizeof idbuf, "%s-%03zu", std::string(to_string(kind)).c_str(), i);
      SimulatedParticipant participant(profile, idbuf, pseed, trace_cfg);
      SessionConfig run_cfg = cfg;
      run_cfg.rng_seed = pseed;
      SessionRecord rec = run_session(participant, setup, run_cfg);

      if (rec.verdict == Verdict::Pass)
        stats.pass_count += 1;
      else if (rec.fail_reason == FailReason::ThresholdExceeded)
        stats.fail_threshold_count += 1;
      else
        stats.fail_verification_count += 1;

      stats.final_e_bar.push_back(rec.e_bar);
      final_stat.add(rec.e_bar);
      (kind == PipelineKind::Genuine ? genuine_finals : fake_finals).push_back(rec.e_bar);

      std::vector<double> path;
      double e = 0.0;
      for (const auto& s : rec.steps)
        if (s.increment) {
          e += *s.increment;
          path.push_back(e);
        }
      e_paths.push_back(std::move(path));
    }

    stats.mean_e_bar = final_stat.mean();
    stats.std_e_bar = final_stat.stddev();
    stats.miss_rate =
        kind == PipelineKind::Genuine || count == 0
            ? 0.0
            : static_cast<double>(stats.pass_count) / static_cast<double>(count);

    std::size_t max_len = 0;
    for (const auto& path : e_paths) max_len = std::max(max_len, path.size());
    for (std::size_t k = 1; k <= max_len; ++k) {
      RunningStat st;
      for (const auto& path : e_paths)
        if (path.size() >= k) st.add(path[k - 1]);
      if (st.n == 0) continue;
      TrajectoryPoint pt;
      pt.k = k;
      pt.mean_e = st.mean();
      pt.std_e = st.stddev();
      pt.n = st.n;
      stats.trajectory.push_back(pt);
    }
    report.pipelines.push_back(std::move(stats));
  }

  // AUC needs the genuine finals, which are only complete now.
  for (auto& stats : report.pipelines)
    stats.auc_vs_genuine = stats.kind == PipelineKind::Genuine
                               ? 0.5
                               : rank_auc(genuine_finals, stats.final_e_bar, cfg.score_mode);

  std::size_t genuine_fails = 0;
  for (const auto& stats : report.pipelines)
    if (stats.kind == PipelineKind::Genuine)
      genuine_fails = stats.fail_threshold_count + stats.fail_verification_count;
  report.fpr = genuine_finals.empty()
                   ? 0.0
                   : static_cast<double>(genuine_fails) / static_cast<double>(genuine_finals.size());
  std::size_t fake_passes = 0;
  std::size_t fake_total = 0;
  for (const auto& stats : report.pipelines) {
    if (stats.kind == PipelineKind::Genuine) continue;
    fake_passes += stats.pass_count;
    fake_total += stats.sessions;
  }
  report.fnr = fake_total == 0 ? 0.0
                               : static_cast<double>(fake_passes) / static_cast<double>(fake_total);

  if (!genuine_finals.empty() && !fake_finals.empty()) {
    std::vector<double> thresholds;
    thresholds.reserve(genuine_finals.size() + fake_finals.size() + 1);
    thresholds.insert(thresholds.end(), genuine_finals.begin(), genuine_finals.end());
    thresholds.insert(thresholds.end(), fake_finals.begin(), fake_finals.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    // Sentinel on the all-positive side of the sweep.
    if (cfg.score_mode == ScoreMode::ConfidencePositive)
      thresholds.insert(thresholds.begin(), thresholds.front() - 1.0);
    else
      thresholds.push_back(thresholds.back() + 1.0);

    for (double t : thresholds) {
      auto above = [&](const std::vector<double>& xs) {
        std::size_t c = 0;
        for (double x : xs)
          if (cfg.score_mode == ScoreMode::ConfidencePositive ? x > t : x < t) ++c;
        return static_cast<double>(c) / static_cast<double>(xs.size());
      };
      RocPoint pt;
      pt.threshold = t;
      pt.fpr = above(genuine_finals);
      pt.tpr = above(fake_finals);
      report.roc.push_back(pt);
    }
  }
  return report;
}

ordered_json to_json(const PopulationReport& r) {
  ordered_json j = ordered_json::object();
  j["seed"] = r.seed;
  ordered_json spec = ordered_json::object();
  spec["n_genuine"] = r.spec.n_genuine;
  spec["n_per_pipeline"] = r.spec.n_per_pipeline;
  j["population"] = spec;
  ordered_json cfgj = ordered_json::object();
  cfgj["threshold_T"] = r.config.threshold_T;
  cfgj["cascade_len"] = r.config.cascade_len;
  cfgj["timeout_s"] = r.config.timeout_s;
  cfgj["max_retries"] = r.config.max_retries;
  cfgj["score_mode"] = to_string(r.config.score_mode);
  cfgj["s"] = r.config.s;
  j["config"] = cfgj;
  ordered_json pipes = ordered_json::array();
  for (const auto& p : r.pipelines) {
    ordered_json pj = ordered_json::object();
    pj["pipeline"] = to_string(p.kind);
    pj["sessions"] = p.sessions;
    pj["pass"] = p.pass_count;
    pj["fail_threshold"] = p.fail_threshold_count;
    pj["fail_verification"] = p.fail_verification_count;
    pj["mean_e_bar"] = p.mean_e_bar;
    pj["std_e_bar"] = p.std_e_bar;
    pj["auc_vs_genuine"] = p.auc_vs_genuine;
    pj["miss_rate"] = p.miss_rate;
    ordered_json traj = ordered_json::array();
    for (const auto& pt : p.trajectory) {
      ordered_json tj = ordered_json::object();
      tj["k"] = pt.k;
      tj["mean_e"] = pt.mean_e;
      tj["std_e"] = pt.std_e;
      tj["n"] = pt.n;
      traj.push_back(tj);
    }
    pj["trajectory"] = traj;
    ordered_json finals = ordered_json::array();
    for (double v : p.final_e_bar) finals.push_back(v);
    pj["final_e_bar"] = finals;
    pipes.push_back(pj);
  }
  j["pipelines"] = pipes;
  j["fpr"] = r.fpr;
  j["fnr"] = r.fnr;
  ordered_json roc = ordered_json::array();
  for (const auto& pt : r.roc) {
    ordered_json tj = ordered_json::object();
    tj["threshold"] = pt.threshold;
    tj["fpr"] = pt.fpr;
    tj["tpr"] = pt.tpr;
    roc.push_back(tj);
  }
  j["roc"] = roc;
  return j;
}

std::string serialize_population_report(const PopulationReport& r) {
  return to_json(r).dump(2) + "\n";
}

std::string trajectories_csv(const PopulationReport& r) {
  std::string out = "pipeline,k,mean_E,std_E\n";
  for (const auto& p : r.pipelines)
    for (const auto& pt : p.trajectory) {
      out += to_string(p.kind);
      out += ',' + std::to_string(pt.k);
      out += ',' + fmt(pt.mean_e);
      out += ',' + fmt(pt.std_e);
      out += '\n';
    }
  return out;
}

std::string roc_csv(const PopulationReport& r) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& pt : r.roc) {
    out += fmt(pt.threshold);
    out += ',' + fmt(pt.fpr);
    out += ',' + fmt(pt.tpr);
    out += '\n';
  }
  return out;
}

}  // namespace gotcha
