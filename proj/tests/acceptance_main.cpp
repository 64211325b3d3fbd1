/* acceptance_main.cpp -- end-to-end acceptance checks.
 *
 * Prints one pass/fail line per criterion and exits with the number of
 * failures. Every tolerance is pinned here, not computed on the fly.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gotcha/default_data.hpp"
#include "gotcha/metrics.hpp"
#include "gotcha/rng.hpp"
#include "gotcha/session.hpp"
#include "gotcha/simulation.hpp"

using namespace gotcha;

namespace {

int g_failures = 0;

void report(int idx, const std::string& what, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", idx, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const PipelineStats& stats_for(const PopulationReport& r, PipelineKind k) {
  for (const auto& p : r.pipelines)
    if (p.kind == k) return p;
  throw std::runtime_error("pipeline missing from report");
}

// ---- 1: frame-rate collapse anchors ----------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  const PipelineProfile& fake = data::default_profile(PipelineKind::LDFL);

  bool ok = fps_under_load(26, fake) == 2.0;
  ok = ok && fps_under_load(3, fake) >= 15.0;
  double prev = fps_under_load(1, fake);
  for (int n = 2; n <= 100 && ok; ++n) {
    double cur = fps_under_load(n, fake);
    ok = ok && cur <= prev;
    prev = cur;
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 1.0;
  report(1, "feed-overload frame-rate anchors",
         ok, "fps(26)=" + fmt(fps_under_load(26, fake)) + ", fps(3)=" +
             fmt(fps_under_load(3, fake)) + ", " + fmt(dt) + " s");
}

// ---- 2-4: one shared population run ----------------------------------------
//
// The three population criteria are judged on a single 40+40-per-pipeline
// run with the decision threshold parked far out of reach. Early exits would
// truncate the trajectories these criteria are about: the evidence-ordering
// and exhaustion claims concern the accumulation process itself, not the
// verdict cut, so the run keeps every session alive to the end of its
// cascade. The verdict cut is exercised by criterion 5.

struct SharedRun {
  PopulationReport report;
  double seconds = 0.0;
};

SharedRun shared_population_run() {
  auto t0 = std::chrono::steady_clock::now();
  PopulationSpec spec;
  spec.n_genuine = 40;
  spec.n_per_pipeline = 40;
  SessionConfig cfg;
  cfg.cascade_len = 14;
  cfg.score_mode = ScoreMode::ConfidencePositive;
  cfg.threshold_T = 1e9;
  SharedRun run;
  run.report = monte_carlo(spec, data::default_profiles(), data::default_catalog(),
                           data::default_context("interview"), data::default_models(), cfg,
                           20260825);
  run.seconds = seconds_since(t0);
  return run;
}

std::optional<double> traj_mean_at(const PipelineStats& p, std::size_t k) {
  for (const auto& pt : p.trajectory)
    if (pt.k == k) return pt.mean_e;
  return std::nullopt;
}

void criterion_2(const SharedRun& run) {
  const auto& genuine = stats_for(run.report, PipelineKind::Genuine);
  auto g1 = traj_mean_at(genuine, 1);
  auto g14 = traj_mean_at(genuine, 14);

  bool ok = g1.has_value() && g14.has_value() && run.seconds < 30.0;
  std::string detail = "t=" + fmt(run.seconds) + " s";
  for (auto kind : {PipelineKind::LDFL, PipelineKind::FSGAN, PipelineKind::HDFL}) {
    const auto& p = stats_for(run.report, kind);
    auto f1 = traj_mean_at(p, 1);
    auto f14 = traj_mean_at(p, 14);
    bool here = f1 && f14 && g1 && g14 && *f14 > *g14 && (*f14 - *g14) > (*f1 - *g1);
    ok = ok && here;
    if (f14 && g14)
      detail += ", " + std::string(to_string(kind)) + " gap@14=" + fmt(*f14 - *g14);
  }
  report(2, "impersonator evidence trajectories diverge from genuine", ok, detail);
}

void criterion_3(const SharedRun& run) {
  const auto order = {PipelineKind::LDFL, PipelineKind::FSGAN, PipelineKind::HDFL,
                      PipelineKind::Genuine};
  bool ok = true;
  std::string detail;
  const PipelineStats* prev = nullptr;
  for (auto kind : order) {
    const auto& cur = stats_for(run.report, kind);
    if (prev) {
      double gap = prev->mean_e_bar - cur.mean_e_bar;
      double se = std::sqrt(prev->std_e_bar * prev->std_e_bar / prev->sessions +
                            cur.std_e_bar * cur.std_e_bar / cur.sessions);
      ok = ok && gap > 3.0 * se;
      if (!detail.empty()) detail += ", ";
      detail += std::string(to_string(prev->kind)) + ">" + std::string(to_string(kind)) +
                " gap=" + fmt(gap) + " (3se=" + fmt(3.0 * se) + ")";
    }
    prev = &cur;
  }
  report(3, "mean final evidence orders the pipelines", ok, detail);
}

void criterion_4(const SharedRun& run) {
  const auto& lia = stats_for(run.report, PipelineKind::LIA);
  double frac = static_cast<double>(lia.fail_verification_count) /
                static_cast<double>(lia.sessions);
  // Pinned after the first oracle run of this exact seeded configuration,
  // which measured 0.95 (the rare passes come from the profile's residual
  // compliance on expression challenges); the floor stays at 0.70.
  bool ok = frac >= 0.70;
  report(4, "reenactment sessions exhaust verification", ok,
         "fraction=" + fmt(frac) + " (floor 0.70)");
}

// ---- 5: threshold calibration round-trip ------------------------------------

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  SessionSetup setup;
  setup.suite = data::default_catalog().challenges();
  setup.ctx = data::default_context("interview");
  setup.hardness = hardness_from_profiles(data::default_profiles());
  setup.models = data::default_models();

  SessionConfig open_cfg;
  open_cfg.cascade_len = 14;
  open_cfg.threshold_T = 1e300;  // observe the final evidence, never exit early

  auto run_population = [&](PipelineKind kind, std::uint64_t master,
                            const SessionConfig& cfg) {
    std::vector<SessionRecord> records;
    records.reserve(100);
    for (std::uint64_t i = 0; i < 100; ++i) {
      SimulatedParticipant p(data::default_profile(kind),
                             std::string(to_string(kind)) + "-" + std::to_string(i),
                             derive_seed(master, i));
      SessionConfig run_cfg = cfg;
      run_cfg.rng_seed = derive_seed(master, i);
      records.push_back(run_session(p, setup, run_cfg));
    }
    return records;
  };

  auto fit_records = run_population(PipelineKind::Genuine, 101, open_cfg);
  double T = calibrate_threshold(fit_records, 0.05, ScoreMode::ConfidencePositive);

  SessionConfig live_cfg = open_cfg;
  live_cfg.threshold_T = T;

  auto fresh = run_population(PipelineKind::Genuine, 202, live_cfg);
  std::size_t fp = 0;
  for (const auto& r : fresh)
    if (r.verdict == Verdict::Fail) ++fp;
  double fpr = static_cast<double>(fp) / static_cast<double>(fresh.size());

  auto ldfl = run_population(PipelineKind::LDFL, 303, live_cfg);
  std::size_t fn = 0;
  for (const auto& r : ldfl)
    if (r.verdict == Verdict::Pass) ++fn;
  double fnr = static_cast<double>(fn) / static_cast<double>(ldfl.size());

  double dt = seconds_since(t0);
  bool ok = fpr >= 0.0 && fpr <= 0.12 && fnr <= 0.10 && dt < 60.0;
  report(5, "calibrated threshold hits its error budget", ok,
         "T=" + fmt(T) + ", fpr=" + fmt(fpr) + ", fnr=" + fmt(fnr) + ", " + fmt(dt) + " s");
}

// ---- 6: grader oracle equivalence -------------------------------------------

double oracle_log_pdf(double x, double mu, double sigma) {
  static const double log_sqrt_2pi = 0.5 * std::log(2.0 * std::acos(-1.0));
  return -((x - mu) * (x - mu)) / (2.0 * sigma * sigma) - std::log(sigma) - log_sqrt_2pi;
}

ResponseTrace trace_of(const std::vector<double>& realism) {
  ResponseTrace t;
  t.challenge_id = "oracle";
  t.nominal_fps = 1.0;
  t.duration_s = static_cast<double>(realism.size());
  for (double r : realism) {
    FrameFeatures f;
    f.realism = r;
    t.frames.push_back(f);
  }
  return t;
}

void criterion_6() {
  bool ok = true;
  std::string detail;

  // Three-frame cases against direct density arithmetic, 1e-9 relative.
  struct Case {
    FeatureModel h0, h1;
    std::vector<double> frames;
  };
  const std::vector<Case> cases{
      {{0.9, 0.05}, {0.6, 0.2}, {0.85, 0.7, 0.92}},
      {{0.93, 0.02}, {0.66, 0.16}, {0.9, 0.88, 0.95}},
      {{0.5, 0.3}, {0.5, 0.1}, {0.2, 0.5, 0.8}},
  };
  double worst_rel = 0.0;
  for (const auto& c : cases) {
    double llr = 0.0;
    for (double x : c.frames)
      llr += oracle_log_pdf(x, c.h0.mean, c.h0.stddev) - oracle_log_pdf(x, c.h1.mean, c.h1.stddev);
    double expect = std::exp(llr);
    double got = likelihood_ratio(trace_of(c.frames), c.h0, c.h1);
    double rel = std::abs(got - expect) / expect;
    worst_rel = std::max(worst_rel, rel);
    ok = ok && rel < 1e-9;
  }
  detail += "lambda rel err=" + fmt(worst_rel);

  // Exhaustive Bayes over a discretized two-point observation space. The
  // models mirror each other around 0.5, so the two-point normalizers agree
  // and the discrete posterior is exactly 1 / (1 + Lambda).
  FeatureModel h0{0.4, 0.1};
  FeatureModel h1{0.6, 0.1};
  const double xa = 0.45, xb = 0.55;
  double z0 = std::exp(oracle_log_pdf(xa, h0.mean, h0.stddev)) +
              std::exp(oracle_log_pdf(xb, h0.mean, h0.stddev));
  double z1 = std::exp(oracle_log_pdf(xa, h1.mean, h1.stddev)) +
              std::exp(oracle_log_pdf(xb, h1.mean, h1.stddev));

  double worst_p = 0.0;
  const int len = 8;
  for (int bits = 0; bits < (1 << len); ++bits) {
    std::vector<double> frames;
    double l0 = 1.0, l1 = 1.0;
    for (int i = 0; i < len; ++i) {
      double x = (bits >> i) & 1 ? xb : xa;
      frames.push_back(x);
      l0 *= std::exp(oracle_log_pdf(x, h0.mean, h0.stddev)) / z0;
      l1 *= std::exp(oracle_log_pdf(x, h1.mean, h1.stddev)) / z1;
    }
    double bayes_p = l1 / (l0 + l1);  // equal priors
    double got = grade(trace_of(frames), h0, h1, 1.0).p;
    worst_p = std::max(worst_p, std::abs(got - bayes_p));
  }
  ok = ok && worst_p < 1e-12;
  detail += ", bayes |dp|=" + fmt(worst_p);

  report(6, "likelihood grading matches independent oracles", ok, detail);
}

// ---- 7: protocol invariants over randomized sessions -------------------------

void criterion_7() {
  SplitMix64 rng(777);
  const auto& profiles = data::default_profiles();
  bool ok = true;
  std::string why;

  SessionSetup setup;
  setup.suite = data::default_catalog().challenges();
  setup.hardness = hardness_from_profiles(profiles);
  setup.models = data::default_models();

  for (int i = 0; i < 1000 && ok; ++i) {
    const PipelineProfile& profile = profiles[rng.next_u64() % profiles.size()];
    SessionConfig cfg;
    cfg.score_mode = rng.next_bernoulli(0.5) ? ScoreMode::Literal : ScoreMode::ConfidencePositive;
    cfg.threshold_T = cfg.score_mode == ScoreMode::ConfidencePositive
                          ? 0.5 + 29.5 * rng.next_double()
                          : -60.0 * rng.next_double();
    cfg.cascade_len = 1 + rng.next_u64() % 16;
    cfg.max_retries = static_cast<int>(rng.next_u64() % 4);
    cfg.rng_seed = rng.next_u64();
    setup.ctx = rng.next_bernoulli(0.5) ? data::default_context("interview")
                                        : data::default_context("executive-call");

    SimulatedParticipant p(profile, "anyone", rng.next_u64());
    SessionRecord rec = run_session(p, setup, cfg);

    double e = 0.0;
    std::size_t graded = 0;
    for (const auto& s : rec.steps) {
      if (s.grade.has_value() && !s.verified) {
        ok = false;
        why = "graded an unverified step";
      }
      if (s.increment.has_value() != s.grade.has_value()) {
        ok = false;
        why = "increment without grade";
      }
      if (s.increment) {
        double next = e + *s.increment;
        if (cfg.score_mode == ScoreMode::ConfidencePositive ? next < e : next > e) {
          ok = false;
          why = "evidence moved against its mode";
        }
        e = next;
        ++graded;
      }
    }
    if (std::abs(e - rec.e) > 1e-9 || graded != rec.graded_steps) {
      ok = false;
      why = "recorded evidence disagrees with its steps";
    }
  }

  // Byte-identical replay across 20 random seeds.
  setup.ctx = data::default_context("interview");
  for (int i = 0; i < 20 && ok; ++i) {
    std::uint64_t seed = rng.next_u64();
    SessionConfig cfg;
    cfg.threshold_T = 1e9;
    cfg.rng_seed = seed;
    const PipelineProfile& profile = profiles[seed % profiles.size()];
    SimulatedParticipant a(profile, "replay", seed);
    SimulatedParticipant b(profile, "replay", seed);
    if (serialize_session(run_session(a, setup, cfg)) !=
        serialize_session(run_session(b, setup, cfg))) {
      ok = false;
      why = "replay diverged";
    }
  }

  report(7, "session protocol invariants hold over 1000 randomized runs", ok, why);
}

// ---- 8: cascade invariants over randomized inputs ----------------------------

void criterion_8() {
  SplitMix64 rng(888);
  const auto& all = data::default_catalog().challenges();
  bool ok = true;
  std::string why;
  int checked = 0;

  auto random_context = [&]() {
    Context ctx;
    switch (rng.next_u64() % 3) {
      case 0: ctx.allowed_modes = {Mode::Active}; break;
      case 1: ctx.allowed_modes = {Mode::Passive}; break;
      default: ctx.allowed_modes = {Mode::Active, Mode::Passive}; break;
    }
    if (rng.next_bernoulli(0.4)) {
      static const std::vector<CategorySelector> pool{
          {Category::Occlusion, std::nullopt},
          {Category::Occlusion, std::string("real-objects")},
          {Category::FacialExpression, std::nullopt},
          {Category::FacialDistortion, std::string("human-introduced")},
          {Category::Surroundings, std::string("software-introduced")},
      };
      ctx.excluded_categories.push_back(pool[rng.next_u64() % pool.size()]);
    }
    ctx.has_physical_articles = rng.next_bernoulli(0.7);
    ctx.has_trusted_device = rng.next_bernoulli(0.7);
    ctx.security_level = rng.next_double();
    ctx.usability_floor = 0.6 * rng.next_double();
    return ctx;
  };

  for (int i = 0; i < 1000 && ok; ++i) {
    std::vector<Challenge> sub;
    for (const auto& c : all)
      if (rng.next_bernoulli(0.6)) sub.push_back(c);
    if (sub.empty()) sub.push_back(all[rng.next_u64() % all.size()]);

    std::map<std::string, double> hardness;
    for (const auto& c : all) hardness[c.id] = rng.next_double();

    Context ctx = random_context();
    auto n = 1 + rng.next_u64() % 10;
    auto mode = rng.next_bernoulli(0.5) ? CascadeMode::Deterministic : CascadeMode::Weighted;
    std::uint64_t seed = rng.next_u64();

    std::vector<Challenge> eligible = filter_eligible(sub, ctx);
    Cascade cas;
    try {
      cas = build_cascade(sub, ctx, hardness, n, seed, mode);
    } catch (const EmptyEligibleSetError&) {
      if (!eligible.empty()) {
        ok = false;
        why = "refused a non-empty eligible set";
      }
      continue;
    }
    ++checked;

    std::set<std::string> eligible_ids;
    for (const auto& c : eligible) eligible_ids.insert(c.id);

    for (std::size_t k = 0; k < cas.items.size() && ok; ++k) {
      if (!eligible_ids.count(cas.items[k].id)) {
        ok = false;
        why = "cascade contains an ineligible challenge";
      }
      if (k > 0 && cas.items[k - 1].utility > cas.items[k].utility) {
        ok = false;
        why = "utility order decreased";
      }
      const Challenge* c = nullptr;
      for (const auto& cc : all)
        if (cc.id == cas.items[k].id) c = &cc;
      if (c && std::abs(cas.items[k].utility - utility(*c, ctx, hardness)) > 1e-12) {
        ok = false;
        why = "stored utility drifted from its definition";
      }
    }

    std::vector<Challenge> reversed(sub.rbegin(), sub.rend());
    if (ok && !(build_cascade(reversed, ctx, hardness, n, seed, mode) == cas)) {
      ok = false;
      why = "input permutation changed the cascade";
    }
  }

  // Endpoint oracle: at the extremes the ranking is exactly the hardness or
  // usability ranking, ties by id.
  for (int i = 0; i < 200 && ok; ++i) {
    std::map<std::string, double> hardness;
    for (const auto& c : all) hardness[c.id] = rng.next_double();
    Context ctx;
    ctx.security_level = rng.next_bernoulli(0.5) ? 0.0 : 1.0;
    auto n = 1 + rng.next_u64() % all.size();

    auto key = [&](const Challenge& c) {
      return ctx.security_level == 1.0 ? hardness.at(c.id) : normalized_usability(c);
    };
    std::vector<const Challenge*> ranked;
    for (const auto& c : all) ranked.push_back(&c);
    std::sort(ranked.begin(), ranked.end(), [&](const Challenge* a, const Challenge* b) {
      if (key(*a) != key(*b)) return key(*a) > key(*b);
      return a->id < b->id;
    });
    ranked.resize(std::min<std::size_t>(n, ranked.size()));
    std::sort(ranked.begin(), ranked.end(), [&](const Challenge* a, const Challenge* b) {
      if (key(*a) != key(*b)) return key(*a) < key(*b);
      return a->id < b->id;
    });

    Cascade cas = build_cascade(all, ctx, hardness, n, 0);
    bool same = cas.items.size() == ranked.size();
    for (std::size_t k = 0; same && k < ranked.size(); ++k)
      same = cas.items[k].id == ranked[k]->id;
    if (!same) {
      ok = false;
      why = "endpoint ranking mismatch at security " + fmt(ctx.security_level);
    }
  }

  report(8, "cascade invariants hold over 1000 randomized pairs", ok,
         ok ? "built " + std::to_string(checked) + " cascades" : why);
}

// ---- 9: qualification monotonicity vs brute force ----------------------------

void criterion_9() {
  SplitMix64 rng(999);
  const Catalog& cat = data::default_catalog();

  // Synthetic gap corpus: per challenge, a handful of samples whose gaps
  // spread across the sweep range.
  std::map<std::string, std::vector<GapSample>> samples;
  for (const auto& c : cat.challenges()) {
    std::size_t n = 2 + rng.next_u64() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      double gap = 0.55 * rng.next_double();
      double src = 0.9;
      std::vector<QualityScore> s{QualityScore(src), QualityScore(src)};
      std::vector<QualityScore> f{QualityScore(src - gap)};
      samples[c.id].push_back({s, f});
    }
  }

  bool ok = true;
  std::string why;
  std::set<std::string> prev;
  bool first = true;
  for (int step = 1; step <= 10 && ok; ++step) {
    GapConfig cfg;
    cfg.beta = 0.05 * step;
    QualificationReport rep = qualify_suite(cat, samples, cfg);

    // Independent brute force over the same samples.
    std::set<std::string> brute;
    for (const auto& [id, list] : samples) {
      double sum = 0.0;
      for (const auto& [src, fake] : list) {
        double ms = 0.0, mf = 0.0;
        for (const auto& v : src) ms += v.value();
        for (const auto& v : fake) mf += v.value();
        sum += ms / src.size() - mf / fake.size();
      }
      if (sum / list.size() > cfg.beta) brute.insert(id);
    }
    if (rep.qualified != brute) {
      ok = false;
      why = "brute-force disagreement at beta " + fmt(cfg.beta);
    }
    if (!first && ok)
      for (const auto& id : rep.qualified)
        if (!prev.count(id)) {
          ok = false;
          why = "qualified set grew when beta rose to " + fmt(cfg.beta);
        }
    prev = rep.qualified;
    first = false;
  }

  report(9, "qualification shrinks monotonically and matches brute force", ok, why);
}

}  // namespace

int main() {
  criterion_1();
  SharedRun run = shared_population_run();
  criterion_2(run);
  criterion_3(run);
  criterion_4(run);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();

  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures;
}
