/* gotcha_main.cpp -- command line front end.
 *
 * Subcommands: session, montecarlo, qualify, calibrate, version.
 * Exit codes: 0 success, 2 configuration problem, 3 runtime failure.
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gotcha/default_data.hpp"
#include "gotcha/errors.hpp"
#include "gotcha/metrics.hpp"
#include "gotcha/rng.hpp"
#include "gotcha/session.hpp"
#include "gotcha/simulation.hpp"
#include "gotcha/version.hpp"

namespace fs = std::filesystem;
using namespace gotcha;

namespace {

// Resolved global configuration; flags beat manifest values beat defaults.
struct RunManifest {
  std::string catalog_path;  // empty: embedded catalog
  std::string profiles_dir;  // empty: embedded profiles
  std::string context = "interview";
  std::string mode = "confidence-positive";
  std::uint64_t seed = 0;
  std::string output_dir = "out";
};

struct Resolved {
  RunManifest manifest;
  Catalog catalog;
  std::vector<PipelineProfile> profiles;
  Context ctx;
  ModelPair models;
  ScoreMode mode = ScoreMode::ConfidencePositive;
};

void require_file(const std::string& path, const char* what) {
  if (!fs::exists(path))
    throw ConfigError(std::string(what) + " path '" + path + "' does not exist");
}

Resolved resolve(const RunManifest& m, const std::string& models_path) {
  Resolved r;
  r.manifest = m;

  if (m.catalog_path.empty()) {
    r.catalog = data::default_catalog();
  } else {
    require_file(m.catalog_path, "catalog");
    r.catalog = load_catalog_file(m.catalog_path);
  }

  if (m.profiles_dir.empty()) {
    r.profiles = data::default_profiles();
  } else {
    require_file(m.profiles_dir, "profiles");
    for (const char* name : {"genuine", "ldfl", "hdfl", "fsgan", "lia"}) {
      fs::path p = fs::path(m.profiles_dir) / (std::string(name) + ".json");
      require_file(p.string(), "profile");
      r.profiles.push_back(load_profile_file(p.string()));
    }
    validate_profile_set(r.catalog, r.profiles);
  }

  if (m.context == "interview" || m.context == "executive-call") {
    r.ctx = data::default_context(m.context);
  } else {
    require_file(m.context, "context");
    r.ctx = load_context_file(m.context);
  }

  if (models_path.empty()) {
    r.models = data::default_models();
  } else {
    require_file(models_path, "models");
    r.models = load_models_file(models_path);
  }

  r.mode = parse_score_mode(m.mode);
  return r;
}

const PipelineProfile& profile_by_name(const Resolved& r, const std::string& name) {
  PipelineKind kind = parse_pipeline_kind(name);
  for (const auto& p : r.profiles)
    if (p.kind == kind) return p;
  throw ConfigError("no profile loaded for pipeline '" + name + "'");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write '" + path.string() + "'");
  out << content;
}

fs::path prepare_out(const RunManifest& m, const std::string& command,
                     const ordered_json& extra) {
  fs::path dir(m.output_dir);
  fs::create_directories(dir);
  ordered_json j = ordered_json::object();
  j["command"] = command;
  j["catalog"] = m.catalog_path.empty() ? ordered_json(nullptr) : ordered_json(m.catalog_path);
  j["profiles"] = m.profiles_dir.empty() ? ordered_json(nullptr) : ordered_json(m.profiles_dir);
  j["context"] = m.context;
  j["mode"] = m.mode;
  j["seed"] = m.seed;
  j["output_dir"] = m.output_dir;
  j["options"] = extra;
  write_file(dir / "manifest.json", j.dump(2) + "\n");
  return dir;
}

SessionSetup make_setup(const Resolved& r) {
  SessionSetup setup;
  setup.suite = r.catalog.challenges();
  setup.ctx = r.ctx;
  setup.hardness = hardness_from_profiles(r.profiles);
  setup.models = r.models;
  return setup;
}

std::vector<SessionRecord> run_profile_sessions(const Resolved& r, const PipelineProfile& profile,
                                                const SessionConfig& cfg, std::uint64_t master,
                                                std::size_t count, const TraceConfig& tcfg) {
  SessionSetup setup = make_setup(r);
  std::vector<SessionRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t pseed = derive_seed(master, i);
    char id[32];
    std::snprintf(id, sizeof id, "%s-%03zu", std::string(to_string(profile.kind)).c_str(), i);
    SimulatedParticipant participant(profile, id, pseed, tcfg);
    SessionConfig run_cfg = cfg;
    run_cfg.rng_seed = pseed;
    out.push_back(run_session(participant, setup, run_cfg));
  }
  return out;
}

int cmd_session(const Resolved& r, const std::string& profile_name, const SessionConfig& cfg,
                const TraceConfig& tcfg) {
  ordered_json opts = ordered_json::object();
  opts["profile"] = profile_name;
  opts["threshold_T"] = cfg.threshold_T;
  opts["cascade_len"] = cfg.cascade_len;
  opts["timeout_s"] = cfg.timeout_s;
  opts["max_retries"] = cfg.max_retries;
  fs::path dir = prepare_out(r.manifest, "session", opts);

  const PipelineProfile& profile = profile_by_name(r, profile_name);
  SimulatedParticipant participant(profile, profile_name + "-000",
                                   derive_seed(r.manifest.seed, 0), tcfg);
  SessionConfig run_cfg = cfg;
  run_cfg.rng_seed = r.manifest.seed;
  SessionRecord rec = run_session(participant, make_setup(r), run_cfg);

  write_file(dir / ("session-" + profile_name + ".json"), serialize_session(rec));
  write_file(dir / ("session-" + profile_name + ".csv"), session_csv(rec));

  std::cout << "participant=" << rec.participant_id << " verdict=" << to_string(rec.verdict);
  if (rec.fail_reason) std::cout << " reason=" << to_string(*rec.fail_reason);
  std::cout << " e_bar=" << rec.e_bar << " graded=" << rec.graded_steps
            << " steps=" << rec.steps.size() << "\n";
  return 0;
}

int cmd_montecarlo(const Resolved& r, const PopulationSpec& spec, const SessionConfig& cfg,
                   const TraceConfig& tcfg) {
  ordered_json opts = ordered_json::object();
  opts["n_genuine"] = spec.n_genuine;
  opts["n_per_pipeline"] = spec.n_per_pipeline;
  opts["threshold_T"] = cfg.threshold_T;
  opts["cascade_len"] = cfg.cascade_len;
  fs::path dir = prepare_out(r.manifest, "montecarlo", opts);

  PopulationReport report = monte_carlo(spec, r.profiles, r.catalog, r.ctx, r.models, cfg,
                                        r.manifest.seed, tcfg);
  write_file(dir / "report.json", serialize_population_report(report));
  write_file(dir / "trajectories.csv", trajectories_csv(report));
  write_file(dir / "roc.csv", roc_csv(report));

  for (const auto& p : report.pipelines)
    std::cout << to_string(p.kind) << ": sessions=" << p.sessions << " pass=" << p.pass_count
              << " fail_threshold=" << p.fail_threshold_count
              << " fail_verification=" << p.fail_verification_count
              << " mean_e_bar=" << p.mean_e_bar << " auc=" << p.auc_vs_genuine << "\n";
  std::cout << "fpr=" << report.fpr << " fnr=" << report.fnr << "\n";
  return 0;
}

int cmd_qualify(const Resolved& r, GapConfig gap_cfg, std::size_t samples_per_pipeline,
                const TraceConfig& tcfg) {
  ordered_json opts = ordered_json::object();
  opts["beta"] = gap_cfg.beta;
  opts["eta"] = gap_cfg.eta;
  opts["epsilon"] = gap_cfg.epsilon;
  opts["samples"] = samples_per_pipeline;
  fs::path dir = prepare_out(r.manifest, "qualify", opts);

  const PipelineProfile& genuine = profile_by_name(r, "genuine");
  std::map<std::string, std::vector<GapSample>> samples;
  std::uint64_t counter = 0;
  for (const auto& c : r.catalog.challenges()) {
    for (const auto& p : r.profiles) {
      if (p.kind == PipelineKind::Genuine) continue;
      for (std::size_t s = 0; s < samples_per_pipeline; ++s) {
        auto src_trace = synthesize_response(genuine, c, tcfg,
                                             derive_seed(r.manifest.seed, counter++));
        auto fake_trace = synthesize_response(p, c, tcfg,
                                              derive_seed(r.manifest.seed, counter++));
        GapSample sample;
        for (const auto& f : src_trace.frames) sample.first.emplace_back(f.realism);
        for (const auto& f : fake_trace.frames) sample.second.emplace_back(f.realism);
        samples[c.id].push_back(std::move(sample));
      }
    }
  }
  QualificationReport report = qualify_suite(r.catalog, samples, gap_cfg);
  write_file(dir / "qualification.json", serialize_report(report));

  std::cout << "qualified " << report.qualified.size() << "/" << r.catalog.size()
            << " challenges (beta=" << gap_cfg.beta << ")\n";
  for (const auto& id : report.qualified) std::cout << "  " << id << "\n";
  return 0;
}

int cmd_calibrate(const Resolved& r, double fp_rate, std::size_t n, SessionConfig cfg,
                  const TraceConfig& tcfg) {
  ordered_json opts = ordered_json::object();
  opts["fp_rate"] = fp_rate;
  opts["n"] = n;
  opts["cascade_len"] = cfg.cascade_len;
  fs::path dir = prepare_out(r.manifest, "calibrate", opts);

  // Measure the natural E-bar distribution on full cascades: disable the
  // early exit for the calibration run.
  SessionConfig open_cfg = cfg;
  open_cfg.threshold_T = cfg.score_mode == ScoreMode::ConfidencePositive ? 1e300 : -1e300;

  const PipelineProfile& genuine = profile_by_name(r, "genuine");
  auto records = run_profile_sessions(r, genuine, open_cfg, derive_seed(r.manifest.seed, 1), n,
                                      tcfg);
  double threshold = calibrate_threshold(records, fp_rate, cfg.score_mode);

  // Validation populations with the calibrated threshold active.
  SessionConfig val_cfg = cfg;
  val_cfg.threshold_T = threshold;
  auto fresh = run_profile_sessions(r, genuine, val_cfg, derive_seed(r.manifest.seed, 2), n, tcfg);
  std::size_t false_pos = 0;
  for (const auto& rec : fresh)
    if (rec.verdict == Verdict::Fail) ++false_pos;
  double fpr = static_cast<double>(false_pos) / static_cast<double>(fresh.size());

  const PipelineProfile& ldfl = profile_by_name(r, "ldfl");
  auto fakes = run_profile_sessions(r, ldfl, val_cfg, derive_seed(r.manifest.seed, 3), n, tcfg);
  std::size_t misses = 0;
  for (const auto& rec : fakes)
    if (rec.verdict == Verdict::Pass) ++misses;
  double fnr = static_cast<double>(misses) / static_cast<double>(fakes.size());

  ordered_json j = ordered_json::object();
  j["fp_rate"] = fp_rate;
  j["n"] = n;
  j["score_mode"] = to_string(cfg.score_mode);
  j["threshold"] = threshold;
  ordered_json val = ordered_json::object();
  val["fpr"] = fpr;
  val["fnr"] = fnr;
  j["validation"] = val;
  write_file(dir / "calibration.json", j.dump(2) + "\n");

  std::cout << "threshold=" << threshold << " fpr=" << fpr << " fnr=" << fnr << "\n";
  return 0;
}

void apply_manifest_file(const std::string& path, CLI::App& app, RunManifest& m) {
  require_file(path, "manifest");
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ordered_json j;
  try {
    j = ordered_json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("manifest: expected an object");
  auto take = [&](const char* key, const char* flag, auto& field) {
    if (j.contains(key) && app.count(flag) == 0) {
      using T = std::decay_t<decltype(field)>;
      try {
        field = j.at(key).get<T>();
      } catch (const nlohmann::json::exception&) {
        throw SchemaError(std::string("manifest: bad value for '") + key + "'");
      }
    }
  };
  take("catalog", "--catalog", m.catalog_path);
  take("profiles", "--profiles", m.profiles_dir);
  take("context", "--context", m.context);
  take("mode", "--mode", m.mode);
  take("seed", "--seed", m.seed);
  take("out", "--out", m.output_dir);
  static const std::set<std::string> known{"catalog", "profiles", "context",
                                           "mode",    "seed",     "out"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw SchemaError("manifest: unknown key '" + it.key() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"challenge-response screening engine for live video feeds"};
  app.require_subcommand(1);
  // Global options may appear before or after the subcommand.
  app.fallthrough();

  RunManifest manifest;
  std::string manifest_path;
  app.add_option("--catalog", manifest.catalog_path, "challenge catalog JSON path");
  app.add_option("--profiles", manifest.profiles_dir,
                 "directory with genuine/ldfl/hdfl/fsgan/lia profile JSON");
  app.add_option("--context", manifest.context,
                 "context preset (interview, executive-call) or JSON path");
  app.add_option("--seed", manifest.seed, "master RNG seed");
  app.add_option("--out", manifest.output_dir, "output directory");
  app.add_option("--mode", manifest.mode, "score orientation")
      ->check(CLI::IsMember({"literal", "confidence-positive"}));
  app.add_option("--manifest", manifest_path, "JSON file with the global options; flags win");

  SessionConfig cfg;
  TraceConfig tcfg;
  std::string models_path;

  auto add_session_flags = [&](CLI::App* sub) {
    sub->add_option("--threshold", cfg.threshold_T, "decision threshold T");
    sub->add_option("--cascade-len", cfg.cascade_len, "number of challenges to issue");
    sub->add_option("--timeout", cfg.timeout_s, "capture timeout per attempt, seconds")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-retries", cfg.max_retries, "reissues after a failed verification")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--s", cfg.s, "grader rejection threshold on lambda")
        ->check(CLI::PositiveNumber);
    sub->add_option("--models", models_path, "grader models JSON path");
    sub->add_option("--fps", tcfg.fps, "capture frame rate")->check(CLI::PositiveNumber);
    sub->add_option("--duration", tcfg.duration_s, "capture length per challenge, seconds")
        ->check(CLI::PositiveNumber);
  };

  auto* session = app.add_subcommand("session", "run one simulated session");
  std::string profile_name = "ldfl";
  session->add_option("--profile", profile_name, "pipeline behind the participant")
      ->check(CLI::IsMember({"genuine", "ldfl", "hdfl", "fsgan", "lia"}));
  add_session_flags(session);

  auto* montecarlo = app.add_subcommand("montecarlo", "run whole populations and report");
  PopulationSpec spec;
  montecarlo->add_option("--n-genuine", spec.n_genuine, "genuine sessions");
  montecarlo->add_option("--n-per-pipeline", spec.n_per_pipeline, "sessions per fake pipeline");
  add_session_flags(montecarlo);

  auto* qualify = app.add_subcommand("qualify", "score challenges by performance gap");
  GapConfig gap_cfg;
  std::size_t samples = 6;
  qualify->add_option("--beta", gap_cfg.beta, "qualification margin")
      ->check(CLI::Range(0.0, 1.0));
  qualify->add_option("--eta", gap_cfg.eta, "required genuine pass fraction")
      ->check(CLI::Range(0.0, 1.0));
  qualify->add_option("--epsilon", gap_cfg.epsilon, "genuine pass tolerance")
      ->check(CLI::PositiveNumber);
  qualify->add_option("--samples", samples, "gap samples per challenge per pipeline")
      ->check(CLI::PositiveNumber);
  qualify->add_option("--fps", tcfg.fps, "capture frame rate")->check(CLI::PositiveNumber);
  qualify->add_option("--duration", tcfg.duration_s, "capture length per sample, seconds")
      ->check(CLI::PositiveNumber);

  auto* calibrate = app.add_subcommand("calibrate", "pick T for a target false-positive rate");
  double fp_rate = 0.05;
  std::size_t n_cal = 100;
  calibrate->add_option("--fp-rate", fp_rate, "target false-positive rate")
      ->check(CLI::Range(0.0, 1.0));
  calibrate->add_option("--n", n_cal, "genuine sessions per population")
      ->check(CLI::PositiveNumber);
  add_session_flags(calibrate);

  auto* version = app.add_subcommand("version", "print the version and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (version->parsed()) {
      std::cout << "gotcha " << kVersion << "\n";
      return 0;
    }
    if (!manifest_path.empty()) apply_manifest_file(manifest_path, app, manifest);
    cfg.score_mode = parse_score_mode(manifest.mode);
    cfg.validate();
    tcfg.validate();

    Resolved r = resolve(manifest, models_path);
    if (session->parsed()) return cmd_session(r, profile_name, cfg, tcfg);
    if (montecarlo->parsed()) return cmd_montecarlo(r, spec, cfg, tcfg);
    if (qualify->parsed()) return cmd_qualify(r, gap_cfg, samples, tcfg);
    if (calibrate->parsed()) return cmd_calibrate(r, fp_rate, n_cal, cfg, tcfg);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
