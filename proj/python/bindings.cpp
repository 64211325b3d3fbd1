/* bindings.cpp -- pybind11 surface for the core operations. */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gotcha/default_data.hpp"
#include "gotcha/errors.hpp"
#include "gotcha/metrics.hpp"
#include "gotcha/rng.hpp"
#include "gotcha/session.hpp"
#include "gotcha/simulation.hpp"
#include "gotcha/version.hpp"

namespace py = pybind11;
using namespace gotcha;

namespace {

std::vector<QualityScore> to_scores(const std::vector<double>& xs) {
  std::vector<QualityScore> out;
  out.reserve(xs.size());
  for (double x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

PYBIND11_MODULE(_gotcha, m) {
  m.doc() = "challenge-response screening engine for live video feeds";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<RuntimeError>(m, "EngineRuntimeError");

  py::enum_<Category>(m, "Category")
      .value("Occlusion", Category::Occlusion)
      .value("FacialExpression", Category::FacialExpression)
      .value("FacialDistortion", Category::FacialDistortion)
      .value("Surroundings", Category::Surroundings)
      .value("AdditionalDetails", Category::AdditionalDetails);
  py::enum_<Mode>(m, "Mode").value("Active", Mode::Active).value("Passive", Mode::Passive);
  py::enum_<TriState>(m, "TriState")
      .value("Offered", TriState::Offered)
      .value("Quasi", TriState::Quasi)
      .value("NotOffered", TriState::NotOffered);
  py::enum_<Equipment>(m, "Equipment")
      .value("NoEquipment", Equipment::None)
      .value("PhysicalArticle", Equipment::PhysicalArticle)
      .value("TrustedDevice", Equipment::TrustedDevice);
  py::enum_<ComplianceChannel>(m, "ComplianceChannel")
      .value("YawAngle", ComplianceChannel::YawAngle)
      .value("ExpressionIntensity", ComplianceChannel::ExpressionIntensity)
      .value("OcclusionFraction", ComplianceChannel::OcclusionFraction)
      .value("LuminanceShift", ComplianceChannel::LuminanceShift)
      .value("NoChannel", ComplianceChannel::None);
  py::enum_<ScoreMode>(m, "ScoreMode")
      .value("Literal", ScoreMode::Literal)
      .value("ConfidencePositive", ScoreMode::ConfidencePositive);
  py::enum_<Verdict>(m, "Verdict").value("Pass", Verdict::Pass).value("Fail", Verdict::Fail);
  py::enum_<FailReason>(m, "FailReason")
      .value("ThresholdExceeded", FailReason::ThresholdExceeded)
      .value("VerificationExhausted", FailReason::VerificationExhausted);
  py::enum_<PipelineKind>(m, "PipelineKind")
      .value("Genuine", PipelineKind::Genuine)
      .value("LDFL", PipelineKind::LDFL)
      .value("HDFL", PipelineKind::HDFL)
      .value("FSGAN", PipelineKind::FSGAN)
      .value("LIA", PipelineKind::LIA);
  py::enum_<PassiveKind>(m, "PassiveKind")
      .value("Flip", PassiveKind::Flip)
      .value("NoiseAddition", PassiveKind::NoiseAddition)
      .value("ColorFilter", PassiveKind::ColorFilter)
      .value("Cutout", PassiveKind::Cutout)
      .value("FeedDuplication", PassiveKind::FeedDuplication);
  py::enum_<CascadeMode>(m, "CascadeMode")
      .value("Deterministic", CascadeMode::Deterministic)
      .value("Weighted", CascadeMode::Weighted);

  py::class_<ComplianceSpec>(m, "ComplianceSpec")
      .def_readonly("channel", &ComplianceSpec::channel)
      .def_readonly("min_delta", &ComplianceSpec::min_delta)
      .def_readonly("within_s", &ComplianceSpec::within_s);

  py::class_<Challenge>(m, "Challenge")
      .def_readonly("id", &Challenge::id)
      .def_readonly("name", &Challenge::name)
      .def_readonly("category", &Challenge::category)
      .def_readonly("subcategory", &Challenge::subcategory)
      .def_readonly("mode", &Challenge::mode)
      .def_readonly("compliance", &Challenge::compliance)
      .def_readonly("required_equipment", &Challenge::required_equipment)
      .def("__repr__", [](const Challenge& c) { return "<Challenge '" + c.id + "'>"; });

  py::class_<Catalog>(m, "Catalog")
      .def("__len__", &Catalog::size)
      .def("challenges", &Catalog::challenges, py::return_value_policy::reference_internal)
      .def("at", &Catalog::at, py::return_value_policy::reference_internal)
      .def("ids", [](const Catalog& cat) {
        std::vector<std::string> out;
        for (const auto& c : cat.challenges()) out.push_back(c.id);
        return out;
      });

  py::class_<GapConfig>(m, "GapConfig")
      .def(py::init<>())
      .def_readwrite("beta", &GapConfig::beta)
      .def_readwrite("eta", &GapConfig::eta)
      .def_readwrite("epsilon", &GapConfig::epsilon);

  py::class_<ChallengeGapStat>(m, "ChallengeGapStat")
      .def_readonly("mean_gap", &ChallengeGapStat::mean_gap)
      .def_readonly("n_samples", &ChallengeGapStat::n_samples);

  py::class_<QualificationReport>(m, "QualificationReport")
      .def_readonly("per_challenge", &QualificationReport::per_challenge)
      .def_readonly("qualified", &QualificationReport::qualified)
      .def_readonly("beta", &QualificationReport::beta);

  py::class_<GenuinePassResult>(m, "GenuinePassResult")
      .def_readonly("pass_fraction", &GenuinePassResult::pass_fraction)
      .def_readonly("ok", &GenuinePassResult::ok);

  py::class_<CategorySelector>(m, "CategorySelector")
      .def(py::init<>())
      .def_readwrite("category", &CategorySelector::category)
      .def_readwrite("subcategory", &CategorySelector::subcategory);

  py::class_<Context>(m, "Context")
      .def(py::init<>())
      .def_readwrite("allowed_modes", &Context::allowed_modes)
      .def_readwrite("excluded_categories", &Context::excluded_categories)
      .def_readwrite("has_physical_articles", &Context::has_physical_articles)
      .def_readwrite("has_trusted_device", &Context::has_trusted_device)
      .def_readwrite("security_level", &Context::security_level)
      .def_readwrite("usability_floor", &Context::usability_floor);

  py::class_<CascadeItem>(m, "CascadeItem")
      .def_readonly("id", &CascadeItem::id)
      .def_readonly("utility", &CascadeItem::utility);

  py::class_<Cascade>(m, "Cascade")
      .def_readonly("items", &Cascade::items)
      .def_readonly("target_len", &Cascade::target_len);

  py::class_<FrameFeatures>(m, "FrameFeatures")
      .def(py::init<>())
      .def_readwrite("realism", &FrameFeatures::realism)
      .def_readwrite("yaw_deg", &FrameFeatures::yaw_deg)
      .def_readwrite("expression_intensity", &FrameFeatures::expression_intensity)
      .def_readwrite("occlusion_fraction", &FrameFeatures::occlusion_fraction)
      .def_readwrite("luminance_shift", &FrameFeatures::luminance_shift)
      .def_readwrite("n_faces", &FrameFeatures::n_faces);

  py::class_<ResponseTrace>(m, "ResponseTrace")
      .def(py::init<>())
      .def_readwrite("challenge_id", &ResponseTrace::challenge_id)
      .def_readwrite("frames", &ResponseTrace::frames)
      .def_readwrite("nominal_fps", &ResponseTrace::nominal_fps)
      .def_readwrite("duration_s", &ResponseTrace::duration_s);

  py::class_<FeatureModel>(m, "FeatureModel")
      .def(py::init<double, double>(), py::arg("mean"), py::arg("stddev"))
      .def_readwrite("mean", &FeatureModel::mean)
      .def_readwrite("stddev", &FeatureModel::stddev);

  py::class_<ModelPair>(m, "ModelPair")
      .def(py::init<>())
      .def_readwrite("h0", &ModelPair::h0)
      .def_readwrite("h1", &ModelPair::h1);

  py::class_<GradeResult>(m, "GradeResult")
      .def_readonly("q_bar", &GradeResult::q_bar)
      .def_readonly("lambda_", &GradeResult::lambda)
      .def_readonly("p", &GradeResult::p)
      .def_readonly("reject_h0", &GradeResult::reject_h0);

  py::class_<SessionConfig>(m, "SessionConfig")
      .def(py::init<>())
      .def_readwrite("threshold_T", &SessionConfig::threshold_T)
      .def_readwrite("cascade_len", &SessionConfig::cascade_len)
      .def_readwrite("timeout_s", &SessionConfig::timeout_s)
      .def_readwrite("max_retries", &SessionConfig::max_retries)
      .def_readwrite("score_mode", &SessionConfig::score_mode)
      .def_readwrite("s", &SessionConfig::s)
      .def_readwrite("rng_seed", &SessionConfig::rng_seed);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("challenge_id", &StepRecord::challenge_id)
      .def_readonly("step_index", &StepRecord::step_index)
      .def_readonly("retry_index", &StepRecord::retry_index)
      .def_readonly("verified", &StepRecord::verified)
      .def_readonly("grade", &StepRecord::grade)
      .def_readonly("increment", &StepRecord::increment)
      .def_readonly("timestamp_s", &StepRecord::timestamp_s);

  py::class_<SessionRecord>(m, "SessionRecord")
      .def_readonly("participant_id", &SessionRecord::participant_id)
      .def_readonly("cascade", &SessionRecord::cascade)
      .def_readonly("steps", &SessionRecord::steps)
      .def_readonly("e", &SessionRecord::e)
      .def_readonly("e_bar", &SessionRecord::e_bar)
      .def_readonly("graded_steps", &SessionRecord::graded_steps)
      .def_readonly("verdict", &SessionRecord::verdict)
      .def_readonly("fail_reason", &SessionRecord::fail_reason)
      .def_readonly("score_mode", &SessionRecord::score_mode);

  py::class_<ChallengeBehavior>(m, "ChallengeBehavior")
      .def(py::init<>())
      .def_readwrite("realism_mean", &ChallengeBehavior::realism_mean)
      .def_readwrite("realism_std", &ChallengeBehavior::realism_std)
      .def_readwrite("compliance_prob", &ChallengeBehavior::compliance_prob);

  py::class_<PipelineProfile>(m, "PipelineProfile")
      .def(py::init<>())
      .def_readwrite("kind", &PipelineProfile::kind)
      .def_readwrite("fps_capacity", &PipelineProfile::fps_capacity)
      .def_readwrite("fps_max", &PipelineProfile::fps_max)
      .def_readwrite("per_challenge", &PipelineProfile::per_challenge)
      .def_readwrite("passive_degradation", &PipelineProfile::passive_degradation);

  py::class_<TraceConfig>(m, "TraceConfig")
      .def(py::init<>())
      .def_readwrite("fps", &TraceConfig::fps)
      .def_readwrite("duration_s", &TraceConfig::duration_s);

  py::class_<PassiveTransform>(m, "PassiveTransform")
      .def(py::init<>())
      .def_readwrite("kind", &PassiveTransform::kind)
      .def_readwrite("degradation_delta", &PassiveTransform::degradation_delta)
      .def_readwrite("extra_faces", &PassiveTransform::extra_faces);

  py::class_<SimulatedParticipant>(m, "SimulatedParticipant")
      .def(py::init<PipelineProfile, std::string, std::uint64_t, TraceConfig>(),
           py::arg("profile"), py::arg("participant_id"), py::arg("seed"),
           py::arg("trace_config") = TraceConfig{})
      .def("participant_id", &SimulatedParticipant::participant_id)
      .def("respond", &SimulatedParticipant::respond, py::arg("challenge"), py::arg("timeout_s"),
           py::arg("step_index"), py::arg("attempt"));

  py::class_<PopulationSpec>(m, "PopulationSpec")
      .def(py::init<>())
      .def_readwrite("n_genuine", &PopulationSpec::n_genuine)
      .def_readwrite("n_per_pipeline", &PopulationSpec::n_per_pipeline);

  py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
      .def_readonly("k", &TrajectoryPoint::k)
      .def_readonly("mean_e", &TrajectoryPoint::mean_e)
      .def_readonly("std_e", &TrajectoryPoint::std_e)
      .def_readonly("n", &TrajectoryPoint::n);

  py::class_<RocPoint>(m, "RocPoint")
      .def_readonly("threshold", &RocPoint::threshold)
      .def_readonly("fpr", &RocPoint::fpr)
      .def_readonly("tpr", &RocPoint::tpr);

  py::class_<PipelineStats>(m, "PipelineStats")
      .def_readonly("kind", &PipelineStats::kind)
      .def_readonly("sessions", &PipelineStats::sessions)
      .def_readonly("pass_count", &PipelineStats::pass_count)
      .def_readonly("fail_threshold_count", &PipelineStats::fail_threshold_count)
      .def_readonly("fail_verification_count", &PipelineStats::fail_verification_count)
      .def_readonly("mean_e_bar", &PipelineStats::mean_e_bar)
      .def_readonly("std_e_bar", &PipelineStats::std_e_bar)
      .def_readonly("auc_vs_genuine", &PipelineStats::auc_vs_genuine)
      .def_readonly("miss_rate", &PipelineStats::miss_rate)
      .def_readonly("trajectory", &PipelineStats::trajectory)
      .def_readonly("final_e_bar", &PipelineStats::final_e_bar);

  py::class_<PopulationReport>(m, "PopulationReport")
      .def_readonly("seed", &PopulationReport::seed)
      .def_readonly("pipelines", &PopulationReport::pipelines)
      .def_readonly("fpr", &PopulationReport::fpr)
      .def_readonly("fnr", &PopulationReport::fnr)
      .def_readonly("roc", &PopulationReport::roc);

  // ---- catalog ----
  m.def("load_catalog", &load_catalog, py::arg("json_text"));
  m.def("default_catalog", &data::default_catalog, py::return_value_policy::reference);
  m.def("serialize_catalog", &serialize_catalog);
  m.def("benefit_score", &benefit_score, py::arg("challenge"), py::arg("weights"));
  m.def("normalized_usability", &normalized_usability);
  m.def("default_usability_weights", &default_usability_weights);

  // ---- metrics ----
  m.def(
      "performance_gap",
      [](const std::vector<double>& src, const std::vector<double>& fake) {
        auto s = to_scores(src);
        auto f = to_scores(fake);
        return performance_gap(s, f);
      },
      py::arg("src_scores"), py::arg("fake_scores"));
  m.def(
      "qualify_suite",
      [](const Catalog& cat,
         const std::map<std::string, std::vector<std::pair<std::vector<double>,
                                                           std::vector<double>>>>& samples,
         const GapConfig& cfg) {
        std::map<std::string, std::vector<GapSample>> converted;
        for (const auto& [id, list] : samples)
          for (const auto& [src, fake] : list)
            converted[id].push_back({to_scores(src), to_scores(fake)});
        return qualify_suite(cat, converted, cfg);
      },
      py::arg("catalog"), py::arg("samples"), py::arg("config"));
  m.def("calibrate_genuine_pass", &calibrate_genuine_pass, py::arg("gaps_from_baseline"),
        py::arg("config"));
  m.def("serialize_report", &serialize_report);

  // ---- cascade ----
  m.def("load_context", &load_context, py::arg("json_text"));
  m.def("default_context", [](const std::string& name) { return data::default_context(name); });
  m.def("filter_eligible", &filter_eligible, py::arg("suite"), py::arg("context"));
  m.def("utility", &utility, py::arg("challenge"), py::arg("context"), py::arg("hardness"));
  m.def("combine_utility", &combine_utility);
  m.def("build_cascade", &build_cascade, py::arg("suite"), py::arg("context"),
        py::arg("hardness"), py::arg("n"), py::arg("rng_seed") = 0,
        py::arg("mode") = CascadeMode::Deterministic);
  m.def("serialize_cascade", &serialize_cascade);

  // ---- grader ----
  m.def("anomaly_score", &anomaly_score);
  m.def("log_likelihood_ratio", &log_likelihood_ratio);
  m.def("likelihood_ratio", &likelihood_ratio);
  m.def("grade", &grade, py::arg("trace"), py::arg("h0"), py::arg("h1"), py::arg("s") = 1.0);
  m.def("fit_models", &fit_models, py::arg("genuine"), py::arg("manipulated"));
  m.def("load_models", &load_models);
  m.def("default_models", &data::default_models, py::return_value_policy::reference);

  // ---- session ----
  m.def("verify_response", &verify_response, py::arg("challenge"), py::arg("trace"));
  m.def("amplify", &amplify, py::arg("e"), py::arg("p"), py::arg("q_bar"), py::arg("mode"));
  m.def("amplify_increment", &amplify_increment, py::arg("p"), py::arg("q_bar"), py::arg("mode"));
  m.def(
      "run_session",
      [](SimulatedParticipant& participant, const std::vector<Challenge>& suite,
         const Context& ctx, const std::map<std::string, double>& hardness,
         const ModelPair& models, const SessionConfig& cfg) {
        SessionSetup setup{suite, ctx, hardness, models};
        return run_session(participant, setup, cfg);
      },
      py::arg("participant"), py::arg("suite"), py::arg("context"), py::arg("hardness"),
      py::arg("models"), py::arg("config"));
  m.def("calibrate_threshold", &calibrate_threshold, py::arg("genuine_records"),
        py::arg("target_fp_rate"), py::arg("mode"));
  m.def("serialize_session", &serialize_session);
  m.def("session_csv", &session_csv);

  // ---- simulation ----
  m.def("load_profile", &load_profile);
  m.def("default_profiles", &data::default_profiles, py::return_value_policy::reference);
  m.def("default_profile", &data::default_profile, py::return_value_policy::reference);
  m.def("validate_profile_set", &validate_profile_set);
  m.def("fps_under_load", &fps_under_load, py::arg("n_faces"), py::arg("profile"));
  m.def("synthesize_response", &synthesize_response, py::arg("profile"), py::arg("challenge"),
        py::arg("trace_config"), py::arg("seed"));
  m.def("apply_passive", &apply_passive, py::arg("trace"), py::arg("transform"),
        py::arg("profile"));
  m.def("transform_for", &transform_for, py::arg("profile"), py::arg("kind"),
        py::arg("extra_faces") = 0);
  m.def("hardness_from_profiles", &hardness_from_profiles);
  m.def("monte_carlo", &monte_carlo, py::arg("spec"), py::arg("profiles"), py::arg("catalog"),
        py::arg("context"), py::arg("models"), py::arg("config"), py::arg("seed"),
        py::arg("trace_config") = TraceConfig{});
  m.def("serialize_population_report", &serialize_population_report);
  m.def("trajectories_csv", &trajectories_csv);
  m.def("roc_csv", &roc_csv);

  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));
}
