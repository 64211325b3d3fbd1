/* grader.cpp -- Gaussian likelihood-ratio grading. */

#include "gotcha/grader.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gotcha {

namespace {

constexpr double kLambdaLo = 1e-300;
constexpr double kLambdaHi = 1e300;
constexpr double kMinStddev = 1e-6;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

FeatureModel parse_model(const ordered_json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("stddev") || j.size() != 2)
    throw SchemaError(where + ": expected {mean, stddev}");
  if (!j.at("mean").is_number() || !j.at("stddev").is_number())
    throw SchemaError(where + ": mean and stddev must be numbers");
  FeatureModel m{j.at("mean").get<double>(), j.at("stddev").get<double>()};
  m.validate();
  return m;
}

}  // namespace

void FeatureModel::validate() const {
  if (!std::isfinite(mean)) throw DomainError("model mean must be finite");
  if (!(stddev > 0.0) || !std::isfinite(stddev)) throw DomainError("model stddev must be > 0");
}

double FeatureModel::log_pdf(double x) const {
  double z = (x - mean) / stddev;
  return -0.5 * z * z - std::log(stddev) - kLogSqrt2Pi;
}

double anomaly_score(const ResponseTrace& t) {
  if (t.frames.empty()) throw EmptyTraceError("anomaly score of an empty trace");
  double sum = 0.0;
  for (const auto& f : t.frames) sum += 1.0 - f.realism;
  return sum / static_cast<double>(t.frames.size());
}

double log_likelihood_ratio(const ResponseTrace& t, const FeatureModel& h0,
                            const FeatureModel& h1) {
  if (t.frames.empty()) throw EmptyTraceError("likelihood ratio of an empty trace");
  h0.validate();
  h1.validate();
  double sum = 0.0;
  for (const auto& f : t.frames) sum += h0.log_pdf(f.realism) - h1.log_pdf(f.realism);
  return sum;
}

double likelihood_ratio(const ResponseTrace& t, const FeatureModel& h0, const FeatureModel& h1) {
  static const double lo = std::log(kLambdaLo);
  static const double hi = std::log(kLambdaHi);
  double llr = log_likelihood_ratio(t, h0, h1);
  if (llr <= lo) return kLambdaLo;
  if (llr >= hi) return kLambdaHi;
  return std::exp(llr);
}

GradeResult grade(const ResponseTrace& t, const FeatureModel& h0, const FeatureModel& h1,
                  double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("rejection threshold s must be > 0");
  GradeResult r;
  r.q_bar = anomaly_score(t);
  r.lambda = likelihood_ratio(t, h0, h1);
  r.p = 1.0 / (1.0 + r.lambda);
  r.reject_h0 = r.lambda < s;
  return r;
}

namespace {

FeatureModel fit_one(const std::vector<ResponseTrace>& traces, const char* what) {
  std::size_t frames = 0;
  for (const auto& t : traces) frames += t.frames.size();
  if (traces.size() < 2 || frames < 2)
    throw InsufficientDataError(std::string("fitting the ") + what +
                                " model needs >= 2 traces and >= 2 frames");
  double sum = 0.0;
  for (const auto& t : traces)
    for (const auto& f : t.frames) sum += f.realism;
  double mean = sum / static_cast<double>(frames);
  double ss = 0.0;
  for (const auto& t : traces)
    for (const auto& f : t.frames) {
      double d = f.realism - mean;
      ss += d * d;
    }
  // Sample stddev (n - 1), floored so degenerate collections stay usable.
  double stddev = std::sqrt(ss / static_cast<double>(frames - 1));
  return FeatureModel{mean, std::max(stddev, kMinStddev)};
}

}  // namespace

ModelPair fit_models(const std::vector<ResponseTrace>& genuine,
                     const std::vector<ResponseTrace>& manipulated) {
  return ModelPair{fit_one(genuine, "genuine"), fit_one(manipulated, "manipulated")};
}

ordered_json to_json(const ModelPair& m) {
  ordered_json j = ordered_json::object();
  ordered_json h0 = ordered_json::object();
  h0["mean"] = m.h0.mean;
  h0["stddev"] = m.h0.stddev;
  ordered_json h1 = ordered_json::object();
  h1["mean"] = m.h1.mean;
  h1["stddev"] = m.h1.stddev;
  j["h0"] = h0;
  j["h1"] = h1;
  return j;
}

ModelPair load_models(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("models document is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("h0") || !j.contains("h1") || j.size() != 2)
    throw SchemaError("models: expected {h0, h1}");
  return ModelPair{parse_model(j.at("h0"), "models.h0"), parse_model(j.at("h1"), "models.h1")};
}

ModelPair load_models_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open models file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_models(buf.str());
}

}  // namespace gotcha
