#pragma once

/* grader.hpp -- likelihood-ratio grading of response traces.
 *
 * Two univariate Gaussians model per-frame realism: h0 under the genuine
 * hypothesis, h1 under the manipulated one. The ratio
 * Lambda = L(h0 | trace) / L(h1 | trace) is accumulated in log space and
 * only exponentiated at the end, clamped to [1e-300, 1e300].
 */

#include <vector>

#include <json.hpp>

#include "gotcha/errors.hpp"
#include "gotcha/trace.hpp"

namespace gotcha {

struct FeatureModel {
  double mean = 0.5;
  double stddev = 0.1;  // > 0

  void validate() const;          // DomainError
  double log_pdf(double x) const;

  friend bool operator==(const FeatureModel&, const FeatureModel&) = default;
};

struct ModelPair {
  FeatureModel h0;  // genuine
  FeatureModel h1;  // manipulated

  friend bool operator==(const ModelPair&, const ModelPair&) = default;
};

// Mean of (1 - realism) over the trace. EmptyTraceError on no frames.
double anomaly_score(const ResponseTrace& t);

double log_likelihood_ratio(const ResponseTrace& t, const FeatureModel& h0,
                            const FeatureModel& h1);

// exp of the above, clamped to [1e-300, 1e300].
double likelihood_ratio(const ResponseTrace& t, const FeatureModel& h0,
                        const FeatureModel& h1);

struct GradeResult {
  double q_bar = 0.0;    // anomaly score
  double lambda = 1.0;   // likelihood ratio
  double p = 0.5;        // posterior of manipulation, 1 / (1 + lambda)
  bool reject_h0 = false;  // lambda < s

  friend bool operator==(const GradeResult&, const GradeResult&) = default;
};

// s > 0 is the rejection threshold on lambda.
GradeResult grade(const ResponseTrace& t, const FeatureModel& h0,
                  const FeatureModel& h1, double s);

// Pooled per-frame realism fit, one Gaussian per collection. Needs at least
// 2 traces and 2 frames in total per collection (InsufficientDataError).
// Sample standard deviation (n - 1), floored at 1e-6.
ModelPair fit_models(const std::vector<ResponseTrace>& genuine,
                     const std::vector<ResponseTrace>& manipulated);

ordered_json to_json(const ModelPair& m);
ModelPair load_models(const std::string& json_text);
ModelPair load_models_file(const std::string& path);

}  // namespace gotcha
