#pragma once

/* catalog.hpp -- challenge taxonomy, benefit profiles, catalog document I/O.
 *
 * A Catalog is an immutable, validated set of challenges. All validation
 * happens on construction; a Catalog in hand is always well-formed.
 */

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gotcha/errors.hpp"

namespace gotcha {

using ordered_json = nlohmann::ordered_json;

enum class Category {
  Occlusion,
  FacialExpression,
  FacialDistortion,
  Surroundings,
  AdditionalDetails,
};

enum class Mode { Active, Passive };

// Benefit grading. Quasi means partially or conditionally offered.
enum class TriState { Offered, Quasi, NotOffered };

inline double numeric(TriState v) {
  switch (v) {
    case TriState::Offered: return 1.0;
    case TriState::Quasi: return 0.5;
    default: return 0.0;
  }
}

enum class UsabilityBenefit {
  EasyToComprehend,
  AppropriateToRequest,
  PhysicallyEffortless,
  NoEquipmentNeeded,
  DetectedByHumans,
  HighSensitivityTest,
  Accessible,
};

enum class DeployabilityBenefit {
  MarginalCost,
  ServerCompatible,
  ClientCompatible,
};

// Stages of a face-swap pipeline a challenge can stress.
enum class PipelineComponent {
  FaceDetector,
  LandmarkDetection,
  FaceAlignment,
  Segmentation,
  FaceSwapper,
  Blending,
  ColorCorrection,
};

enum class Equipment { None, PhysicalArticle, TrustedDevice };

// Measurable signal used to check that the participant actually performed
// the request. None means the trusted component verifies on its own.
enum class ComplianceChannel {
  YawAngle,
  ExpressionIntensity,
  OcclusionFraction,
  LuminanceShift,
  None,
};

struct ComplianceSpec {
  ComplianceChannel channel = ComplianceChannel::None;
  double min_delta = 0.0;  // required range on the channel, >= 0
  double within_s = 1.0;   // window in which the range must appear, > 0

  friend bool operator==(const ComplianceSpec&, const ComplianceSpec&) = default;
};

struct BenefitProfile {
  std::map<UsabilityBenefit, TriState> usability;          // all 7 keys
  std::map<DeployabilityBenefit, TriState> deployability;  // all 3 keys, never Quasi
  std::map<PipelineComponent, TriState> adversarial;       // all 7 keys

  friend bool operator==(const BenefitProfile&, const BenefitProfile&) = default;
};

struct Challenge {
  std::string id;
  std::string name;
  Category category = Category::Occlusion;
  std::string subcategory;
  Mode mode = Mode::Active;
  BenefitProfile benefits;
  ComplianceSpec compliance;
  std::set<Equipment> required_equipment;

  friend bool operator==(const Challenge&, const Challenge&) = default;
};

class Catalog {
 public:
  Catalog() = default;
  // Validates; throws DuplicateIdError / InvalidSubcategoryError /
  // PassiveWithoutTrustedDeviceError / SchemaError on bad input.
  explicit Catalog(std::vector<Challenge> challenges);

  const std::vector<Challenge>& challenges() const { return challenges_; }
  std::size_t size() const { return challenges_.size(); }
  bool empty() const { return challenges_.empty(); }

  const Challenge* find(const std::string& id) const;
  const Challenge& at(const std::string& id) const;  // UnknownChallengeError

  friend bool operator==(const Catalog&, const Catalog&) = default;

 private:
  std::vector<Challenge> challenges_;
};

// ---- enum <-> string (lower_snake_case wire values) ----

std::string_view to_string(Category v);
std::string_view to_string(Mode v);
std::string_view to_string(TriState v);
std::string_view to_string(UsabilityBenefit v);
std::string_view to_string(DeployabilityBenefit v);
std::string_view to_string(PipelineComponent v);
std::string_view to_string(Equipment v);
std::string_view to_string(ComplianceChannel v);

Category parse_category(std::string_view s);
Mode parse_mode(std::string_view s);
TriState parse_tristate(std::string_view s);
Equipment parse_equipment(std::string_view s);
ComplianceChannel parse_channel(std::string_view s);

// Admissible subcategory labels for a category. AdditionalDetails is open
// ended and accepts any non-empty label.
const std::set<std::string>& admissible_subcategories(Category c);

// ---- document I/O ----

// Strict schema: unknown or missing keys anywhere are SchemaError.
Catalog load_catalog(const std::string& json_text);
Catalog load_catalog_file(const std::string& path);

ordered_json to_json(const Catalog& cat);
ordered_json to_json(const Challenge& c);
std::string serialize_catalog(const Catalog& cat);  // stable bytes

// ---- benefit scoring ----

// Weighted sum of numeric benefit values. Keys name usability or
// deployability benefits; unknown keys raise UnknownBenefitKeyError,
// negative weights DomainError.
double benefit_score(const Challenge& c, const std::map<std::string, double>& weights);

// All seven usability benefits at weight 1.
const std::map<std::string, double>& default_usability_weights();

// benefit_score with default usability weights, scaled to [0, 1].
double normalized_usability(const Challenge& c);

}  // namespace gotcha
