/* catalog.cpp -- taxonomy tables, document parsing, benefit scoring. */

#include "gotcha/catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace gotcha {

namespace {

template <typename E, std::size_t N>
std::string_view enum_name(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
  for (const auto& [e, name] : table)
    if (e == v) return name;
  return "?";
}

template <typename E, std::size_t N>
E enum_parse(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s,
             std::string_view what) {
  for (const auto& [e, name] : table)
    if (name == s) return e;
  throw SchemaError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<Category, std::string_view>, 5> kCategories{{
    {Category::Occlusion, "occlusion"},
    {Category::FacialExpression, "facial_expression"},
    {Category::FacialDistortion, "facial_distortion"},
    {Category::Surroundings, "surroundings"},
    {Category::AdditionalDetails, "additional_details"},
}};

constexpr std::array<std::pair<Mode, std::string_view>, 2> kModes{{
    {Mode::Active, "active"},
    {Mode::Passive, "passive"},
}};

constexpr std::array<std::pair<TriState, std::string_view>, 3> kTriStates{{
    {TriState::Offered, "offered"},
    {TriState::Quasi, "quasi"},
    {TriState::NotOffered, "not_offered"},
}};

constexpr std::array<std::pair<UsabilityBenefit, std::string_view>, 7> kUsability{{
    {UsabilityBenefit::EasyToComprehend, "easy_to_comprehend"},
    {UsabilityBenefit::AppropriateToRequest, "appropriate_to_request"},
    {UsabilityBenefit::PhysicallyEffortless, "physically_effortless"},
    {UsabilityBenefit::NoEquipmentNeeded, "no_equipment_needed"},
    {UsabilityBenefit::DetectedByHumans, "detected_by_humans"},
    {UsabilityBenefit::HighSensitivityTest, "high_sensitivity_test"},
    {UsabilityBenefit::Accessible, "accessible"},
}};

constexpr std::array<std::pair<DeployabilityBenefit, std::string_view>, 3> kDeployability{{
    {DeployabilityBenefit::MarginalCost, "marginal_cost"},
    {DeployabilityBenefit::ServerCompatible, "server_compatible"},
    {DeployabilityBenefit::ClientCompatible, "client_compatible"},
}};

constexpr std::array<std::pair<PipelineComponent, std::string_view>, 7> kComponents{{
    {PipelineComponent::FaceDetector, "face_detector"},
    {PipelineComponent::LandmarkDetection, "landmark_detection"},
    {PipelineComponent::FaceAlignment, "face_alignment"},
    {PipelineComponent::Segmentation, "segmentation"},
    {PipelineComponent::FaceSwapper, "face_swapper"},
    {PipelineComponent::Blending, "blending"},
    {PipelineComponent::ColorCorrection, "color_correction"},
}};

constexpr std::array<std::pair<Equipment, std::string_view>, 3> kEquipment{{
    {Equipment::None, "none"},
    {Equipment::PhysicalArticle, "physical_article"},
    {Equipment::TrustedDevice, "trusted_device"},
}};

constexpr std::array<std::pair<ComplianceChannel, std::string_view>, 5> kChannels{{
    {ComplianceChannel::YawAngle, "yaw_angle"},
    {ComplianceChannel::ExpressionIntensity, "expression_intensity"},
    {ComplianceChannel::OcclusionFraction, "occlusion_fraction"},
    {ComplianceChannel::LuminanceShift, "luminance_shift"},
    {ComplianceChannel::None, "none"},
}};

void require_keys(const ordered_json& obj, std::initializer_list<std::string_view> keys,
                  const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (auto key : keys)
    if (!obj.contains(key)) throw SchemaError(where + ": missing key '" + std::string(key) + "'");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = std::any_of(keys.begin(), keys.end(),
                             [&](std::string_view k) { return k == it.key(); });
    if (!known) throw SchemaError(where + ": unknown key '" + it.key() + "'");
  }
}

std::string get_string(const ordered_json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw SchemaError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

double get_number(const ordered_json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

template <typename E, std::size_t N>
std::map<E, TriState> parse_benefit_map(const ordered_json& obj,
                                        const std::array<std::pair<E, std::string_view>, N>& table,
                                        const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  std::map<E, TriState> out;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    E key = enum_parse(table, it.key(), "benefit key in " + where);
    if (!it.value().is_string()) throw SchemaError(where + ": '" + it.key() + "' must be a string");
    out[key] = parse_tristate(it.value().template get<std::string>());
  }
  for (const auto& [e, name] : table)
    if (!out.count(e)) throw SchemaError(where + ": missing benefit '" + std::string(name) + "'");
  return out;
}

Challenge parse_challenge(const ordered_json& j, std::size_t index) {
  std::string where = "challenge #" + std::to_string(index);
  require_keys(j, {"id", "name", "category", "subcategory", "mode", "benefits", "compliance",
                   "required_equipment"},
               where);
  Challenge c;
  c.id = get_string(j, "id", where);
  if (c.id.empty()) throw SchemaError(where + ": id must be non-empty");
  where = "challenge '" + c.id + "'";
  c.name = get_string(j, "name", where);
  c.category = parse_category(get_string(j, "category", where));
  c.subcategory = get_string(j, "subcategory", where);
  c.mode = parse_mode(get_string(j, "mode", where));

  const auto& b = j.at("benefits");
  require_keys(b, {"usability", "deployability", "adversarial"}, where + ".benefits");
  c.benefits.usability = parse_benefit_map(b.at("usability"), kUsability, where + ".usability");
  c.benefits.deployability =
      parse_benefit_map(b.at("deployability"), kDeployability, where + ".deployability");
  c.benefits.adversarial =
      parse_benefit_map(b.at("adversarial"), kComponents, where + ".adversarial");

  const auto& comp = j.at("compliance");
  require_keys(comp, {"channel", "min_delta", "within_s"}, where + ".compliance");
  c.compliance.channel = parse_channel(get_string(comp, "channel", where + ".compliance"));
  c.compliance.min_delta = get_number(comp, "min_delta", where + ".compliance");
  c.compliance.within_s = get_number(comp, "within_s", where + ".compliance");

  const auto& eq = j.at("required_equipment");
  if (!eq.is_array() || eq.empty())
    throw SchemaError(where + ": required_equipment must be a non-empty array");
  for (const auto& e : eq) {
    if (!e.is_string()) throw SchemaError(where + ": equipment entries must be strings");
    auto parsed = parse_equipment(e.get<std::string>());
    if (!c.required_equipment.insert(parsed).second)
      throw SchemaError(where + ": duplicate equipment entry '" + e.get<std::string>() + "'");
  }
  return c;
}

void validate_challenge(const Challenge& c) {
  const std::string where = "challenge '" + c.id + "'";

  if (c.category != Category::AdditionalDetails) {
    const auto& allowed = admissible_subcategories(c.category);
    if (!allowed.count(c.subcategory))
      throw InvalidSubcategoryError(where + ": subcategory '" + c.subcategory +
                                    "' is not admissible under category '" +
                                    std::string(to_string(c.category)) + "'");
  } else if (c.subcategory.empty()) {
    throw InvalidSubcategoryError(where + ": subcategory must be non-empty");
  }

  for (const auto& [k, v] : c.benefits.deployability)
    if (v == TriState::Quasi)
      throw SchemaError(where + ": deployability benefit '" + std::string(to_string(k)) +
                        "' may not be quasi");

  if (c.mode == Mode::Passive) {
    if (!c.required_equipment.count(Equipment::TrustedDevice))
      throw PassiveWithoutTrustedDeviceError(where +
                                             ": passive challenge requires trusted_device");
    if (c.benefits.usability.at(UsabilityBenefit::PhysicallyEffortless) != TriState::Offered)
      throw SchemaError(where + ": passive challenge must offer physically_effortless");
  }

  if (c.required_equipment.count(Equipment::None) && c.required_equipment.size() > 1)
    throw SchemaError(where + ": equipment 'none' cannot be combined with other entries");

  if (!(c.compliance.min_delta >= 0.0) || !std::isfinite(c.compliance.min_delta))
    throw DomainError(where + ": compliance.min_delta must be >= 0");
  if (!(c.compliance.within_s > 0.0) || !std::isfinite(c.compliance.within_s))
    throw DomainError(where + ": compliance.within_s must be > 0");
  if (c.mode == Mode::Active && c.compliance.channel == ComplianceChannel::None)
    throw SchemaError(where + ": active challenge needs a compliance channel");
}

ordered_json benefit_map_json(const std::map<UsabilityBenefit, TriState>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, name] : kUsability) j[std::string(name)] = to_string(m.at(k));
  return j;
}

ordered_json benefit_map_json(const std::map<DeployabilityBenefit, TriState>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, name] : kDeployability) j[std::string(name)] = to_string(m.at(k));
  return j;
}

ordered_json benefit_map_json(const std::map<PipelineComponent, TriState>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, name] : kComponents) j[std::string(name)] = to_string(m.at(k));
  return j;
}

}  // namespace

std::string_view to_string(Category v) { return enum_name(kCategories, v); }
std::string_view to_string(Mode v) { return enum_name(kModes, v); }
std::string_view to_string(TriState v) { return enum_name(kTriStates, v); }
std::string_view to_string(UsabilityBenefit v) { return enum_name(kUsability, v); }
std::string_view to_string(DeployabilityBenefit v) { return enum_name(kDeployability, v); }
std::string_view to_string(PipelineComponent v) { return enum_name(kComponents, v); }
std::string_view to_string(Equipment v) { return enum_name(kEquipment, v); }
std::string_view to_string(ComplianceChannel v) { return enum_name(kChannels, v); }

Category parse_category(std::string_view s) { return enum_parse(kCategories, s, "category"); }
Mode parse_mode(std::string_view s) { return enum_parse(kModes, s, "mode"); }
TriState parse_tristate(std::string_view s) { return enum_parse(kTriStates, s, "benefit value"); }
Equipment parse_equipment(std::string_view s) { return enum_parse(kEquipment, s, "equipment"); }
ComplianceChannel parse_channel(std::string_view s) {
  return enum_parse(kChannels, s, "compliance channel");
}

const std::set<std::string>& admissible_subcategories(Category c) {
  static const std::map<Category, std::set<std::string>> table{
      {Category::Occlusion, {"human-introduced", "real-objects", "synthetic"}},
      {Category::FacialExpression, {"human-introduced", "lip-movement", "micro-expressions"}},
      {Category::FacialDistortion, {"human-introduced", "geometric-transforms"}},
      {Category::Surroundings, {"human-introduced", "software-introduced", "synthetic-background"}},
      // Open ended by design; new detail checks arrive with new data sources.
      {Category::AdditionalDetails, {}},
  };
  return table.at(c);
}

Catalog::Catalog(std::vector<Challenge> challenges) : challenges_(std::move(challenges)) {
  std::set<std::string> seen;
  for (const auto& c : challenges_) {
    if (c.id.empty()) throw SchemaError("challenge with empty id");
    if (!seen.insert(c.id).second)
      throw DuplicateIdError("duplicate challenge id '" + c.id + "'");
    validate_challenge(c);
  }
}

const Challenge* Catalog::find(const std::string& id) const {
  for (const auto& c : challenges_)
    if (c.id == id) return &c;
  return nullptr;
}

const Challenge& Catalog::at(const std::string& id) const {
  if (const Challenge* c = find(id)) return *c;
  throw UnknownChallengeError("unknown challenge '" + id + "'");
}

Catalog load_catalog(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("catalog is not valid JSON: ") + e.what());
  }
  require_keys(j, {"challenges"}, "catalog");
  const auto& arr = j.at("challenges");
  if (!arr.is_array()) throw SchemaError("catalog: 'challenges' must be an array");
  std::vector<Challenge> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(parse_challenge(arr[i], i));
  return Catalog(std::move(out));
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_catalog(buf.str());
}

ordered_json to_json(const Challenge& c) {
  ordered_json j = ordered_json::object();
  j["id"] = c.id;
  j["name"] = c.name;
  j["category"] = to_string(c.category);
  j["subcategory"] = c.subcategory;
  j["mode"] = to_string(c.mode);
  ordered_json b = ordered_json::object();
  b["usability"] = benefit_map_json(c.benefits.usability);
  b["deployability"] = benefit_map_json(c.benefits.deployability);
  b["adversarial"] = benefit_map_json(c.benefits.adversarial);
  j["benefits"] = b;
  ordered_json comp = ordered_json::object();
  comp["channel"] = to_string(c.compliance.channel);
  comp["min_delta"] = c.compliance.min_delta;
  comp["within_s"] = c.compliance.within_s;
  j["compliance"] = comp;
  ordered_json eq = ordered_json::array();
  for (Equipment e : c.required_equipment) eq.push_back(to_string(e));
  j["required_equipment"] = eq;
  return j;
}

ordered_json to_json(const Catalog& cat) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : cat.challenges()) arr.push_back(to_json(c));
  ordered_json j = ordered_json::object();
  j["challenges"] = arr;
  return j;
}

std::string serialize_catalog(const Catalog& cat) { return to_json(cat).dump(2) + "\n"; }

double benefit_score(const Challenge& c, const std::map<std::string, double>& weights) {
  double total = 0.0;
  for (const auto& [key, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw DomainError("benefit weight for '" + key + "' must be finite and >= 0");
    TriState v = TriState::NotOffered;
    bool found = false;
    for (const auto& [e, name] : kUsability)
      if (name == key) {
        v = c.benefits.usability.at(e);
        found = true;
        break;
      }
    if (!found)
      for (const auto& [e, name] : kDeployability)
        if (name == key) {
          v = c.benefits.deployability.at(e);
          found = true;
          break;
        }
    if (!found) throw UnknownBenefitKeyError("unknown benefit key '" + key + "'");
    total += w * numeric(v);
  }
  return total;
}

const std::map<std::string, double>& default_usability_weights() {
  static const std::map<std::string, double> weights = [] {
    std::map<std::string, double> w;
    for (const auto& [e, name] : kUsability) w[std::string(name)] = 1.0;
    return w;
  }();
  return weights;
}

double normalized_usability(const Challenge& c) {
  return benefit_score(c, default_usability_weights()) /
         static_cast<double>(kUsability.size());
}

}  // namespace gotcha
