/* cascade.cpp -- eligibility, utility, cascade assembly. */

#include "gotcha/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gotcha/rng.hpp"

namespace gotcha {

bool CategorySelector::matches(const Challenge& c) const {
  if (c.category != category) return false;
  return !subcategory || *subcategory == c.subcategory;
}

void Context::validate() const {
  if (allowed_modes.empty()) throw DomainError("context must allow at least one mode");
  if (!(security_level >= 0.0 && security_level <= 1.0))
    throw DomainError("security_level must lie in [0, 1]");
  if (!(usability_floor >= 0.0 && usability_floor <= 1.0))
    throw DomainError("usability_floor must lie in [0, 1]");
}

namespace {

CategorySelector parse_selector(const std::string& s) {
  CategorySelector sel;
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    sel.category = parse_category(s);
  } else {
    sel.category = parse_category(s.substr(0, slash));
    sel.subcategory = s.substr(slash + 1);
    if (sel.subcategory->empty())
      throw SchemaError("selector '" + s + "' has an empty subcategory");
  }
  return sel;
}

std::string selector_string(const CategorySelector& sel) {
  std::string s{to_string(sel.category)};
  if (sel.subcategory) s += "/" + *sel.subcategory;
  return s;
}

}  // namespace

Context load_context(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("context is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("context: expected an object");
  static const std::set<std::string> known{"allowed_modes",         "excluded_categories",
                                           "has_physical_articles", "has_trusted_device",
                                           "security_level",        "usability_floor"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw SchemaError("context: unknown key '" + it.key() + "'");

  Context ctx;
  if (j.contains("allowed_modes")) {
    const auto& arr = j.at("allowed_modes");
    if (!arr.is_array()) throw SchemaError("context: 'allowed_modes' must be an array");
    ctx.allowed_modes.clear();
    for (const auto& m : arr) {
      if (!m.is_string()) throw SchemaError("context: mode entries must be strings");
      ctx.allowed_modes.insert(parse_mode(m.get<std::string>()));
    }
  }
  if (j.contains("excluded_categories")) {
    const auto& arr = j.at("excluded_categories");
    if (!arr.is_array()) throw SchemaError("context: 'excluded_categories' must be an array");
    for (const auto& s : arr) {
      if (!s.is_string()) throw SchemaError("context: selector entries must be strings");
      ctx.excluded_categories.push_back(parse_selector(s.get<std::string>()));
    }
  }
  if (j.contains("has_physical_articles")) {
    if (!j.at("has_physical_articles").is_boolean())
      throw SchemaError("context: 'has_physical_articles' must be a boolean");
    ctx.has_physical_articles = j.at("has_physical_articles").get<bool>();
  }
  if (j.contains("has_trusted_device")) {
    if (!j.at("has_trusted_device").is_boolean())
      throw SchemaError("context: 'has_trusted_device' must be a boolean");
    ctx.has_trusted_device = j.at("has_trusted_device").get<bool>();
  }
  if (j.contains("security_level")) {
    if (!j.at("security_level").is_number())
      throw SchemaError("context: 'security_level' must be a number");
    ctx.security_level = j.at("security_level").get<double>();
  }
  if (j.contains("usability_floor")) {
    if (!j.at("usability_floor").is_number())
      throw SchemaError("context: 'usability_floor' must be a number");
    ctx.usability_floor = j.at("usability_floor").get<double>();
  }
  ctx.validate();
  return ctx;
}

Context load_context_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open context file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_context(buf.str());
}

ordered_json to_json(const Context& ctx) {
  ordered_json j = ordered_json::object();
  ordered_json modes = ordered_json::array();
  for (Mode m : ctx.allowed_modes) modes.push_back(to_string(m));
  j["allowed_modes"] = modes;
  ordered_json excl = ordered_json::array();
  for (const auto& sel : ctx.excluded_categories) excl.push_back(selector_string(sel));
  j["excluded_categories"] = excl;
  j["has_physical_articles"] = ctx.has_physical_articles;
  j["has_trusted_device"] = ctx.has_trusted_device;
  j["security_level"] = ctx.security_level;
  j["usability_floor"] = ctx.usability_floor;
  return j;
}

std::vector<Challenge> filter_eligible(const std::vector<Challenge>& suite, const Context& ctx) {
  ctx.validate();
  std::vector<Challenge> out;
  for (const auto& c : suite) {
    if (!ctx.allowed_modes.count(c.mode)) continue;
    bool excluded = false;
    for (const auto& sel : ctx.excluded_categories)
      if (sel.matches(c)) {
        excluded = true;
        break;
      }
    if (excluded) continue;
    if (c.required_equipment.count(Equipment::PhysicalArticle) && !ctx.has_physical_articles)
      continue;
    if (c.required_equipment.count(Equipment::TrustedDevice) && !ctx.has_trusted_device) continue;
    if (ctx.usability_floor > 0.0 && normalized_usability(c) < ctx.usability_floor) continue;
    out.push_back(c);
  }
  return out;
}

double combine_utility(double security_level, double hardness, double usability) {
  if (!(security_level >= 0.0 && security_level <= 1.0))
    throw DomainError("security_level must lie in [0, 1]");
  if (!(hardness >= 0.0 && hardness <= 1.0)) throw DomainError("hardness must lie in [0, 1]");
  if (!(usability >= 0.0 && usability <= 1.0)) throw DomainError("usability must lie in [0, 1]");
  return security_level * hardness + (1.0 - security_level) * usability;
}

double utility(const Challenge& c, const Context& ctx,
               const std::map<std::string, double>& hardness) {
  auto it = hardness.find(c.id);
  if (it == hardness.end())
    throw MissingHardnessError("no hardness value for challenge '" + c.id + "'");
  return combine_utility(ctx.security_level, it->second, normalized_usability(c));
}

Cascade build_cascade(const std::vector<Challenge>& suite, const Context& ctx,
                      const std::map<std::string, double>& hardness, std::size_t n,
                      std::uint64_t rng_seed, CascadeMode mode) {
  if (n == 0) throw DomainError("cascade length must be >= 1");
  auto eligible = filter_eligible(suite, ctx);
  if (eligible.empty()) throw EmptyEligibleSetError("no eligible challenges in this context");

  std::vector<CascadeItem> scored;
  scored.reserve(eligible.size());
  for (const auto& c : eligible) scored.push_back({c.id, utility(c, ctx, hardness)});
  // Canonical order before any selection; keeps results independent of the
  // input permutation in both modes.
  std::sort(scored.begin(), scored.end(),
            [](const CascadeItem& a, const CascadeItem& b) { return a.id < b.id; });

  std::size_t take = std::min(n, scored.size());
  std::vector<CascadeItem> chosen;
  if (mode == CascadeMode::Deterministic || take == scored.size()) {
    std::sort(scored.begin(), scored.end(), [](const CascadeItem& a, const CascadeItem& b) {
      if (a.utility != b.utility) return a.utility > b.utility;
      return a.id < b.id;
    });
    chosen.assign(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take));
  } else {
    // Weighted sampling without replacement (exponential-key method): the
    // largest log(U)/w keys win, so weight-0 items only fill leftover slots.
    SplitMix64 rng(rng_seed);
    struct Keyed {
      CascadeItem item;
      double key;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(scored.size());
    for (const auto& item : scored) {
      double u = rng.next_double();
      double key = item.utility > 0.0 ? std::log(1.0 - u) / item.utility
                                      : -std::numeric_limits<double>::infinity();
      keyed.push_back({item, key});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
      if (a.key != b.key) return a.key > b.key;
      return a.item.id < b.item.id;
    });
    for (std::size_t i = 0; i < take; ++i) chosen.push_back(keyed[i].item);
  }

  std::sort(chosen.begin(), chosen.end(), [](const CascadeItem& a, const CascadeItem& b) {
    if (a.utility != b.utility) return a.utility < b.utility;
    return a.id < b.id;
  });
  Cascade out;
  out.items = std::move(chosen);
  out.target_len = n;
  return out;
}

ordered_json to_json(const Cascade& c) {
  ordered_json items = ordered_json::array();
  for (const auto& item : c.items) {
    ordered_json e = ordered_json::object();
    e["id"] = item.id;
    e["utility"] = item.utility;
    items.push_back(e);
  }
  ordered_json j = ordered_json::object();
  j["target_len"] = c.target_len;
  j["items"] = items;
  return j;
}

std::string serialize_cascade(const Cascade& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace gotcha
