#pragma once

/* cascade.hpp -- deployment context, eligibility filtering, cascade assembly.
 *
 * A cascade is an ordered sequence of challenges with non-decreasing utility:
 * cheap screens first, strongest tests last.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gotcha/catalog.hpp"
#include "gotcha/errors.hpp"

namespace gotcha {

// Category, optionally narrowed to one subcategory ("occlusion" matches the
// whole category, "occlusion/real-objects" just that slice).
struct CategorySelector {
  Category category = Category::Occlusion;
  std::optional<std::string> subcategory;

  bool matches(const Challenge& c) const;

  friend bool operator==(const CategorySelector&, const CategorySelector&) = default;
};

struct Context {
  std::set<Mode> allowed_modes{Mode::Active, Mode::Passive};
  std::vector<CategorySelector> excluded_categories;
  bool has_physical_articles = true;
  bool has_trusted_device = true;
  double security_level = 0.5;  // [0, 1]; weight on hardness in utility
  double usability_floor = 0.0; // [0, 1]; drop challenges below this normalized usability

  void validate() const;  // DomainError

  friend bool operator==(const Context&, const Context&) = default;
};

Context load_context(const std::string& json_text);
Context load_context_file(const std::string& path);
ordered_json to_json(const Context& ctx);

// Challenges from `suite` usable under `ctx`: allowed mode, not excluded,
// equipment available, usability floor met. Preserves input order.
std::vector<Challenge> filter_eligible(const std::vector<Challenge>& suite, const Context& ctx);

// security_level * hardness + (1 - security_level) * normalized usability.
// hardness values live in [0, 1]; missing id raises MissingHardnessError.
double utility(const Challenge& c, const Context& ctx,
               const std::map<std::string, double>& hardness);

// The convex combination itself, exposed for direct testing.
double combine_utility(double security_level, double hardness, double usability);

enum class CascadeMode { Deterministic, Weighted };

struct CascadeItem {
  std::string id;
  double utility = 0.0;

  friend bool operator==(const CascadeItem&, const CascadeItem&) = default;
};

struct Cascade {
  std::vector<CascadeItem> items;  // ascending utility, ties by id
  std::size_t target_len = 0;      // requested n (items may be fewer)

  friend bool operator==(const Cascade&, const Cascade&) = default;
};

// Selects the top-n eligible challenges by utility (ties by id) and emits
// them in ascending utility order. Weighted mode samples n without
// replacement with probability proportional to utility; rng consumption is
// keyed to canonical id order, so results never depend on input permutation.
Cascade build_cascade(const std::vector<Challenge>& suite, const Context& ctx,
                      const std::map<std::string, double>& hardness, std::size_t n,
                      std::uint64_t rng_seed, CascadeMode mode = CascadeMode::Deterministic);

ordered_json to_json(const Cascade& c);
std::string serialize_cascade(const Cascade& c);

}  // namespace gotcha
