/* test_cascade.cpp -- context filtering, utility, cascade assembly. */

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gotcha/cascade.hpp"
#include "gotcha/default_data.hpp"

using namespace gotcha;

namespace {

const std::vector<Challenge>& suite() { return data::default_catalog().challenges(); }

std::map<std::string, double> flat_hardness(double v) {
  std::map<std::string, double> h;
  for (const auto& c : suite()) h[c.id] = v;
  return h;
}

std::vector<std::string> ids_of(const Cascade& c) {
  std::vector<std::string> out;
  for (const auto& item : c.items) out.push_back(item.id);
  return out;
}

}  // namespace

TEST_CASE("context validation") {
  Context ctx;
  CHECK_NOTHROW(ctx.validate());
  ctx.security_level = 1.5;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx = Context{};
  ctx.usability_floor = -0.1;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx = Context{};
  ctx.allowed_modes.clear();
  CHECK_THROWS_AS(ctx.validate(), DomainError);
}

TEST_CASE("context documents parse with defaults and reject unknown keys") {
  Context ctx = load_context("{}");
  CHECK(ctx == Context{});

  Context narrowed = load_context(R"({"allowed_modes": ["active"], "security_level": 0.9})");
  CHECK(narrowed.allowed_modes == std::set<Mode>{Mode::Active});
  CHECK(narrowed.security_level == 0.9);

  CHECK_THROWS_AS(load_context(R"({"security": 0.9})"), SchemaError);
  CHECK_THROWS_AS(load_context("]"), SchemaError);
}

TEST_CASE("selectors match whole categories or single slices") {
  const Challenge& sunglasses = data::default_catalog().at("sunglasses");
  CategorySelector whole{Category::Occlusion, std::nullopt};
  CHECK(whole.matches(sunglasses));
  CategorySelector slice{Category::Occlusion, std::string("real-objects")};
  CHECK(slice.matches(sunglasses));
  CategorySelector other{Category::Occlusion, std::string("synthetic")};
  CHECK_FALSE(other.matches(sunglasses));
  CategorySelector elsewhere{Category::Surroundings, std::nullopt};
  CHECK_FALSE(elsewhere.matches(sunglasses));
}

TEST_CASE("eligibility filter enforces mode, exclusions, equipment, and floor") {
  Context ctx;  // everything allowed

  auto all = filter_eligible(suite(), ctx);
  CHECK(all.size() == suite().size());

  SUBCASE("mode") {
    ctx.allowed_modes = {Mode::Active};
    for (const auto& c : filter_eligible(suite(), ctx)) CHECK(c.mode == Mode::Active);
  }
  SUBCASE("category exclusion") {
    ctx.excluded_categories = {{Category::Occlusion, std::nullopt}};
    for (const auto& c : filter_eligible(suite(), ctx)) CHECK(c.category != Category::Occlusion);
  }
  SUBCASE("subcategory exclusion keeps the rest of the category") {
    ctx.excluded_categories = {{Category::Occlusion, std::string("real-objects")}};
    auto kept = filter_eligible(suite(), ctx);
    std::set<std::string> kept_ids;
    for (const auto& c : kept) kept_ids.insert(c.id);
    CHECK(kept_ids.count("sunglasses") == 0);
    CHECK(kept_ids.count("face-mask") == 0);
    CHECK(kept_ids.count("head-rotation") == 1);
  }
  SUBCASE("equipment availability") {
    ctx.has_physical_articles = false;
    auto kept = filter_eligible(suite(), ctx);
    for (const auto& c : kept) CHECK(c.required_equipment.count(Equipment::PhysicalArticle) == 0);
    ctx.has_trusted_device = false;
    for (const auto& c : filter_eligible(suite(), ctx))
      CHECK(c.required_equipment.count(Equipment::TrustedDevice) == 0);
  }
  SUBCASE("usability floor") {
    ctx.usability_floor = 0.8;
    for (const auto& c : filter_eligible(suite(), ctx))
      CHECK(normalized_usability(c) >= 0.8);
  }
  SUBCASE("input order is preserved") {
    ctx.allowed_modes = {Mode::Passive};
    auto kept = filter_eligible(suite(), ctx);
    std::vector<std::string> expect;
    for (const auto& c : suite())
      if (c.mode == Mode::Passive) expect.push_back(c.id);
    std::vector<std::string> got;
    for (const auto& c : kept) got.push_back(c.id);
    CHECK(got == expect);
  }
}

TEST_CASE("the executive-call preset narrows the suite to nine challenges") {
  Context ctx = data::default_context("executive-call");
  auto kept = filter_eligible(suite(), ctx);
  std::set<std::string> got;
  for (const auto& c : kept) got.insert(c.id);
  CHECK(got == std::set<std::string>{"head-rotation", "hand-occlusion", "stand-up",
                                     "synthetic-cutout", "lip-read-text", "micro-expression",
                                     "color-filter", "steganography", "feed-duplication"});
}

TEST_CASE("utility blends hardness and usability by security level") {
  CHECK(combine_utility(0.5, 0.8, 0.4) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(combine_utility(0.0, 0.8, 0.4) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(combine_utility(1.0, 0.8, 0.4) == doctest::Approx(0.8).epsilon(1e-12));

  const Challenge& c = data::default_catalog().at("head-rotation");
  Context ctx;
  std::map<std::string, double> hardness{{"head-rotation", 0.8}};

  ctx.security_level = 0.0;
  CHECK(utility(c, ctx, hardness) == doctest::Approx(normalized_usability(c)).epsilon(1e-12));
  ctx.security_level = 1.0;
  CHECK(utility(c, ctx, hardness) == doctest::Approx(0.8).epsilon(1e-12));

  CHECK_THROWS_AS(utility(c, ctx, {}), MissingHardnessError);
}

TEST_CASE("deterministic cascades rank by utility and emit weakest first") {
  // With security_level 1 the utility IS the hardness, so the ordering is
  // fully controlled by this map.
  std::vector<Challenge> three;
  for (const auto& id : {"head-rotation", "hand-occlusion", "stand-up"})
    three.push_back(data::default_catalog().at(id));
  Context ctx;
  ctx.security_level = 1.0;
  std::map<std::string, double> hardness{
      {"head-rotation", 0.2}, {"hand-occlusion", 0.9}, {"stand-up", 0.5}};

  Cascade c3 = build_cascade(three, ctx, hardness, 3, 0);
  CHECK(ids_of(c3) == std::vector<std::string>{"head-rotation", "stand-up", "hand-occlusion"});
  CHECK(c3.target_len == 3);

  // Top-2 by utility, still emitted in ascending order.
  Cascade c2 = build_cascade(three, ctx, hardness, 2, 0);
  CHECK(ids_of(c2) == std::vector<std::string>{"stand-up", "hand-occlusion"});

  // Utility ties break on id, both in selection and in the final order.
  std::map<std::string, double> flat{
      {"head-rotation", 0.5}, {"hand-occlusion", 0.5}, {"stand-up", 0.5}};
  Cascade tied = build_cascade(three, ctx, flat, 2, 0);
  CHECK(ids_of(tied) == std::vector<std::string>{"hand-occlusion", "head-rotation"});

  // Requesting more than available truncates but records the request.
  Cascade wide = build_cascade(three, ctx, hardness, 10, 0);
  CHECK(wide.items.size() == 3);
  CHECK(wide.target_len == 10);
}

TEST_CASE("cascade inputs are validated") {
  Context ctx;
  CHECK_THROWS_AS(build_cascade(suite(), ctx, flat_hardness(0.5), 0, 0), DomainError);
  CHECK_THROWS_AS(build_cascade({}, ctx, {}, 3, 0), EmptyEligibleSetError);
  ctx.allowed_modes = {Mode::Active};
  std::vector<Challenge> passives;
  for (const auto& c : suite())
    if (c.mode == Mode::Passive) passives.push_back(c);
  CHECK_THROWS_AS(build_cascade(passives, ctx, flat_hardness(0.5), 3, 0), EmptyEligibleSetError);
}

TEST_CASE("cascades are invariant under input permutation") {
  auto hardness = flat_hardness(0.0);
  double v = 0.05;
  for (auto& [id, h] : hardness) h = (v += 0.05);
  Context ctx;
  ctx.security_level = 0.7;

  std::vector<Challenge> shuffled = suite();
  std::mt19937 rng(7);
  for (int round = 0; round < 10; ++round) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(build_cascade(shuffled, ctx, hardness, 6, 0) ==
          build_cascade(suite(), ctx, hardness, 6, 0));
    CHECK(build_cascade(shuffled, ctx, hardness, 6, 42, CascadeMode::Weighted) ==
          build_cascade(suite(), ctx, hardness, 6, 42, CascadeMode::Weighted));
  }
}

TEST_CASE("weighted cascades sample without replacement and stay ordered") {
  auto hardness = flat_hardness(0.0);
  double v = 0.05;
  for (auto& [id, h] : hardness) h = (v += 0.05);
  Context ctx;

  for (std::uint64_t seed : {1ull, 9ull, 77ull}) {
    Cascade c = build_cascade(suite(), ctx, hardness, 8, seed, CascadeMode::Weighted);
    CHECK(c.items.size() == 8);
    CHECK(c == build_cascade(suite(), ctx, hardness, 8, seed, CascadeMode::Weighted));

    std::set<std::string> seen;
    for (const auto& item : c.items) CHECK(seen.insert(item.id).second);
    for (std::size_t i = 1; i < c.items.size(); ++i)
      CHECK(c.items[i - 1].utility <= c.items[i].utility);
  }
}
