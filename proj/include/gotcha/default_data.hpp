#pragma once

/* default_data.hpp -- canonical documents compiled into the library.
 *
 * The JSON sources of truth live under data/ in the repository; the build
 * embeds them so the library works without any files on disk. Loaders here
 * parse and validate once and cache the result.
 */

#include <string>
#include <vector>

#include "gotcha/cascade.hpp"
#include "gotcha/catalog.hpp"
#include "gotcha/grader.hpp"
#include "gotcha/simulation.hpp"

namespace gotcha::data {

const char* default_catalog_json();
const char* profile_json(PipelineKind kind);
const char* context_json(std::string_view name);  // "interview" | "executive-call"
const char* default_models_json();

const Catalog& default_catalog();
const std::vector<PipelineProfile>& default_profiles();  // canonical kind order
const PipelineProfile& default_profile(PipelineKind kind);
Context default_context(std::string_view name);
const ModelPair& default_models();

}  // namespace gotcha::data
