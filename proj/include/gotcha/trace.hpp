#pragma once

/* trace.hpp -- per-frame features extracted from a captured response clip. */

#include <string>
#include <vector>

#include "gotcha/catalog.hpp"
#include "gotcha/errors.hpp"

namespace gotcha {

struct FrameFeatures {
  double realism = 1.0;               // detector realism estimate, [0, 1]
  double yaw_deg = 0.0;               // head yaw, degrees
  double expression_intensity = 0.0;  // [0, 1]
  double occlusion_fraction = 0.0;    // fraction of face covered, [0, 1]
  double luminance_shift = 0.0;       // vs capture baseline, [-1, 1]
  int n_faces = 1;                    // faces visible in the frame, >= 0

  friend bool operator==(const FrameFeatures&, const FrameFeatures&) = default;
};

// DomainError when a field is outside its range.
void validate(const FrameFeatures& f);

struct ResponseTrace {
  std::string challenge_id;
  std::vector<FrameFeatures> frames;  // length == round(nominal_fps * duration_s)
  double nominal_fps = 12.0;
  double duration_s = 5.0;

  friend bool operator==(const ResponseTrace&, const ResponseTrace&) = default;
};

// Frame count/rate/duration consistency plus per-frame ranges; DomainError.
void validate(const ResponseTrace& t);

// Value of a compliance channel in one frame. None is a DomainError: there
// is nothing to read.
double channel_value(const FrameFeatures& f, ComplianceChannel ch);

}  // namespace gotcha
