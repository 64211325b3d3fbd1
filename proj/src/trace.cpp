/* trace.cpp -- frame feature validation and channel access. */

#include "gotcha/trace.hpp"

#include <cmath>

namespace gotcha {

void validate(const FrameFeatures& f) {
  if (!std::isfinite(f.realism) || f.realism < 0.0 || f.realism > 1.0)
    throw DomainError("frame realism must lie in [0, 1]");
  if (!std::isfinite(f.yaw_deg)) throw DomainError("frame yaw must be finite");
  if (!std::isfinite(f.expression_intensity) || f.expression_intensity < 0.0 ||
      f.expression_intensity > 1.0)
    throw DomainError("frame expression intensity must lie in [0, 1]");
  if (!std::isfinite(f.occlusion_fraction) || f.occlusion_fraction < 0.0 ||
      f.occlusion_fraction > 1.0)
    throw DomainError("frame occlusion fraction must lie in [0, 1]");
  if (!std::isfinite(f.luminance_shift) || f.luminance_shift < -1.0 || f.luminance_shift > 1.0)
    throw DomainError("frame luminance shift must lie in [-1, 1]");
  if (f.n_faces < 0) throw DomainError("frame face count must be >= 0");
}

void validate(const ResponseTrace& t) {
  if (!(t.nominal_fps > 0.0) || !std::isfinite(t.nominal_fps))
    throw DomainError("trace fps must be > 0");
  if (!(t.duration_s > 0.0) || !std::isfinite(t.duration_s))
    throw DomainError("trace duration must be > 0");
  auto expected = static_cast<std::size_t>(std::llround(t.nominal_fps * t.duration_s));
  if (expected == 0) expected = 1;
  if (t.frames.size() != expected)
    throw DomainError("trace frame count does not match fps * duration");
  for (const auto& f : t.frames) validate(f);
}

double channel_value(const FrameFeatures& f, ComplianceChannel ch) {
  switch (ch) {
    case ComplianceChannel::YawAngle: return f.yaw_deg;
    case ComplianceChannel::ExpressionIntensity: return f.expression_intensity;
    case ComplianceChannel::OcclusionFraction: return f.occlusion_fraction;
    case ComplianceChannel::LuminanceShift: return f.luminance_shift;
    default: throw DomainError("channel 'none' carries no value");
  }
}

}  // namespace gotcha
