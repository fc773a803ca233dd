#pragma once

#include "ocular/sim/trace.hpp"
#include "ocular/vision.hpp"

#include <string>

namespace ocular::io {

/// Two stacked panels (left eye, right eye) with u(t) and v(t) of the face
/// centre in pixels and dashed lines at the image centre. Lost-face stretches
/// leave gaps.
std::string render_trace_svg(const sim::Trace& trace, const CameraModel<double>& camera, const std::string& title);

}  // namespace ocular::io
