#pragma once

#include <string>

#include "svt/scenario.hpp"

namespace svt {

// Trajectory overlay as a standalone SVG line drawing: lane boundaries in
// gray, the Co in purple, the Ego ground truth in blue, and (optionally)
// the predicted Ego trajectory dashed in orange.
void write_scene_svg(const SceneRecord& record, const Trajectory* predicted,
                     const std::string& path);

}  // namespace svt
