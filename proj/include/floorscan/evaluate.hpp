#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floorscan/pipeline.hpp"
#include "floorscan/synth.hpp"

namespace floorscan {

struct WallMatch {
  std::size_t true_count = 0;
  std::size_t detected_count = 0;
  std::size_t true_matched = 0;
  std::size_t detected_matched = 0;
  std::vector<bool> true_found;  // per GroundTruth wall

  double recall() const { return true_count ? double(true_matched) / double(true_count) : 1.0; }
  double precision() const {
    return detected_count ? double(detected_matched) / double(detected_count) : 1.0;
  }
};

struct RoomArea {
  std::string label;
  double actual = 0.0;
  std::optional<double> measured;  // empty when a wall is missing from the plan
  std::optional<double> error_percent;
  std::vector<Vec2> polygon;
};

struct StageTimings {
  double orient = 0.0;    // leveling and wall alignment
  double levels = 0.0;    // histogram and story split
  double walls = 0.0;     // planar wall extraction for every story
  double drafting = 0.0;  // slicing and drawing the drafting plan
};

struct EvalReport {
  double floor_normal_error_deg = 0.0;
  double yaw_error_deg = 0.0;
  std::size_t true_story_count = 0;
  std::size_t detected_story_count = 0;
  double story_label_agreement = 0.0;
  std::vector<double> floor_error_m;    // per detected story paired with truth
  std::vector<double> ceiling_error_m;
  WallMatch walls;
  std::vector<RoomArea> rooms;
  StageTimings timings;
  RigidTransform recovered;  // building frame to oriented frame
  std::vector<std::string> warnings;
};

struct EvalOptions {
  double match_angle_deg = 3.0;
  double match_offset = 0.05;
  /// Plan segments count toward a wall when they lie this close to it.
  double trace_distance = 0.1;
  double trace_angle_deg = 10.0;
};

/// Generates the building, runs orient, levels, walls and the drafting plan,
/// and compares every stage with ground truth. Stage failures propagate as
/// StageError.
EvalReport evaluate(const BuildingSpec& spec, const PipelineConfig& config, const EvalOptions& options = {});

/// Same comparison for stages already run on `building`.
WallMatch match_walls(const GroundTruth& truth, const RigidTransform& recovered,
                      const std::vector<std::vector<PlanarWall>>& walls_per_story,
                      const EvalOptions& options = {});

std::string format_eval_report(const EvalReport& report, bool include_timings);

}  // namespace floorscan
