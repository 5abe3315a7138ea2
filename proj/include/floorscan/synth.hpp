#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floorscan/floorplan.hpp"
#include "floorscan/mesh.hpp"

namespace floorscan {

struct RoomSpec {
  std::string label;
  double x = 0.0;  // corner of the room footprint, meters
  double z = 0.0;
  double width = 5.0;  // along the room's local x
  double depth = 4.0;  // along the room's local z
  /// Heading of the room's local x axis, degrees: local +x maps to
  /// (cos a, 0, sin a).
  double rotation_deg = 0.0;
  double floor_offset = 0.0;    // relative to the story base
  double ceiling_offset = 0.0;  // relative to base + story height
};

struct StorySpec {
  double height = 2.7;
  double slab_thickness = 0.3;
  std::vector<RoomSpec> rooms;
};

struct BuildingSpec {
  std::uint64_t seed = 42;
  std::vector<StorySpec> stories;
  double wall_thickness = 0.2;
  double clutter_density = 0.0;  // boxes per m^2 of floor
  double tilt_x_deg = 0.0;
  double tilt_z_deg = 0.0;
  double yaw_deg = 0.0;
  double noise_sigma = 0.0;  // meters
  double hole_fraction = 0.0;
  double edge_target = 0.25;  // meters
  double bridge_fraction = 0.0;  // bridging triangles per wall triangle

  /// Throws Error(kInvalidArgument) for an infeasible spec.
  void validate() const;
};

/// Named layouts used by tests and the CLI: single_room, office, sunken,
/// two_story, three_story, wing, large.
BuildingSpec preset_spec(std::string_view name);
std::vector<std::string> preset_names();

BuildingSpec parse_building_spec(std::string_view json_text);
std::string format_building_spec(const BuildingSpec& spec);

enum class SurfaceLabel { kFloor, kCeiling, kWall, kClutter };

std::string_view to_string(SurfaceLabel l);

struct TrueWall {
  Vec3 normal;  // unit, pointing into the room
  double offset = 0.0;  // dot(normal, p) on the wall
  Vec3 center;
  double width = 0.0;
  double height = 0.0;
  std::size_t story = 0;
  std::size_t room = 0;  // index into GroundTruth::rooms
};

struct TrueRoom {
  std::string label;
  std::size_t story = 0;
  double area = 0.0;
  double floor_y = 0.0;
  double ceiling_y = 0.0;
  std::vector<Vec3> corners;  // footprint at floor height, counter-clockwise in (x, z)
  std::vector<std::size_t> walls;  // TrueWall indices, one per footprint edge
};

/// Ground truth in the building's own frame, before `transform` was applied.
struct GroundTruth {
  std::vector<SurfaceLabel> labels;  // per face
  std::vector<int> wall_of_face;     // TrueWall index or -1
  std::vector<std::uint32_t> story_of_face;
  std::vector<double> story_floor_y;
  std::vector<double> story_ceiling_y;
  std::vector<TrueWall> walls;
  std::vector<TrueRoom> rooms;
  RigidTransform transform;  // building frame to mesh frame
  std::size_t clean_face_count = 0;  // before hole punching
};

struct SyntheticBuilding {
  TriangleMesh mesh;
  AnnotationSet annotations;
  GroundTruth truth;
};

/// Closed boxes per room (inward normals), optional clutter boxes and
/// bridging triangles, vertex jitter, face deletion, then tilt and yaw.
/// Deterministic in spec.seed.
SyntheticBuilding generate(const BuildingSpec& spec);

std::string format_ground_truth(const GroundTruth& truth);

}  // namespace floorscan
