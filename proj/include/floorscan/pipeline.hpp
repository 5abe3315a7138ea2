#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floorscan/floorplan.hpp"
#include "floorscan/levels.hpp"
#include "floorscan/mesh.hpp"
#include "floorscan/orientation.hpp"
#include "floorscan/walls.hpp"

namespace floorscan {

/// Every tunable of the pipeline. Text form is flat `key = value` lines;
/// '#' starts a comment.
struct PipelineConfig {
  std::uint64_t seed = 42;
  double unit_scale = 1.0;

  OrientationMethod orient_method = OrientationMethod::kSphericalKMeans;
  TrimSchedule floor_schedule = TrimSchedule::floor();
  TrimSchedule wall_schedule = TrimSchedule::walls();
  std::size_t orient_k = 4;
  double vertical_angle_deg = 30.0;

  double bucket_size = 0.0508;
  double histogram_angle_deg = 15.0;
  LevelParams levels;
  RemovalParams removal;

  WallParams walls;

  std::size_t slices = 100;
  double opacity = 0.5;
  double drafting_opacity = 1.0;
  bool include_coplanar = false;
  double stroke_width = 0.5;
  double scale = 50.0;

  /// Applies one setting. Throws Error(kInvalidArgument) for an unknown key
  /// or a malformed value.
  void set(std::string_view key, std::string_view value);
  /// Applies every `key = value` line of a config file.
  void merge_text(std::string_view text);

  /// Canonical key -> value text for every setting, sorted by key.
  std::map<std::string, std::string> entries() const;
  std::string to_text() const;

  static std::vector<std::string> keys();

  PlanOptions plan_options(PlanStyle style) const;
  SvgOptions svg_options(PlanStyle style) const;
};

/// Marker appended to a mesh provenance once orientation has run.
inline constexpr std::string_view kOrientedTag = "oriented";

bool is_oriented(const TriangleMesh& mesh);

struct OrientStage {
  TriangleMesh mesh;
  AnnotationSet annotations;
  OrientationReport report;
};

/// Levels the floor, then aligns walls with the axes, moving annotations along.
OrientStage run_orient(TriangleMesh mesh, AnnotationSet annotations, const PipelineConfig& config);

struct LevelsStage {
  AltitudeHistogram histogram;
  LevelPartition partition;
  std::vector<TriangleMesh> story_meshes;
  std::vector<AnnotationSet> story_annotations;
};

LevelsStage run_levels(const TriangleMesh& mesh, const AnnotationSet& annotations,
                       const PipelineConfig& config);

struct WallsStage {
  FloorCeiling levels;
  TriangleMesh trimmed;  // floor and ceiling removed
  WallExtraction walls;
};

/// Floor/ceiling detection on one story, surface removal and wall extraction.
WallsStage run_walls(const TriangleMesh& story, const PipelineConfig& config);

struct PlanStage {
  FloorCeiling levels;
  FloorPlan plan;
  std::optional<WallsStage> walls;  // drafting only
};

PlanStage run_plan(const TriangleMesh& story, const AnnotationSet& annotations, PlanStyle style,
                   const PipelineConfig& config);

// Artifact text. Every artifact carries the configuration it was made with.
std::vector<std::string> config_header(const PipelineConfig& config);
std::string format_orientation_report(const OrientationReport& report, const PipelineConfig& config);
std::string format_levels_report(const LevelsStage& stage, const PipelineConfig& config);
std::string format_walls_report(const WallsStage& stage, const PipelineConfig& config);
std::string format_plan_svg(const PlanStage& stage, PlanStyle style, const PipelineConfig& config);
std::string format_plan_layers(const PlanStage& stage, const PipelineConfig& config);
std::string format_mesh(const TriangleMesh& mesh, const PipelineConfig& config);

}  // namespace floorscan
