#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "floorscan/mesh.hpp"

namespace floorscan {

struct SlicePlan {
  double y_floor = 0.0;
  double y_ceiling = 0.0;
  std::size_t n = 1;
  std::vector<double> altitudes;  // n + 1 values, both ends included
};

/// altitudes[i] = y_floor + (y_ceiling - y_floor) * (i / n).
/// Throws Error(kInvalidArgument) for n == 0 or y_ceiling <= y_floor.
SlicePlan make_slice_plan(double y_floor, double y_ceiling, std::size_t n);

struct PlanSegment {
  Vec2 a;
  Vec2 b;
  std::uint32_t face = 0;  // source triangle
};

struct SliceLayer {
  double altitude = 0.0;
  std::vector<PlanSegment> segments;  // ordered by source face
};

struct SliceOptions {
  /// Draw the edges of horizontal triangles lying in the slice plane.
  bool include_coplanar = false;
};

/// Intersection of the mesh with the plane y = altitude, projected to (x, z).
/// A vertex on the plane counts as above it, so a triangle touching the plane
/// at one vertex contributes nothing and a shared in-plane edge is emitted once.
SliceLayer slice_mesh(const TriangleMesh& mesh, double altitude, const SliceOptions& options = {});

/// Same as slicing at every altitude separately, but visits each triangle
/// only for the altitudes its vertical extent covers.
std::vector<SliceLayer> slice_layers(const TriangleMesh& mesh, std::span<const double> altitudes,
                                     const SliceOptions& options = {});

enum class PlanStyle { kPenAndInk, kDrafting };

std::string_view to_string(PlanStyle s);

struct Marker {
  std::string label;
  Vec2 position;
  AnnotationKind kind = AnnotationKind::kOther;
};

/// Drops y from each annotation position.
std::vector<Marker> project_annotations(const AnnotationSet& annotations);

struct Bounds2 {
  Vec2 min;
  Vec2 max;
  bool empty = true;

  void add(const Vec2& p);
};

struct FloorPlan {
  std::vector<SliceLayer> layers;
  PlanStyle style = PlanStyle::kPenAndInk;
  double opacity = 0.5;
  std::vector<Marker> markers;
  Bounds2 bounds;
};

struct PlanOptions {
  PlanStyle style = PlanStyle::kPenAndInk;
  std::size_t slices = 100;
  double opacity = 0.5;
  /// Opacity of the single drafting layer.
  double drafting_opacity = 1.0;
  SliceOptions slice;
};

/// Pen-and-ink: slices at every plan altitude between floor and ceiling.
/// Drafting: one slice halfway between them.
FloorPlan build_floor_plan(const TriangleMesh& mesh, const AnnotationSet& annotations,
                           double y_floor, double y_ceiling, const PlanOptions& options = {});

struct SvgOptions {
  double stroke_width = 0.5;  // px
  double scale = 50.0;        // px per meter
  double margin = 20.0;       // px
  /// Written verbatim into <desc>, one line each.
  std::vector<std::string> description;
};

/// SVG 1.1 document: one <g> per layer with one <path>, annotation markers in
/// red on top. Plan x maps to SVG x and plan z to SVG y flipped, so +z points
/// up on the page. Throws Error(kEmptyInput) when the plan has no geometry.
std::string render_svg(const FloorPlan& plan, const SvgOptions& options = {});

/// {"style", "opacity", "layers": [{"altitude", "segments": [[x1, z1, x2, z2], ...]}]}
std::string format_layers_json(const FloorPlan& plan);

struct RoomPolygon {
  std::string label;
  double actual_area = 0.0;  // m^2
  std::vector<Vec2> polygon;
};

struct RoomMeasurement {
  std::string label;
  double actual_area = 0.0;
  double measured_area = 0.0;
  double error_percent = 0.0;  // positive when the plan under-measures
};

/// Absolute shoelace area.
double polygon_area(std::span<const Vec2> polygon);

/// True when two non-adjacent edges touch or cross.
bool is_self_intersecting(std::span<const Vec2> polygon);

/// (actual - measured) / actual * 100.
double area_error_percent(double actual, double measured);

/// Measured polygon area and signed error per room. Throws
/// Error(kSelfIntersecting) or Error(kInvalidArgument) for unusable polygons.
std::vector<RoomMeasurement> measure_report(std::span<const RoomPolygon> rooms);

/// JSON array of {label, actual_area_m2, polygon: [[x, z], ...]}.
std::vector<RoomPolygon> parse_room_polygons(std::string_view json_text);
std::string format_measurements(std::span<const RoomMeasurement> rows);

}  // namespace floorscan
