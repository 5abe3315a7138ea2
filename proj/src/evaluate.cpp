#include "floorscan/evaluate.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include <json.hpp>

#include "floorscan/error.hpp"

namespace floorscan {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

template <class F>
auto in_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

Vec2 unit2(const Vec3& v) {
  const Vec2 p = project_xz(v);
  const double len = norm(p);
  return len > 0.0 ? Vec2{p.x / len, p.z / len} : Vec2{};
}

struct Line2 {
  Vec2 normal;
  double offset = 0.0;
};

std::optional<Vec2> intersect(const Line2& a, const Line2& b) {
  const double det = a.normal.x * b.normal.z - a.normal.z * b.normal.x;
  if (std::fabs(det) < 1e-12) return std::nullopt;
  return Vec2{(a.offset * b.normal.z - a.normal.z * b.offset) / det,
              (a.normal.x * b.offset - a.offset * b.normal.x) / det};
}

// Measures one room off the drafting plan: each true wall picks the plan
// segments lying along it, their mean position gives the wall line, and
// neighbouring lines meet at the room corners.
RoomArea trace_room(const TrueRoom& room, const GroundTruth& truth, const RigidTransform& r,
                    const FloorPlan& plan, const std::vector<TriangleAttributes>& wall_faces,
                    const EvalOptions& options) {
  RoomArea out;
  out.label = room.label;
  out.actual = room.area;
  const double min_cos = std::cos(deg_to_rad(options.trace_angle_deg));
  std::vector<Line2> lines;
  for (std::size_t wi : room.walls) {
    const TrueWall& w = truth.walls[wi];
    const Vec2 n = unit2(r.apply_direction(w.normal));
    const Vec2 c = project_xz(r.apply_point(w.center));
    const Vec2 lat{-n.z, n.x};
    const double offset = dot(n, c);
    const double lat_mid = dot(lat, c);
    double weight = 0.0, sum = 0.0;
    for (const auto& layer : plan.layers) {
      for (const auto& s : layer.segments) {
        if (dot(unit2(wall_faces[s.face].normal), n) < min_cos) continue;
        const Vec2 m = (s.a + s.b) * 0.5;
        if (std::fabs(dot(n, m) - offset) > options.trace_distance) continue;
        if (std::fabs(dot(lat, m) - lat_mid) > w.width / 2 + options.trace_distance) continue;
        const double len = norm(s.b - s.a);
        weight += len;
        sum += len * dot(n, m);
      }
    }
    if (weight <= 0.0) return out;
    lines.push_back({n, sum / weight});
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto p = intersect(lines[(i + lines.size() - 1) % lines.size()], lines[i]);
    if (!p) return out;
    out.polygon.push_back(*p);
  }
  const RoomPolygon poly{room.label, room.area, out.polygon};
  const auto rows = measure_report(std::span<const RoomPolygon>(&poly, 1));
  out.measured = rows.front().measured_area;
  out.error_percent = rows.front().error_percent;
  return out;
}

double fold_quarter_turn(double rad) {
  const double q = std::numbers::pi / 2.0;
  return rad - q * std::round(rad / q);
}

}  // namespace

WallMatch match_walls(const GroundTruth& truth, const RigidTransform& recovered,
                      const std::vector<std::vector<PlanarWall>>& walls_per_story,
                      const EvalOptions& options) {
  WallMatch m;
  m.true_count = truth.walls.size();
  m.true_found.assign(truth.walls.size(), false);
  const double min_cos = std::cos(deg_to_rad(options.match_angle_deg));
  for (std::size_t s = 0; s < walls_per_story.size(); ++s) {
    for (const PlanarWall& d : walls_per_story[s]) {
      ++m.detected_count;
      const Vec3 lat = lateral_axis(d.plane.normal);
      double lo = dot(lat, d.corners[0]), hi = lo;
      for (const Vec3& c : d.corners) {
        lo = std::min(lo, dot(lat, c));
        hi = std::max(hi, dot(lat, c));
      }
      bool matched = false;
      for (std::size_t t = 0; t < truth.walls.size(); ++t) {
        const TrueWall& w = truth.walls[t];
        if (w.story != s) continue;
        const Vec3 n = recovered.apply_direction(w.normal);
        const Vec3 c = recovered.apply_point(w.center);
        if (dot(n, d.plane.normal) < min_cos) continue;
        if (std::fabs(dot(d.plane.normal, c) - d.plane.offset) > options.match_offset) continue;
        const double mid = dot(lat, c);
        if (hi < mid - w.width / 2 || lo > mid + w.width / 2) continue;
        matched = true;
        m.true_found[t] = true;
      }
      m.detected_matched += matched ? 1 : 0;
    }
  }
  for (bool f : m.true_found) m.true_matched += f ? 1 : 0;
  return m;
}

EvalReport evaluate(const BuildingSpec& spec, const PipelineConfig& config, const EvalOptions& options) {
  EvalReport rep;
  const SyntheticBuilding building = in_stage("synth", [&] { return generate(spec); });
  const GroundTruth& truth = building.truth;

  auto t = Clock::now();
  const OrientStage oriented = in_stage("orient", [&] {
    return run_orient(building.mesh, building.annotations, config);
  });
  rep.timings.orient = seconds_since(t);
  rep.recovered = truth.transform.then(oriented.report.combined());
  const Mat3& r = rep.recovered.rotation;
  const RigidTransform& to_oriented = rep.recovered;
  rep.floor_normal_error_deg = rad_to_deg(angle_between(r * kUnitY, kUnitY));
  rep.yaw_error_deg = std::fabs(rad_to_deg(fold_quarter_turn(heading(r * kUnitX))));
  rep.warnings = oriented.report.warnings;

  t = Clock::now();
  const LevelsStage levels = in_stage("levels", [&] {
    return run_levels(oriented.mesh, oriented.annotations, config);
  });
  rep.timings.levels = seconds_since(t);
  rep.true_story_count = truth.story_floor_y.size();
  rep.detected_story_count = levels.partition.story_count();
  std::size_t agree = 0;
  for (std::size_t s = 0; s < levels.partition.stories.size(); ++s) {
    for (auto f : levels.partition.stories[s].faces) agree += truth.story_of_face[f] == s ? 1 : 0;
  }
  rep.story_label_agreement = truth.story_of_face.empty()
                                  ? 1.0
                                  : double(agree) / double(truth.story_of_face.size());

  t = Clock::now();
  std::vector<WallsStage> walls;
  for (const auto& story : levels.story_meshes) {
    walls.push_back(in_stage("walls", [&] { return run_walls(story, config); }));
  }
  rep.timings.walls = seconds_since(t);

  const std::size_t paired = std::min(rep.true_story_count, rep.detected_story_count);
  for (std::size_t s = 0; s < paired; ++s) {
    Vec3 center;
    std::size_t count = 0;
    for (const auto& room : truth.rooms) {
      if (room.story != s) continue;
      for (const Vec3& c : room.corners) center += c;
      count += room.corners.size();
    }
    center = center / double(std::max<std::size_t>(count, 1));
    const double floor_true = to_oriented.apply_point({center.x, truth.story_floor_y[s], center.z}).y;
    const double ceiling_true = to_oriented.apply_point({center.x, truth.story_ceiling_y[s], center.z}).y;
    rep.floor_error_m.push_back(walls[s].levels.floor_y - floor_true);
    rep.ceiling_error_m.push_back(walls[s].levels.ceiling_y - ceiling_true);
  }

  std::vector<std::vector<PlanarWall>> detected;
  for (const auto& w : walls) detected.push_back(w.walls.walls);
  rep.walls = match_walls(truth, rep.recovered, detected, options);

  t = Clock::now();
  std::vector<FloorPlan> plans;
  for (std::size_t s = 0; s < walls.size(); ++s) {
    plans.push_back(in_stage("plan", [&] {
      const auto& w = walls[s];
      FloorPlan plan = build_floor_plan(w.walls.mesh, levels.story_annotations[s], w.levels.floor_y,
                                        w.levels.ceiling_y, config.plan_options(PlanStyle::kDrafting));
      if (!plan.bounds.empty) (void)render_svg(plan, config.svg_options(PlanStyle::kDrafting));
      return plan;
    }));
  }
  rep.timings.drafting = seconds_since(t);

  for (const auto& room : truth.rooms) {
    if (room.story >= paired) {
      rep.rooms.push_back({room.label, room.area, std::nullopt, std::nullopt, {}});
      continue;
    }
    const auto attrs = compute_all_attributes(walls[room.story].walls.mesh);
    rep.rooms.push_back(trace_room(room, truth, to_oriented, plans[room.story], attrs, options));
  }
  return rep;
}

std::string format_eval_report(const EvalReport& rep, bool include_timings) {
  nlohmann::json j;
  j["floor_normal_error_deg"] = rep.floor_normal_error_deg;
  j["yaw_error_deg"] = rep.yaw_error_deg;
  j["true_story_count"] = rep.true_story_count;
  j["detected_story_count"] = rep.detected_story_count;
  j["story_count_correct"] = rep.true_story_count == rep.detected_story_count;
  j["story_label_agreement"] = rep.story_label_agreement;
  j["floor_error_m"] = rep.floor_error_m;
  j["ceiling_error_m"] = rep.ceiling_error_m;
  j["walls"] = {{"true_count", rep.walls.true_count},
                {"detected_count", rep.walls.detected_count},
                {"recall", rep.walls.recall()},
                {"precision", rep.walls.precision()}};
  nlohmann::json rooms = nlohmann::json::array();
  for (const auto& room : rep.rooms) {
    nlohmann::json jr{{"label", room.label}, {"actual_area_m2", room.actual}};
    jr["measured_area_m2"] = room.measured ? nlohmann::json(*room.measured) : nlohmann::json(nullptr);
    jr["error_percent"] = room.error_percent ? nlohmann::json(*room.error_percent) : nlohmann::json(nullptr);
    rooms.push_back(jr);
  }
  j["rooms"] = rooms;
  j["warnings"] = rep.warnings;
  if (include_timings) {
    j["timings_s"] = {{"orient", rep.timings.orient},
                      {"levels", rep.timings.levels},
                      {"walls", rep.timings.walls},
                      {"drafting", rep.timings.drafting}};
  }
  return j.dump(1) + "\n";
}

}  // namespace floorscan
