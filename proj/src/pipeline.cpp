#include "floorscan/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "floorscan/error.hpp"
#include "format_util.hpp"

namespace floorscan {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kInvalidArgument,
              "invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v);
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v);
}

TrimSchedule to_schedule(std::string_view key, std::string_view v) {
  TrimSchedule s;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
    s.angles_deg.push_back(to_double(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  try {
    s.validate();
  } catch (const Error&) {
    bad_value(key, v);
  }
  return s;
}

std::string schedule_text(const TrimSchedule& s) {
  std::string out;
  for (std::size_t i = 0; i < s.angles_deg.size(); ++i) {
    if (i) out += ',';
    out += detail::shortest(s.angles_deg[i]);
  }
  return out;
}

std::string num(double v) { return detail::shortest(v); }

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json transform_json(const RigidTransform& t) {
  const auto& m = t.rotation.m;
  return {{"rotation", {m[0], m[1], m[2]}}, {"translation", vec_json(t.translation)}};
}

json config_json(const PipelineConfig& config) { return config.entries(); }

std::string dump(const json& j) { return j.dump(1) + "\n"; }

bool has_tag(std::string_view provenance, std::string_view tag) {
  std::size_t start = 0;
  while (start <= provenance.size()) {
    const auto bar = provenance.find('|', start);
    if (trim(provenance.substr(start, bar == std::string_view::npos ? provenance.npos : bar - start)) == tag) {
      return true;
    }
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return false;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (key == "seed") seed = to_uint(key, v);
  else if (key == "unit_scale") unit_scale = to_double(key, v);
  else if (key == "orient.method") {
    if (v == "kmeans") orient_method = OrientationMethod::kSphericalKMeans;
    else if (v == "bbox") orient_method = OrientationMethod::kBoundingBox;
    else bad_value(key, v);
  } else if (key == "orient.floor_schedule") floor_schedule = to_schedule(key, v);
  else if (key == "orient.wall_schedule") wall_schedule = to_schedule(key, v);
  else if (key == "orient.k") {
    orient_k = to_uint(key, v);
    if (orient_k != 4 && orient_k != 6) bad_value(key, v);
  } else if (key == "orient.vertical_angle") vertical_angle_deg = to_double(key, v);
  else if (key == "levels.bucket_size") bucket_size = to_double(key, v);
  else if (key == "levels.histogram_angle") histogram_angle_deg = to_double(key, v);
  else if (key == "levels.min_gap") levels.min_gap = to_double(key, v);
  else if (key == "levels.min_room_height") levels.min_room_height = to_double(key, v);
  else if (key == "levels.peak_fraction") levels.peak_fraction = to_double(key, v);
  else if (key == "levels.min_spike_area") levels.min_spike_area = to_double(key, v);
  else if (key == "levels.split_tolerance") levels.split_tolerance = to_double(key, v);
  else if (key == "levels.remove_angle") removal.filter_angle_deg = to_double(key, v);
  else if (key == "levels.margin") removal.margin = to_double(key, v);
  else if (key == "walls.directions") {
    if (v == "principal4") walls.source = DirectionSource::kPrincipal4;
    else if (v == "kmeans") walls.source = DirectionSource::kKMeans;
    else bad_value(key, v);
  } else if (key == "walls.k") walls.kmeans.k = to_uint(key, v);
  else if (key == "walls.cone_angle") walls.cone_angle_deg = to_double(key, v);
  else if (key == "walls.block_l") walls.block.l = to_double(key, v);
  else if (key == "walls.block_w") walls.block.w = to_double(key, v);
  else if (key == "walls.block_h") walls.block.h = to_double(key, v);
  else if (key == "walls.min_neighbors") walls.block.min_neighbors = to_uint(key, v);
  else if (key == "walls.min_area") walls.filter.min_area = to_double(key, v);
  else if (key == "walls.reach_tol") walls.filter.reach_tol = to_double(key, v);
  else if (key == "walls.plane_fit") {
    if (v == "median") walls.fit = PlaneFitMode::kMedian;
    else if (v == "any_centroid") walls.fit = PlaneFitMode::kAnyCentroid;
    else bad_value(key, v);
  } else if (key == "plan.slices") {
    slices = to_uint(key, v);
    if (slices == 0) bad_value(key, v);
  } else if (key == "plan.opacity") opacity = to_double(key, v);
  else if (key == "plan.drafting_opacity") drafting_opacity = to_double(key, v);
  else if (key == "plan.coplanar") include_coplanar = to_bool(key, v);
  else if (key == "plan.stroke_width") stroke_width = to_double(key, v);
  else if (key == "plan.scale") scale = to_double(key, v);
  else throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::merge_text(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::map<std::string, std::string> PipelineConfig::entries() const {
  return {
      {"seed", std::to_string(seed)},
      {"unit_scale", num(unit_scale)},
      {"orient.method", orient_method == OrientationMethod::kBoundingBox ? "bbox" : "kmeans"},
      {"orient.floor_schedule", schedule_text(floor_schedule)},
      {"orient.wall_schedule", schedule_text(wall_schedule)},
      {"orient.k", std::to_string(orient_k)},
      {"orient.vertical_angle", num(vertical_angle_deg)},
      {"levels.bucket_size", num(bucket_size)},
      {"levels.histogram_angle", num(histogram_angle_deg)},
      {"levels.min_gap", num(levels.min_gap)},
      {"levels.min_room_height", num(levels.min_room_height)},
      {"levels.peak_fraction", num(levels.peak_fraction)},
      {"levels.min_spike_area", num(levels.min_spike_area)},
      {"levels.split_tolerance", num(levels.split_tolerance)},
      {"levels.remove_angle", num(removal.filter_angle_deg)},
      {"levels.margin", num(removal.margin)},
      {"walls.directions", std::string(to_string(walls.source))},
      {"walls.k", std::to_string(walls.kmeans.k)},
      {"walls.cone_angle", num(walls.cone_angle_deg)},
      {"walls.block_l", num(walls.block.l)},
      {"walls.block_w", num(walls.block.w)},
      {"walls.block_h", num(walls.block.h)},
      {"walls.min_neighbors", std::to_string(walls.block.min_neighbors)},
      {"walls.min_area", num(walls.filter.min_area)},
      {"walls.reach_tol", num(walls.filter.reach_tol)},
      {"walls.plane_fit", std::string(to_string(walls.fit))},
      {"plan.slices", std::to_string(slices)},
      {"plan.opacity", num(opacity)},
      {"plan.drafting_opacity", num(drafting_opacity)},
      {"plan.coplanar", include_coplanar ? "true" : "false"},
      {"plan.stroke_width", num(stroke_width)},
      {"plan.scale", num(scale)},
  };
}

std::string PipelineConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> PipelineConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : PipelineConfig{}.entries()) out.push_back(k);
  return out;
}

PlanOptions PipelineConfig::plan_options(PlanStyle style) const {
  PlanOptions o;
  o.style = style;
  o.slices = slices;
  o.opacity = opacity;
  o.drafting_opacity = drafting_opacity;
  o.slice.include_coplanar = include_coplanar;
  return o;
}

SvgOptions PipelineConfig::svg_options(PlanStyle style) const {
  SvgOptions o;
  o.stroke_width = stroke_width;
  o.scale = scale;
  o.description.push_back("floorscan " + std::string(to_string(style)) + " floor plan");
  for (const auto& line : config_header(*this)) o.description.push_back(line);
  return o;
}

bool is_oriented(const TriangleMesh& mesh) { return has_tag(mesh.provenance, kOrientedTag); }

OrientStage run_orient(TriangleMesh mesh, AnnotationSet annotations, const PipelineConfig& config) {
  OrientStage out;
  const OrientationResult floor = config.orient_method == OrientationMethod::kBoundingBox
                                      ? orient_floor_bbox(mesh)
                                      : orient_floor_kmeans(mesh, config.floor_schedule, config.seed);
  apply_transform(mesh, annotations, floor.transform);

  WallAlignParams wp;
  wp.k = config.orient_k;
  wp.schedule = config.wall_schedule;
  wp.seed = config.seed;
  wp.vertical_angle_deg = config.vertical_angle_deg;
  wp.drop_vertical = config.orient_k == 4;
  const OrientationResult walls = align_walls(mesh, wp);
  apply_transform(mesh, annotations, walls.transform);

  out.report = walls.report;
  out.report.method = floor.report.method;
  out.report.floor_transform = floor.transform;
  out.report.wall_transform = walls.transform;
  out.report.g_m = floor.report.g_m;
  out.report.floor_angle = floor.report.floor_angle;
  out.report.ambiguous = floor.report.ambiguous;
  out.report.discarded_fraction = floor.report.discarded_fraction;
  out.report.warnings = floor.report.warnings;
  out.report.warnings.insert(out.report.warnings.end(), walls.report.warnings.begin(),
                             walls.report.warnings.end());
  mesh.provenance = mesh.provenance.empty() ? std::string(kOrientedTag)
                                            : mesh.provenance + " | " + std::string(kOrientedTag);
  out.mesh = std::move(mesh);
  out.annotations = std::move(annotations);
  return out;
}

LevelsStage run_levels(const TriangleMesh& mesh, const AnnotationSet& annotations,
                       const PipelineConfig& config) {
  LevelsStage out;
  out.histogram = build_histogram(mesh, config.bucket_size, config.histogram_angle_deg, DirectionFilter::kBoth);
  out.partition = partition_stories(mesh, out.histogram, config.levels);
  const auto& bounds = out.partition.boundaries;
  out.story_annotations.resize(out.partition.story_count());
  for (const auto& a : annotations) {
    const auto story = static_cast<std::size_t>(
        std::upper_bound(bounds.begin(), bounds.end(), a.position.y) - bounds.begin());
    out.story_annotations[story].push_back(a);
  }
  for (const auto& story : out.partition.stories) out.story_meshes.push_back(submesh(mesh, story.faces));
  return out;
}

WallsStage run_walls(const TriangleMesh& story, const PipelineConfig& config) {
  WallsStage out;
  const auto hist = build_histogram(story, config.bucket_size, config.histogram_angle_deg, DirectionFilter::kBoth);
  out.levels = detect_floor_ceiling(hist, config.levels);
  out.trimmed = remove_ceiling_floor(story, out.levels.floor_y, out.levels.ceiling_y, config.removal);
  WallParams wp = config.walls;
  wp.kmeans.seed = config.seed;
  wp.kmeans.schedule = config.wall_schedule;
  wp.kmeans.vertical_angle_deg = config.vertical_angle_deg;
  out.walls = extract_walls(out.trimmed, out.levels.floor_y, out.levels.ceiling_y, wp);
  return out;
}

PlanStage run_plan(const TriangleMesh& story, const AnnotationSet& annotations, PlanStyle style,
                   const PipelineConfig& config) {
  PlanStage out;
  if (style == PlanStyle::kDrafting) {
    out.walls = run_walls(story, config);
    out.levels = out.walls->levels;
    out.plan = build_floor_plan(out.walls->walls.mesh, annotations, out.levels.floor_y,
                                out.levels.ceiling_y, config.plan_options(style));
    return out;
  }
  const auto hist = build_histogram(story, config.bucket_size, config.histogram_angle_deg, DirectionFilter::kBoth);
  out.levels = detect_floor_ceiling(hist, config.levels);
  const TriangleMesh trimmed = remove_ceiling_floor(story, out.levels.floor_y, out.levels.ceiling_y, config.removal);
  out.plan = build_floor_plan(trimmed, annotations, out.levels.floor_y, out.levels.ceiling_y,
                              config.plan_options(style));
  return out;
}

std::vector<std::string> config_header(const PipelineConfig& config) {
  std::vector<std::string> lines;
  for (const auto& [k, v] : config.entries()) lines.push_back("config " + k + " = " + v);
  return lines;
}

std::string format_orientation_report(const OrientationReport& r, const PipelineConfig& config) {
  json j;
  j["config"] = config_json(config);
  j["method"] = to_string(r.method);
  j["floor_transform"] = transform_json(r.floor_transform);
  j["wall_transform"] = transform_json(r.wall_transform);
  j["combined_transform"] = transform_json(r.combined());
  j["g_m"] = vec_json(r.g_m);
  j["floor_angle_deg"] = rad_to_deg(r.floor_angle);
  j["theta_wall_deg"] = rad_to_deg(r.theta_wall);
  j["wall_angle_deg"] = rad_to_deg(r.wall_angle);
  j["discarded_fraction"] = r.discarded_fraction;
  j["ambiguous"] = r.ambiguous;
  json centers = json::array();
  for (std::size_t i = 0; i < r.wall_centers.size(); ++i) {
    centers.push_back({{"center", vec_json(r.wall_centers[i])},
                       {"heading_deg", rad_to_deg(heading(r.wall_centers[i]))},
                       {"inlier_fraction", r.wall_inlier_fractions[i]}});
  }
  j["wall_clusters"] = centers;
  j["warnings"] = r.warnings;
  return dump(j);
}

std::string format_levels_report(const LevelsStage& s, const PipelineConfig& config) {
  json j;
  j["config"] = config_json(config);
  j["story_count"] = s.partition.story_count();
  j["bucket_size"] = s.histogram.bucket_size;
  json stories = json::array();
  for (std::size_t i = 0; i < s.partition.stories.size(); ++i) {
    const auto& st = s.partition.stories[i];
    stories.push_back({{"index", i}, {"floor_y", st.floor_y}, {"ceiling_y", st.ceiling_y},
                       {"face_count", st.faces.size()}});
  }
  j["stories"] = stories;
  json spikes = json::array();
  for (const auto& sp : s.partition.spikes) {
    spikes.push_back({{"y", sp.y}, {"area", sp.area}, {"bucket_pair", sp.pair}});
  }
  j["spikes"] = spikes;
  j["boundaries"] = s.partition.boundaries;
  j["flagged"] = s.partition.flagged;
  j["warnings"] = s.partition.warnings;
  return dump(j);
}

std::string format_walls_report(const WallsStage& s, const PipelineConfig& config) {
  const auto& w = s.walls;
  json j;
  j["config"] = config_json(config);
  j["floor_y"] = s.levels.floor_y;
  j["ceiling_y"] = s.levels.ceiling_y;
  json dirs = json::array();
  for (std::size_t i = 0; i < w.directions.directions.size(); ++i) {
    dirs.push_back({{"direction", vec_json(w.directions.directions[i])},
                    {"heading_deg", rad_to_deg(heading(w.directions.directions[i]))},
                    {"assigned", w.assigned_per_direction[i]}});
  }
  j["directions"] = {{"source", to_string(w.directions.source)}, {"items", dirs},
                     {"warnings", w.directions.warnings}};
  json clusters = json::array();
  for (const auto& seg : w.segments) {
    clusters.push_back({{"id", seg.cluster_id}, {"direction", seg.direction_index},
                        {"members", seg.centroids.size()}, {"area", seg.area},
                        {"y_min", seg.y_min}, {"y_max", seg.y_max},
                        {"lateral_min", seg.lateral_min}, {"lateral_max", seg.lateral_max}});
  }
  j["clusters"] = clusters;
  j["kept_count"] = w.kept.size();
  j["discarded_count"] = w.segments.size() - w.kept.size();
  j["noise_count"] = w.noise_count;
  json walls = json::array();
  for (const auto& pw : w.walls) {
    json corners = json::array();
    for (const Vec3& c : pw.corners) corners.push_back(vec_json(c));
    walls.push_back({{"segment", pw.segment_id}, {"normal", vec_json(pw.plane.normal)},
                     {"offset", pw.plane.offset}, {"corners", corners}});
  }
  j["walls"] = walls;
  return dump(j);
}

std::string format_plan_svg(const PlanStage& stage, PlanStyle style, const PipelineConfig& config) {
  return render_svg(stage.plan, config.svg_options(style));
}

std::string format_plan_layers(const PlanStage& stage, const PipelineConfig& config) {
  json j = json::parse(format_layers_json(stage.plan));
  j["config"] = config_json(config);
  j["floor_y"] = stage.levels.floor_y;
  j["ceiling_y"] = stage.levels.ceiling_y;
  return dump(j);
}

std::string format_mesh(const TriangleMesh& mesh, const PipelineConfig& config) {
  return format_obj(mesh, config_header(config));
}

}  // namespace floorscan
