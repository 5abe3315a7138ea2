#include "floorscan/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "floorscan/error.hpp"
#include "format_util.hpp"

namespace floorscan {
namespace {

constexpr double kMergeTolerance = 1e-7;
constexpr double kCoplanarAltitude = 1e-9;
constexpr double kCoplanarNormal = 1e-6;

// Crossing point of edge (p, q) with the plane. Vertices are ordered by index
// so both triangles sharing the edge compute the same bits.
Vec2 edge_crossing(const TriangleMesh& mesh, std::uint32_t i, std::uint32_t j, double altitude) {
  if (j < i) std::swap(i, j);
  const Vec3& p = mesh.vertices[i];
  const Vec3& q = mesh.vertices[j];
  const double sp = p.y - altitude;
  const double sq = q.y - altitude;
  if (sp == 0.0) return project_xz(p);
  if (sq == 0.0) return project_xz(q);
  const double t = sp / (sp - sq);
  return {p.x + (q.x - p.x) * t, p.z + (q.z - p.z) * t};
}

bool coplanar_horizontal(const TriangleMesh& mesh, std::size_t f, double altitude) {
  const Face& face = mesh.faces[f];
  for (auto v : face) {
    if (std::fabs(mesh.vertices[v].y - altitude) > kCoplanarAltitude) return false;
  }
  const Vec3 a = mesh.vertices[face[0]];
  const Vec3 n = cross(mesh.vertices[face[1]] - a, mesh.vertices[face[2]] - a);
  const double len = norm(n);
  return len > 0.0 && 1.0 - std::fabs(n.y / len) <= kCoplanarNormal;
}

void slice_face(const TriangleMesh& mesh, std::size_t f, double altitude,
                const SliceOptions& options, std::vector<PlanSegment>& out) {
  const Face& face = mesh.faces[f];
  const auto fid = static_cast<std::uint32_t>(f);
  if (options.include_coplanar && coplanar_horizontal(mesh, f, altitude)) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = project_xz(mesh.vertices[face[k]]);
      const Vec2 b = project_xz(mesh.vertices[face[(k + 1) % 3]]);
      if (!(a == b)) out.push_back({a, b, fid});
    }
    return;
  }
  bool above[3];
  int count_above = 0;
  for (int k = 0; k < 3; ++k) {
    above[k] = mesh.vertices[face[k]].y - altitude >= 0.0;
    count_above += above[k] ? 1 : 0;
  }
  if (count_above == 0 || count_above == 3) return;
  // The lone vertex on its side; both crossing edges start there.
  int lone = 0;
  for (int k = 0; k < 3; ++k) {
    if (above[k] == (count_above == 1)) lone = k;
  }
  const auto v0 = face[lone];
  const auto v1 = face[(lone + 1) % 3];
  const auto v2 = face[(lone + 2) % 3];
  const Vec2 a = edge_crossing(mesh, v0, v1, altitude);
  const Vec2 b = edge_crossing(mesh, v0, v2, altitude);
  if (a == b) return;
  out.push_back({a, b, fid});
}

bool near(const Vec2& a, const Vec2& b) {
  return std::fabs(a.x - b.x) <= kMergeTolerance && std::fabs(a.z - b.z) <= kMergeTolerance;
}

constexpr std::string_view kMarkerColor = "#d00000";

class SvgWriter {
 public:
  SvgWriter(const Bounds2& bounds, const SvgOptions& o) : b_(bounds), o_(o) {}

  double width() const { return (b_.max.x - b_.min.x) * o_.scale + 2.0 * o_.margin; }
  double height() const { return (b_.max.z - b_.min.z) * o_.scale + 2.0 * o_.margin; }
  double px(double x) const { return (x - b_.min.x) * o_.scale + o_.margin; }
  double py(double z) const { return (b_.max.z - z) * o_.scale + o_.margin; }
  std::string pt(const Vec2& p) const {
    return detail::fixed(px(p.x), 3) + " " + detail::fixed(py(p.z), 3);
  }

 private:
  Bounds2 b_;
  const SvgOptions& o_;
};

// Path data for one layer. Segments continuing from the previous end point
// extend the current subpath; collinear continuations replace its last vertex.
std::string layer_path(const SliceLayer& layer, const SvgWriter& w) {
  std::vector<std::vector<Vec2>> runs;
  for (const auto& s : layer.segments) {
    if (!runs.empty() && near(runs.back().back(), s.a)) {
      auto& run = runs.back();
      if (run.size() >= 2) {
        const Vec2 prev = run[run.size() - 2];
        const Vec2 d1 = run.back() - prev;
        const Vec2 d2 = s.b - s.a;
        const double scale = norm(d1) * norm(d2);
        if (std::fabs(cross(d1, d2)) <= kMergeTolerance * scale && dot(d1, d2) > 0.0) {
          run.back() = s.b;
          continue;
        }
      }
      run.push_back(s.b);
      continue;
    }
    runs.push_back({s.a, s.b});
  }
  std::string d;
  for (const auto& run : runs) {
    if (!d.empty()) d += ' ';
    d += 'M' + w.pt(run.front());
    for (std::size_t i = 1; i < run.size(); ++i) d += " L" + w.pt(run[i]);
  }
  return d;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_marker(std::ostringstream& os, const Marker& m, const SvgWriter& w) {
  const double r = 4.0;
  const double cx = w.px(m.position.x);
  const double cy = w.py(m.position.z);
  const std::string_view color = kMarkerColor;
  auto f = [](double v) { return detail::fixed(v, 3); };
  switch (m.kind) {
    case AnnotationKind::kSensor:
      os << "    <circle cx=\"" << f(cx) << "\" cy=\"" << f(cy) << "\" r=\"" << f(r) << "\" fill=\""
         << color << "\"/>\n";
      break;
    case AnnotationKind::kWindow:
      os << "    <rect x=\"" << f(cx - r) << "\" y=\"" << f(cy - r) << "\" width=\"" << f(2 * r)
         << "\" height=\"" << f(2 * r) << "\" fill=\"" << color << "\"/>\n";
      break;
    case AnnotationKind::kDoor:
      os << "    <path d=\"M" << f(cx) << ' ' << f(cy - r) << " L" << f(cx + r) << ' ' << f(cy)
         << " L" << f(cx) << ' ' << f(cy + r) << " L" << f(cx - r) << ' ' << f(cy) << " Z\" fill=\""
         << color << "\"/>\n";
      break;
    case AnnotationKind::kThermostat:
      os << "    <path d=\"M" << f(cx) << ' ' << f(cy - r) << " L" << f(cx + r) << ' ' << f(cy + r)
         << " L" << f(cx - r) << ' ' << f(cy + r) << " Z\" fill=\"" << color << "\"/>\n";
      break;
    case AnnotationKind::kOther:
      os << "    <path d=\"M" << f(cx - r) << ' ' << f(cy - r) << " L" << f(cx + r) << ' '
         << f(cy + r) << " M" << f(cx - r) << ' ' << f(cy + r) << " L" << f(cx + r) << ' '
         << f(cy - r) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\" fill=\"none\"/>\n";
      break;
  }
  os << "    <text x=\"" << f(cx + r + 2.0) << "\" y=\"" << f(cy - r) << "\" fill=\"" << color
     << "\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(m.label) << "</text>\n";
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); };
  auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.z, b.z) <= c.z &&
           c.z <= std::max(a.z, b.z);
  };
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

SlicePlan make_slice_plan(double y_floor, double y_ceiling, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "slice count must be at least 1");
  if (!(y_ceiling > y_floor)) {
    throw Error(ErrorCode::kInvalidArgument, "ceiling altitude must be above floor altitude");
  }
  SlicePlan plan{y_floor, y_ceiling, n, {}};
  plan.altitudes.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    plan.altitudes.push_back(y_floor + (y_ceiling - y_floor) * (static_cast<double>(i) / static_cast<double>(n)));
  }
  return plan;
}

SliceLayer slice_mesh(const TriangleMesh& mesh, double altitude, const SliceOptions& options) {
  SliceLayer layer{altitude, {}};
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) slice_face(mesh, f, altitude, options, layer.segments);
  return layer;
}

std::vector<SliceLayer> slice_layers(const TriangleMesh& mesh, std::span<const double> altitudes,
                                     const SliceOptions& options) {
  std::vector<SliceLayer> layers;
  layers.reserve(altitudes.size());
  for (double a : altitudes) layers.push_back({a, {}});
  // Altitudes sorted for range lookup; layer order follows the input.
  std::vector<std::size_t> order(altitudes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return altitudes[a] < altitudes[b] || (altitudes[a] == altitudes[b] && a < b);
  });
  std::vector<double> sorted(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = altitudes[order[i]];

  const double pad = options.include_coplanar ? kCoplanarAltitude : 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    double lo = mesh.vertices[face[0]].y;
    double hi = lo;
    for (int k = 1; k < 3; ++k) {
      lo = std::min(lo, mesh.vertices[face[k]].y);
      hi = std::max(hi, mesh.vertices[face[k]].y);
    }
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo - pad);
    const auto last = std::upper_bound(sorted.begin(), sorted.end(), hi + pad);
    for (auto it = first; it != last; ++it) {
      const std::size_t layer = order[static_cast<std::size_t>(it - sorted.begin())];
      slice_face(mesh, f, altitudes[layer], options, layers[layer].segments);
    }
  }
  return layers;
}

std::string_view to_string(PlanStyle s) { return s == PlanStyle::kPenAndInk ? "pen" : "drafting"; }

std::vector<Marker> project_annotations(const AnnotationSet& annotations) {
  std::vector<Marker> out;
  out.reserve(annotations.size());
  for (const auto& a : annotations) out.push_back({a.label, project_xz(a.position), a.kind});
  return out;
}

void Bounds2::add(const Vec2& p) {
  if (empty) {
    min = max = p;
    empty = false;
    return;
  }
  min = {std::min(min.x, p.x), std::min(min.z, p.z)};
  max = {std::max(max.x, p.x), std::max(max.z, p.z)};
}

FloorPlan build_floor_plan(const TriangleMesh& mesh, const AnnotationSet& annotations,
                           double y_floor, double y_ceiling, const PlanOptions& options) {
  FloorPlan plan;
  plan.style = options.style;
  if (options.style == PlanStyle::kPenAndInk) {
    const SlicePlan sp = make_slice_plan(y_floor, y_ceiling, options.slices);
    plan.layers = slice_layers(mesh, sp.altitudes, options.slice);
    plan.opacity = options.opacity;
  } else {
    if (!(y_ceiling > y_floor)) {
      throw Error(ErrorCode::kInvalidArgument, "ceiling altitude must be above floor altitude");
    }
    plan.layers.push_back(slice_mesh(mesh, (y_floor + y_ceiling) / 2.0, options.slice));
    plan.opacity = options.drafting_opacity;
  }
  plan.markers = project_annotations(annotations);
  for (const auto& layer : plan.layers) {
    for (const auto& s : layer.segments) {
      plan.bounds.add(s.a);
      plan.bounds.add(s.b);
    }
  }
  for (const auto& m : plan.markers) plan.bounds.add(m.position);
  return plan;
}

std::string render_svg(const FloorPlan& plan, const SvgOptions& options) {
  if (plan.bounds.empty) throw Error(ErrorCode::kEmptyInput, "floor plan is empty");
  const SvgWriter w(plan.bounds, options);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << detail::fixed(w.width(), 3) << "\" height=\"" << detail::fixed(w.height(), 3)
     << "\" viewBox=\"0 0 " << detail::fixed(w.width(), 3) << ' ' << detail::fixed(w.height(), 3)
     << "\">\n";
  if (!options.description.empty()) {
    os << "  <desc>";
    for (std::size_t i = 0; i < options.description.size(); ++i) {
      os << (i ? "\n" : "") << xml_escape(options.description[i]);
    }
    os << "</desc>\n";
  }
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& layer : plan.layers) {
    const std::string d = layer_path(layer, w);
    os << "  <g data-altitude=\"" << detail::fixed(layer.altitude, 4)
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << detail::shortest(options.stroke_width)
       << "\" stroke-linecap=\"round\" stroke-opacity=\"" << detail::shortest(plan.opacity) << "\">\n";
    if (!d.empty()) os << "    <path d=\"" << d << "\"/>\n";
    os << "  </g>\n";
  }
  if (!plan.markers.empty()) {
    os << "  <g class=\"annotations\">\n";
    for (const auto& m : plan.markers) write_marker(os, m, w);
    os << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string format_layers_json(const FloorPlan& plan) {
  nlohmann::ordered_json j;
  j["style"] = to_string(plan.style);
  j["opacity"] = plan.opacity;
  auto& layers = j["layers"] = nlohmann::ordered_json::array();
  for (const auto& layer : plan.layers) {
    nlohmann::ordered_json l;
    l["altitude"] = layer.altitude;
    auto& segs = l["segments"] = nlohmann::ordered_json::array();
    for (const auto& s : layer.segments) segs.push_back({s.a.x, s.a.z, s.b.x, s.b.z});
    layers.push_back(std::move(l));
  }
  auto& markers = j["annotations"] = nlohmann::ordered_json::array();
  for (const auto& m : plan.markers) {
    markers.push_back({{"label", m.label}, {"kind", to_string(m.kind)}, {"position", {m.position.x, m.position.z}}});
  }
  return j.dump(1) + "\n";
}

double polygon_area(std::span<const Vec2> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return std::fabs(twice) / 2.0;
}

bool is_self_intersecting(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n])) {
        return true;
      }
    }
  }
  return false;
}

double area_error_percent(double actual, double measured) {
  if (!(actual > 0.0)) throw Error(ErrorCode::kInvalidArgument, "actual area must be positive");
  return (actual - measured) / actual * 100.0;
}

std::vector<RoomMeasurement> measure_report(std::span<const RoomPolygon> rooms) {
  std::vector<RoomMeasurement> out;
  for (const auto& r : rooms) {
    if (r.polygon.size() < 3) {
      throw Error(ErrorCode::kInvalidArgument, "room '" + r.label + "' needs at least 3 vertices");
    }
    if (is_self_intersecting(r.polygon)) {
      throw Error(ErrorCode::kSelfIntersecting, "room '" + r.label + "' polygon intersects itself");
    }
    const double measured = polygon_area(r.polygon);
    out.push_back({r.label, r.actual_area, measured, area_error_percent(r.actual_area, measured)});
  }
  return out;
}

std::vector<RoomPolygon> parse_room_polygons(std::string_view json_text) {
  std::vector<RoomPolygon> rooms;
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (!j.is_array()) throw Error(ErrorCode::kParse, "room file must hold a JSON array");
    for (const auto& item : j) {
      RoomPolygon r;
      r.label = item.at("label").get<std::string>();
      r.actual_area = item.at("actual_area_m2").get<double>();
      for (const auto& p : item.at("polygon")) {
        if (p.size() != 2) throw Error(ErrorCode::kParse, "room '" + r.label + "': vertices need [x, z]");
        r.polygon.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      rooms.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("room polygons: ") + e.what());
  }
  return rooms;
}

std::string format_measurements(std::span<const RoomMeasurement> rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j.push_back({{"label", r.label},
                 {"actual_area_m2", r.actual_area},
                 {"measured_area_m2", r.measured_area},
                 {"error_percent", r.error_percent}});
  }
  return j.dump(1) + "\n";
}

}  // namespace floorscan
