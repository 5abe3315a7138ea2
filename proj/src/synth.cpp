#include "floorscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include <json.hpp>

#include "floorscan/error.hpp"

namespace floorscan {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Footprint {
  Vec2 origin;
  double cos_a = 1.0;
  double sin_a = 0.0;
  double width = 0.0;
  double depth = 0.0;

  // Room-local (x, z) to building (x, z).
  Vec2 to_world(double lx, double lz) const {
    return {origin.x + lx * cos_a - lz * sin_a, origin.z + lx * sin_a + lz * cos_a};
  }
  Vec3 direction(double lx, double lz) const { return {lx * cos_a - lz * sin_a, 0.0, lx * sin_a + lz * cos_a}; }
  std::array<Vec2, 4> corners() const {
    return {to_world(0, 0), to_world(width, 0), to_world(width, depth), to_world(0, depth)};
  }
};

Footprint footprint_of(const RoomSpec& r) {
  const double a = deg_to_rad(r.rotation_deg);
  Footprint f;
  f.origin = {r.x, r.z};
  if (r.rotation_deg != 0.0) {
    f.cos_a = std::cos(a);
    f.sin_a = std::sin(a);
  }
  f.width = r.width;
  f.depth = r.depth;
  return f;
}

// Separating-axis test for two rectangles; touching edges do not overlap.
bool footprints_overlap(const Footprint& a, const Footprint& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes{Vec2{a.cos_a, a.sin_a}, Vec2{-a.sin_a, a.cos_a},
                                 Vec2{b.cos_a, b.sin_a}, Vec2{-b.sin_a, b.cos_a}};
  for (const Vec2& ax : axes) {
    double amin = dot(ca[0], ax), amax = amin, bmin = dot(cb[0], ax), bmax = bmin;
    for (int i = 1; i < 4; ++i) {
      amin = std::min(amin, dot(ca[i], ax));
      amax = std::max(amax, dot(ca[i], ax));
      bmin = std::min(bmin, dot(cb[i], ax));
      bmax = std::max(bmax, dot(cb[i], ax));
    }
    if (amax <= bmin + 1e-9 || bmax <= amin + 1e-9) return false;
  }
  return true;
}

std::vector<double> grid_steps(double start, double length, double edge) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(length / edge - 1e-9)));
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s[i] = start + length * (static_cast<double>(i) / static_cast<double>(n));
  return s;
}

struct FaceInfo {
  SurfaceLabel label;
  int wall;
  std::uint32_t story;
};

// Accumulates welded geometry for one box-shaped object. Points are given in
// the object's local frame; identical local coordinates share a vertex.
class BoxBuilder {
 public:
  template <class ToWorld>
  BoxBuilder(TriangleMesh& mesh, std::vector<FaceInfo>& info, ToWorld to_world)
      : mesh_(mesh), info_(info), to_world_(to_world) {}

  // Grid over a rectangle spanned by two coordinate axes of the local frame.
  // `point(i, j)` yields local coordinates. Triangles face along
  // cross(d point/di, d point/dj), or against it when `flip` is set.
  template <class Point>
  void grid(std::size_t nu, std::size_t nv, Point point, bool flip, FaceInfo face) {
    std::vector<std::uint32_t> ids((nu + 1) * (nv + 1));
    for (std::size_t j = 0; j <= nv; ++j) {
      for (std::size_t i = 0; i <= nu; ++i) ids[j * (nu + 1) + i] = vertex(point(i, j));
    }
    for (std::size_t j = 0; j < nv; ++j) {
      for (std::size_t i = 0; i < nu; ++i) {
        const auto a = ids[j * (nu + 1) + i];
        const auto b = ids[j * (nu + 1) + i + 1];
        const auto c = ids[(j + 1) * (nu + 1) + i + 1];
        const auto d = ids[(j + 1) * (nu + 1) + i];
        if (flip) {
          add(a, c, b, face);
          add(a, d, c, face);
        } else {
          add(a, b, c, face);
          add(a, c, d, face);
        }
      }
    }
  }

 private:
  std::uint32_t vertex(const Vec3& local) {
    const auto key = std::make_tuple(local.x, local.y, local.z);
    const auto it = welded_.find(key);
    if (it != welded_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(mesh_.vertices.size());
    mesh_.vertices.push_back(to_world_(local));
    welded_.emplace(key, id);
    return id;
  }
  void add(std::uint32_t a, std::uint32_t b, std::uint32_t c, FaceInfo face) {
    mesh_.faces.push_back({a, b, c});
    info_.push_back(face);
  }

  TriangleMesh& mesh_;
  std::vector<FaceInfo>& info_;
  std::function<Vec3(const Vec3&)> to_world_;
  std::map<std::tuple<double, double, double>, std::uint32_t> welded_;
};

// Axis-aligned box in its local frame: x in [0, sx], z in [0, sz], y in [y0, y1].
// Surfaces are wound to face inward (rooms) or outward (clutter).
struct BoxSurfaces {
  bool floor = true;
  bool ceiling = true;
  bool inward = true;
};

void emit_box(BoxBuilder& b, double sx, double sz, double y0, double y1, double edge,
              const BoxSurfaces& which, FaceInfo horizontal_up, FaceInfo horizontal_down,
              const std::array<FaceInfo, 4>& side) {
  const auto xs = grid_steps(0.0, sx, edge);
  const auto zs = grid_steps(0.0, sz, edge);
  const auto ys = grid_steps(y0, y1 - y0, edge);
  const std::size_t nx = xs.size() - 1, nz = zs.size() - 1, ny = ys.size() - 1;
  const bool in = which.inward;
  // cross(+x, +z) = -y; cross(+z, +y) = -x; cross(+x, +y) = +z.
  if (which.floor) {
    // Bottom faces +y inward, -y outward.
    b.grid(nx, nz, [&](std::size_t i, std::size_t j) { return Vec3{xs[i], y0, zs[j]}; }, in,
           horizontal_up);
  }
  if (which.ceiling) {
    // Top faces -y inward, +y outward.
    b.grid(nx, nz, [&](std::size_t i, std::size_t j) { return Vec3{xs[i], y1, zs[j]}; }, !in,
           in ? horizontal_down : horizontal_up);
  }
  // Sides ordered: x = 0, x = sx, z = 0, z = sz.
  b.grid(nz, ny, [&](std::size_t i, std::size_t j) { return Vec3{0.0, ys[j], zs[i]}; }, in, side[0]);
  b.grid(nz, ny, [&](std::size_t i, std::size_t j) { return Vec3{sx, ys[j], zs[i]}; }, !in, side[1]);
  b.grid(nx, ny, [&](std::size_t i, std::size_t j) { return Vec3{xs[i], ys[j], 0.0}; }, !in, side[2]);
  b.grid(nx, ny, [&](std::size_t i, std::size_t j) { return Vec3{xs[i], ys[j], sz}; }, in, side[3]);
}

RigidTransform building_transform(const BuildingSpec& spec) {
  RigidTransform t;
  const Mat3 yaw = axis_angle(kUnitY, deg_to_rad(spec.yaw_deg));
  const Mat3 tilt = axis_angle(kUnitZ, deg_to_rad(spec.tilt_z_deg)) * axis_angle(kUnitX, deg_to_rad(spec.tilt_x_deg));
  t.rotation = tilt * yaw;
  return t;
}

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

void BuildingSpec::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kInvalidArgument, "infeasible building: " + why); };
  if (stories.empty()) fail("no stories");
  if (!(edge_target > 0.0)) fail("edge_target must be positive");
  if (!(hole_fraction >= 0.0 && hole_fraction < 1.0)) fail("hole_fraction must be in [0, 1)");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be non-negative");
  if (!(clutter_density >= 0.0)) fail("clutter_density must be non-negative");
  if (!(bridge_fraction >= 0.0 && bridge_fraction <= 1.0)) fail("bridge_fraction must be in [0, 1]");
  for (std::size_t s = 0; s < stories.size(); ++s) {
    const auto& st = stories[s];
    if (!(st.height > 0.0)) fail("story " + std::to_string(s) + " height must be positive");
    if (!(st.slab_thickness >= 0.0)) fail("story " + std::to_string(s) + " slab must be non-negative");
    if (st.rooms.empty()) fail("story " + std::to_string(s) + " has no rooms");
    for (std::size_t r = 0; r < st.rooms.size(); ++r) {
      const auto& room = st.rooms[r];
      if (!(room.width > 0.0) || !(room.depth > 0.0)) fail("room '" + room.label + "' has no area");
      if (!(st.height + room.ceiling_offset - room.floor_offset > 0.0)) {
        fail("room '" + room.label + "' has no height");
      }
      for (std::size_t o = 0; o < r; ++o) {
        if (footprints_overlap(footprint_of(room), footprint_of(st.rooms[o]))) {
          fail("rooms '" + room.label + "' and '" + st.rooms[o].label + "' overlap");
        }
      }
    }
  }
}

BuildingSpec preset_spec(std::string_view name) {
  BuildingSpec s;
  auto room = [](std::string label, double x, double z, double w, double d) {
    RoomSpec r;
    r.label = std::move(label);
    r.x = x;
    r.z = z;
    r.width = w;
    r.depth = d;
    return r;
  };
  if (name == "single_room") {
    s.stories.push_back({2.7, 0.3, {room("A", 0, 0, 5, 4)}});
  } else if (name == "office") {
    s.stories.push_back({2.7, 0.3, {room("A", 0, 0, 5, 4), room("B", 5.2, 0, 4, 4), room("C", 0, 4.2, 9.2, 3)}});
  } else if (name == "sunken") {
    RoomSpec low = room("B", 6.2, 0, 4, 5);
    low.floor_offset = -0.15;
    s.stories.push_back({2.7, 0.3, {room("A", 0, 0, 6, 5), low}});
  } else if (name == "two_story" || name == "three_story") {
    const int n = name == "two_story" ? 2 : 3;
    for (int i = 0; i < n; ++i) {
      s.stories.push_back({2.7, 0.3, {room("A" + std::to_string(i), 0, 0, 6, 5), room("B" + std::to_string(i), 6.2, 0, 4, 5)}});
    }
  } else if (name == "wing") {
    RoomSpec wing = room("W", 15, 0, 2.5, 6);
    wing.rotation_deg = 30.0;
    s.stories.push_back({2.7, 0.3, {room("M", 0, 0, 10, 14), wing}});
  } else if (name == "large") {
    StorySpec st{2.7, 0.3, {}};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        st.rooms.push_back(room("R" + std::to_string(i * 4 + j), i * 6.2, j * 5.2, 6, 5));
      }
    }
    s.stories.push_back(std::move(st));
    s.edge_target = 0.12;
    s.clutter_density = 0.1;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown preset '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> preset_names() {
  return {"single_room", "office", "sunken", "two_story", "three_story", "wing", "large"};
}

BuildingSpec parse_building_spec(std::string_view json_text) {
  BuildingSpec s;
  try {
    const json j = json::parse(json_text);
    s.seed = j.value("seed", std::uint64_t{42});
    s.wall_thickness = get_or(j, "wall_thickness", s.wall_thickness);
    s.clutter_density = get_or(j, "clutter_density", s.clutter_density);
    s.tilt_x_deg = get_or(j, "tilt_x_deg", s.tilt_x_deg);
    s.tilt_z_deg = get_or(j, "tilt_z_deg", s.tilt_z_deg);
    s.yaw_deg = get_or(j, "yaw_deg", s.yaw_deg);
    s.noise_sigma = get_or(j, "noise_sigma", s.noise_sigma);
    s.hole_fraction = get_or(j, "hole_fraction", s.hole_fraction);
    s.edge_target = get_or(j, "edge_target", s.edge_target);
    s.bridge_fraction = get_or(j, "bridge_fraction", s.bridge_fraction);
    for (const auto& js : j.at("stories")) {
      StorySpec st;
      st.height = get_or(js, "height", st.height);
      st.slab_thickness = get_or(js, "slab_thickness", st.slab_thickness);
      for (const auto& jr : js.at("rooms")) {
        RoomSpec r;
        r.label = jr.value("label", std::string{});
        r.x = get_or(jr, "x", r.x);
        r.z = get_or(jr, "z", r.z);
        r.width = get_or(jr, "width", r.width);
        r.depth = get_or(jr, "depth", r.depth);
        r.rotation_deg = get_or(jr, "rotation_deg", r.rotation_deg);
        r.floor_offset = get_or(jr, "floor_offset", r.floor_offset);
        r.ceiling_offset = get_or(jr, "ceiling_offset", r.ceiling_offset);
        st.rooms.push_back(std::move(r));
      }
      s.stories.push_back(std::move(st));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("building spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string format_building_spec(const BuildingSpec& s) {
  ordered_json j;
  j["seed"] = s.seed;
  j["wall_thickness"] = s.wall_thickness;
  j["clutter_density"] = s.clutter_density;
  j["tilt_x_deg"] = s.tilt_x_deg;
  j["tilt_z_deg"] = s.tilt_z_deg;
  j["yaw_deg"] = s.yaw_deg;
  j["noise_sigma"] = s.noise_sigma;
  j["hole_fraction"] = s.hole_fraction;
  j["edge_target"] = s.edge_target;
  j["bridge_fraction"] = s.bridge_fraction;
  auto& stories = j["stories"] = ordered_json::array();
  for (const auto& st : s.stories) {
    ordered_json js;
    js["height"] = st.height;
    js["slab_thickness"] = st.slab_thickness;
    auto& rooms = js["rooms"] = ordered_json::array();
    for (const auto& r : st.rooms) {
      rooms.push_back({{"label", r.label}, {"x", r.x}, {"z", r.z}, {"width", r.width},
                       {"depth", r.depth}, {"rotation_deg", r.rotation_deg},
                       {"floor_offset", r.floor_offset}, {"ceiling_offset", r.ceiling_offset}});
    }
    stories.push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

std::string_view to_string(SurfaceLabel l) {
  switch (l) {
    case SurfaceLabel::kFloor: return "floor";
    case SurfaceLabel::kCeiling: return "ceiling";
    case SurfaceLabel::kWall: return "wall";
    case SurfaceLabel::kClutter: return "clutter";
  }
  return "clutter";
}

SyntheticBuilding generate(const BuildingSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  SyntheticBuilding out;
  TriangleMesh& mesh = out.mesh;
  GroundTruth& truth = out.truth;
  std::vector<FaceInfo> info;
  mesh.provenance = "synthetic seed " + std::to_string(spec.seed);

  double base = 0.0;
  for (std::size_t s = 0; s < spec.stories.size(); ++s) {
    const StorySpec& st = spec.stories[s];
    const auto story = static_cast<std::uint32_t>(s);
    double story_floor = -std::numeric_limits<double>::infinity();
    double story_ceiling = std::numeric_limits<double>::infinity();

    for (const RoomSpec& rs : st.rooms) {
      const Footprint fp = footprint_of(rs);
      const double y0 = base + rs.floor_offset;
      const double y1 = base + st.height + rs.ceiling_offset;
      story_floor = std::max(story_floor, y0);
      story_ceiling = std::min(story_ceiling, y1);
      auto room_to_world = [fp](const Vec3& p) {
        const Vec2 w = fp.to_world(p.x, p.z);
        return Vec3{w.x, p.y, w.z};
      };

      // Walls in footprint-edge order: z = 0, x = width, z = depth, x = 0.
      const std::size_t room_index = truth.rooms.size();
      const std::size_t first_wall = truth.walls.size();
      struct WallDef {
        double lx, lz;  // center, local
        Vec3 normal_local;
        double width;
      };
      const std::array<WallDef, 4> defs{{{fp.width / 2, 0.0, kUnitZ, fp.width},
                                         {fp.width, fp.depth / 2, -kUnitX, fp.depth},
                                         {fp.width / 2, fp.depth, -kUnitZ, fp.width},
                                         {0.0, fp.depth / 2, kUnitX, fp.depth}}};
      TrueRoom room;
      room.label = rs.label;
      room.story = s;
      room.area = rs.width * rs.depth;
      room.floor_y = y0;
      room.ceiling_y = y1;
      for (const Vec2& c : fp.corners()) room.corners.push_back({c.x, y0, c.z});
      for (const auto& d : defs) {
        TrueWall w;
        w.normal = fp.direction(d.normal_local.x, d.normal_local.z);
        w.center = room_to_world({d.lx, (y0 + y1) / 2, d.lz});
        w.offset = dot(w.normal, w.center);
        w.width = d.width;
        w.height = y1 - y0;
        w.story = s;
        w.room = room_index;
        room.walls.push_back(truth.walls.size());
        truth.walls.push_back(w);
      }
      truth.rooms.push_back(std::move(room));

      const auto wall_face = [&](std::size_t k) {
        return FaceInfo{SurfaceLabel::kWall, static_cast<int>(first_wall + k), story};
      };
      // Box side order is x = 0, x = sx, z = 0, z = sz.
      const std::array<FaceInfo, 4> sides{wall_face(3), wall_face(1), wall_face(0), wall_face(2)};
      const std::size_t faces_before = mesh.faces.size();
      {
        BoxBuilder b(mesh, info, room_to_world);
        emit_box(b, fp.width, fp.depth, y0, y1, spec.edge_target, {true, true, true},
                 {SurfaceLabel::kFloor, -1, story}, {SurfaceLabel::kCeiling, -1, story}, sides);
      }
      std::size_t wall_faces = 0;
      for (std::size_t f = faces_before; f < mesh.faces.size(); ++f) {
        wall_faces += info[f].label == SurfaceLabel::kWall ? 1 : 0;
      }

      // Sensor in the middle of the room, window marker on the z = 0 wall.
      Annotation sensor;
      sensor.label = rs.label + " sensor";
      sensor.kind = AnnotationKind::kSensor;
      sensor.position = room_to_world({fp.width / 2, y0 + 1.5, fp.depth / 2});
      sensor.facing = fp.direction(1.0, 0.0);
      out.annotations.push_back(sensor);
      Annotation window;
      window.label = rs.label + " window";
      window.kind = AnnotationKind::kWindow;
      window.position = room_to_world({fp.width / 2, y0 + 1.2, 0.0});
      window.facing = fp.direction(0.0, 1.0);
      out.annotations.push_back(window);

      // Clutter boxes: top and four sides, random yaw, clear of the walls.
      const FaceInfo clutter{SurfaceLabel::kClutter, -1, story};
      const double expected = spec.clutter_density * rs.width * rs.depth;
      const auto boxes = static_cast<std::size_t>(std::floor(expected + unit(rng)));
      for (std::size_t i = 0; i < boxes && spec.clutter_density > 0.0; ++i) {
        const double sx = uniform(0.4, 1.0);
        const double sz = uniform(0.4, 0.8);
        const double h = uniform(0.4, 1.1);
        const double yaw = uniform(0.0, 2.0 * std::numbers::pi);
        const double r = 0.5 * std::hypot(sx, sz) + 0.3;
        const double cx = uniform(r, fp.width - r);
        const double cz = uniform(r, fp.depth - r);
        if (fp.width < 2 * r || fp.depth < 2 * r) continue;
        const double c = std::cos(yaw), sn = std::sin(yaw);
        auto box_to_world = [=](const Vec3& p) {
          const double lx = p.x - sx / 2, lz = p.z - sz / 2;
          return room_to_world({cx + lx * c - lz * sn, p.y, cz + lx * sn + lz * c});
        };
        BoxBuilder b(mesh, info, box_to_world);
        emit_box(b, sx, sz, y0, y0 + h, spec.edge_target, {false, true, false}, clutter, clutter,
                 {clutter, clutter, clutter, clutter});
      }

      // Bridging triangles across the vertical corners.
      const auto bridges = static_cast<std::size_t>(std::llround(spec.bridge_fraction * static_cast<double>(wall_faces)));
      const std::array<Vec2, 4> corner{Vec2{0, 0}, Vec2{fp.width, 0}, Vec2{fp.width, fp.depth}, Vec2{0, fp.depth}};
      for (std::size_t i = 0; i < bridges; ++i) {
        const auto k = static_cast<std::size_t>(unit(rng) * 4.0) % 4;
        const Vec2 at = corner[k];
        const Vec2 to_prev = corner[(k + 3) % 4] - at;
        const Vec2 to_next = corner[(k + 1) % 4] - at;
        const double u1 = uniform(0.05, 0.3), u2 = uniform(0.05, 0.3);
        const double y = uniform(y0 + 0.2, y1 - 0.5);
        const Vec2 pa = at + to_prev * (u1 / norm(to_prev));
        const Vec2 pb = at + to_next * (u2 / norm(to_next));
        const double dy = uniform(0.1, 0.3);
        const auto v = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(room_to_world({pa.x, y, pa.z}));
        mesh.vertices.push_back(room_to_world({pb.x, y, pb.z}));
        mesh.vertices.push_back(room_to_world({pa.x, y + dy, pa.z}));
        mesh.faces.push_back({v, v + 1, v + 2});
        info.push_back(clutter);
      }
    }
    truth.story_floor_y.push_back(story_floor);
    truth.story_ceiling_y.push_back(story_ceiling);
    base += st.height + st.slab_thickness;
  }

  if (spec.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (Vec3& v : mesh.vertices) {
      v.x += noise(rng);
      v.y += noise(rng);
      v.z += noise(rng);
    }
  }

  truth.clean_face_count = mesh.faces.size();
  std::vector<std::uint8_t> keep(mesh.faces.size(), 1);
  const auto holes = static_cast<std::size_t>(std::floor(spec.hole_fraction * static_cast<double>(mesh.faces.size())));
  if (holes > 0) {
    std::vector<std::size_t> order(mesh.faces.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates with an explicit draw keeps the result independent
    // of the standard library's shuffle.
    for (std::size_t i = 0; i < holes; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (order.size() - i));
      std::swap(order[i], order[j]);
      keep[order[i]] = 0;
    }
  }
  std::vector<Face> faces;
  faces.reserve(mesh.faces.size() - holes);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (!keep[f]) continue;
    faces.push_back(mesh.faces[f]);
    truth.labels.push_back(info[f].label);
    truth.wall_of_face.push_back(info[f].wall);
    truth.story_of_face.push_back(info[f].story);
  }
  mesh.faces = std::move(faces);

  truth.transform = building_transform(spec);
  apply_transform(mesh, out.annotations, truth.transform);
  return out;
}

std::string format_ground_truth(const GroundTruth& t) {
  ordered_json j;
  j["transform"] = {{"rotation", {t.transform.rotation.m[0], t.transform.rotation.m[1], t.transform.rotation.m[2]}},
                    {"translation", {t.transform.translation.x, t.transform.translation.y, t.transform.translation.z}}};
  j["story_floor_y"] = t.story_floor_y;
  j["story_ceiling_y"] = t.story_ceiling_y;
  auto& rooms = j["rooms"] = ordered_json::array();
  for (const auto& r : t.rooms) {
    ordered_json poly = ordered_json::array();
    for (const Vec3& c : r.corners) poly.push_back({c.x, c.z});
    rooms.push_back({{"label", r.label}, {"story", r.story}, {"actual_area_m2", r.area},
                     {"floor_y", r.floor_y}, {"ceiling_y", r.ceiling_y}, {"polygon", poly}});
  }
  auto& walls = j["walls"] = ordered_json::array();
  for (const auto& w : t.walls) {
    walls.push_back({{"normal", {w.normal.x, w.normal.y, w.normal.z}}, {"offset", w.offset},
                     {"center", {w.center.x, w.center.y, w.center.z}}, {"width", w.width},
                     {"height", w.height}, {"story", w.story}, {"room", w.room}});
  }
  std::map<std::string, std::size_t> label_counts;
  for (auto l : t.labels) ++label_counts[std::string(to_string(l))];
  j["face_labels"] = label_counts;
  j["face_count"] = t.labels.size();
  j["clean_face_count"] = t.clean_face_count;
  return j.dump(1) + "\n";
}

}  // namespace floorscan
