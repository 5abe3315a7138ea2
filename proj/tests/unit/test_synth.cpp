#include <doctest.h>

#include <cmath>

#include "floorscan/error.hpp"
#include "floorscan/floorplan.hpp"
#include "floorscan/synth.hpp"

using namespace floorscan;

TEST_CASE("generation is a pure function of the spec") {
  BuildingSpec spec = preset_spec("office");
  spec.clutter_density = 0.2;
  spec.noise_sigma = 0.01;
  spec.hole_fraction = 0.1;
  spec.tilt_x_deg = 5;
  spec.yaw_deg = 30;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.mesh.vertices == b.mesh.vertices);
  CHECK(a.mesh.faces == b.mesh.faces);
  CHECK(format_ground_truth(a.truth) == format_ground_truth(b.truth));
  spec.seed += 1;
  CHECK(generate(spec).mesh.vertices != a.mesh.vertices);
}

TEST_CASE("room areas equal the shoelace area of their footprints") {
  for (const auto& name : preset_names()) {
    if (name == "large") continue;
    const auto b = generate(preset_spec(name));
    for (const auto& room : b.truth.rooms) {
      std::vector<Vec2> poly;
      for (const Vec3& c : room.corners) poly.push_back(project_xz(c));
      CHECK(room.area == doctest::Approx(polygon_area(poly)).epsilon(1e-12));
      REQUIRE(room.walls.size() == room.corners.size());
      // Counter-clockwise in (x, z).
      double twice = 0.0;
      for (std::size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
      CHECK(twice > 0.0);
    }
  }
}

TEST_CASE("a clean closed room has the area of its box and inward normals") {
  const auto b = generate(preset_spec("single_room"));
  const auto& room = b.truth.rooms.at(0);
  const double w = 5.0, d = 4.0, h = room.ceiling_y - room.floor_y;
  CHECK(room.area == doctest::Approx(w * d));
  CHECK(total_area(b.mesh) == doctest::Approx(2 * (w * d + w * h + d * h)).epsilon(1e-9));
  const Vec3 center{w / 2, room.floor_y + h / 2, d / 2};
  for (const auto& a : compute_attributes(b.mesh)) CHECK(dot(a.normal, center - a.centroid) > 0.0);
  CHECK(b.truth.labels.size() == b.mesh.faces.size());
  CHECK(b.truth.story_of_face.size() == b.mesh.faces.size());
}

TEST_CASE("walls carry inward normals and consistent offsets") {
  const auto b = generate(preset_spec("office"));
  const auto attrs = compute_all_attributes(b.mesh);
  for (std::size_t f = 0; f < attrs.size(); ++f) {
    const int w = b.truth.wall_of_face[f];
    if (w < 0) continue;
    const TrueWall& tw = b.truth.walls[static_cast<std::size_t>(w)];
    CHECK(b.truth.labels[f] == SurfaceLabel::kWall);
    CHECK(norm(attrs[f].normal - tw.normal) < 1e-9);
    CHECK(dot(tw.normal, attrs[f].centroid) == doctest::Approx(tw.offset));
  }
  for (const auto& tw : b.truth.walls) CHECK(dot(tw.normal, tw.center) == doctest::Approx(tw.offset));
}

TEST_CASE("hole punching removes the requested share of faces") {
  BuildingSpec spec = preset_spec("office");
  const std::size_t clean = generate(spec).mesh.faces.size();
  spec.hole_fraction = 0.1;
  const auto b = generate(spec);
  CHECK(b.truth.clean_face_count == clean);
  CHECK(b.mesh.faces.size() == clean - static_cast<std::size_t>(std::floor(0.1 * clean)));
}

TEST_CASE("the tilt transform is recorded and applied") {
  BuildingSpec spec = preset_spec("single_room");
  const auto flat = generate(spec);
  spec.tilt_x_deg = 7;
  spec.tilt_z_deg = -3;
  spec.yaw_deg = 40;
  const auto tilted = generate(spec);
  CHECK(is_valid_rotation(tilted.truth.transform.rotation));
  REQUIRE(flat.mesh.vertices.size() == tilted.mesh.vertices.size());
  for (std::size_t i = 0; i < flat.mesh.vertices.size(); ++i) {
    CHECK(norm(tilted.truth.transform.apply_point(flat.mesh.vertices[i]) - tilted.mesh.vertices[i]) < 1e-12);
  }
  CHECK(norm(tilted.truth.transform.apply_point(flat.annotations[0].position) -
             tilted.annotations[0].position) < 1e-12);
}

TEST_CASE("specs validate and round-trip through JSON") {
  BuildingSpec spec = preset_spec("two_story");
  spec.noise_sigma = 0.004;
  const BuildingSpec back = parse_building_spec(format_building_spec(spec));
  CHECK(format_building_spec(back) == format_building_spec(spec));

  BuildingSpec overlap = preset_spec("single_room");
  overlap.stories[0].rooms.push_back(overlap.stories[0].rooms[0]);
  overlap.stories[0].rooms[1].x = 2.0;
  CHECK_THROWS_AS(overlap.validate(), Error);
  BuildingSpec bad = preset_spec("single_room");
  bad.hole_fraction = 1.5;
  CHECK_THROWS_AS(generate(bad), Error);
  CHECK_THROWS_AS(preset_spec("castle"), Error);
  CHECK_THROWS_AS(parse_building_spec("{\"stories\": 3}"), Error);
}

TEST_CASE("the large preset is near the target face count") {
  const auto b = generate(preset_spec("large"));
  CHECK(b.mesh.faces.size() > 250000);
  CHECK(b.mesh.faces.size() < 320000);
}
