#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "floorscan/error.hpp"
#include "floorscan/floorplan.hpp"
#include "meshes.hpp"

using namespace floorscan;

namespace {

double total_length(const SliceLayer& layer) {
  double s = 0.0;
  for (const auto& seg : layer.segments) s += norm(seg.b - seg.a);
  return s;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("slice plan altitudes") {
  const auto plan = make_slice_plan(0.0, 10.0, 4);
  CHECK(plan.altitudes == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
  CHECK_THROWS_AS(make_slice_plan(0.0, 1.0, 0), Error);
  CHECK_THROWS_AS(make_slice_plan(1.0, 1.0, 3), Error);
  const auto p = make_slice_plan(-0.3, 2.41, 100);
  CHECK(p.altitudes.size() == 101);
  CHECK(p.altitudes.front() == -0.3);
  CHECK(p.altitudes.back() == 2.41);
}

TEST_CASE("slicing a box gives its perimeter") {
  const TriangleMesh box = testing::make_box({0, 0, 0}, {2, 3, 1});
  for (double y : {0.5, 1.5, 2.99}) {
    const auto layer = slice_mesh(box, y);
    CHECK(layer.altitude == y);
    CHECK(total_length(layer) == doctest::Approx(6.0));
    for (const auto& s : layer.segments) {
      for (const Vec2& p : {s.a, s.b}) {
        const bool on_edge = std::fabs(p.x) < 1e-12 || std::fabs(p.x - 2) < 1e-12 ||
                             std::fabs(p.z) < 1e-12 || std::fabs(p.z - 1) < 1e-12;
        CHECK(on_edge);
      }
    }
  }
  CHECK(slice_mesh(box, 3.5).segments.empty());
  CHECK(slice_mesh(box, -0.1).segments.empty());
}

TEST_CASE("vertices on the slice plane count as above") {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 1, 0}, {2, 0, 0}};  // touches y = 1 at one vertex
  m.faces = {{0, 1, 2}};
  CHECK(slice_mesh(m, 1.0).segments.empty());
  CHECK(slice_mesh(m, 0.0).segments.empty());  // whole triangle at or above 0
  const auto mid = slice_mesh(m, 0.5);
  REQUIRE(mid.segments.size() == 1);
  CHECK(norm(mid.segments[0].b - mid.segments[0].a) == doctest::Approx(1.0));
}

TEST_CASE("a triangle with an edge on the plane emits the edge once for the pair") {
  // Two triangles sharing the edge (0,1,0)-(1,1,0): one below, one above.
  TriangleMesh m;
  m.vertices = {{0, 1, 0}, {1, 1, 0}, {0.5, 0, 0}, {0.5, 2, 0}};
  m.faces = {{0, 1, 2}, {1, 0, 3}};
  const auto layer = slice_mesh(m, 1.0);
  REQUIRE(layer.segments.size() == 1);
  CHECK(layer.segments[0].face == 0);
}

TEST_CASE("slice_layers matches slicing each altitude separately") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  TriangleMesh m;
  for (std::uint32_t i = 0; i < 300; ++i) {
    for (int k = 0; k < 3; ++k) m.vertices.push_back({u(rng), u(rng), u(rng)});
    m.faces.push_back({3 * i, 3 * i + 1, 3 * i + 2});
  }
  const auto plan = make_slice_plan(0.0, 3.0, 37);
  const auto layers = slice_layers(m, plan.altitudes);
  REQUIRE(layers.size() == plan.altitudes.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto single = slice_mesh(m, plan.altitudes[i]);
    REQUIRE(single.segments.size() == layers[i].segments.size());
    for (std::size_t s = 0; s < single.segments.size(); ++s) {
      CHECK(single.segments[s].a == layers[i].segments[s].a);
      CHECK(single.segments[s].b == layers[i].segments[s].b);
      CHECK(single.segments[s].face == layers[i].segments[s].face);
    }
  }
}

TEST_CASE("coplanar option draws horizontal triangles lying in the plane") {
  const TriangleMesh box = testing::make_box({0, 0, 0}, {2, 1, 1});
  SliceOptions opt;
  opt.include_coplanar = true;
  CHECK(total_length(slice_mesh(box, 0.0, opt)) > 0.0);
  CHECK(slice_mesh(box, 0.0).segments.size() < slice_mesh(box, 0.0, opt).segments.size());
}

TEST_CASE("floor plans: pen-and-ink stacks slices, drafting takes one") {
  const TriangleMesh box = testing::make_box({0, 0, 0}, {4, 2.5, 3});
  const AnnotationSet ann{{"thermo", {1, 1.5, 1}, {1, 0, 0}, AnnotationKind::kThermostat}};
  PlanOptions pen;
  pen.slices = 10;
  const auto p = build_floor_plan(box, ann, 0.0, 2.5, pen);
  CHECK(p.layers.size() == 11);
  CHECK(p.opacity == 0.5);
  REQUIRE(p.markers.size() == 1);
  CHECK(p.markers[0].position == Vec2{1, 1});
  PlanOptions draft;
  draft.style = PlanStyle::kDrafting;
  const auto d = build_floor_plan(box, ann, 0.0, 2.5, draft);
  REQUIRE(d.layers.size() == 1);
  CHECK(d.layers[0].altitude == 1.25);
  CHECK(d.opacity == 1.0);
  CHECK(d.bounds.min == Vec2{0, 0});
  CHECK(d.bounds.max == Vec2{4, 3});
}

TEST_CASE("SVG maps plan x to the right and plan z upward") {
  FloorPlan plan;
  plan.style = PlanStyle::kDrafting;
  plan.opacity = 1.0;
  SliceLayer layer;
  layer.altitude = 1.0;
  layer.segments = {{{0, 0}, {1, 0}, 0}, {{1, 0}, {2, 0}, 1}, {{2, 0}, {2, 1}, 2}};
  plan.layers = {layer};
  plan.bounds.add({0, 0});
  plan.bounds.add({2, 1});
  plan.markers = {{"s1", {1, 1}, AnnotationKind::kSensor}};
  SvgOptions opt;
  opt.scale = 10;
  opt.margin = 5;
  opt.description = {"unit test <plan>"};
  const std::string svg = render_svg(plan, opt);
  // Width 2*10 + 2*5, height 1*10 + 2*5; the collinear pair merges into one line.
  CHECK(svg.find("width=\"30.000\" height=\"20.000\"") != std::string::npos);
  CHECK(svg.find("d=\"M5.000 15.000 L25.000 15.000 L25.000 5.000\"") != std::string::npos);
  CHECK(svg.find("unit test &lt;plan&gt;") != std::string::npos);
  CHECK(count(svg, "<g data-altitude") == 1);
  CHECK(svg.find("#d00000") != std::string::npos);
  CHECK(svg.find(">s1<") != std::string::npos);
  CHECK_THROWS_AS(render_svg(FloorPlan{}), Error);
}

TEST_CASE("pen-and-ink SVG of a box matches the stored rendering") {
  const TriangleMesh box = testing::make_box({0, 0, 0}, {4, 2.5, 3}, true);
  PlanOptions pen;
  pen.slices = 4;
  const auto plan = build_floor_plan(box, {}, 0.0, 2.5, pen);
  const std::string svg = render_svg(plan);
  std::ifstream in(std::string(FLOORSCAN_TEST_DATA) + "/box_pen.svg");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(svg == ss.str());
}

TEST_CASE("area error reproduces known scan measurements") {
  struct Row {
    double actual, measured, error;
  };
  // Room 202 of the second scan is left out: its recorded error does not
  // follow from its recorded areas.
  const Row rows[] = {{24.1243, 24.037, 0.4},   {7.991, 5.5332, 30.8},   {31.9608, 31.9032, 0.2},
                      {32.5398, 33.3375, -2.5}, {32.9304, 32.6536, 0.8}, {7.991, 6.9699, 12.8},
                      {31.9608, 31.7484, 0.7},  {32.5398, 32.6814, -0.4}, {32.9304, 32.592, 1.0}};
  for (const Row& r : rows) CHECK(std::fabs(area_error_percent(r.actual, r.measured) - r.error) <= 0.1);
}

TEST_CASE("measure_report uses shoelace areas and rejects bad polygons") {
  const std::vector<RoomPolygon> rooms{{"a", 12.5, {{0, 0}, {5, 0}, {5, 2.5}, {0, 2.5}}},
                                       {"b", 10.0, {{0, 0}, {0, 3}, {3, 3}, {3, 0}}}};
  const auto rows = measure_report(rooms);
  CHECK(rows[0].measured_area == 12.5);
  CHECK(rows[0].error_percent == 0.0);
  CHECK(rows[1].measured_area == 9.0);
  CHECK(rows[1].error_percent == doctest::Approx(10.0));

  const std::vector<RoomPolygon> bowtie{{"x", 1.0, {{0, 0}, {1, 1}, {1, 0}, {0, 1}}}};
  CHECK(is_self_intersecting(bowtie[0].polygon));
  try {
    (void)measure_report(bowtie);
    FAIL("expected kSelfIntersecting");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSelfIntersecting);
  }
  const std::vector<RoomPolygon> line{{"y", 1.0, {{0, 0}, {1, 1}}}};
  CHECK_THROWS_AS(measure_report(line), Error);

  const auto parsed = parse_room_polygons(
      R"([{"label": "202", "actual_area_m2": 24.1243, "polygon": [[0,0],[1,0],[1,1]]}])");
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].polygon.size() == 3);
  CHECK_THROWS_AS(parse_room_polygons("[{\"label\": 3}]"), Error);
}
