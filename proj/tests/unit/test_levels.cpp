#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "floorscan/error.hpp"
#include "floorscan/levels.hpp"
#include "floorscan/synth.hpp"
#include "meshes.hpp"

using namespace floorscan;

namespace {

// Flat square at height y, facing up or down.
TriangleMesh square(double y, double side, bool up) {
  TriangleMesh m;
  m.vertices = {{0, y, 0}, {side, y, 0}, {side, y, side}, {0, y, side}};
  if (up) m.faces = {{0, 2, 1}, {0, 3, 2}};
  else m.faces = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

}  // namespace

TEST_CASE("altitude histogram agrees with a direct per-face binning") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.3, 0.3), h(0.0, 3.0);
  TriangleMesh m;
  for (std::uint32_t i = 0; i < 2000; ++i) {
    const double y = h(rng);
    const Vec3 c{u(rng) * 10, y, u(rng) * 10};
    // Mostly near-horizontal triangles, tilted a little at random.
    m.vertices.push_back(c);
    m.vertices.push_back(c + Vec3{1, u(rng), 0});
    m.vertices.push_back(c + Vec3{0, u(rng), 1});
    m.faces.push_back(i % 2 ? Face{3 * i, 3 * i + 1, 3 * i + 2} : Face{3 * i, 3 * i + 2, 3 * i + 1});
  }
  const double b = 0.0508;
  for (auto filter : {DirectionFilter::kUp, DirectionFilter::kDown, DirectionFilter::kBoth}) {
    const auto hist = build_histogram(m, b, 15.0, filter);
    const double min_cos = std::cos(15.0 * std::numbers::pi / 180.0);
    std::vector<double> area(hist.counts.size(), 0.0);
    double lo = 1e300;
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
      const Vec3 a = m.corner(f, 0), bb = m.corner(f, 1), c = m.corner(f, 2);
      const Vec3 n = cross(bb - a, c - a);
      const double cy = n.y / norm(n);
      const bool ok = filter == DirectionFilter::kUp     ? cy >= min_cos
                      : filter == DirectionFilter::kDown ? -cy >= min_cos
                                                         : std::fabs(cy) >= min_cos;
      if (!ok) continue;
      const double y = (a.y + bb.y + c.y) / 3.0;
      lo = std::min(lo, y);
      const auto k = static_cast<std::size_t>(std::floor((y - hist.origin) / b));
      REQUIRE(k < area.size());
      area[k] += norm(n) / 2.0;
    }
    CHECK(hist.origin == std::floor(lo / b) * b);
    for (std::size_t k = 0; k < area.size(); ++k) CHECK(hist.counts[k] == doctest::Approx(area[k]).epsilon(1e-12));
  }
}

TEST_CASE("floor and ceiling of two flat slabs") {
  TriangleMesh m = testing::merge(square(0.0, 3.0, true), square(2.5, 3.0, false));
  const auto hist = build_histogram(m);
  const auto fc = detect_floor_ceiling(hist);
  CHECK(fc.floor_y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fc.ceiling_y == doctest::Approx(2.5).epsilon(1e-12));
  REQUIRE(fc.spikes.size() == 2);
  CHECK(fc.spikes[0].area == doctest::Approx(9.0));
}

TEST_CASE("one surface or surfaces too close raise kSingleSurface") {
  for (double top : {0.0, 1.0}) {
    TriangleMesh m = testing::merge(square(0.0, 3.0, true), square(top + 0.001, 3.0, false));
    try {
      (void)detect_floor_ceiling(build_histogram(m));
      FAIL("expected kSingleSurface");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSingleSurface);
    }
  }
  TriangleMesh wall;
  wall.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  wall.faces = {{0, 1, 2}};
  CHECK_THROWS_AS(build_histogram(wall), Error);
}

TEST_CASE("small spikes below the area floor are ignored") {
  TriangleMesh m = testing::merge(square(0.0, 3.0, true), square(2.5, 3.0, false));
  m = testing::merge(m, square(1.0, 0.5, true));  // 0.25 m^2 table top
  const auto spikes = find_spikes(build_histogram(m));
  CHECK(spikes.size() == 2);
}

TEST_CASE("sunken floor: the highest floor level wins") {
  const auto b = generate(preset_spec("sunken"));
  const auto fc = detect_floor_ceiling(build_histogram(b.mesh));
  CHECK(std::fabs(fc.floor_y - b.truth.story_floor_y[0]) <= 0.0508);
  CHECK(std::fabs(fc.ceiling_y - b.truth.story_ceiling_y[0]) <= 0.0508);
  double lowest = 0.0;
  for (const auto& r : b.truth.rooms) lowest = std::min(lowest, r.floor_y);
  CHECK(lowest < -0.1);  // the sunken room really is lower
}

TEST_CASE("story partition covers every face once and matches ground truth") {
  for (const char* name : {"single_room", "two_story", "three_story"}) {
    const auto b = generate(preset_spec(name));
    const auto part = partition_stories(b.mesh, build_histogram(b.mesh));
    CHECK(part.story_count() == b.truth.story_floor_y.size());
    std::vector<int> seen(b.mesh.faces.size(), 0);
    std::size_t agree = 0;
    for (std::size_t s = 0; s < part.stories.size(); ++s) {
      for (auto f : part.stories[s].faces) {
        ++seen[f];
        agree += b.truth.story_of_face[f] == s ? 1 : 0;
      }
    }
    for (int c : seen) CHECK(c == 1);
    CHECK(double(agree) / double(seen.size()) >= 0.99);
    CHECK(part.boundaries.size() + 1 == part.story_count());
  }
}

TEST_CASE("a slab with nothing above it is flagged") {
  const auto part = partition_stories(square(0, 3, true), build_histogram(square(0, 3, true)));
  CHECK(part.story_count() == 1);
  CHECK(part.flagged);
}

TEST_CASE("surface removal drops floor and ceiling and keeps walls in range") {
  const auto b = generate(preset_spec("office"));
  const double fy = b.truth.story_floor_y[0], cy = b.truth.story_ceiling_y[0];
  const RemovalParams params;
  const auto kept = faces_between_floor_and_ceiling(b.mesh, fy, cy, params);
  CHECK(std::is_sorted(kept.begin(), kept.end()));
  const std::set<std::uint32_t> keep(kept.begin(), kept.end());
  const auto attrs = compute_all_attributes(b.mesh);
  const double min_cos = std::cos(deg_to_rad(params.filter_angle_deg));
  for (std::uint32_t f = 0; f < attrs.size(); ++f) {
    const auto& a = attrs[f];
    const bool in_range = a.centroid.y >= fy - params.margin && a.centroid.y <= cy + params.margin;
    const bool horizontal = std::fabs(a.normal.y) >= min_cos;
    const bool near_surface =
        std::fabs(a.centroid.y - fy) <= params.margin || std::fabs(a.centroid.y - cy) <= params.margin;
    CHECK(keep.count(f) == (in_range && !(horizontal && near_surface) ? 1u : 0u));
    if (b.truth.labels[f] == SurfaceLabel::kWall && in_range) CHECK(keep.count(f) == 1);
  }
  const TriangleMesh trimmed = remove_ceiling_floor(b.mesh, fy, cy, params);
  CHECK(trimmed.faces.size() == kept.size());
}
