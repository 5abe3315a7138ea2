#include <doctest.h>

#include <cmath>
#include <random>

#include "dbscan_oracle.hpp"
#include "floorscan/error.hpp"
#include "floorscan/levels.hpp"
#include "floorscan/synth.hpp"
#include "floorscan/walls.hpp"

using namespace floorscan;

namespace {

std::vector<Vec3> random_points(std::mt19937_64& rng, std::size_t n, double spread) {
  std::uniform_real_distribution<double> u(0.0, spread), y(0.0, 2.5);
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), y(rng), u(rng) * 0.3});
  return pts;
}

TriangleAttributes member(std::uint32_t face, const Vec3& c, double area) {
  return {face, {1, 0, 0}, c, area};
}

}  // namespace

TEST_CASE("principal directions are +x, -x, +z, -z") {
  const auto d = principal_directions();
  REQUIRE(d.directions.size() == 4);
  CHECK(d.directions[0] == Vec3{1, 0, 0});
  CHECK(d.directions[1] == Vec3{-1, 0, 0});
  CHECK(d.directions[2] == Vec3{0, 0, 1});
  CHECK(d.directions[3] == Vec3{0, 0, -1});
  CHECK(lateral_axis({1, 0, 0}) == Vec3{-0.0, 0, 1});
}

TEST_CASE("block DBSCAN equals a brute-force DBSCAN") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<std::size_t> size(1, 250), minpts(1, 10);
  for (int trial = 0; trial < 40; ++trial) {
    auto pts = random_points(rng, size(rng), 3.0);
    if (trial % 4 == 0 && !pts.empty()) pts.push_back(pts.front());  // duplicate point
    const double t = trial % 3 == 0 ? 0.0 : angle(rng);
    const Vec3 dir{std::cos(t), 0.0, std::sin(t)};
    BlockParams bp;
    bp.l = 0.2 + 0.1 * (trial % 5);
    bp.w = 0.1 + 0.05 * (trial % 3);
    bp.h = 0.5 + 0.3 * (trial % 4);
    bp.min_neighbors = minpts(rng);
    const auto got = block_dbscan(pts, dir, bp);
    const auto want = testing::brute_block_dbscan(pts, dir, {bp.l, bp.w, bp.h, bp.min_neighbors});
    CHECK(got.clusters == testing::canonical_partition(want));
    std::size_t noise = 0;
    for (int l : want) noise += l < 0 ? 1 : 0;
    CHECK(got.noise.size() == noise);
  }
}

TEST_CASE("block DBSCAN output is canonical") {
  std::mt19937_64 rng(34);
  const auto pts = random_points(rng, 300, 2.0);
  const auto r = block_dbscan(pts, {0, 0, 1}, {0.3, 0.2, 1.0, 4});
  for (std::size_t c = 0; c < r.clusters.size(); ++c) {
    CHECK(std::is_sorted(r.clusters[c].begin(), r.clusters[c].end()));
    if (c) CHECK(r.clusters[c - 1].front() < r.clusters[c].front());
  }
  CHECK_THROWS_AS(block_dbscan(pts, {0, 1, 0}, {}), Error);
  CHECK_THROWS_AS(block_dbscan(pts, {1, 0, 0}, {0.0, 0.2, 1.0, 4}), Error);
}

TEST_CASE("direction assignment honours the cone") {
  std::vector<TriangleAttributes> attrs;
  const double deg[] = {0.0, 29.0, 31.0, 90.0, 180.0, 135.0};
  for (std::uint32_t i = 0; i < 6; ++i) {
    const double t = deg_to_rad(deg[i]);
    attrs.push_back({i, {std::cos(t), 0.0, std::sin(t)}, {}, 1.0});
  }
  attrs.push_back({6, {0, 1, 0}, {}, 1.0});
  const auto groups = assign_to_direction(attrs, principal_directions(), 30.0);
  CHECK(groups[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(groups[1] == std::vector<std::uint32_t>{4});
  CHECK(groups[2] == std::vector<std::uint32_t>{3});
  CHECK(groups[3].empty());
}

TEST_CASE("segment statistics, filtering and plane fits") {
  std::vector<TriangleAttributes> m;
  const double xs[] = {2.0, 2.1, 1.9, 2.05, 3.0};
  for (std::uint32_t i = 0; i < 5; ++i) m.push_back(member(10 + i, {xs[i], 0.1 + 0.6 * i, 0.5 * i}, 0.2));
  const WallSegment s = make_segment(m, 0, {1, 0, 0}, 7);
  CHECK(s.area == doctest::Approx(1.0));
  CHECK(s.y_min == doctest::Approx(0.1));
  CHECK(s.y_max == doctest::Approx(2.5));
  CHECK(s.lateral_min == doctest::Approx(0.0));
  CHECK(s.lateral_max == doctest::Approx(2.0));
  // Lower median of {1.9, 2.0, 2.05, 2.1, 3.0} is 2.05.
  CHECK(fit_plane(s, PlaneFitMode::kMedian).offset == doctest::Approx(2.05));
  CHECK(fit_plane(s, PlaneFitMode::kAnyCentroid).offset == doctest::Approx(2.0));

  const std::vector<WallSegment> segs{s};
  CHECK(filter_segments(segs, 0.0, 2.7).size() == 1);
  CHECK(filter_segments(segs, 0.0, 3.0).empty());       // stops short of the ceiling
  CHECK(filter_segments(segs, 0.0, 2.7, {1.5, 0.35}).empty());  // too small
}

TEST_CASE("rectangles face their wall direction") {
  std::vector<TriangleAttributes> m;
  for (std::uint32_t i = 0; i < 4; ++i) {
    m.push_back({i, {0, 0, -1}, {1.0 + i, 0.2 + 0.7 * i, 4.0}, 0.5});
  }
  const Vec3 d{0, 0, -1};
  const WallSegment s = make_segment(m, 3, d, 0);
  const Plane p = fit_plane(s);
  CHECK(p.offset == doctest::Approx(-4.0));
  const PlanarWall w = build_rectangle(s, p);
  CHECK(w.width() == doctest::Approx(3.0));
  CHECK(w.height() == doctest::Approx(2.1));
  for (const Vec3& c : w.corners) CHECK(dot(p.normal, c) == doctest::Approx(p.offset));
  const TriangleMesh mesh = assemble_walls(std::span<const PlanarWall>(&w, 1));
  REQUIRE(mesh.faces.size() == 2);
  for (const auto& a : compute_attributes(mesh)) CHECK(norm(a.normal - d) < 1e-12);

  std::vector<TriangleAttributes> flat{m[0], m[0]};
  const WallSegment thin = make_segment(flat, 3, d, 1);
  CHECK_THROWS_AS(build_rectangle(thin, fit_plane(thin)), Error);
}

TEST_CASE("wall extraction on a clean office recovers every wall") {
  const auto b = generate(preset_spec("office"));
  const double fy = b.truth.story_floor_y[0], cy = b.truth.story_ceiling_y[0];
  const TriangleMesh trimmed = remove_ceiling_floor(b.mesh, fy, cy);
  const auto ex = extract_walls(trimmed, fy, cy);
  CHECK(ex.walls.size() == b.truth.walls.size());
  for (const auto& tw : b.truth.walls) {
    bool found = false;
    for (const auto& w : ex.walls) {
      found |= dot(w.plane.normal, tw.normal) > std::cos(deg_to_rad(3.0)) &&
               std::fabs(dot(w.plane.normal, tw.center) - w.plane.offset) <= 0.05 &&
               std::fabs(w.width() - tw.width) < 0.3;
    }
    CHECK(found);
  }
  CHECK(ex.mesh.faces.size() == 2 * ex.walls.size());
}

TEST_CASE("k-means wall directions follow a rotated room") {
  BuildingSpec spec = preset_spec("single_room");
  spec.stories[0].rooms[0].rotation_deg = 20.0;
  const auto b = generate(spec);
  const auto dirs = kmeans_directions(b.mesh, {});
  REQUIRE(dirs.directions.size() == 4);
  for (const Vec3& d : dirs.directions) {
    CHECK(d.y == 0.0);
    const double h = rad_to_deg(heading(d)) - 20.0;
    CHECK(std::fabs(h - 90.0 * std::round(h / 90.0)) < 0.5);
  }
}
