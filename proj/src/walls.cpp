#include "floorscan/walls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "floorscan/error.hpp"

namespace floorscan {
namespace {

struct CellKey {
  std::int64_t n, y, l;
  bool operator==(const CellKey&) const = default;
  auto tie() const { return std::tie(n, y, l); }
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.n) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.y) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.l) + 0x94D049BB133111EBull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

bool lex_less(const Vec3& a, const Vec3& b) {
  return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
}

// Points bucketed by wall-frame cell, stored as sorted SoA runs so each cell
// can be handed to the block kernel directly.
class BlockGrid {
 public:
  BlockGrid(std::span<const Vec3> points, const simd::BlockQuery& shape) {
    constexpr double kSlack = 1.0 + 1e-9;
    cell_n_ = shape.half_w * kSlack;
    cell_y_ = shape.half_h * kSlack;
    cell_l_ = shape.half_l * kSlack;
    normal_ = shape.normal;
    lateral_ = shape.lateral;

    const std::size_t n = points.size();
    std::vector<CellKey> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = key_of(points[i]);
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (keys[a] == keys[b]) return a < b;
      return keys[a].tie() < keys[b].tie();
    });
    x_.resize(n);
    y_.resize(n);
    z_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      const Vec3& p = points[order_[s]];
      x_[s] = p.x;
      y_[s] = p.y;
      z_[s] = p.z;
    }
    for (std::size_t s = 0; s < n;) {
      std::size_t e = s + 1;
      const CellKey k = keys[order_[s]];
      while (e < n && keys[order_[e]] == k) ++e;
      cells_.emplace(k, std::make_pair(s, e));
      s = e;
    }
  }

  CellKey key_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(dot(p, normal_) / cell_n_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_y_)),
            static_cast<std::int64_t>(std::floor(dot(p, lateral_) / cell_l_))};
  }

  // Calls visit(original_index) for every point inside the block `q`.
  template <class Visit>
  std::size_t for_each_inside(const simd::BlockQuery& q, const simd::KernelSet& kernels,
                              std::vector<std::uint8_t>& mask, Visit&& visit) const {
    const CellKey c = key_of(q.center);
    std::size_t total = 0;
    for (std::int64_t dn = -1; dn <= 1; ++dn) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dl = -1; dl <= 1; ++dl) {
          const auto it = cells_.find({c.n + dn, c.y + dy, c.l + dl});
          if (it == cells_.end()) continue;
          const auto [b, e] = it->second;
          const std::size_t len = e - b;
          if (mask.size() < len) mask.resize(len);
          total += kernels.block_count(x_.data() + b, y_.data() + b, z_.data() + b, len, q,
                                       mask.data());
          for (std::size_t j = 0; j < len; ++j) {
            if (mask[j]) visit(order_[b + j]);
          }
        }
      }
    }
    return total;
  }

  std::size_t count_inside(const simd::BlockQuery& q, const simd::KernelSet& kernels) const {
    const CellKey c = key_of(q.center);
    std::size_t total = 0;
    for (std::int64_t dn = -1; dn <= 1; ++dn) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dl = -1; dl <= 1; ++dl) {
          const auto it = cells_.find({c.n + dn, c.y + dy, c.l + dl});
          if (it == cells_.end()) continue;
          const auto [b, e] = it->second;
          total += kernels.block_count(x_.data() + b, y_.data() + b, z_.data() + b, e - b, q, nullptr);
        }
      }
    }
    return total;
  }

 private:
  double cell_n_ = 1.0, cell_y_ = 1.0, cell_l_ = 1.0;
  Vec3 normal_, lateral_;
  std::vector<std::uint32_t> order_;
  std::vector<double> x_, y_, z_;
  std::unordered_map<CellKey, std::pair<std::size_t, std::size_t>, CellKeyHash> cells_;
};

void check_horizontal_unit(const Vec3& d) {
  if (std::fabs(d.y) > 1e-6 || std::fabs(norm(d) - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "wall direction must be a horizontal unit vector");
  }
}

}  // namespace

std::string_view to_string(DirectionSource s) {
  return s == DirectionSource::kPrincipal4 ? "principal4" : "kmeans";
}

std::string_view to_string(PlaneFitMode m) {
  return m == PlaneFitMode::kMedian ? "median" : "any_centroid";
}

WallDirectionSet principal_directions() {
  return {{kUnitX, -kUnitX, kUnitZ, -kUnitZ}, DirectionSource::kPrincipal4, {}};
}

WallDirectionSet kmeans_directions(const TriangleMesh& mesh, const KMeansDirectionParams& params) {
  const double vertical_cos = std::cos(deg_to_rad(params.vertical_angle_deg));
  std::vector<Vec3> normals;
  for (const auto& a : compute_attributes(mesh)) {
    if (std::fabs(a.normal.y) < vertical_cos) normals.push_back(a.normal);
  }
  if (normals.empty()) throw Error(ErrorCode::kEmptyInput, "no wall triangles to find directions from");

  WallDirectionSet out;
  out.source = DirectionSource::kKMeans;
  std::size_t k = params.k;
  const auto clusters = trimmed_spherical_kmeans(normals, k, params.schedule, params.seed);
  if (clusters.centers.size() < k) {
    out.warnings.push_back("k-means kept " + std::to_string(clusters.centers.size()) + " of " +
                           std::to_string(k) + " wall directions");
  }
  for (const Vec3& c : clusters.centers) {
    const Vec3 flat{c.x, 0.0, c.z};
    const double len = norm(flat);
    if (len < 1e-9) continue;
    out.directions.push_back(flat / len);
  }
  if (out.directions.empty()) throw Error(ErrorCode::kEmptyInput, "k-means found no horizontal wall direction");
  return out;
}

std::vector<std::vector<std::uint32_t>> assign_to_direction(std::span<const TriangleAttributes> attrs,
                                                            const WallDirectionSet& dirs,
                                                            double cone_angle_deg) {
  if (dirs.directions.empty()) throw Error(ErrorCode::kInvalidArgument, "no wall directions");
  const double min_cos = std::cos(deg_to_rad(cone_angle_deg));
  std::vector<std::vector<std::uint32_t>> out(dirs.directions.size());
  for (const auto& a : attrs) {
    if (a.area <= 0.0) continue;
    std::size_t best = 0;
    double best_dot = dot(a.normal, dirs.directions[0]);
    for (std::size_t d = 1; d < dirs.directions.size(); ++d) {
      const double s = dot(a.normal, dirs.directions[d]);
      if (s > best_dot) {
        best_dot = s;
        best = d;
      }
    }
    if (best_dot >= min_cos) out[best].push_back(a.face);
  }
  return out;
}

void BlockParams::validate() const {
  if (!(l > 0.0) || !(w > 0.0) || !(h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "block extents must be positive");
  }
  if (min_neighbors < 1) throw Error(ErrorCode::kInvalidArgument, "min_neighbors must be at least 1");
}

Vec3 lateral_axis(const Vec3& d) { return {-d.z, 0.0, d.x}; }

simd::BlockQuery make_block(const Vec3& center, const Vec3& direction, const BlockParams& params) {
  return {center, direction, lateral_axis(direction), params.l / 2.0, params.w / 2.0,
          params.h / 2.0};
}

DbscanResult block_dbscan(std::span<const Vec3> points, const Vec3& direction,
                          const BlockParams& params) {
  params.validate();
  check_horizontal_unit(direction);
  DbscanResult out;
  const std::size_t n = points.size();
  if (n == 0) return out;

  const auto& kernels = simd::active_kernels();
  const BlockGrid grid(points, make_block({}, direction, params));

  // The block always contains its own center; core status counts the others.
  std::vector<std::uint8_t> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto q = make_block(points[i], direction, params);
    const std::size_t inside = grid.count_inside(q, kernels);
    core[i] = inside - 1 >= params.min_neighbors ? 1 : 0;
  }

  DisjointSets sets(n);
  std::vector<std::uint8_t> mask;
  std::vector<std::int64_t> border_core(n, -1);
  std::vector<double> border_dist(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    const auto q = make_block(points[i], direction, params);
    grid.for_each_inside(q, kernels, mask, [&](std::uint32_t j) {
      if (j == i) return;
      if (core[j]) {
        sets.unite(static_cast<std::uint32_t>(i), j);
        return;
      }
      // Border point j: remember its nearest core neighbour.
      const Vec3 delta = points[i] - points[j];
      const double d2 = delta.x * delta.x + delta.y * delta.y + delta.z * delta.z;
      const auto cur = border_core[j];
      if (cur < 0 || d2 < border_dist[j] ||
          (d2 == border_dist[j] && lex_less(points[i], points[static_cast<std::size_t>(cur)]))) {
        border_core[j] = static_cast<std::int64_t>(i);
        border_dist[j] = d2;
      }
    });
  }

  std::vector<std::int64_t> label_of_root(n, -1);
  std::vector<std::int64_t> label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t owner = -1;
    if (core[i]) owner = static_cast<std::int64_t>(i);
    else if (border_core[i] >= 0) owner = border_core[i];
    if (owner < 0) {
      out.noise.push_back(static_cast<std::uint32_t>(i));
      continue;
    }
    const auto root = sets.find(static_cast<std::uint32_t>(owner));
    if (label_of_root[root] < 0) {
      label_of_root[root] = static_cast<std::int64_t>(out.clusters.size());
      out.clusters.emplace_back();
    }
    out.clusters[static_cast<std::size_t>(label_of_root[root])].push_back(static_cast<std::uint32_t>(i));
  }
  // Scanning i ascending already orders clusters by lowest member and members
  // ascending.
  return out;
}

WallSegment make_segment(std::span<const TriangleAttributes> members, std::size_t direction_index,
                         const Vec3& direction, int cluster_id) {
  WallSegment s;
  s.direction_index = direction_index;
  s.direction = direction;
  s.cluster_id = cluster_id;
  if (members.empty()) return s;
  const Vec3 lat = lateral_axis(direction);
  s.y_min = s.y_max = members.front().centroid.y;
  s.lateral_min = s.lateral_max = dot(members.front().centroid, lat);
  for (const auto& m : members) {
    s.faces.push_back(m.face);
    s.centroids.push_back(m.centroid);
    s.areas.push_back(m.area);
    s.area += m.area;
    const double l = dot(m.centroid, lat);
    s.y_min = std::min(s.y_min, m.centroid.y);
    s.y_max = std::max(s.y_max, m.centroid.y);
    s.lateral_min = std::min(s.lateral_min, l);
    s.lateral_max = std::max(s.lateral_max, l);
  }
  return s;
}

std::vector<WallSegment> filter_segments(std::span<const WallSegment> segments, double floor_y,
                                         double ceiling_y, const SegmentFilter& filter) {
  std::vector<WallSegment> kept;
  for (const auto& s : segments) {
    if (s.centroids.empty() || s.area < filter.min_area) continue;
    if (s.y_min > floor_y + filter.reach_tol) continue;
    if (s.y_max < ceiling_y - filter.reach_tol) continue;
    kept.push_back(s);
  }
  return kept;
}

Plane fit_plane(const WallSegment& segment, PlaneFitMode mode) {
  if (segment.centroids.empty()) throw Error(ErrorCode::kInvalidArgument, "empty wall segment");
  const Vec3 d = segment.direction;
  if (mode == PlaneFitMode::kAnyCentroid) return {d, dot(d, segment.centroids.front())};
  std::vector<double> proj;
  proj.reserve(segment.centroids.size());
  for (const Vec3& c : segment.centroids) proj.push_back(dot(d, c));
  const auto mid = proj.begin() + static_cast<std::ptrdiff_t>((proj.size() - 1) / 2);
  std::nth_element(proj.begin(), mid, proj.end());
  return {d, *mid};
}

PlanarWall build_rectangle(const WallSegment& segment, const Plane& plane) {
  if (segment.centroids.empty() || !(segment.lateral_max - segment.lateral_min > 0.0) ||
      !(segment.y_max - segment.y_min > 0.0)) {
    throw Error(ErrorCode::kDegenerateWall,
                "degenerate wall segment " + std::to_string(segment.cluster_id) +
                    ": zero lateral or vertical extent");
  }
  const Vec3 lat = lateral_axis(plane.normal);
  const Vec3 base = plane.normal * plane.offset;
  auto at = [&](double l, double y) { return base + lat * l + kUnitY * y; };
  PlanarWall w;
  w.plane = plane;
  w.segment_id = segment.cluster_id;
  w.corners = {at(segment.lateral_min, segment.y_min), at(segment.lateral_min, segment.y_max),
               at(segment.lateral_max, segment.y_max), at(segment.lateral_max, segment.y_min)};
  return w;
}

TriangleMesh assemble_walls(std::span<const PlanarWall> walls) {
  TriangleMesh m;
  m.provenance = "flat walls";
  for (const auto& w : walls) {
    const auto b = static_cast<std::uint32_t>(m.vertices.size());
    for (const Vec3& c : w.corners) m.vertices.push_back(c);
    m.faces.push_back({b, b + 1, b + 2});
    m.faces.push_back({b, b + 2, b + 3});
  }
  return m;
}

WallExtraction extract_walls(const TriangleMesh& mesh, double floor_y, double ceiling_y,
                             const WallParams& params) {
  WallExtraction out;
  out.directions = params.source == DirectionSource::kPrincipal4
                       ? principal_directions()
                       : kmeans_directions(mesh, params.kmeans);
  const auto attrs = compute_all_attributes(mesh);
  const auto per_direction = assign_to_direction(attrs, out.directions, params.cone_angle_deg);

  int next_id = 0;
  for (std::size_t d = 0; d < per_direction.size(); ++d) {
    const auto& faces = per_direction[d];
    out.assigned_per_direction.push_back(faces.size());
    std::vector<Vec3> centroids;
    centroids.reserve(faces.size());
    for (auto f : faces) centroids.push_back(attrs[f].centroid);
    const Vec3 dir = out.directions.directions[d];
    const DbscanResult clusters = block_dbscan(centroids, dir, params.block);
    out.noise_count += clusters.noise.size();
    for (const auto& members : clusters.clusters) {
      std::vector<TriangleAttributes> picked;
      picked.reserve(members.size());
      for (auto m : members) picked.push_back(attrs[faces[m]]);
      out.segments.push_back(make_segment(picked, d, dir, next_id++));
    }
  }

  out.kept = filter_segments(out.segments, floor_y, ceiling_y, params.filter);
  for (const auto& s : out.kept) {
    out.walls.push_back(build_rectangle(s, fit_plane(s, params.fit)));
  }
  out.mesh = assemble_walls(out.walls);
  return out;
}

}  // namespace floorscan
