#include "floorscan/orientation.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "floorscan/error.hpp"
#include "floorscan/simd/kernels.hpp"

namespace floorscan {
namespace {

constexpr double kDegenerateMean = 1e-6;

struct DirectionArrays {
  std::vector<double> x, y, z;

  explicit DirectionArrays(std::span<const Vec3> dirs) {
    x.reserve(dirs.size());
    y.reserve(dirs.size());
    z.reserve(dirs.size());
    for (const Vec3& d : dirs) {
      x.push_back(d.x);
      y.push_back(d.y);
      z.push_back(d.z);
    }
  }
  std::size_t size() const { return x.size(); }
  Vec3 at(std::size_t i) const { return {x[i], y[i], z[i]}; }
};

std::size_t distinct_count(std::span<const Vec3> dirs) {
  std::vector<Vec3> sorted(dirs.begin(), dirs.end());
  auto less = [](const Vec3& a, const Vec3& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  };
  std::sort(sorted.begin(), sorted.end(), less);
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

// One Lloyd run. `points` holds the active directions; the result's
// assignment indexes `points`.
class Lloyd {
 public:
  Lloyd(const DirectionArrays& points, int max_iterations)
      : points_(points), max_iterations_(max_iterations), kernels_(simd::active_kernels()) {}

  // With `reseed`, an empty cluster restarts at the point least similar to
  // its center; otherwise it is dropped.
  SphericalClusterResult run(std::vector<Vec3> centers, bool reseed) {
    const std::size_t n = points_.size();
    SphericalClusterResult r;
    r.centers = std::move(centers);
    r.assignment.assign(n, -1);
    assign(r, reseed);
    for (int it = 0; it < max_iterations_; ++it) {
      update(r, it == 0);
      r.iterations = it + 1;
      if (!assign(r, reseed)) break;
    }
    r.inlier_count.assign(r.centers.size(), 0);
    for (int a : r.assignment) ++r.inlier_count[static_cast<std::size_t>(a)];
    return r;
  }

  double objective(const SphericalClusterResult& r) const {
    double total = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      total += dot(points_.at(i), r.centers[static_cast<std::size_t>(r.assignment[i])]);
    }
    return total;
  }

 private:
  // Nearest-center assignment; returns whether anything changed. Ties go to
  // the lower center index.
  bool assign(SphericalClusterResult& r, bool reseed) {
    const std::size_t n = points_.size();
    for (;;) {
      const std::size_t k = r.centers.size();
      sims_.resize(k * n);
      for (std::size_t c = 0; c < k; ++c) {
        kernels_.dot3(points_.x.data(), points_.y.data(), points_.z.data(), n, r.centers[c],
                      sims_.data() + c * n);
      }
      bool changed = false;
      std::vector<std::size_t> members(k, 0);
      best_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        double best_sim = sims_[i];
        for (std::size_t c = 1; c < k; ++c) {
          const double s = sims_[c * n + i];
          if (s > best_sim) {
            best_sim = s;
            best = static_cast<int>(c);
          }
        }
        best_[i] = best_sim;
        if (r.assignment[i] != best) {
          r.assignment[i] = best;
          changed = true;
        }
        ++members[static_cast<std::size_t>(best)];
      }

      const auto empty = std::find(members.begin(), members.end(), std::size_t{0});
      if (empty == members.end()) return changed;
      const auto c = static_cast<std::size_t>(empty - members.begin());
      if (reseed) {
        // Farthest point from its own center, lowest index on ties.
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i) {
          if (best_[i] < best_[far]) far = i;
        }
        r.centers[c] = points_.at(far);
      } else {
        r.centers.erase(r.centers.begin() + static_cast<std::ptrdiff_t>(c));
        for (int& a : r.assignment) {
          if (a > static_cast<int>(c)) --a;
          else if (a == static_cast<int>(c)) a = -1;
        }
      }
      // Assignment must be recomputed against the edited centers.
    }
  }

  void update(SphericalClusterResult& r, bool first_iteration) {
    const std::size_t k = r.centers.size();
    std::vector<Vec3> sums(k);
    std::vector<std::size_t> first_member(k, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto c = static_cast<std::size_t>(r.assignment[i]);
      sums[c] += points_.at(i);
      first_member[c] = std::min(first_member[c], i);
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double len = norm(sums[c]);
      if (len >= kDegenerateMean) {
        r.centers[c] = sums[c] / len;
      } else if (first_iteration && first_member[c] < points_.size()) {
        r.centers[c] = points_.at(first_member[c]);
      }
    }
  }

  const DirectionArrays& points_;
  int max_iterations_;
  const simd::KernelSet& kernels_;
  std::vector<double> sims_;
  std::vector<double> best_;
};

std::vector<Vec3> farthest_point_seeds(const DirectionArrays& points, std::size_t k,
                                       std::size_t first) {
  const std::size_t n = points.size();
  const auto& kernels = simd::active_kernels();
  std::vector<Vec3> centers{points.at(first)};
  std::vector<double> nearest(n);
  kernels.dot3(points.x.data(), points.y.data(), points.z.data(), n, centers[0], nearest.data());
  std::vector<double> sims(n);
  while (centers.size() < k) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (nearest[i] < nearest[far]) far = i;
    }
    centers.push_back(points.at(far));
    kernels.dot3(points.x.data(), points.y.data(), points.z.data(), n, centers.back(), sims.data());
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::max(nearest[i], sims[i]);
  }
  return centers;
}

}  // namespace

TrimSchedule TrimSchedule::walls() { return {{50.0, 40.0, 30.0, 20.0, 10.0, 5.0, 3.0}}; }

TrimSchedule TrimSchedule::floor() { return {{30.0, 20.0, 10.0, 5.0, 3.0}}; }

void TrimSchedule::validate() const {
  if (angles_deg.empty()) throw Error(ErrorCode::kInvalidArgument, "trim schedule is empty");
  for (std::size_t i = 1; i < angles_deg.size(); ++i) {
    if (!(angles_deg[i] < angles_deg[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "trim schedule must be strictly decreasing");
    }
  }
  if (!(angles_deg.back() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "trim schedule must end above zero");
  }
}

double SphericalClusterResult::discarded_fraction() const {
  if (assignment.empty()) return 0.0;
  const auto dropped = std::count(assignment.begin(), assignment.end(), kDiscarded);
  return static_cast<double>(dropped) / static_cast<double>(assignment.size());
}

int SphericalClusterResult::largest_cluster() const {
  int best = -1;
  for (std::size_t c = 0; c < inlier_count.size(); ++c) {
    if (best < 0 || inlier_count[c] > inlier_count[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

SphericalClusterResult spherical_kmeans(std::span<const Vec3> directions, std::size_t k,
                                        std::uint64_t seed, const KMeansOptions& options) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  if (distinct_count(directions) < k) {
    throw Error(ErrorCode::kInvalidArgument,
                "k = " + std::to_string(k) + " exceeds the number of distinct directions");
  }
  const DirectionArrays points(directions);
  Lloyd lloyd(points, options.max_iterations);
  std::mt19937_64 rng(seed);

  SphericalClusterResult best;
  double best_objective = -std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
    const std::size_t first = static_cast<std::size_t>(rng() % points.size());
    auto result = lloyd.run(farthest_point_seeds(points, k, first), /*reseed=*/true);
    const double obj = lloyd.objective(result);
    if (obj > best_objective) {
      best_objective = obj;
      best = std::move(result);
    }
  }
  return best;
}

SphericalClusterResult trimmed_spherical_kmeans(std::span<const Vec3> directions, std::size_t k,
                                                const TrimSchedule& schedule, std::uint64_t seed,
                                                const KMeansOptions& options) {
  schedule.validate();
  SphericalClusterResult current = spherical_kmeans(directions, k, seed, options);
  const std::size_t n = directions.size();

  // Map from the active subset back to input indices.
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  std::vector<int> full(current.assignment);

  auto trim = [&](double angle_deg) {
    const double min_cos = std::cos(deg_to_rad(angle_deg));
    std::vector<std::size_t> survivors;
    for (std::size_t i : active) {
      const auto c = static_cast<std::size_t>(full[i]);
      if (dot(directions[i], current.centers[c]) < min_cos) {
        full[i] = kDiscarded;
      } else {
        survivors.push_back(i);
      }
    }
    active = std::move(survivors);
  };

  for (double angle : schedule.angles_deg) {
    trim(angle);
    if (active.empty()) break;

    // Keep only centers that still own a point, then re-cluster survivors.
    std::vector<int> remap(current.centers.size(), -1);
    std::vector<Vec3> centers;
    for (std::size_t i : active) {
      auto& slot = remap[static_cast<std::size_t>(full[i])];
      if (slot < 0) slot = 0;
    }
    for (std::size_t c = 0; c < remap.size(); ++c) {
      if (remap[c] >= 0) {
        remap[c] = static_cast<int>(centers.size());
        centers.push_back(current.centers[c]);
      }
    }
    std::vector<Vec3> subset;
    subset.reserve(active.size());
    for (std::size_t i : active) subset.push_back(directions[i]);
    const DirectionArrays points(subset);
    Lloyd lloyd(points, options.max_iterations);
    SphericalClusterResult next = lloyd.run(std::move(centers), /*reseed=*/false);
    for (std::size_t j = 0; j < active.size(); ++j) full[active[j]] = next.assignment[j];
    current = std::move(next);
  }
  if (!active.empty()) trim(schedule.last());

  SphericalClusterResult out;
  out.iterations = current.iterations;
  out.assignment = std::move(full);
  if (active.empty()) return out;  // every point discarded
  // Drop clusters emptied by the final trim.
  std::vector<std::size_t> counts(current.centers.size(), 0);
  for (std::size_t i : active) ++counts[static_cast<std::size_t>(out.assignment[i])];
  std::vector<int> remap(current.centers.size(), -1);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    remap[c] = static_cast<int>(out.centers.size());
    out.centers.push_back(current.centers[c]);
    out.inlier_count.push_back(counts[c]);
  }
  for (int& a : out.assignment) {
    if (a != kDiscarded) a = remap[static_cast<std::size_t>(a)];
  }
  return out;
}

std::string_view to_string(OrientationMethod m) {
  return m == OrientationMethod::kBoundingBox ? "bbox" : "spherical_kmeans";
}

OrientationResult orient_floor_bbox(const TriangleMesh& mesh) {
  const OrientedBoundingBox box = compute_oriented_bounding_box(mesh);
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return box.extent[a] < box.extent[b]; });

  OrientationResult out;
  OrientationReport& rep = out.report;
  rep.method = OrientationMethod::kBoundingBox;
  rep.candidate_count = mesh.face_count();
  const double smallest = box.extent[order[0]];
  const double second = box.extent[order[1]];
  if (second - smallest <= 0.01 * second) {
    rep.ambiguous = true;
    rep.warnings.push_back("bounding box has two near-equal shortest sides; vertical axis is a guess");
  }
  Vec3 up = box.axes[order[0]];
  if (dot(up, kUnitY) < 0.0) up = -up;
  rep.g_m = -up;  // inward normal of the top face
  rep.floor_angle = angle_between(rep.g_m, kTrueGravity);
  out.transform.rotation = rotation_between(rep.g_m, kTrueGravity);
  rep.floor_transform = out.transform;
  return out;
}

OrientationResult orient_floor_kmeans(const TriangleMesh& mesh, const TrimSchedule& schedule,
                                      std::uint64_t seed) {
  schedule.validate();
  const double min_cos = std::cos(deg_to_rad(schedule.angles_deg.front()));
  std::vector<Vec3> normals;
  for (const auto& a : compute_attributes(mesh)) {
    if (a.normal.y >= min_cos) normals.push_back(a.normal);
  }
  if (normals.empty()) {
    throw Error(ErrorCode::kNoFloorEvidence, "no floor evidence: no upward-facing triangles");
  }
  const auto clusters = trimmed_spherical_kmeans(normals, 1, schedule, seed);
  if (clusters.centers.empty()) {
    throw Error(ErrorCode::kNoFloorEvidence, "no floor evidence: every candidate was trimmed");
  }

  OrientationResult out;
  OrientationReport& rep = out.report;
  rep.method = OrientationMethod::kSphericalKMeans;
  rep.candidate_count = normals.size();
  rep.discarded_fraction = clusters.discarded_fraction();
  rep.g_m = -clusters.centers.front();
  rep.floor_angle = angle_between(rep.g_m, kTrueGravity);
  out.transform.rotation = rotation_between(rep.g_m, kTrueGravity);
  rep.floor_transform = out.transform;
  return out;
}

OrientationResult align_walls(const TriangleMesh& mesh, const WallAlignParams& params) {
  if (params.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  const double vertical_cos = std::cos(deg_to_rad(params.vertical_angle_deg));
  std::vector<Vec3> normals;
  for (const auto& a : compute_attributes(mesh)) {
    if (params.drop_vertical && std::fabs(a.normal.y) >= vertical_cos) continue;
    if (params.floor_y && a.centroid.y < *params.floor_y) continue;
    if (params.ceiling_y && a.centroid.y > *params.ceiling_y) continue;
    normals.push_back(a.normal);
  }
  if (normals.empty()) throw Error(ErrorCode::kEmptyInput, "no wall triangles to align");

  OrientationResult out;
  OrientationReport& rep = out.report;
  rep.method = OrientationMethod::kSphericalKMeans;
  rep.candidate_count = normals.size();

  std::size_t k = params.k;
  if (const std::size_t distinct = distinct_count(normals); distinct < k) {
    rep.warnings.push_back("only " + std::to_string(distinct) + " distinct wall directions; k reduced");
    k = distinct;
  }
  const auto clusters = trimmed_spherical_kmeans(normals, k, params.schedule, params.seed);
  rep.discarded_fraction = clusters.discarded_fraction();
  if (clusters.centers.size() < params.k) {
    rep.warnings.push_back("found " + std::to_string(clusters.centers.size()) + " of " +
                           std::to_string(params.k) + " wall clusters; using the largest available");
  }

  int best = -1;
  for (std::size_t c = 0; c < clusters.centers.size(); ++c) {
    rep.wall_centers.push_back(clusters.centers[c]);
    rep.wall_inlier_fractions.push_back(static_cast<double>(clusters.inlier_count[c]) /
                                        static_cast<double>(normals.size()));
    if (std::fabs(clusters.centers[c].y) >= vertical_cos) continue;  // floor/ceiling cluster
    if (best < 0 || clusters.inlier_count[c] > clusters.inlier_count[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(c);
    }
  }
  if (best < 0) throw Error(ErrorCode::kEmptyInput, "no horizontal wall cluster survived trimming");
  const auto& largest = rep.wall_inlier_fractions[static_cast<std::size_t>(best)];
  for (std::size_t c = 0; c < rep.wall_inlier_fractions.size(); ++c) {
    if (static_cast<int>(c) != best && rep.wall_inlier_fractions[c] < 0.25 * largest) {
      rep.warnings.push_back("wall cluster " + std::to_string(c) + " has a low inlier fraction");
    }
  }

  const Vec3 dominant = clusters.centers[static_cast<std::size_t>(best)];
  rep.theta_wall = heading(dominant);
  constexpr double kQuarter = std::numbers::pi / 2.0;
  rep.wall_angle = rep.theta_wall - kQuarter * std::ceil((rep.theta_wall - kQuarter / 2.0) / kQuarter);
  out.transform.rotation = rotation_y(rep.wall_angle);
  rep.wall_transform = out.transform;
  return out;
}

}  // namespace floorscan
