#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floorscan/geometry.hpp"
#include "floorscan/mesh.hpp"

namespace floorscan {

/// Decreasing angular thresholds (degrees) for trimmed spherical k-means.
struct TrimSchedule {
  std::vector<double> angles_deg;

  /// Wall clustering default: 50, 40, 30, 20, 10, 5, 3.
  static TrimSchedule walls();
  /// Floor levelling default: 30 down to 3.
  static TrimSchedule floor();

  /// Throws Error(kInvalidArgument) unless non-empty, strictly decreasing and
  /// with a positive last entry.
  void validate() const;
  double last() const { return angles_deg.back(); }
};

inline constexpr int kDiscarded = -1;

struct SphericalClusterResult {
  std::vector<Vec3> centers;
  /// Cluster index per input direction, or kDiscarded.
  std::vector<int> assignment;
  std::vector<std::size_t> inlier_count;
  int iterations = 0;

  double discarded_fraction() const;
  /// Index of the cluster with most inliers (lowest index on ties), or -1.
  int largest_cluster() const;
};

struct KMeansOptions {
  int max_iterations = 100;
  /// Farthest-point seedings tried; the best total cosine similarity wins.
  int restarts = 8;
};

/// Lloyd iteration on the unit sphere with cosine similarity. Centers are
/// normalized member means. Deterministic in `seed`.
/// Throws Error(kInvalidArgument) when k is zero or exceeds the number of
/// distinct directions.
SphericalClusterResult spherical_kmeans(std::span<const Vec3> directions, std::size_t k,
                                        std::uint64_t seed, const KMeansOptions& options = {});

/// Spherical k-means that, for each schedule angle, discards points farther
/// than the angle from their center and re-clusters the survivors. Clusters
/// that lose every point are dropped.
SphericalClusterResult trimmed_spherical_kmeans(std::span<const Vec3> directions, std::size_t k,
                                                const TrimSchedule& schedule, std::uint64_t seed,
                                                const KMeansOptions& options = {});

enum class OrientationMethod { kBoundingBox, kSphericalKMeans };

std::string_view to_string(OrientationMethod m);

struct OrientationReport {
  OrientationMethod method = OrientationMethod::kSphericalKMeans;
  RigidTransform floor_transform;
  RigidTransform wall_transform;
  /// Estimated gravity direction of the input mesh (unit).
  Vec3 g_m{0.0, -1.0, 0.0};
  double floor_angle = 0.0;  // radians rotated to level the floor
  double theta_wall = 0.0;   // heading of the dominant wall cluster, radians
  double wall_angle = 0.0;   // rotation about +y applied, radians, in (-pi/4, pi/4]
  double discarded_fraction = 0.0;
  std::size_t candidate_count = 0;
  bool ambiguous = false;
  std::vector<Vec3> wall_centers;
  std::vector<double> wall_inlier_fractions;
  std::vector<std::string> warnings;

  RigidTransform combined() const { return floor_transform.then(wall_transform); }
};

struct OrientationResult {
  RigidTransform transform;
  OrientationReport report;
};

/// Gravity direction of the vertical: the g_t constant.
inline constexpr Vec3 kTrueGravity{0.0, -1.0, 0.0};

/// Levels the floor from the principal-axis bounding box: the shortest box
/// axis is taken as vertical, and its inward top-face normal as gravity.
OrientationResult orient_floor_bbox(const TriangleMesh& mesh);

/// Levels the floor from the trimmed k=1 spherical mean of upward-facing
/// triangle normals. Triangles more than schedule.angles_deg.front() from +y
/// are ignored. Throws Error(kNoFloorEvidence) when none remain.
OrientationResult orient_floor_kmeans(const TriangleMesh& mesh,
                                      const TrimSchedule& schedule = TrimSchedule::floor(),
                                      std::uint64_t seed = 42);

struct WallAlignParams {
  std::size_t k = 4;  // 4 walls, or 6 when floor/ceiling triangles are kept
  TrimSchedule schedule = TrimSchedule::walls();
  std::uint64_t seed = 42;
  /// Drop triangles whose normal is within vertical_angle_deg of +-y.
  bool drop_vertical = true;
  double vertical_angle_deg = 30.0;
  std::optional<double> floor_y;
  std::optional<double> ceiling_y;
};

/// Rotates about +y so the heading of the largest wall-normal cluster maps
/// onto an axis, choosing the rotation angle in (-45, 45] degrees.
OrientationResult align_walls(const TriangleMesh& mesh, const WallAlignParams& params = {});

}  // namespace floorscan
