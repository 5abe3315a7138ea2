#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floorscan/mesh.hpp"

namespace floorscan {

enum class DirectionFilter { kUp, kDown, kBoth };

std::string_view to_string(DirectionFilter f);

/// Area of near-horizontal triangles binned by centroid altitude.
struct AltitudeHistogram {
  double bucket_size = 0.0508;
  double origin = 0.0;          // lower edge of bucket 0
  std::vector<double> counts;   // accumulated area per bucket, m^2
  std::vector<double> weighted_y;  // sum of area * centroid y per bucket
  DirectionFilter direction_filter = DirectionFilter::kBoth;

  double bucket_low(std::size_t i) const { return origin + static_cast<double>(i) * bucket_size; }
  double total() const;
};

/// Bins every triangle whose normal lies within `filter_angle_deg` of +y
/// (kUp), -y (kDown) or either (kBoth). Throws Error(kEmptyInput) when none
/// qualify.
AltitudeHistogram build_histogram(const TriangleMesh& mesh, double bucket_size = 0.0508,
                                  double filter_angle_deg = 15.0,
                                  DirectionFilter filter = DirectionFilter::kBoth);

struct LevelParams {
  double min_gap = 1.8;
  double min_room_height = 2.0;
  double peak_fraction = 0.25;
  double min_spike_area = 0.5;  // m^2
  /// Slab triangles this far below the next floor still belong to the story below.
  double split_tolerance = 0.10;
};

/// A large bucket pair: buckets `pair` and `pair + 1`.
struct Spike {
  std::size_t pair = 0;
  double area = 0.0;
  double y = 0.0;  // area-weighted centroid altitude of the pair
};

/// Local maxima of the overlapping bucket-pair sums that reach
/// max(peak_fraction * largest pair, min_spike_area), ordered by altitude.
std::vector<Spike> find_spikes(const AltitudeHistogram& hist, const LevelParams& params = {});

struct FloorCeiling {
  double floor_y = 0.0;
  double ceiling_y = 0.0;
  std::vector<Spike> spikes;
};

/// Finds the lowest gap of at least min_gap between consecutive spikes and
/// returns the spikes on either side: the highest floor candidate below it and
/// the lowest ceiling candidate above it. Throws Error(kSingleSurface) when no
/// such gap exists.
FloorCeiling detect_floor_ceiling(const AltitudeHistogram& hist, const LevelParams& params = {});

struct Story {
  double floor_y = 0.0;
  double ceiling_y = 0.0;
  std::vector<std::uint32_t> faces;
};

struct LevelPartition {
  std::vector<Story> stories;
  std::vector<Spike> spikes;
  bool flagged = false;
  std::vector<std::string> warnings;

  std::size_t story_count() const { return stories.size(); }
  /// Altitudes separating consecutive stories; story i owns faces with
  /// centroid y in [boundaries[i-1], boundaries[i]).
  std::vector<double> boundaries;
};

/// Splits the mesh into stories from groups of spikes separated by at least
/// min_gap. Every face (degenerate ones included) lands in exactly one story.
LevelPartition partition_stories(const TriangleMesh& mesh, const AltitudeHistogram& hist,
                                 const LevelParams& params = {});

struct RemovalParams {
  double filter_angle_deg = 15.0;
  double margin = 0.10;
};

/// Indices of faces kept by remove_ceiling_floor, ascending.
std::vector<std::uint32_t> faces_between_floor_and_ceiling(const TriangleMesh& mesh, double floor_y,
                                                           double ceiling_y,
                                                           const RemovalParams& params = {});

/// Drops near-horizontal triangles within `margin` of either surface and
/// everything whose centroid lies outside [floor_y - margin, ceiling_y + margin].
TriangleMesh remove_ceiling_floor(const TriangleMesh& mesh, double floor_y, double ceiling_y,
                                  const RemovalParams& params = {});

}  // namespace floorscan
