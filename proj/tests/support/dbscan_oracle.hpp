#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "floorscan/geometry.hpp"

namespace floorscan::testing {

struct OracleBlock {
  double l = 0.0;  // full extents
  double w = 0.0;
  double h = 0.0;
  std::size_t min_neighbors = 0;
};

/// Textbook O(n^2) DBSCAN with the wall-aligned block as neighbourhood:
/// clusters grow breadth-first from unvisited core points; border points go
/// to their nearest core neighbour (ties to the lexicographically smaller
/// core position). Returns a label per point, -1 for noise.
std::vector<int> brute_block_dbscan(std::span<const Vec3> points, const Vec3& direction,
                                    const OracleBlock& block);

/// Clusters as sorted member lists, sorted by first member.
std::vector<std::vector<std::uint32_t>> canonical_partition(std::span<const int> labels);

}  // namespace floorscan::testing
