#include "dbscan_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>

namespace floorscan::testing {
namespace {

bool in_block(const Vec3& center, const Vec3& q, const Vec3& n, const Vec3& lat, const OracleBlock& b) {
  const double dx = q.x - center.x;
  const double dy = q.y - center.y;
  const double dz = q.z - center.z;
  const double across = dx * n.x + dy * n.y + dz * n.z;
  const double along = dx * lat.x + dy * lat.y + dz * lat.z;
  return std::fabs(across) <= b.w / 2.0 && std::fabs(dy) <= b.h / 2.0 && std::fabs(along) <= b.l / 2.0;
}

}  // namespace

std::vector<int> brute_block_dbscan(std::span<const Vec3> points, const Vec3& direction,
                                    const OracleBlock& block) {
  const std::size_t n = points.size();
  const Vec3 lat{-direction.z, 0.0, direction.x};
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && in_block(points[i], points[j], direction, lat, block)) nbrs[i].push_back(j);
    }
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = nbrs[i].size() >= block.min_neighbors;

  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (!core[s] || label[s] >= 0) continue;
    std::deque<std::size_t> frontier{s};
    label[s] = next;
    while (!frontier.empty()) {
      const std::size_t i = frontier.front();
      frontier.pop_front();
      for (std::size_t j : nbrs[i]) {
        if (core[j] && label[j] < 0) {
          label[j] = next;
          frontier.push_back(j);
        }
      }
    }
    ++next;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    std::size_t best = n;
    double best_d2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!core[j] || !in_block(points[j], points[i], direction, lat, block)) continue;
      const double dx = points[j].x - points[i].x;
      const double dy = points[j].y - points[i].y;
      const double dz = points[j].z - points[i].z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      const auto key = [&](std::size_t k) { return std::tie(points[k].x, points[k].y, points[k].z); };
      if (best == n || d2 < best_d2 || (d2 == best_d2 && key(j) < key(best))) {
        best = j;
        best_d2 = d2;
      }
    }
    if (best < n) label[i] = label[best];
  }
  return label;
}

std::vector<std::vector<std::uint32_t>> canonical_partition(std::span<const int> labels) {
  std::map<int, std::vector<std::uint32_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) groups[labels[i]].push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [l, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace floorscan::testing
