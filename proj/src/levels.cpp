#include "floorscan/levels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "floorscan/error.hpp"

namespace floorscan {
namespace {

bool passes_filter(const Vec3& n, double min_cos, DirectionFilter f) {
  switch (f) {
    case DirectionFilter::kUp: return n.y >= min_cos;
    case DirectionFilter::kDown: return -n.y >= min_cos;
    case DirectionFilter::kBoth: return std::fabs(n.y) >= min_cos;
  }
  return false;
}

std::vector<double> pair_sums(const AltitudeHistogram& h) {
  std::vector<double> p;
  if (h.counts.size() < 2) {
    if (!h.counts.empty()) p.push_back(h.counts[0]);
    return p;
  }
  p.resize(h.counts.size() - 1);
  for (std::size_t i = 0; i + 1 < h.counts.size(); ++i) p[i] = h.counts[i] + h.counts[i + 1];
  return p;
}

// Consecutive spikes closer than min_gap belong to the same group.
std::vector<std::vector<Spike>> group_spikes(const std::vector<Spike>& spikes, double min_gap) {
  std::vector<std::vector<Spike>> groups;
  for (const Spike& s : spikes) {
    if (groups.empty() || s.y - groups.back().back().y >= min_gap) groups.emplace_back();
    groups.back().push_back(s);
  }
  return groups;
}

}  // namespace

std::string_view to_string(DirectionFilter f) {
  switch (f) {
    case DirectionFilter::kUp: return "up";
    case DirectionFilter::kDown: return "down";
    case DirectionFilter::kBoth: return "both";
  }
  return "both";
}

double AltitudeHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

AltitudeHistogram build_histogram(const TriangleMesh& mesh, double bucket_size,
                                  double filter_angle_deg, DirectionFilter filter) {
  if (!(bucket_size > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bucket size must be positive");
  const double min_cos = std::cos(deg_to_rad(filter_angle_deg));
  std::vector<TriangleAttributes> picked;
  for (const auto& a : compute_attributes(mesh)) {
    if (passes_filter(a.normal, min_cos, filter)) picked.push_back(a);
  }
  if (picked.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no horizontal triangles to build an altitude histogram");
  }

  double lo = picked.front().centroid.y;
  double hi = lo;
  for (const auto& a : picked) {
    lo = std::min(lo, a.centroid.y);
    hi = std::max(hi, a.centroid.y);
  }
  AltitudeHistogram h;
  h.bucket_size = bucket_size;
  h.direction_filter = filter;
  h.origin = std::floor(lo / bucket_size) * bucket_size;
  const auto buckets = static_cast<std::size_t>(std::floor((hi - h.origin) / bucket_size)) + 1;
  h.counts.assign(buckets, 0.0);
  h.weighted_y.assign(buckets, 0.0);
  for (const auto& a : picked) {
    auto b = static_cast<std::size_t>(std::floor((a.centroid.y - h.origin) / bucket_size));
    b = std::min(b, buckets - 1);
    h.counts[b] += a.area;
    h.weighted_y[b] += a.area * a.centroid.y;
  }
  return h;
}

std::vector<Spike> find_spikes(const AltitudeHistogram& hist, const LevelParams& params) {
  const std::vector<double> p = pair_sums(hist);
  if (p.empty()) return {};
  const double peak = *std::max_element(p.begin(), p.end());
  const double threshold = std::max(params.peak_fraction * peak, params.min_spike_area);

  std::vector<Spike> spikes;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < threshold || !(p[i] > 0.0)) continue;
    const bool rises = i == 0 || p[i] > p[i - 1];
    const bool holds = i + 1 == p.size() || p[i] >= p[i + 1];
    if (!rises || !holds) continue;
    double wy = hist.weighted_y[i];
    if (i + 1 < hist.counts.size()) wy += hist.weighted_y[i + 1];
    spikes.push_back({i, p[i], wy / p[i]});
  }
  return spikes;
}

FloorCeiling detect_floor_ceiling(const AltitudeHistogram& hist, const LevelParams& params) {
  FloorCeiling out;
  out.spikes = find_spikes(hist, params);
  for (std::size_t i = 0; i + 1 < out.spikes.size(); ++i) {
    if (out.spikes[i + 1].y - out.spikes[i].y >= params.min_gap) {
      out.floor_y = out.spikes[i].y;
      out.ceiling_y = out.spikes[i + 1].y;
      return out;
    }
  }
  throw Error(ErrorCode::kSingleSurface,
              "single surface: no pair of horizontal surfaces at least " +
                  std::to_string(params.min_gap) + " m apart");
}

LevelPartition partition_stories(const TriangleMesh& mesh, const AltitudeHistogram& hist,
                                 const LevelParams& params) {
  LevelPartition out;
  out.spikes = find_spikes(hist, params);
  const auto groups = group_spikes(out.spikes, params.min_gap);

  if (groups.size() < 2) {
    out.flagged = true;
    out.warnings.push_back("no floor/ceiling gap found; treating the mesh as one story");
    Story s;
    if (!out.spikes.empty()) {
      s.floor_y = out.spikes.front().y;
      s.ceiling_y = out.spikes.back().y;
    }
    s.faces.resize(mesh.face_count());
    std::iota(s.faces.begin(), s.faces.end(), 0u);
    out.stories.push_back(std::move(s));
    return out;
  }

  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    Story s;
    s.floor_y = groups[g].back().y;
    s.ceiling_y = groups[g + 1].front().y;
    if (s.ceiling_y - s.floor_y < params.min_room_height) {
      out.flagged = true;
      out.warnings.push_back("story " + std::to_string(g) + " is lower than the minimum room height");
    }
    out.stories.push_back(std::move(s));
  }
  for (std::size_t i = 1; i < out.stories.size(); ++i) {
    const double next_floor = out.stories[i].floor_y;
    const double slab = next_floor - out.stories[i - 1].ceiling_y;
    out.boundaries.push_back(next_floor - std::min(params.split_tolerance, 0.5 * slab));
  }

  const auto attrs = compute_all_attributes(mesh);
  for (std::size_t f = 0; f < attrs.size(); ++f) {
    const double y = attrs[f].centroid.y;
    const auto story = static_cast<std::size_t>(
        std::upper_bound(out.boundaries.begin(), out.boundaries.end(), y) - out.boundaries.begin());
    out.stories[story].faces.push_back(static_cast<std::uint32_t>(f));
  }
  return out;
}

std::vector<std::uint32_t> faces_between_floor_and_ceiling(const TriangleMesh& mesh, double floor_y,
                                                           double ceiling_y,
                                                           const RemovalParams& params) {
  const double min_cos = std::cos(deg_to_rad(params.filter_angle_deg));
  const auto attrs = compute_all_attributes(mesh);
  std::vector<std::uint32_t> kept;
  kept.reserve(attrs.size());
  for (std::size_t f = 0; f < attrs.size(); ++f) {
    const auto& a = attrs[f];
    const double y = a.centroid.y;
    if (y < floor_y - params.margin || y > ceiling_y + params.margin) continue;
    const bool horizontal = a.area > 0.0 && std::fabs(a.normal.y) >= min_cos;
    const bool at_surface =
        std::fabs(y - floor_y) <= params.margin || std::fabs(y - ceiling_y) <= params.margin;
    if (horizontal && at_surface) continue;
    kept.push_back(static_cast<std::uint32_t>(f));
  }
  return kept;
}

TriangleMesh remove_ceiling_floor(const TriangleMesh& mesh, double floor_y, double ceiling_y,
                                  const RemovalParams& params) {
  const auto kept = faces_between_floor_and_ceiling(mesh, floor_y, ceiling_y, params);
  return submesh(mesh, kept);
}

}  // namespace floorscan
