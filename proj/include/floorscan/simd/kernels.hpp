#pragma once

// Data-parallel inner loops behind the geometry pipeline.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant chosen at runtime. Variants evaluate the same IEEE operations in the
// same order (no FMA contraction), so their outputs are bit-identical; the
// equivalence tests assert exactly that.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "floorscan/geometry.hpp"

namespace floorscan::simd {

/// Structure-of-arrays view of triangle corner coordinates.
struct TriangleCorners {
  const double* ax;
  const double* ay;
  const double* az;
  const double* bx;
  const double* by;
  const double* bz;
  const double* cx;
  const double* cy;
  const double* cz;
};

/// Per-triangle outputs. `twice_area` is |(b-a) x (c-a)|; normals of
/// triangles with zero twice_area are written as zero vectors.
struct TriangleGeometry {
  double* nx;
  double* ny;
  double* nz;
  double* twice_area;
  double* gx;  // centroid
  double* gy;
  double* gz;
};

/// Block-shaped neighbourhood around `center`: |dq.normal| <= half_w,
/// |dq.y| <= half_h, |dq.lateral| <= half_l with dq = q - center.
struct BlockQuery {
  Vec3 center;
  Vec3 normal;   // horizontal unit wall direction
  Vec3 lateral;  // normal x y
  double half_l;
  double half_w;
  double half_h;
};

struct KernelSet {
  std::string_view name;

  /// out[i] = x[i]*d.x + y[i]*d.y + z[i]*d.z
  void (*dot3)(const double* x, const double* y, const double* z, std::size_t n, Vec3 d,
               double* out);

  void (*triangle_geometry)(const TriangleCorners& in, std::size_t n, const TriangleGeometry& out);

  /// Number of points inside the block; when `mask` is non-null, mask[i] is
  /// set to 1 for inside points and 0 otherwise.
  std::size_t (*block_count)(const double* x, const double* y, const double* z, std::size_t n,
                             const BlockQuery& q, std::uint8_t* mask);
};

const KernelSet& scalar_kernels();

/// AVX2 kernels, or nullptr when not compiled in or unsupported by this CPU.
const KernelSet* avx2_kernels();

/// Kernels used by the library. Picks AVX2 when available unless the
/// FLOORSCAN_KERNELS environment variable is set to "scalar".
const KernelSet& active_kernels();

}  // namespace floorscan::simd
