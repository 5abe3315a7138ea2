#include <cmath>

#include "floorscan/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace floorscan::simd {
namespace {

void dot3_scalar(const double* x, const double* y, const double* z, std::size_t n, Vec3 d,
                 double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * d.x + y[i] * d.y + z[i] * d.z;
}

void triangle_geometry_scalar(const TriangleCorners& in, std::size_t n,
                              const TriangleGeometry& out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double e1x = in.bx[i] - in.ax[i];
    const double e1y = in.by[i] - in.ay[i];
    const double e1z = in.bz[i] - in.az[i];
    const double e2x = in.cx[i] - in.ax[i];
    const double e2y = in.cy[i] - in.ay[i];
    const double e2z = in.cz[i] - in.az[i];
    const double crx = e1y * e2z - e1z * e2y;
    const double cry = e1z * e2x - e1x * e2z;
    const double crz = e1x * e2y - e1y * e2x;
    const double len = std::sqrt(crx * crx + cry * cry + crz * crz);
    out.twice_area[i] = len;
    if (len > 0.0) {
      out.nx[i] = crx / len;
      out.ny[i] = cry / len;
      out.nz[i] = crz / len;
    } else {
      out.nx[i] = 0.0;
      out.ny[i] = 0.0;
      out.nz[i] = 0.0;
    }
    out.gx[i] = (in.ax[i] + in.bx[i] + in.cx[i]) / 3.0;
    out.gy[i] = (in.ay[i] + in.by[i] + in.cy[i]) / 3.0;
    out.gz[i] = (in.az[i] + in.bz[i] + in.cz[i]) / 3.0;
  }
}

std::size_t block_count_scalar(const double* x, const double* y, const double* z, std::size_t n,
                               const BlockQuery& q, std::uint8_t* mask) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - q.center.x;
    const double dy = y[i] - q.center.y;
    const double dz = z[i] - q.center.z;
    const double dn = dx * q.normal.x + dy * q.normal.y + dz * q.normal.z;
    const double dl = dx * q.lateral.x + dy * q.lateral.y + dz * q.lateral.z;
    const bool inside =
        std::fabs(dn) <= q.half_w && std::fabs(dy) <= q.half_h && std::fabs(dl) <= q.half_l;
    if (mask != nullptr) mask[i] = inside ? 1 : 0;
    count += inside ? 1 : 0;
  }
  return count;
}

constexpr KernelSet kScalar{"scalar", dot3_scalar, triangle_geometry_scalar, block_count_scalar};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace floorscan::simd
