#include "kernels_internal.hpp"

#if defined(FLOORSCAN_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace floorscan::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void dot3_avx2(const double* x, const double* y, const double* z, std::size_t n, Vec3 d,
               double* out) {
  const __m256d dx = _mm256_set1_pd(d.x);
  const __m256d dy = _mm256_set1_pd(d.y);
  const __m256d dz = _mm256_set1_pd(d.z);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(x + i), dx);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(y + i), dy));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(z + i), dz));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = x[i] * d.x + y[i] * d.y + z[i] * d.z;
}

void triangle_geometry_avx2(const TriangleCorners& in, std::size_t n,
                            const TriangleGeometry& out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d three = _mm256_set1_pd(3.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d ax = _mm256_loadu_pd(in.ax + i);
    const __m256d ay = _mm256_loadu_pd(in.ay + i);
    const __m256d az = _mm256_loadu_pd(in.az + i);
    const __m256d bx = _mm256_loadu_pd(in.bx + i);
    const __m256d by = _mm256_loadu_pd(in.by + i);
    const __m256d bz = _mm256_loadu_pd(in.bz + i);
    const __m256d cx = _mm256_loadu_pd(in.cx + i);
    const __m256d cy = _mm256_loadu_pd(in.cy + i);
    const __m256d cz = _mm256_loadu_pd(in.cz + i);

    const __m256d e1x = _mm256_sub_pd(bx, ax);
    const __m256d e1y = _mm256_sub_pd(by, ay);
    const __m256d e1z = _mm256_sub_pd(bz, az);
    const __m256d e2x = _mm256_sub_pd(cx, ax);
    const __m256d e2y = _mm256_sub_pd(cy, ay);
    const __m256d e2z = _mm256_sub_pd(cz, az);
    const __m256d crx = _mm256_sub_pd(_mm256_mul_pd(e1y, e2z), _mm256_mul_pd(e1z, e2y));
    const __m256d cry = _mm256_sub_pd(_mm256_mul_pd(e1z, e2x), _mm256_mul_pd(e1x, e2z));
    const __m256d crz = _mm256_sub_pd(_mm256_mul_pd(e1x, e2y), _mm256_mul_pd(e1y, e2x));
    __m256d sq = _mm256_mul_pd(crx, crx);
    sq = _mm256_add_pd(sq, _mm256_mul_pd(cry, cry));
    sq = _mm256_add_pd(sq, _mm256_mul_pd(crz, crz));
    const __m256d len = _mm256_sqrt_pd(sq);
    const __m256d positive = _mm256_cmp_pd(len, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out.twice_area + i, len);
    _mm256_storeu_pd(out.nx + i, _mm256_and_pd(positive, _mm256_div_pd(crx, len)));
    _mm256_storeu_pd(out.ny + i, _mm256_and_pd(positive, _mm256_div_pd(cry, len)));
    _mm256_storeu_pd(out.nz + i, _mm256_and_pd(positive, _mm256_div_pd(crz, len)));
    _mm256_storeu_pd(out.gx + i, _mm256_div_pd(_mm256_add_pd(_mm256_add_pd(ax, bx), cx), three));
    _mm256_storeu_pd(out.gy + i, _mm256_div_pd(_mm256_add_pd(_mm256_add_pd(ay, by), cy), three));
    _mm256_storeu_pd(out.gz + i, _mm256_div_pd(_mm256_add_pd(_mm256_add_pd(az, bz), cz), three));
  }
  if (i < n) {
    const TriangleCorners tail{in.ax + i, in.ay + i, in.az + i, in.bx + i, in.by + i,
                               in.bz + i, in.cx + i, in.cy + i, in.cz + i};
    const TriangleGeometry tail_out{out.nx + i, out.ny + i, out.nz + i, out.twice_area + i,
                                    out.gx + i, out.gy + i, out.gz + i};
    scalar_kernels().triangle_geometry(tail, n - i, tail_out);
  }
}

std::size_t block_count_avx2(const double* x, const double* y, const double* z, std::size_t n,
                             const BlockQuery& q, std::uint8_t* mask) {
  const __m256d px = _mm256_set1_pd(q.center.x);
  const __m256d py = _mm256_set1_pd(q.center.y);
  const __m256d pz = _mm256_set1_pd(q.center.z);
  const __m256d nx = _mm256_set1_pd(q.normal.x);
  const __m256d ny = _mm256_set1_pd(q.normal.y);
  const __m256d nz = _mm256_set1_pd(q.normal.z);
  const __m256d lx = _mm256_set1_pd(q.lateral.x);
  const __m256d ly = _mm256_set1_pd(q.lateral.y);
  const __m256d lz = _mm256_set1_pd(q.lateral.z);
  const __m256d hw = _mm256_set1_pd(q.half_w);
  const __m256d hh = _mm256_set1_pd(q.half_h);
  const __m256d hl = _mm256_set1_pd(q.half_l);

  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), px);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), py);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(z + i), pz);
    __m256d dn = _mm256_mul_pd(dx, nx);
    dn = _mm256_add_pd(dn, _mm256_mul_pd(dy, ny));
    dn = _mm256_add_pd(dn, _mm256_mul_pd(dz, nz));
    __m256d dl = _mm256_mul_pd(dx, lx);
    dl = _mm256_add_pd(dl, _mm256_mul_pd(dy, ly));
    dl = _mm256_add_pd(dl, _mm256_mul_pd(dz, lz));
    __m256d inside = _mm256_cmp_pd(abs_pd(dn), hw, _CMP_LE_OQ);
    inside = _mm256_and_pd(inside, _mm256_cmp_pd(abs_pd(dy), hh, _CMP_LE_OQ));
    inside = _mm256_and_pd(inside, _mm256_cmp_pd(abs_pd(dl), hl, _CMP_LE_OQ));
    const int bits = _mm256_movemask_pd(inside);
    count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
    if (mask != nullptr) {
      for (std::size_t lane = 0; lane < kLanes; ++lane) mask[i + lane] = (bits >> lane) & 1;
    }
  }
  if (i < n) {
    count += scalar_kernels().block_count(x + i, y + i, z + i, n - i, q,
                                          mask != nullptr ? mask + i : nullptr);
  }
  return count;
}

constexpr KernelSet kAvx2{"avx2", dot3_avx2, triangle_geometry_avx2, block_count_avx2};

}  // namespace

namespace detail {
const KernelSet* avx2_kernel_table() { return &kAvx2; }
}  // namespace detail

}  // namespace floorscan::simd

#else

namespace floorscan::simd::detail {
const KernelSet* avx2_kernel_table() { return nullptr; }
}  // namespace floorscan::simd::detail

#endif
