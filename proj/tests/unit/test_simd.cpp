#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "floorscan/simd/kernels.hpp"

using namespace floorscan;
using namespace floorscan::simd;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double span) {
  std::uniform_real_distribution<double> u(-span, span);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("active kernels fall back to scalar when AVX2 is unavailable") {
  const KernelSet* avx = avx2_kernels();
  if (avx == nullptr) CHECK(active_kernels().name == "scalar");
  CHECK(scalar_kernels().name == "scalar");
}

TEST_CASE("dot3 matches the scalar reference bit for bit") {
  const KernelSet* avx = avx2_kernels();
  if (avx == nullptr) return;
  std::mt19937_64 rng(3);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1000u}) {
    const auto x = random_values(rng, n, 100), y = random_values(rng, n, 100), z = random_values(rng, n, 100);
    const Vec3 d = normalized({0.3, -0.2, 0.9});
    std::vector<double> a(n), b(n);
    scalar_kernels().dot3(x.data(), y.data(), z.data(), n, d, a.data());
    avx->dot3(x.data(), y.data(), z.data(), n, d, b.data());
    CHECK(same_bits(a, b));
  }
}

TEST_CASE("triangle_geometry matches the scalar reference bit for bit") {
  const KernelSet* avx = avx2_kernels();
  if (avx == nullptr) return;
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 2u, 4u, 6u, 13u, 257u}) {
    std::vector<std::vector<double>> c;
    for (int k = 0; k < 9; ++k) c.push_back(random_values(rng, n, 10));
    // A few degenerate triangles exercise the zero-normal path.
    for (std::size_t i = 0; i < n; i += 5) {
      c[3][i] = c[0][i];
      c[4][i] = c[1][i];
      c[5][i] = c[2][i];
    }
    const TriangleCorners in{c[0].data(), c[1].data(), c[2].data(), c[3].data(), c[4].data(),
                             c[5].data(), c[6].data(), c[7].data(), c[8].data()};
    std::vector<std::vector<double>> s(7, std::vector<double>(n)), v(7, std::vector<double>(n));
    scalar_kernels().triangle_geometry(in, n, {s[0].data(), s[1].data(), s[2].data(), s[3].data(),
                                               s[4].data(), s[5].data(), s[6].data()});
    avx->triangle_geometry(in, n, {v[0].data(), v[1].data(), v[2].data(), v[3].data(), v[4].data(),
                                   v[5].data(), v[6].data()});
    for (int k = 0; k < 7; ++k) CHECK(same_bits(s[k], v[k]));
  }
}

TEST_CASE("block_count matches the scalar reference, masks included") {
  const KernelSet* avx = avx2_kernels();
  if (avx == nullptr) return;
  std::mt19937_64 rng(9);
  for (std::size_t n : {0u, 1u, 3u, 4u, 11u, 64u, 999u}) {
    const auto x = random_values(rng, n, 2), y = random_values(rng, n, 2), z = random_values(rng, n, 2);
    const double t = 0.4;
    const Vec3 dir{std::cos(t), 0.0, std::sin(t)};
    const BlockQuery q{{0.1, -0.2, 0.3}, dir, {-dir.z, 0.0, dir.x}, 0.8, 0.3, 1.5};
    std::vector<std::uint8_t> ms(n), mv(n);
    const std::size_t cs = scalar_kernels().block_count(x.data(), y.data(), z.data(), n, q, ms.data());
    const std::size_t cv = avx->block_count(x.data(), y.data(), z.data(), n, q, mv.data());
    CHECK(cs == cv);
    CHECK(ms == mv);
    CHECK(avx->block_count(x.data(), y.data(), z.data(), n, q, nullptr) == cs);
  }
}

TEST_CASE("block_count counts points on the block boundary as inside") {
  const double x[] = {0.5, 0.5000001, 0.0, 0.0};
  const double y[] = {0.0, 0.0, 1.0, -1.0};
  const double z[] = {0.0, 0.0, 0.25, -0.25};
  const BlockQuery q{{0, 0, 0}, {0, 0, 1}, {-1, 0, 0}, 0.5, 0.25, 1.0};
  std::uint8_t mask[4];
  CHECK(scalar_kernels().block_count(x, y, z, 4, q, mask) == 3);
  CHECK(mask[1] == 0);
  if (const KernelSet* avx = avx2_kernels()) CHECK(avx->block_count(x, y, z, 4, q, nullptr) == 3);
}
