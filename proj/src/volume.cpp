#include "flor/volume.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace flor {

VolumeGrid VolumeGrid::zeros(const std::array<int, 3>& dims,
                             const Vec3& spacing, const Vec3& origin) {
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    throw std::invalid_argument("VolumeGrid dims must be positive");
  VolumeGrid g;
  g.dims = dims;
  g.spacing = spacing;
  g.origin = origin;
  g.values.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0.0);
  g.validate();
  return g;
}

void VolumeGrid::validate() const {
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    throw std::invalid_argument("VolumeGrid dims must be positive");
  const std::size_t expect =
      static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  if (values.size() != expect)
    throw std::invalid_argument("VolumeGrid value count does not match dims");
  for (int a = 0; a < 3; ++a)
    if (!(spacing[a] > 0.0))
      throw std::invalid_argument("VolumeGrid spacing must be positive");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("VolumeGrid contains non-finite values");
}

namespace {

// Deterministic standard normal: Box-Muller over mt19937_64 uniforms.
// std::normal_distribution is implementation-defined, which would break the
// fixed-seed reproducibility contract across toolchains.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform01() {
    // in (0, 1]; never 0 so the log above is finite
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

VolumeGrid make_synthetic(const SyntheticSpec& spec,
                          const std::array<int, 3>& dims, const Vec3& spacing) {
  for (const auto& b : spec.blobs)
    if (!(b.sigma > 0.0))
      throw std::invalid_argument("synthetic blob sigma must be positive");
  if (spec.noise_sigma < 0.0)
    throw std::invalid_argument("noise_sigma must be >= 0");

  VolumeGrid g = VolumeGrid::zeros(dims, spacing);
  std::size_t i = 0;
  for (int z = 0; z < dims[2]; ++z) {
    for (int y = 0; y < dims[1]; ++y) {
      for (int x = 0; x < dims[0]; ++x, ++i) {
        double v = 0.0;
        for (const auto& b : spec.blobs) {
          const double dx = x - b.center[0];
          const double dy = y - b.center[1];
          const double dz = z - b.center[2];
          const double r2 = dx * dx + dy * dy + dz * dz;
          v += b.amplitude * std::exp(-r2 / (2.0 * b.sigma * b.sigma));
        }
        g.values[i] = v;
      }
    }
  }
  if (spec.noise_sigma > 0.0) {
    NormalStream noise(spec.seed);
    for (double& v : g.values) v += spec.noise_sigma * noise.next();
  }
  return g;
}

GridStats grid_stats(const VolumeGrid& grid) {
  if (grid.values.empty()) throw std::invalid_argument("empty grid");
  GridStats s{grid.values[0], grid.values[0], 0.0};
  double acc = 0.0;
  for (double v : grid.values) {
    if (v < s.min) s.min = v;
    if (v > s.max) s.max = v;
    acc += v;
  }
  s.mean = acc / static_cast<double>(grid.values.size());
  return s;
}

}  // namespace flor
