#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "flor/vec3.hpp"

namespace flor {

// Regular 3D scalar lattice, row-major with x fastest. Spacing and origin are
// carried for reporting and file metadata; the math core works in continuous
// index coordinates. Treated as immutable once built.
struct VolumeGrid {
  std::array<int, 3> dims{0, 0, 0};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(y) +
                static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(z));
  }

  double at(int x, int y, int z) const { return values[index(x, y, z)]; }
  double& at(int x, int y, int z) { return values[index(x, y, z)]; }

  bool in_bounds(int x, int y, int z) const {
    return x >= 0 && x < dims[0] && y >= 0 && y < dims[1] && z >= 0 &&
           z < dims[2];
  }

  static VolumeGrid zeros(const std::array<int, 3>& dims,
                          const Vec3& spacing = {1.0, 1.0, 1.0},
                          const Vec3& origin = {0.0, 0.0, 0.0});

  // Throws std::invalid_argument when the size, spacing or finiteness
  // invariants do not hold.
  void validate() const;
};

struct GaussianBlob {
  Vec3 center;       // voxel coordinates
  double sigma;      // voxels, > 0
  double amplitude;
};

struct SyntheticSpec {
  std::vector<GaussianBlob> blobs;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

// Sum of isotropic Gaussian blobs evaluated at voxel centers plus optional
// Gaussian noise. Pure in (spec, dims, spacing): the noise stream is a fixed
// Box-Muller transform of a seeded mt19937_64, so the result is identical
// across runs and platforms.
VolumeGrid make_synthetic(const SyntheticSpec& spec,
                          const std::array<int, 3>& dims,
                          const Vec3& spacing = {1.0, 1.0, 1.0});

struct GridStats {
  double min;
  double max;
  double mean;
};

GridStats grid_stats(const VolumeGrid& grid);

}  // namespace flor
