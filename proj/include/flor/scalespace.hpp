#pragma once

#include <vector>

#include "flor/volume.hpp"

namespace flor {

// 1D sampled Gaussian-family kernel in correlation form:
// out[n] = sum_k taps[k + radius] * in[n + k]. Smoothing taps are normalized
// to unit sum; the derivative taps to unit first moment (ramps map to their
// exact slope); the second-derivative taps to zero sum and second moment 2
// (quadratics map to their exact second derivative).
struct GaussianKernel1D {
  double sigma = 0.0;
  int radius = 0;
  std::vector<double> taps;

  static GaussianKernel1D smoothing(double sigma, double truncation = 4.0);
  static GaussianKernel1D derivative(double sigma, double truncation = 4.0);
  static GaussianKernel1D second_derivative(double sigma,
                                            double truncation = 4.0);
};

// Separable correlation along one axis with zero extension outside the grid.
VolumeGrid convolve_axis(const VolumeGrid& grid, const GaussianKernel1D& k,
                         int axis);

// Isotropic Gaussian smoothing (three separable passes). sigma = 0 returns
// the input unchanged. sigma is measured in voxels.
VolumeGrid gaussian_smooth(const VolumeGrid& grid, double sigma);

// Per-voxel spatial gradient of the sigma-smoothed image, stored as three
// scalar channels (units: intensity per voxel).
struct GradientField {
  std::array<int, 3> dims{0, 0, 0};
  std::vector<double> gx, gy, gz;

  std::size_t size() const { return gx.size(); }
  Vec3 at(std::size_t i) const { return {gx[i], gy[i], gz[i]}; }
};

GradientField gradient_field(const VolumeGrid& grid, double sigma);

// Directional response field: out[i] = grad(i) . v. Rejects non-unit v.
// Exactly antisymmetric in v: lift(f, -v) is the bitwise negation of
// lift(f, v).
std::vector<double> lift(const GradientField& field, const Vec3& v);

struct DirectionSet {
  std::vector<Vec3> directions;
  bool antipodally_closed = false;
};

// The 26 unit directions toward the neighbors of a voxel in a 3x3x3 block.
DirectionSet direction_set_26();

// Second-order directional probe: v^T Hess(I_sigma)(x) v per voxel.
std::vector<double> hessian_probe(const VolumeGrid& grid, double sigma,
                                  const Vec3& v);

}  // namespace flor
