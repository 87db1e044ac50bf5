#pragma once

#include <array>
#include <vector>

#include "flor/scalespace.hpp"
#include "flor/volume.hpp"

namespace flor {

// Uniform cubic B-spline basis weights at fractional offset u in [0,1),
// applied to the four samples around the query point.
inline void bspline_weights(double u, double w[4]) {
  const double v = 1.0 - u;
  w[0] = v * v * v / 6.0;
  w[1] = (4.0 - 6.0 * u * u + 3.0 * u * u * u) / 6.0;
  w[2] = (1.0 + 3.0 * u + 3.0 * u * u - 3.0 * u * u * u) / 6.0;
  w[3] = u * u * u / 6.0;
}

inline void bspline_weights_d(double u, double w[4], double dw[4]) {
  bspline_weights(u, w);
  const double v = 1.0 - u;
  dw[0] = -0.5 * v * v;
  dw[1] = 1.5 * u * u - 2.0 * u;
  dw[2] = 0.5 + u - 1.5 * u * u;
  dw[3] = 0.5 * u * u;
}

// Converts samples to interpolating cubic B-spline coefficients along each
// axis (tridiagonal solve with zero Dirichlet ends, matching the zero
// out-of-domain extension used everywhere else).
void prefilter_bspline3(std::vector<double>& data,
                        const std::array<int, 3>& dims);

// Scalar volume in coefficient form. value()/value_grad() interpolate the
// original samples; anything sampled outside the grid decays to zero within
// two voxels of the boundary (missing coefficients are zero).
class SplineVolume {
 public:
  explicit SplineVolume(const VolumeGrid& grid);

  double value(const Vec3& p) const;
  void value_grad(const Vec3& p, double* val, Vec3* grad) const;

  const std::array<int, 3>& dims() const { return dims_; }

 private:
  std::array<int, 3> dims_;
  std::vector<double> coeff_;
};

// Three-channel variant for sampling a GradientField off-grid.
class SplineField3 {
 public:
  explicit SplineField3(const GradientField& field);

  Vec3 value(const Vec3& p) const;
  // jac[a][b] = d value_a / d x_b
  void value_jac(const Vec3& p, Vec3* val, Mat3* jac) const;

  const std::array<int, 3>& dims() const { return dims_; }

 private:
  std::array<int, 3> dims_;
  std::array<std::vector<double>, 3> coeff_;
};

}  // namespace flor
