#include "flor/scalespace.hpp"

#include <cmath>
#include <stdexcept>

#include "flor/kernels/simd.hpp"
#include "flor/parallel.hpp"

namespace flor {
namespace {

int kernel_radius(double sigma, double truncation) {
  return std::max(1, static_cast<int>(std::ceil(truncation * sigma)));
}

constexpr double kUnitTol = 1e-9;

void require_unit(const Vec3& v) {
  if (std::abs(norm(v) - 1.0) > kUnitTol)
    throw std::invalid_argument("direction must be a unit vector");
}

}  // namespace

GaussianKernel1D GaussianKernel1D::smoothing(double sigma, double truncation) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  GaussianKernel1D k;
  k.sigma = sigma;
  k.radius = kernel_radius(sigma, truncation);
  k.taps.resize(2 * k.radius + 1);
  double sum = 0.0;
  for (int j = -k.radius; j <= k.radius; ++j) {
    const double w = std::exp(-0.5 * j * j / (sigma * sigma));
    k.taps[j + k.radius] = w;
    sum += w;
  }
  for (double& w : k.taps) w /= sum;
  return k;
}

GaussianKernel1D GaussianKernel1D::derivative(double sigma, double truncation) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  GaussianKernel1D k;
  k.sigma = sigma;
  k.radius = kernel_radius(sigma, truncation);
  k.taps.resize(2 * k.radius + 1);
  // Antisymmetric by construction (zero sum); scaled so a ramp of slope a
  // responds exactly a: sum_j j*taps[j] = 1.
  double moment = 0.0;
  for (int j = 1; j <= k.radius; ++j)
    moment += 2.0 * j * j * std::exp(-0.5 * j * j / (sigma * sigma));
  for (int j = -k.radius; j <= k.radius; ++j)
    k.taps[j + k.radius] = j * std::exp(-0.5 * j * j / (sigma * sigma)) / moment;
  return k;
}

GaussianKernel1D GaussianKernel1D::second_derivative(double sigma,
                                                     double truncation) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  GaussianKernel1D k;
  k.sigma = sigma;
  k.radius = kernel_radius(sigma, truncation);
  const int n = 2 * k.radius + 1;
  std::vector<double> base(n);
  double s0 = 0.0, s2 = 0.0, k2 = 0.0;
  for (int j = -k.radius; j <= k.radius; ++j) {
    const double g = std::exp(-0.5 * j * j / (sigma * sigma));
    base[j + k.radius] = (j * j / (sigma * sigma) - 1.0) * g / (sigma * sigma);
    s0 += base[j + k.radius];
    s2 += j * j * base[j + k.radius];
    k2 += static_cast<double>(j) * j;
  }
  // Correct to zero sum and second moment 2 by taps = a*base + b, keeping
  // the symmetry (first moment stays 0). Constants go to exactly 0 and
  // quadratics to their exact second derivative.
  const double a = 2.0 / (s2 - s0 * k2 / n);
  const double b = -a * s0 / n;
  k.taps.resize(n);
  for (int i = 0; i < n; ++i) k.taps[i] = a * base[i] + b;
  return k;
}

VolumeGrid convolve_axis(const VolumeGrid& grid, const GaussianKernel1D& k,
                         int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0..2");
  const int nx = grid.dims[0], ny = grid.dims[1], nz = grid.dims[2];
  const int r = k.radius;
  VolumeGrid out = grid;
  std::fill(out.values.begin(), out.values.end(), 0.0);
  const auto& kern = kernels::active_kernels();
  const double* in = grid.values.data();
  double* dst = out.values.data();
  const std::size_t rows = static_cast<std::size_t>(ny) * nz;

  // Each output row is written by exactly one task, so the result does not
  // depend on the worker count.
  parallel_chunks(rows, 256, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t row = b; row < e; ++row) {
      const int y = static_cast<int>(row % ny);
      const int z = static_cast<int>(row / ny);
      const std::size_t base = grid.index(0, y, z);
      if (axis == 0) {
        for (int t = -r; t <= r; ++t) {
          const double w = k.taps[t + r];
          const int x0 = std::max(0, -t);
          const int x1 = std::min(nx, nx - t);
          if (x1 > x0)
            kern.axpy(dst + base + x0, in + base + x0 + t, w,
                      static_cast<std::size_t>(x1 - x0));
        }
      } else if (axis == 1) {
        for (int t = -r; t <= r; ++t) {
          const int ys = y + t;
          if (ys < 0 || ys >= ny) continue;
          kern.axpy(dst + base, in + grid.index(0, ys, z), k.taps[t + r],
                    static_cast<std::size_t>(nx));
        }
      } else {
        for (int t = -r; t <= r; ++t) {
          const int zs = z + t;
          if (zs < 0 || zs >= nz) continue;
          kern.axpy(dst + base, in + grid.index(0, y, zs), k.taps[t + r],
                    static_cast<std::size_t>(nx));
        }
      }
    }
  });
  return out;
}

VolumeGrid gaussian_smooth(const VolumeGrid& grid, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  if (sigma == 0.0) return grid;
  const GaussianKernel1D k = GaussianKernel1D::smoothing(sigma);
  VolumeGrid out = convolve_axis(grid, k, 0);
  out = convolve_axis(out, k, 1);
  out = convolve_axis(out, k, 2);
  return out;
}

GradientField gradient_field(const VolumeGrid& grid, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const GaussianKernel1D g = GaussianKernel1D::smoothing(sigma);
  const GaussianKernel1D d = GaussianKernel1D::derivative(sigma);
  GradientField f;
  f.dims = grid.dims;
  {
    VolumeGrid t = convolve_axis(grid, d, 0);
    t = convolve_axis(t, g, 1);
    t = convolve_axis(t, g, 2);
    f.gx = std::move(t.values);
  }
  {
    VolumeGrid t = convolve_axis(grid, g, 0);
    t = convolve_axis(t, d, 1);
    t = convolve_axis(t, g, 2);
    f.gy = std::move(t.values);
  }
  {
    VolumeGrid t = convolve_axis(grid, g, 0);
    t = convolve_axis(t, g, 1);
    t = convolve_axis(t, d, 2);
    f.gz = std::move(t.values);
  }
  return f;
}

std::vector<double> lift(const GradientField& field, const Vec3& v) {
  require_unit(v);
  std::vector<double> out(field.size());
  kernels::active_kernels().lift_dot(field.gx.data(), field.gy.data(),
                                     field.gz.data(), v[0], v[1], v[2],
                                     out.data(), out.size());
  return out;
}

DirectionSet direction_set_26() {
  DirectionSet set;
  set.directions.reserve(26);
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        set.directions.push_back(
            normalized(Vec3{static_cast<double>(dx), static_cast<double>(dy),
                            static_cast<double>(dz)}));
      }
  set.antipodally_closed = true;
  return set;
}

std::vector<double> hessian_probe(const VolumeGrid& grid, double sigma,
                                  const Vec3& v) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  require_unit(v);
  const GaussianKernel1D g = GaussianKernel1D::smoothing(sigma);
  const GaussianKernel1D d1 = GaussianKernel1D::derivative(sigma);
  const GaussianKernel1D d2 = GaussianKernel1D::second_derivative(sigma);

  auto second_partial = [&](int a, int b) {
    VolumeGrid t = grid;
    for (int axis = 0; axis < 3; ++axis) {
      const GaussianKernel1D* k = &g;
      if (axis == a && axis == b)
        k = &d2;
      else if (axis == a || axis == b)
        k = &d1;
      t = convolve_axis(t, *k, axis);
    }
    return t.values;
  };

  std::vector<double> out(grid.size(), 0.0);
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      const double coef = (a == b) ? v[a] * v[a] : 2.0 * v[a] * v[b];
      if (coef == 0.0) continue;
      const std::vector<double> hab = second_partial(a, b);
      kernels::active_kernels().axpy(out.data(), hab.data(), coef, out.size());
    }
  }
  return out;
}

}  // namespace flor
