#include "flor/bspline.hpp"

#include <cmath>

#include "flor/kernels/simd.hpp"
#include "flor/parallel.hpp"

namespace flor {
namespace {

constexpr double kDiag = 4.0 / 6.0;
constexpr double kOff = 1.0 / 6.0;

// Thomas solve of the interpolation system along one line (zero Dirichlet
// beyond the ends).
void solve_line(double* x, int n, int stride, std::vector<double>& cp,
                std::vector<double>& dp) {
  cp.resize(n);
  dp.resize(n);
  cp[0] = kOff / kDiag;
  dp[0] = x[0] / kDiag;
  for (int i = 1; i < n; ++i) {
    const double m = kDiag - kOff * cp[i - 1];
    cp[i] = kOff / m;
    dp[i] = (x[static_cast<std::ptrdiff_t>(i) * stride] - kOff * dp[i - 1]) / m;
  }
  x[static_cast<std::ptrdiff_t>(n - 1) * stride] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    x[static_cast<std::ptrdiff_t>(i) * stride] =
        dp[i] - cp[i] * x[static_cast<std::ptrdiff_t>(i + 1) * stride];
  }
}

struct TapSetup {
  int bx, by, bz;
  double wx[4], dwx[4];
  double wy[4], dwy[4];
  double wz[4], dwz[4];
  bool any_overlap;
  bool fully_inside;
};

TapSetup setup_taps(const Vec3& p, const std::array<int, 3>& dims,
                    bool with_derivatives) {
  TapSetup t;
  const double fx = std::floor(p[0]);
  const double fy = std::floor(p[1]);
  const double fz = std::floor(p[2]);
  t.bx = static_cast<int>(fx) - 1;
  t.by = static_cast<int>(fy) - 1;
  t.bz = static_cast<int>(fz) - 1;
  if (with_derivatives) {
    bspline_weights_d(p[0] - fx, t.wx, t.dwx);
    bspline_weights_d(p[1] - fy, t.wy, t.dwy);
    bspline_weights_d(p[2] - fz, t.wz, t.dwz);
  } else {
    bspline_weights(p[0] - fx, t.wx);
    bspline_weights(p[1] - fy, t.wy);
    bspline_weights(p[2] - fz, t.wz);
  }
  t.any_overlap = t.bx + 3 >= 0 && t.bx < dims[0] && t.by + 3 >= 0 &&
                  t.by < dims[1] && t.bz + 3 >= 0 && t.bz < dims[2];
  t.fully_inside = t.bx >= 0 && t.bx + 3 < dims[0] && t.by >= 0 &&
                   t.by + 3 < dims[1] && t.bz >= 0 && t.bz + 3 < dims[2];
  return t;
}

// Gathers the 4x4x4 support with zero fill outside the grid.
void gather_block(const double* c, const std::array<int, 3>& dims,
                  const TapSetup& t, double buf[64]) {
  const std::ptrdiff_t sy = dims[0];
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(dims[0]) * dims[1];
  for (int k = 0; k < 4; ++k) {
    const int z = t.bz + k;
    for (int j = 0; j < 4; ++j) {
      const int y = t.by + j;
      double* row = buf + 16 * k + 4 * j;
      if (z < 0 || z >= dims[2] || y < 0 || y >= dims[1]) {
        row[0] = row[1] = row[2] = row[3] = 0.0;
        continue;
      }
      const double* src = c + sz * z + sy * y;
      for (int i = 0; i < 4; ++i) {
        const int x = t.bx + i;
        row[i] = (x >= 0 && x < dims[0]) ? src[x] : 0.0;
      }
    }
  }
}

double sample_value(const double* c, const std::array<int, 3>& dims,
                    const TapSetup& t) {
  const auto& kern = kernels::active_kernels();
  const std::ptrdiff_t sy = dims[0];
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(dims[0]) * dims[1];
  if (t.fully_inside) {
    const double* base = c + sz * t.bz + sy * t.by + t.bx;
    return kern.tricubic_v(base, sy, sz, t.wx, t.wy, t.wz);
  }
  if (!t.any_overlap) return 0.0;
  double buf[64];
  gather_block(c, dims, t, buf);
  return kern.tricubic_v(buf, 4, 16, t.wx, t.wy, t.wz);
}

void sample_value_grad(const double* c, const std::array<int, 3>& dims,
                       const TapSetup& t, double out[4]) {
  const auto& kern = kernels::active_kernels();
  const std::ptrdiff_t sy = dims[0];
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(dims[0]) * dims[1];
  if (t.fully_inside) {
    const double* base = c + sz * t.bz + sy * t.by + t.bx;
    kern.tricubic_vg(base, sy, sz, t.wx, t.dwx, t.wy, t.dwy, t.wz, t.dwz, out);
    return;
  }
  if (!t.any_overlap) {
    out[0] = out[1] = out[2] = out[3] = 0.0;
    return;
  }
  double buf[64];
  gather_block(c, dims, t, buf);
  kern.tricubic_vg(buf, 4, 16, t.wx, t.dwx, t.wy, t.dwy, t.wz, t.dwz, out);
}

}  // namespace

void prefilter_bspline3(std::vector<double>& data,
                        const std::array<int, 3>& dims) {
  const int nx = dims[0], ny = dims[1], nz = dims[2];
  const std::size_t nxy = static_cast<std::size_t>(nx) * ny;

  // x lines
  parallel_chunks(static_cast<std::size_t>(ny) * nz, 512,
                  [&](std::size_t, std::size_t b, std::size_t e) {
                    std::vector<double> cp, dp;
                    for (std::size_t r = b; r < e; ++r)
                      solve_line(data.data() + r * nx, nx, 1, cp, dp);
                  });
  // y lines
  parallel_chunks(static_cast<std::size_t>(nx) * nz, 512,
                  [&](std::size_t, std::size_t b, std::size_t e) {
                    std::vector<double> cp, dp;
                    for (std::size_t r = b; r < e; ++r) {
                      const std::size_t x = r % nx;
                      const std::size_t z = r / nx;
                      solve_line(data.data() + z * nxy + x, ny, nx, cp, dp);
                    }
                  });
  // z lines
  parallel_chunks(nxy, 512, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<double> cp, dp;
    for (std::size_t r = b; r < e; ++r)
      solve_line(data.data() + r, nz, static_cast<int>(nxy), cp, dp);
  });
}

SplineVolume::SplineVolume(const VolumeGrid& grid)
    : dims_(grid.dims), coeff_(grid.values) {
  prefilter_bspline3(coeff_, dims_);
}

double SplineVolume::value(const Vec3& p) const {
  const TapSetup t = setup_taps(p, dims_, false);
  return sample_value(coeff_.data(), dims_, t);
}

void SplineVolume::value_grad(const Vec3& p, double* val, Vec3* grad) const {
  const TapSetup t = setup_taps(p, dims_, true);
  double out[4];
  sample_value_grad(coeff_.data(), dims_, t, out);
  *val = out[0];
  (*grad)[0] = out[1];
  (*grad)[1] = out[2];
  (*grad)[2] = out[3];
}

SplineField3::SplineField3(const GradientField& field) : dims_(field.dims) {
  coeff_[0] = field.gx;
  coeff_[1] = field.gy;
  coeff_[2] = field.gz;
  for (auto& c : coeff_) prefilter_bspline3(c, dims_);
}

Vec3 SplineField3::value(const Vec3& p) const {
  const TapSetup t = setup_taps(p, dims_, false);
  Vec3 out;
  for (int a = 0; a < 3; ++a)
    out[a] = sample_value(coeff_[a].data(), dims_, t);
  return out;
}

void SplineField3::value_jac(const Vec3& p, Vec3* val, Mat3* jac) const {
  const TapSetup t = setup_taps(p, dims_, true);
  double out[4];
  for (int a = 0; a < 3; ++a) {
    sample_value_grad(coeff_[a].data(), dims_, t, out);
    (*val)[a] = out[0];
    (*jac)[a][0] = out[1];
    (*jac)[a][1] = out[2];
    (*jac)[a][2] = out[3];
  }
}

}  // namespace flor
