// Scalar reference kernels. These define the semantics the SIMD variants are
// tested against.

#include "flor/kernels/simd.hpp"

namespace flor::kernels {
namespace {

void axpy_scalar(double* dst, const double* src, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a * src[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double ssd_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void lift_dot_scalar(const double* gx, const double* gy, const double* gz,
                     double vx, double vy, double vz, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = gx[i] * vx + gy[i] * vy + gz[i] * vz;
}

void tricubic_vg_scalar(const double* base, std::ptrdiff_t sy,
                        std::ptrdiff_t sz, const double* wx, const double* dwx,
                        const double* wy, const double* dwy, const double* wz,
                        const double* dwz, double out[4]) {
  double v = 0.0, gx = 0.0, gy = 0.0, gz = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double* slice = base + k * sz;
    double sv = 0.0, sgx = 0.0, sgy = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double* row = slice + j * sy;
      double r = 0.0, rx = 0.0;
      for (int i = 0; i < 4; ++i) {
        r += row[i] * wx[i];
        rx += row[i] * dwx[i];
      }
      sv += r * wy[j];
      sgx += rx * wy[j];
      sgy += r * dwy[j];
    }
    v += sv * wz[k];
    gx += sgx * wz[k];
    gy += sgy * wz[k];
    gz += sv * dwz[k];
  }
  out[0] = v;
  out[1] = gx;
  out[2] = gy;
  out[3] = gz;
}

double tricubic_v_scalar(const double* base, std::ptrdiff_t sy,
                         std::ptrdiff_t sz, const double* wx, const double* wy,
                         const double* wz) {
  double v = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double* slice = base + k * sz;
    double sv = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double* row = slice + j * sy;
      double r = 0.0;
      for (int i = 0; i < 4; ++i) r += row[i] * wx[i];
      sv += r * wy[j];
    }
    v += sv * wz[k];
  }
  return v;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table = {
      "scalar",          axpy_scalar,        dot_scalar,
      sum_scalar,        ssd_scalar,         lift_dot_scalar,
      tricubic_vg_scalar, tricubic_v_scalar,
  };
  return table;
}

}  // namespace flor::kernels
