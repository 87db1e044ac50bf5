#pragma once

#include <cstddef>
#include <string>

namespace flor::kernels {

// Inner-loop primitives behind the volume filters, reductions and cubic
// interpolation. A scalar reference implementation always exists; on x86-64
// an AVX2+FMA variant is compiled separately and selected at runtime when the
// CPU supports it. The FLOR_SIMD environment variable ("auto", "scalar",
// "avx2") or select_kernels() overrides the choice, mainly for the
// equivalence tests.
struct KernelTable {
  const char* name;

  // dst[i] += a * src[i]
  void (*axpy)(double* dst, const double* src, double a, std::size_t n);

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);

  // sum of squared differences
  double (*ssd)(const double* a, const double* b, std::size_t n);

  // out[i] = gx[i]*vx + gy[i]*vy + gz[i]*vz
  void (*lift_dot)(const double* gx, const double* gy, const double* gz,
                   double vx, double vy, double vz, double* out,
                   std::size_t n);

  // Cubic tensor-product sample of the 4x4x4 coefficient block at `base`
  // (x contiguous, row stride sy, slice stride sz). tricubic_vg writes the
  // value and the three partials with respect to the index coordinates into
  // out[0..3]; tricubic_v returns the value only. The caller guarantees the
  // whole block is addressable.
  void (*tricubic_vg)(const double* base, std::ptrdiff_t sy, std::ptrdiff_t sz,
                      const double* wx, const double* dwx, const double* wy,
                      const double* dwy, const double* wz, const double* dwz,
                      double out[4]);
  double (*tricubic_v)(const double* base, std::ptrdiff_t sy,
                       std::ptrdiff_t sz, const double* wx, const double* wy,
                       const double* wz);
};

const KernelTable& scalar_kernels();

// Null when this build or CPU cannot run AVX2+FMA.
const KernelTable* avx2_kernels();

const KernelTable& active_kernels();

// name: "auto", "scalar" or "avx2"; throws std::invalid_argument for unknown
// names and std::runtime_error when a forced variant is unavailable.
void select_kernels(const std::string& name);

}  // namespace flor::kernels
