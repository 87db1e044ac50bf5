#pragma once

#include <string>
#include <variant>
#include <vector>

#include "flor/bspline.hpp"
#include "flor/errors.hpp"
#include "flor/scalespace.hpp"
#include "flor/volume.hpp"

namespace flor {

// All transform coordinates are continuous voxel-index coordinates.

struct Translation {
  Vec3 t{0.0, 0.0, 0.0};
};

// Displacement-parameterized cubic B-spline free-form deformation:
// phi(x) = x + sum_c B(x/h - c) d_c. The control lattice covers the image
// domain plus one knot of margin on each side; control c sits at
// (c - 1) * knot_spacing per axis. Missing controls act as zero
// displacement, so phi tapers to the identity outside the lattice.
struct BSplineFFD {
  double knot_spacing = 5.0;
  std::array<int, 3> lattice_dims{0, 0, 0};
  std::array<int, 3> domain_dims{0, 0, 0};
  std::vector<double> displacements;  // 3 per control point, x-fastest lattice

  static BSplineFFD for_domain(const std::array<int, 3>& domain_dims,
                               double knot_spacing);

  std::size_t control_count() const {
    return static_cast<std::size_t>(lattice_dims[0]) * lattice_dims[1] *
           lattice_dims[2];
  }

  std::size_t control_index(int cx, int cy, int cz) const {
    return static_cast<std::size_t>(cx) +
           static_cast<std::size_t>(lattice_dims[0]) *
               (static_cast<std::size_t>(cy) +
                static_cast<std::size_t>(lattice_dims[1]) *
                    static_cast<std::size_t>(cz));
  }

  void validate() const;
};

using Transform = std::variant<Translation, BSplineFFD>;

struct DegenerateDirectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vec3 apply(const Transform& xf, const Vec3& x);

// Analytic spatial Jacobian of phi at x (identity for translations).
Mat3 jacobian(const Transform& xf, const Vec3& x);

// Push-forward of a direction: J phi(v) / |J phi(v)|. Throws
// DegenerateDirectionError when |J phi(v)| < eps.
Vec3 map_direction(const Transform& xf, const Vec3& x, const Vec3& v,
                   double eps = 1e-8);

enum class ActionMode { scaled, unscaled };

// Transformed lifted image sampled at (x, v): the moving gradient field is
// interpolated at phi(x) along the transported direction, multiplied by
// |J phi(v)| in scaled mode.
double act_on_lifted(const Transform& xf, const SplineField3& grad_moving,
                     const Vec3& x, const Vec3& v, ActionMode mode);
double act_on_lifted(const Transform& xf, const GradientField& grad_moving,
                     const Vec3& x, const Vec3& v, ActionMode mode);

// Fixed-grid pullback: out(x) = moving(phi(x)) via prefiltered cubic
// interpolation, zero outside the extended support.
VolumeGrid resample(const VolumeGrid& moving, const Transform& xf);

// Per-component clamp of control displacements to [-max_disp, max_disp].
BSplineFFD clamp_control_points(BSplineFFD ffd, double max_disp);

// Structured-text (JSON) transform files; doubles round-trip exactly.
void save_transform(const Transform& xf, const std::string& path);
Transform load_transform(const std::string& path);

// Flat parameter view used by the optimizer (3 components per control point
// for FFDs, the translation vector otherwise).
std::size_t parameter_count(const Transform& xf);
std::vector<double> parameters(const Transform& xf);
Transform with_parameters(const Transform& like, std::vector<double> params);

}  // namespace flor
