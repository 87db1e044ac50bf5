#pragma once

#include <span>
#include <string>
#include <vector>

#include "flor/scalespace.hpp"
#include "flor/volume.hpp"

namespace flor {

// Parzen window smearing a sample's intensity into the histogram. beta is
// the intensity scale. Every deposit is renormalized to carry exactly unit
// mass, so total histogram mass equals the number of deposits even when the
// bin range clips the window.
struct ParzenWindow {
  enum class Kind { gaussian, bspline3 };
  Kind kind = Kind::gaussian;
  double beta = 0.0;

  // support radius in intensity units (4*beta Gaussian, 2*beta bspline3)
  double support() const;
};

// Spatial localization window W_alpha; `global` drops localization entirely
// (the alpha -> infinity limit).
struct IntegrationWindow {
  bool global = true;
  double alpha = 0.0;

  static IntegrationWindow make_global() { return {true, 0.0}; }
  static IntegrationWindow gaussian(double alpha);
};

// Discretized intensity interval Lambda.
struct IntensityRange {
  double lo = 0.0;
  double hi = 1.0;
  int bins = 64;

  double bin_width() const { return (hi - lo) / bins; }
  double center(int b) const { return lo + (b + 0.5) * bin_width(); }
  void validate() const;

  // [min - 4*beta, max + 4*beta] over the samples. For constant inputs the
  // range degenerates, so a unit interval around the value is used instead.
  static IntensityRange covering(std::span<const double> values, double beta,
                                 int bins);
  static IntensityRange covering2(std::span<const double> a,
                                  std::span<const double> b, double beta,
                                  int bins);
};

// Histograms store mass per bin (voxel-volume units): the counts of one
// deposit sum to 1.
struct Histogram1D {
  IntensityRange range;
  std::vector<double> counts;

  double mass() const;
};

struct Histogram2D {
  IntensityRange range_i;
  IntensityRange range_j;
  std::vector<double> counts;  // bins_i x bins_j, j fastest

  double mass() const;
  double& at(int bi, int bj) { return counts[bi * range_j.bins + bj]; }
  double at(int bi, int bj) const { return counts[bi * range_j.bins + bj]; }
};

// Densities are continuous pdf values at bin centers:
// sum(p) * bin_width(s) = 1.
struct Density1D {
  IntensityRange range;
  std::vector<double> p;
};

struct Density2D {
  IntensityRange range_i;
  IntensityRange range_j;
  std::vector<double> p;

  double at(int bi, int bj) const { return p[bi * range_j.bins + bj]; }
};

Histogram1D global_histogram(std::span<const double> field,
                             const ParzenWindow& parzen,
                             const IntensityRange& range);

// Histogram of the values around position x (continuous voxel coordinates),
// weighted by a Gaussian W_alpha truncated at 4*alpha. Requires a gaussian
// integration window.
Histogram1D local_histogram(std::span<const double> field,
                            const std::array<int, 3>& dims,
                            const ParzenWindow& parzen,
                            const IntegrationWindow& integration,
                            const IntensityRange& range, const Vec3& x);

Histogram2D joint_global_histogram(std::span<const double> field_a,
                                   std::span<const double> field_b,
                                   const ParzenWindow& parzen,
                                   const IntensityRange& range_a,
                                   const IntensityRange& range_b);

// Pooled joint histogram of the two lifted images over all directions:
// each direction contributes the joint histogram of the directional
// responses. Total mass is size * |dirs|.
Histogram2D joint_lifted_histogram(const GradientField& grad_a,
                                   const GradientField& grad_b,
                                   const DirectionSet& dirs,
                                   const ParzenWindow& parzen,
                                   const IntensityRange& range_a,
                                   const IntensityRange& range_b);

Density1D normalize(const Histogram1D& hist);
Density2D normalize(const Histogram2D& hist);

enum class JointAxis { first, second };

// Sum over the discarded axis; the marginal of a joint deposit equals the
// 1D deposit exactly, so marginalize(joint(A,B), first) matches
// global_histogram(A) up to floating-point reordering.
Histogram1D marginalize(const Histogram2D& joint, JointAxis keep);

// CSV dump: "# bins=<B> lo=<lo> hi=<hi>", then one count per line (1D) or
// B comma-separated counts per line, one line per i-bin (2D, requires equal
// axis ranges).
void write_histogram_csv(const Histogram1D& hist, const std::string& path);
void write_histogram_csv(const Histogram2D& hist, const std::string& path);

}  // namespace flor
