#include "flor/loi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "flor/errors.hpp"
#include "flor/parallel.hpp"

namespace flor {
namespace {

double bspline3(double t) {
  const double a = std::abs(t);
  if (a < 1.0) return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
  if (a < 2.0) {
    const double b = 2.0 - a;
    return b * b * b / 6.0;
  }
  return 0.0;
}

double window_value(const ParzenWindow& w, double t) {
  if (w.kind == ParzenWindow::Kind::gaussian)
    return std::exp(-0.5 * t * t / (w.beta * w.beta));
  return bspline3(t / w.beta);
}

// Per-deposit bin weights for a sample value s, normalized to unit mass.
// Values whose window misses Lambda entirely collapse onto the nearest bin
// so no mass is ever lost.
struct Deposit {
  int b0 = 0;
  int count = 0;
  std::vector<double> w;  // scratch, reused across calls
};

void compute_deposit(const ParzenWindow& parzen, const IntensityRange& range,
                     double s, Deposit& d) {
  const double bw = range.bin_width();
  const double r = parzen.support();
  int lo = static_cast<int>(std::ceil((s - r - range.lo) / bw - 0.5));
  int hi = static_cast<int>(std::floor((s + r - range.lo) / bw - 0.5));
  lo = std::max(lo, 0);
  hi = std::min(hi, range.bins - 1);
  if (lo > hi) {
    const int nearest = std::clamp(
        static_cast<int>(std::floor((s - range.lo) / bw)), 0, range.bins - 1);
    d.b0 = nearest;
    d.count = 1;
    if (d.w.size() < 1) d.w.resize(1);
    d.w[0] = 1.0;
    return;
  }
  d.b0 = lo;
  d.count = hi - lo + 1;
  if (d.w.size() < static_cast<std::size_t>(d.count)) d.w.resize(d.count);
  double z = 0.0;
  for (int b = lo; b <= hi; ++b) {
    const double u = window_value(parzen, range.center(b) - s);
    d.w[b - lo] = u;
    z += u;
  }
  if (z <= 0.0) {
    // window sampled to zero on every covered bin center (extreme beta)
    for (int i = 0; i < d.count; ++i) d.w[i] = 1.0 / d.count;
    return;
  }
  for (int i = 0; i < d.count; ++i) d.w[i] /= z;
}

void check_parzen(const ParzenWindow& p) {
  if (!(p.beta > 0.0))
    throw std::invalid_argument("Parzen window beta must be positive");
}

void deposit_joint(const ParzenWindow& parzen, Histogram2D& h, double a,
                   double b, double weight, Deposit& da, Deposit& db) {
  compute_deposit(parzen, h.range_i, a, da);
  compute_deposit(parzen, h.range_j, b, db);
  for (int i = 0; i < da.count; ++i) {
    const double wa = weight * da.w[i];
    double* row = &h.at(da.b0 + i, db.b0);
    for (int j = 0; j < db.count; ++j) row[j] += wa * db.w[j];
  }
}

}  // namespace

double ParzenWindow::support() const {
  return (kind == Kind::gaussian ? 4.0 : 2.0) * beta;
}

IntegrationWindow IntegrationWindow::gaussian(double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("integration alpha must be positive");
  return {false, alpha};
}

void IntensityRange::validate() const {
  if (!(lo < hi)) throw std::invalid_argument("intensity range requires lo < hi");
  if (bins < 2) throw std::invalid_argument("intensity range requires bins >= 2");
}

IntensityRange IntensityRange::covering(std::span<const double> values,
                                        double beta, int bins) {
  double lo = values.empty() ? 0.0 : values[0];
  double hi = lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  IntensityRange r{lo - 4.0 * beta, hi + 4.0 * beta, bins};
  r.validate();
  return r;
}

IntensityRange IntensityRange::covering2(std::span<const double> a,
                                         std::span<const double> b,
                                         double beta, int bins) {
  double lo = a.empty() ? (b.empty() ? 0.0 : b[0]) : a[0];
  double hi = lo;
  for (double v : a) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : b) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  IntensityRange r{lo - 4.0 * beta, hi + 4.0 * beta, bins};
  r.validate();
  return r;
}

double Histogram1D::mass() const {
  double m = 0.0;
  for (double c : counts) m += c;
  return m;
}

double Histogram2D::mass() const {
  double m = 0.0;
  for (double c : counts) m += c;
  return m;
}

Histogram1D global_histogram(std::span<const double> field,
                             const ParzenWindow& parzen,
                             const IntensityRange& range) {
  check_parzen(parzen);
  range.validate();
  Histogram1D h{range, std::vector<double>(range.bins, 0.0)};

  const std::size_t n = field.size();
  const std::size_t chunk = 1 << 16;
  const std::size_t nchunks = chunk_count(n, chunk);
  if (nchunks <= 1) {
    Deposit d;
    for (double s : field) {
      compute_deposit(parzen, range, s, d);
      for (int i = 0; i < d.count; ++i) h.counts[d.b0 + i] += d.w[i];
    }
    return h;
  }
  // Per-chunk partial histograms merged in chunk order.
  std::vector<std::vector<double>> partial(
      nchunks, std::vector<double>(range.bins, 0.0));
  parallel_chunks(n, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    Deposit d;
    auto& acc = partial[c];
    for (std::size_t i = b; i < e; ++i) {
      compute_deposit(parzen, range, field[i], d);
      for (int k = 0; k < d.count; ++k) acc[d.b0 + k] += d.w[k];
    }
  });
  for (const auto& acc : partial)
    for (int b = 0; b < range.bins; ++b) h.counts[b] += acc[b];
  return h;
}

Histogram1D local_histogram(std::span<const double> field,
                            const std::array<int, 3>& dims,
                            const ParzenWindow& parzen,
                            const IntegrationWindow& integration,
                            const IntensityRange& range, const Vec3& x) {
  check_parzen(parzen);
  range.validate();
  if (integration.global)
    throw std::invalid_argument(
        "local_histogram requires a gaussian integration window");
  const double alpha = integration.alpha;
  if (static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] != field.size())
    throw std::invalid_argument("field size does not match dims");

  Histogram1D h{range, std::vector<double>(range.bins, 0.0)};
  const double r = 4.0 * alpha;
  const int x0 = std::max(0, static_cast<int>(std::ceil(x[0] - r)));
  const int x1 = std::min(dims[0] - 1, static_cast<int>(std::floor(x[0] + r)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(x[1] - r)));
  const int y1 = std::min(dims[1] - 1, static_cast<int>(std::floor(x[1] + r)));
  const int z0 = std::max(0, static_cast<int>(std::ceil(x[2] - r)));
  const int z1 = std::min(dims[2] - 1, static_cast<int>(std::floor(x[2] + r)));
  Deposit d;
  for (int z = z0; z <= z1; ++z) {
    for (int y = y0; y <= y1; ++y) {
      const std::size_t base =
          static_cast<std::size_t>(dims[0]) * (y + static_cast<std::size_t>(dims[1]) * z);
      for (int xx = x0; xx <= x1; ++xx) {
        const double dx = xx - x[0], dy = y - x[1], dz = z - x[2];
        const double dist2 = dx * dx + dy * dy + dz * dz;
        if (dist2 > r * r) continue;
        const double w = std::exp(-0.5 * dist2 / (alpha * alpha));
        compute_deposit(parzen, range, field[base + xx], d);
        for (int i = 0; i < d.count; ++i) h.counts[d.b0 + i] += w * d.w[i];
      }
    }
  }
  return h;
}

Histogram2D joint_global_histogram(std::span<const double> field_a,
                                   std::span<const double> field_b,
                                   const ParzenWindow& parzen,
                                   const IntensityRange& range_a,
                                   const IntensityRange& range_b) {
  check_parzen(parzen);
  range_a.validate();
  range_b.validate();
  if (field_a.size() != field_b.size())
    throw std::invalid_argument("joint histogram requires equal field sizes");
  Histogram2D h{range_a, range_b,
                std::vector<double>(
                    static_cast<std::size_t>(range_a.bins) * range_b.bins, 0.0)};
  Deposit da, db;
  for (std::size_t i = 0; i < field_a.size(); ++i)
    deposit_joint(parzen, h, field_a[i], field_b[i], 1.0, da, db);
  return h;
}

Histogram2D joint_lifted_histogram(const GradientField& grad_a,
                                   const GradientField& grad_b,
                                   const DirectionSet& dirs,
                                   const ParzenWindow& parzen,
                                   const IntensityRange& range_a,
                                   const IntensityRange& range_b) {
  check_parzen(parzen);
  if (grad_a.dims != grad_b.dims)
    throw std::invalid_argument("gradient fields must share dims");
  if (dirs.directions.empty())
    throw std::invalid_argument("direction set must be nonempty");
  Histogram2D h{range_a, range_b,
                std::vector<double>(
                    static_cast<std::size_t>(range_a.bins) * range_b.bins, 0.0)};
  Deposit da, db;
  for (const Vec3& v : dirs.directions) {
    const std::vector<double> la = lift(grad_a, v);
    const std::vector<double> lb = lift(grad_b, v);
    for (std::size_t i = 0; i < la.size(); ++i)
      deposit_joint(parzen, h, la[i], lb[i], 1.0, da, db);
  }
  return h;
}

Density1D normalize(const Histogram1D& hist) {
  const double m = hist.mass();
  if (!(m > 0.0)) throw std::invalid_argument("cannot normalize zero-mass histogram");
  Density1D d{hist.range, hist.counts};
  const double scale = 1.0 / (m * hist.range.bin_width());
  for (double& p : d.p) p *= scale;
  return d;
}

Density2D normalize(const Histogram2D& hist) {
  const double m = hist.mass();
  if (!(m > 0.0)) throw std::invalid_argument("cannot normalize zero-mass histogram");
  Density2D d{hist.range_i, hist.range_j, hist.counts};
  const double scale =
      1.0 / (m * hist.range_i.bin_width() * hist.range_j.bin_width());
  for (double& p : d.p) p *= scale;
  return d;
}

Histogram1D marginalize(const Histogram2D& joint, JointAxis keep) {
  const IntensityRange& range =
      keep == JointAxis::first ? joint.range_i : joint.range_j;
  Histogram1D h{range, std::vector<double>(range.bins, 0.0)};
  for (int i = 0; i < joint.range_i.bins; ++i)
    for (int j = 0; j < joint.range_j.bins; ++j)
      h.counts[keep == JointAxis::first ? i : j] += joint.at(i, j);
  return h;
}

namespace {

void write_csv_header(std::ofstream& os, const IntensityRange& r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# bins=%d lo=%.17g hi=%.17g", r.bins, r.lo,
                r.hi);
  os << buf << "\n";
}

}  // namespace

void write_histogram_csv(const Histogram1D& hist, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw IoError("cannot write " + path);
    write_csv_header(os, hist.range);
    char buf[40];
    for (double c : hist.counts) {
      std::snprintf(buf, sizeof(buf), "%.17g", c);
      os << buf << "\n";
    }
    if (!os.good()) throw IoError("failed writing " + path);
  }
  std::filesystem::rename(tmp, path);
}

void write_histogram_csv(const Histogram2D& hist, const std::string& path) {
  if (hist.range_i.lo != hist.range_j.lo || hist.range_i.hi != hist.range_j.hi ||
      hist.range_i.bins != hist.range_j.bins)
    throw std::invalid_argument(
        "2D histogram CSV requires equal axis ranges");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw IoError("cannot write " + path);
    write_csv_header(os, hist.range_i);
    char buf[40];
    for (int i = 0; i < hist.range_i.bins; ++i) {
      for (int j = 0; j < hist.range_j.bins; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", hist.at(i, j));
        os << (j ? "," : "") << buf;
      }
      os << "\n";
    }
    if (!os.good()) throw IoError("failed writing " + path);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace flor
