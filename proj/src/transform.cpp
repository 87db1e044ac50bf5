#include "flor/transform.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "flor/parallel.hpp"
#include "json.hpp"

namespace flor {

using nlohmann::json;

BSplineFFD BSplineFFD::for_domain(const std::array<int, 3>& domain_dims,
                                  double knot_spacing) {
  if (!(knot_spacing > 0.0))
    throw std::invalid_argument("knot_spacing must be positive");
  if (domain_dims[0] <= 0 || domain_dims[1] <= 0 || domain_dims[2] <= 0)
    throw std::invalid_argument("domain dims must be positive");
  BSplineFFD f;
  f.knot_spacing = knot_spacing;
  f.domain_dims = domain_dims;
  for (int a = 0; a < 3; ++a) {
    const double extent = domain_dims[a] - 1;
    f.lattice_dims[a] = static_cast<int>(std::floor(extent / knot_spacing)) + 4;
  }
  f.displacements.assign(3 * f.control_count(), 0.0);
  return f;
}

void BSplineFFD::validate() const {
  if (!(knot_spacing > 0.0))
    throw std::invalid_argument("knot_spacing must be positive");
  if (lattice_dims[0] < 4 || lattice_dims[1] < 4 || lattice_dims[2] < 4)
    throw std::invalid_argument("lattice must be at least 4 controls per axis");
  if (displacements.size() != 3 * control_count())
    throw std::invalid_argument("displacement count does not match lattice");
  for (double d : displacements)
    if (!std::isfinite(d))
      throw std::invalid_argument("non-finite control displacement");
}

namespace {

struct FfdSupport {
  int base[3];
  double w[3][4];
  double dw[3][4];  // with respect to the index coordinate (1/h applied)
};

FfdSupport ffd_support(const BSplineFFD& f, const Vec3& x, bool with_d) {
  FfdSupport s;
  for (int a = 0; a < 3; ++a) {
    const double u = x[a] / f.knot_spacing;
    const double fu = std::floor(u);
    s.base[a] = static_cast<int>(fu);
    if (with_d) {
      bspline_weights_d(u - fu, s.w[a], s.dw[a]);
      for (int l = 0; l < 4; ++l) s.dw[a][l] /= f.knot_spacing;
    } else {
      bspline_weights(u - fu, s.w[a]);
    }
  }
  return s;
}

}  // namespace

Vec3 apply(const Transform& xf, const Vec3& x) {
  if (const auto* t = std::get_if<Translation>(&xf)) return x + t->t;
  const auto& f = std::get<BSplineFFD>(xf);
  const FfdSupport s = ffd_support(f, x, false);
  Vec3 disp{0.0, 0.0, 0.0};
  for (int n = 0; n < 4; ++n) {
    const int cz = s.base[2] + n;
    if (cz < 0 || cz >= f.lattice_dims[2]) continue;
    for (int m = 0; m < 4; ++m) {
      const int cy = s.base[1] + m;
      if (cy < 0 || cy >= f.lattice_dims[1]) continue;
      const double wyz = s.w[1][m] * s.w[2][n];
      for (int l = 0; l < 4; ++l) {
        const int cx = s.base[0] + l;
        if (cx < 0 || cx >= f.lattice_dims[0]) continue;
        const double wt = s.w[0][l] * wyz;
        const double* d = &f.displacements[3 * f.control_index(cx, cy, cz)];
        disp[0] += wt * d[0];
        disp[1] += wt * d[1];
        disp[2] += wt * d[2];
      }
    }
  }
  return x + disp;
}

Mat3 jacobian(const Transform& xf, const Vec3& x) {
  if (std::holds_alternative<Translation>(xf)) return identity3();
  const auto& f = std::get<BSplineFFD>(xf);
  const FfdSupport s = ffd_support(f, x, true);
  Mat3 j = identity3();
  for (int n = 0; n < 4; ++n) {
    const int cz = s.base[2] + n;
    if (cz < 0 || cz >= f.lattice_dims[2]) continue;
    for (int m = 0; m < 4; ++m) {
      const int cy = s.base[1] + m;
      if (cy < 0 || cy >= f.lattice_dims[1]) continue;
      for (int l = 0; l < 4; ++l) {
        const int cx = s.base[0] + l;
        if (cx < 0 || cx >= f.lattice_dims[0]) continue;
        const double gw[3] = {s.dw[0][l] * s.w[1][m] * s.w[2][n],
                              s.w[0][l] * s.dw[1][m] * s.w[2][n],
                              s.w[0][l] * s.w[1][m] * s.dw[2][n]};
        const double* d = &f.displacements[3 * f.control_index(cx, cy, cz)];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) j[a][b] += d[a] * gw[b];
      }
    }
  }
  return j;
}

Vec3 map_direction(const Transform& xf, const Vec3& x, const Vec3& v,
                   double eps) {
  const Mat3 j = jacobian(xf, x);
  const Vec3 w = matvec(j, v);
  const double n = norm(w);
  if (!(n > eps))
    throw DegenerateDirectionError(
        "|J phi(v)| below threshold: direction collapses under the transform");
  return {w[0] / n, w[1] / n, w[2] / n};
}

double act_on_lifted(const Transform& xf, const SplineField3& grad_moving,
                     const Vec3& x, const Vec3& v, ActionMode mode) {
  const Mat3 j = jacobian(xf, x);
  const Vec3 w = matvec(j, v);
  const double n = norm(w);
  if (!(n > 1e-8))
    throw DegenerateDirectionError(
        "|J phi(v)| below threshold: direction collapses under the transform");
  const Vec3 u{w[0] / n, w[1] / n, w[2] / n};
  const Vec3 g = grad_moving.value(apply(xf, x));
  const double r = dot(g, u);
  return mode == ActionMode::scaled ? n * r : r;
}

double act_on_lifted(const Transform& xf, const GradientField& grad_moving,
                     const Vec3& x, const Vec3& v, ActionMode mode) {
  return act_on_lifted(xf, SplineField3(grad_moving), x, v, mode);
}

VolumeGrid resample(const VolumeGrid& moving, const Transform& xf) {
  const SplineVolume spline(moving);
  VolumeGrid out = moving;
  const int nx = moving.dims[0], ny = moving.dims[1];
  parallel_chunks(
      moving.size(), 1 << 14, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          const int x = static_cast<int>(i % nx);
          const int y = static_cast<int>((i / nx) % ny);
          const int z = static_cast<int>(i / (static_cast<std::size_t>(nx) * ny));
          const Vec3 p = apply(xf, {static_cast<double>(x),
                                    static_cast<double>(y),
                                    static_cast<double>(z)});
          out.values[i] = spline.value(p);
        }
      });
  return out;
}

BSplineFFD clamp_control_points(BSplineFFD ffd, double max_disp) {
  if (!(max_disp > 0.0))
    throw std::invalid_argument("max_disp must be positive");
  for (double& d : ffd.displacements) d = std::clamp(d, -max_disp, max_disp);
  return ffd;
}

void save_transform(const Transform& xf, const std::string& path) {
  json doc;
  if (const auto* t = std::get_if<Translation>(&xf)) {
    doc["kind"] = "translation";
    doc["t"] = t->t;
  } else {
    const auto& f = std::get<BSplineFFD>(xf);
    doc["kind"] = "bspline_ffd";
    doc["knot_spacing"] = f.knot_spacing;
    doc["lattice_dims"] = f.lattice_dims;
    doc["domain_dims"] = f.domain_dims;
    doc["displacements"] = f.displacements;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw IoError("cannot write " + path);
    os << doc.dump(2) << "\n";
    if (!os.good()) throw IoError("failed writing " + path);
  }
  std::filesystem::rename(tmp, path);
}

Transform load_transform(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  json doc;
  try {
    is >> doc;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "translation") {
      Translation t;
      t.t = doc.at("t").get<Vec3>();
      return t;
    }
    if (kind == "bspline_ffd") {
      BSplineFFD f;
      f.knot_spacing = doc.at("knot_spacing").get<double>();
      f.lattice_dims = doc.at("lattice_dims").get<std::array<int, 3>>();
      f.domain_dims = doc.at("domain_dims").get<std::array<int, 3>>();
      f.displacements = doc.at("displacements").get<std::vector<double>>();
      f.validate();
      return f;
    }
    throw IoError(path + ": unknown transform kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::size_t parameter_count(const Transform& xf) {
  if (std::holds_alternative<Translation>(xf)) return 3;
  return std::get<BSplineFFD>(xf).displacements.size();
}

std::vector<double> parameters(const Transform& xf) {
  if (const auto* t = std::get_if<Translation>(&xf))
    return {t->t[0], t->t[1], t->t[2]};
  return std::get<BSplineFFD>(xf).displacements;
}

Transform with_parameters(const Transform& like, std::vector<double> params) {
  if (params.size() != parameter_count(like))
    throw std::invalid_argument("parameter count mismatch");
  if (std::holds_alternative<Translation>(like))
    return Translation{Vec3{params[0], params[1], params[2]}};
  BSplineFFD f = std::get<BSplineFFD>(like);
  f.displacements = std::move(params);
  return f;
}

}  // namespace flor
