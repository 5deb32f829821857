#include "hbsdr/assembly.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hbsdr {

GaussRule gauss_legendre(int q) {
  if (q < 1) throw std::invalid_argument("quadrature point count must be positive");
  GaussRule g;
  g.node.resize(q);
  g.weight.resize(q);
  for (int i = 0; i < q; ++i) {
    // root i of the degree-q Legendre polynomial (descending), then Newton
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    // recompute the derivative at the converged root for the weight
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
    }
    // store ascending, mapped to [0,1]
    g.node[q - 1 - i] = 0.5 * (x + 1.0);
    g.weight[q - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

namespace {

struct PointSet {
  std::vector<double> x, y;
};

// One active basis function sampled at a fixed set of parametric points.
struct Shape {
  int gidx = 0;
  int comp = 0;
  double pull = 1.0;                // component pullback factor
  std::vector<double> val, d1, d2;  // parametric value and derivatives per node
};

// Curry-Schoenberg weights (as doubles) for every reduced direction.
struct CurryCache {
  // [l][k][c][dir]; empty vector in full-degree directions
  std::vector<std::array<std::vector<std::array<std::vector<double>, 2>>, 3>> lv;
};

CurryCache build_curry_cache(const LevelLadder& lad) {
  CurryCache cc;
  cc.lv.resize(lad.level.size());
  for (size_t l = 0; l < lad.level.size(); ++l)
    for (int k = 0; k < 3; ++k) {
      const FormSpace& fs = lad.level[l].x[k];
      cc.lv[l][k].resize(fs.comps.size());
      for (size_t c = 0; c < fs.comps.size(); ++c)
        for (int d = 0; d < 2; ++d) {
          const FormComponent& fc = fs.comps[c];
          if (fc.full[d]) continue;
          std::vector<Rational> w = curry_schoenberg_weights(fc.kv[d]);
          std::vector<double>& out = cc.lv[l][k][c][d];
          out.reserve(w.size());
          for (const Rational& r : w) out.push_back(r.to_double());
        }
    }
  return cc;
}

struct DirTable {
  int first = 0;
  std::vector<double> v, d;  // node-major windows: [node * (deg+1) + a]
};

DirTable eval_dir(const KnotVector& kv, const std::vector<double>& coords,
                  const std::vector<double>* curry) {
  DirTable t;
  const int w = kv.degree + 1;
  t.v.resize(coords.size() * w);
  t.d.resize(coords.size() * w);
  for (size_t n = 0; n < coords.size(); ++n) {
    BasisEval be = eval_basis(kv, coords[n], 1);
    if (n == 0)
      t.first = be.first;
    else if (be.first != t.first)
      throw std::logic_error("quadrature nodes straddle a knot span");
    for (int a = 0; a < w; ++a) {
      double s = curry ? (*curry)[be.first + a] : 1.0;
      t.v[n * w + a] = be.ders[0][a] * s;
      t.d[n * w + a] = be.ders[1][a] * s;
    }
  }
  return t;
}

// All active functions of levels <= top_level sampled at the given points.
std::vector<Shape> shapes_at(const AssemblyContext& ctx, const CurryCache& cc, int k,
                             int top_level, const PointSet& pts) {
  const LevelLadder& lad = *ctx.lad;
  const ActiveSets& act = *ctx.act;
  const size_t nn = pts.x.size();
  std::vector<Shape> out;
  for (int l = 0; l <= top_level; ++l) {
    const FormSpace& fs = lad.level[l].x[k];
    for (size_t c = 0; c < fs.comps.size(); ++c) {
      const FormComponent& fc = fs.comps[c];
      const std::vector<double>* cw0 = fc.full[0] ? nullptr : &cc.lv[l][k][c][0];
      const std::vector<double>* cw1 = fc.full[1] ? nullptr : &cc.lv[l][k][c][1];
      DirTable t1 = eval_dir(fc.kv[0], pts.x, cw0);
      DirTable t2 = eval_dir(fc.kv[1], pts.y, cw1);
      const int w1 = fc.kv[0].degree + 1, w2 = fc.kv[1].degree + 1;
      double pull = 1.0;
      for (int d = 0; d < 2; ++d)
        if (!fc.full[d]) pull /= ctx.geom.scale[d];
      for (int a2 = 0; a2 < w2; ++a2)
        for (int a1 = 0; a1 < w1; ++a1) {
          int g = act.global_index(k, l, static_cast<int>(c), t1.first + a1, t2.first + a2);
          if (g < 0) continue;
          Shape s;
          s.gidx = g;
          s.comp = static_cast<int>(c);
          s.pull = pull;
          s.val.resize(nn);
          s.d1.resize(nn);
          s.d2.resize(nn);
          for (size_t n = 0; n < nn; ++n) {
            double b1 = t1.v[n * w1 + a1], b2 = t2.v[n * w2 + a2];
            s.val[n] = b1 * b2;
            s.d1[n] = t1.d[n * w1 + a1] * b2;
            s.d2[n] = b1 * t2.d[n * w2 + a2];
          }
          out.push_back(std::move(s));
        }
    }
  }
  return out;
}

int rule_points(const AssemblyContext& ctx) {
  return std::max(ctx.lad->degree[0], ctx.lad->degree[1]) + 1 + ctx.quad_extra;
}

void check_ctx(const AssemblyContext& ctx) {
  if (ctx.lad == nullptr || ctx.act == nullptr)
    throw std::invalid_argument("assembly context is missing the ladder or active sets");
  if (ctx.geom.scale[0] <= 0.0 || ctx.geom.scale[1] <= 0.0)
    throw std::invalid_argument("geometry scales must be positive");
}

struct ElemQuad {
  PointSet pts;
  std::vector<double> w;  // parametric area weights per node
};

ElemQuad element_quad(const AssemblyContext& ctx, const GaussRule& g, const HierElement& el) {
  const LevelLadder& lad = *ctx.lad;
  const int n1 = lad.base_elements[0] << el.level, n2 = lad.base_elements[1] << el.level;
  const double h1 = 1.0 / n1, h2 = 1.0 / n2;
  const double a1 = el.e1 * h1, a2 = el.e2 * h2;
  const int q = static_cast<int>(g.node.size());
  ElemQuad eq;
  eq.pts.x.resize(static_cast<size_t>(q) * q);
  eq.pts.y.resize(static_cast<size_t>(q) * q);
  eq.w.resize(static_cast<size_t>(q) * q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < q; ++i) {
      size_t n = static_cast<size_t>(j) * q + i;
      eq.pts.x[n] = a1 + h1 * g.node[i];
      eq.pts.y[n] = a2 + h2 * g.node[j];
      eq.w[n] = (g.weight[i] * h1) * (g.weight[j] * h2);
    }
  return eq;
}

struct FacetQuad {
  PointSet pts;
  std::vector<double> w;  // parametric length weights along the facet
  int nd = 0;             // normal direction
  int side = 0;           // 0: x=0, 1: x=1, 2: y=0, 3: y=1
  double nx = 0, ny = 0;  // outward unit normal
  double hF = 0;          // physical extent of the owning element normal to the facet
};

// Facets of this element lying on the domain boundary.
std::vector<FacetQuad> boundary_facets(const AssemblyContext& ctx, const GaussRule& g,
                                       const HierElement& el) {
  const LevelLadder& lad = *ctx.lad;
  const int n1 = lad.base_elements[0] << el.level, n2 = lad.base_elements[1] << el.level;
  const double h1 = 1.0 / n1, h2 = 1.0 / n2;
  std::vector<FacetQuad> out;
  auto add = [&](int side) {
    FacetQuad f;
    f.side = side;
    f.nd = side < 2 ? 0 : 1;
    const int td = 1 - f.nd;
    const double ht = td == 0 ? h1 : h2;
    const double at = td == 0 ? el.e1 * h1 : el.e2 * h2;
    const double ncoord = (side == 0 || side == 2) ? 0.0 : 1.0;
    const int q = static_cast<int>(g.node.size());
    f.pts.x.resize(q);
    f.pts.y.resize(q);
    f.w.resize(q);
    for (int i = 0; i < q; ++i) {
      double t = at + ht * g.node[i];
      f.pts.x[i] = f.nd == 0 ? ncoord : t;
      f.pts.y[i] = f.nd == 0 ? t : ncoord;
      f.w[i] = g.weight[i] * ht;
    }
    f.nx = f.nd == 0 ? (side == 0 ? -1.0 : 1.0) : 0.0;
    f.ny = f.nd == 1 ? (side == 2 ? -1.0 : 1.0) : 0.0;
    f.hF = ctx.geom.scale[f.nd] * (f.nd == 0 ? h1 : h2);
    out.push_back(std::move(f));
  };
  if (el.e1 == 0) add(0);
  if (el.e1 == n1 - 1) add(1);
  if (el.e2 == 0) add(2);
  if (el.e2 == n2 - 1) add(3);
  return out;
}

// Physical symmetric-gradient entries of a vector shape at one node.
inline void eps_of(const Shape& s, size_t n, double sx, double sy, double& e11, double& e22,
                   double& e12) {
  const double gx = s.d1[n] / sx * s.pull;
  const double gy = s.d2[n] / sy * s.pull;
  if (s.comp == 0) {
    e11 = gx;
    e22 = 0.0;
    e12 = 0.5 * gy;
  } else {
    e11 = 0.0;
    e22 = gy;
    e12 = 0.5 * gx;
  }
}

SpMat from_triplets(int rows, int cols, std::vector<Eigen::Triplet<double>>& tl) {
  SpMat m(rows, cols);
  m.setFromTriplets(tl.begin(), tl.end());
  return m;
}

}  // namespace

SpMat mass_matrix(const AssemblyContext& ctx, int k) {
  check_ctx(ctx);
  if (k < 0 || k > 2) throw std::invalid_argument("form degree must be 0, 1, or 2");
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const double jac = ctx.geom.scale[0] * ctx.geom.scale[1];
  std::vector<Eigen::Triplet<double>> tl;
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    ElemQuad eq = element_quad(ctx, g, el);
    std::vector<Shape> sh = shapes_at(ctx, cc, k, el.level, eq.pts);
    for (const Shape& r : sh)
      for (const Shape& c : sh) {
        if (r.comp != c.comp) continue;  // vector components are orthogonal directions
        double acc = 0.0;
        // group the symmetric factors so the matrix comes out bitwise symmetric
        for (size_t n = 0; n < eq.w.size(); ++n) acc += eq.w[n] * (r.val[n] * c.val[n]);
        tl.emplace_back(r.gidx, c.gidx, acc * (r.pull * c.pull) * jac);
      }
  }
  return from_triplets(ctx.act->dim[k], ctx.act->dim[k], tl);
}

SpMat curl_energy_matrix(const AssemblyContext& ctx) {
  check_ctx(ctx);
  if (ctx.lad->conf != Conforming::curl)
    throw std::invalid_argument("curl energy needs the curl-conforming family");
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const double sx = ctx.geom.scale[0], sy = ctx.geom.scale[1];
  const double jac = sx * sy;
  std::vector<Eigen::Triplet<double>> tl;
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    ElemQuad eq = element_quad(ctx, g, el);
    std::vector<Shape> sh = shapes_at(ctx, cc, 1, el.level, eq.pts);
    for (const Shape& r : sh)
      for (const Shape& c : sh) {
        double acc = 0.0;
        for (size_t n = 0; n < eq.w.size(); ++n) {
          double cr = (r.comp == 1 ? r.d1[n] / sx : -r.d2[n] / sy) * r.pull;
          double cv = (c.comp == 1 ? c.d1[n] / sx : -c.d2[n] / sy) * c.pull;
          acc += eq.w[n] * (cr * cv);
        }
        tl.emplace_back(r.gidx, c.gidx, acc * jac);
      }
  }
  return from_triplets(ctx.act->dim[1], ctx.act->dim[1], tl);
}

SpMat d0_pairing(const AssemblyContext& ctx) {
  check_ctx(ctx);
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const bool curlf = ctx.lad->conf == Conforming::curl;
  const double sx = ctx.geom.scale[0], sy = ctx.geom.scale[1];
  const double jac = sx * sy;
  std::vector<Eigen::Triplet<double>> tl;
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    ElemQuad eq = element_quad(ctx, g, el);
    std::vector<Shape> rows = shapes_at(ctx, cc, 1, el.level, eq.pts);
    std::vector<Shape> cols = shapes_at(ctx, cc, 0, el.level, eq.pts);
    for (const Shape& r : rows)
      for (const Shape& c : cols) {
        double acc = 0.0;
        for (size_t n = 0; n < eq.w.size(); ++n) {
          double im;  // component r.comp of the derivative image of the scalar
          if (curlf)
            im = r.comp == 0 ? c.d1[n] / sx : c.d2[n] / sy;
          else
            im = r.comp == 0 ? c.d2[n] / sy : -c.d1[n] / sx;
          acc += eq.w[n] * (r.val[n] * r.pull) * (im * c.pull);
        }
        tl.emplace_back(r.gidx, c.gidx, acc * jac);
      }
  }
  return from_triplets(ctx.act->dim[1], ctx.act->dim[0], tl);
}

SpMat d1_pairing(const AssemblyContext& ctx) {
  check_ctx(ctx);
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const bool curlf = ctx.lad->conf == Conforming::curl;
  const double sx = ctx.geom.scale[0], sy = ctx.geom.scale[1];
  const double jac = sx * sy;
  std::vector<Eigen::Triplet<double>> tl;
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    ElemQuad eq = element_quad(ctx, g, el);
    std::vector<Shape> rows = shapes_at(ctx, cc, 2, el.level, eq.pts);
    std::vector<Shape> cols = shapes_at(ctx, cc, 1, el.level, eq.pts);
    for (const Shape& r : rows)
      for (const Shape& c : cols) {
        double acc = 0.0;
        for (size_t n = 0; n < eq.w.size(); ++n) {
          double im;  // scalar derivative image of the vector column
          if (curlf)
            im = c.comp == 1 ? c.d1[n] / sx : -c.d2[n] / sy;
          else
            im = c.comp == 0 ? c.d1[n] / sx : c.d2[n] / sy;
          acc += eq.w[n] * (r.val[n] * r.pull) * (im * c.pull);
        }
        tl.emplace_back(r.gidx, c.gidx, acc * jac);
      }
  }
  return from_triplets(ctx.act->dim[2], ctx.act->dim[1], tl);
}

SpMat symmetric_gradient_stiffness(const AssemblyContext& ctx, double nu) {
  check_ctx(ctx);
  if (nu <= 0.0) throw std::invalid_argument("viscosity must be positive");
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const double sx = ctx.geom.scale[0], sy = ctx.geom.scale[1];
  const double jac = sx * sy;
  std::vector<Eigen::Triplet<double>> tl;
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    ElemQuad eq = element_quad(ctx, g, el);
    std::vector<Shape> sh = shapes_at(ctx, cc, 1, el.level, eq.pts);
    for (const Shape& r : sh)
      for (const Shape& c : sh) {
        double acc = 0.0;
        for (size_t n = 0; n < eq.w.size(); ++n) {
          double r11, r22, r12, c11, c22, c12;
          eps_of(r, n, sx, sy, r11, r22, r12);
          eps_of(c, n, sx, sy, c11, c22, c12);
          acc += eq.w[n] * (r11 * c11 + r22 * c22 + 2.0 * r12 * c12);
        }
        tl.emplace_back(r.gidx, c.gidx, 2.0 * nu * acc * jac);
      }
  }
  return from_triplets(ctx.act->dim[1], ctx.act->dim[1], tl);
}

SpMat nitsche_boundary_matrix(const AssemblyContext& ctx, double nu, double cpen) {
  check_ctx(ctx);
  if (nu <= 0.0) throw std::invalid_argument("viscosity must be positive");
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const double sx = ctx.geom.scale[0], sy = ctx.geom.scale[1];
  std::vector<Eigen::Triplet<double>> tl;
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    for (const FacetQuad& f : boundary_facets(ctx, g, el)) {
      const double meas = ctx.geom.scale[1 - f.nd];
      std::vector<Shape> sh = shapes_at(ctx, cc, 1, el.level, f.pts);
      for (const Shape& r : sh)
        for (const Shape& c : sh) {
          double acc = 0.0;
          for (size_t n = 0; n < f.w.size(); ++n) {
            const double urx = r.comp == 0 ? r.val[n] * r.pull : 0.0;
            const double ury = r.comp == 1 ? r.val[n] * r.pull : 0.0;
            const double ucx = c.comp == 0 ? c.val[n] * c.pull : 0.0;
            const double ucy = c.comp == 1 ? c.val[n] * c.pull : 0.0;
            double r11, r22, r12, c11, c22, c12;
            eps_of(r, n, sx, sy, r11, r22, r12);
            eps_of(c, n, sx, sy, c11, c22, c12);
            const double trx = r11 * f.nx + r12 * f.ny, try_ = r12 * f.nx + r22 * f.ny;
            const double tcx = c11 * f.nx + c12 * f.ny, tcy = c12 * f.nx + c22 * f.ny;
            acc += f.w[n] * ((tcx * urx + tcy * ury) + (trx * ucx + try_ * ucy) -
                             (cpen / f.hF) * (ucx * urx + ucy * ury));
          }
          tl.emplace_back(r.gidx, c.gidx, 2.0 * nu * acc * meas);
        }
    }
  }
  return from_triplets(ctx.act->dim[1], ctx.act->dim[1], tl);
}

SpMat velocity_norm_gram(const AssemblyContext& ctx, double cpen) {
  check_ctx(ctx);
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const double sx = ctx.geom.scale[0], sy = ctx.geom.scale[1];
  const double jac = sx * sy;
  std::vector<Eigen::Triplet<double>> tl;
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    ElemQuad eq = element_quad(ctx, g, el);
    std::vector<Shape> sh = shapes_at(ctx, cc, 1, el.level, eq.pts);
    for (const Shape& r : sh)
      for (const Shape& c : sh) {
        if (r.comp != c.comp) continue;  // gradient and value dot products vanish
        double acc = 0.0;
        for (size_t n = 0; n < eq.w.size(); ++n)
          // group the symmetric factors so the matrix comes out bitwise symmetric
          acc += eq.w[n] * ((r.d1[n] * c.d1[n]) / (sx * sx) + (r.d2[n] * c.d2[n]) / (sy * sy));
        tl.emplace_back(r.gidx, c.gidx, acc * (r.pull * c.pull) * jac);
      }
    for (const FacetQuad& f : boundary_facets(ctx, g, el)) {
      const double meas = ctx.geom.scale[1 - f.nd];
      std::vector<Shape> sh2 = shapes_at(ctx, cc, 1, el.level, f.pts);
      for (const Shape& r : sh2)
        for (const Shape& c : sh2) {
          if (r.comp != c.comp) continue;
          double acc = 0.0;
          for (size_t n = 0; n < f.w.size(); ++n)
            acc += f.w[n] * (r.val[n] * c.val[n]);
          tl.emplace_back(r.gidx, c.gidx, (cpen / f.hF) * acc * (r.pull * c.pull) * meas);
        }
    }
  }
  return from_triplets(ctx.act->dim[1], ctx.act->dim[1], tl);
}

Eigen::VectorXd nitsche_boundary_load(const AssemblyContext& ctx, double nu, double cpen,
                                      const std::array<std::array<double, 2>, 4>& side_velocity) {
  check_ctx(ctx);
  if (nu <= 0.0) throw std::invalid_argument("viscosity must be positive");
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const double sx = ctx.geom.scale[0], sy = ctx.geom.scale[1];
  Eigen::VectorXd L = Eigen::VectorXd::Zero(ctx.act->dim[1]);
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    for (const FacetQuad& f : boundary_facets(ctx, g, el)) {
      const double bx = side_velocity[f.side][0], by = side_velocity[f.side][1];
      if (bx == 0.0 && by == 0.0) continue;
      const double meas = ctx.geom.scale[1 - f.nd];
      std::vector<Shape> sh = shapes_at(ctx, cc, 1, el.level, f.pts);
      for (const Shape& r : sh) {
        double acc = 0.0;
        for (size_t n = 0; n < f.w.size(); ++n) {
          const double urx = r.comp == 0 ? r.val[n] * r.pull : 0.0;
          const double ury = r.comp == 1 ? r.val[n] * r.pull : 0.0;
          double r11, r22, r12;
          eps_of(r, n, sx, sy, r11, r22, r12);
          const double trx = r11 * f.nx + r12 * f.ny, try_ = r12 * f.nx + r22 * f.ny;
          acc += f.w[n] * ((trx * bx + try_ * by) - (cpen / f.hF) * (bx * urx + by * ury));
        }
        L[r.gidx] += 2.0 * nu * acc * meas;
      }
    }
  }
  return L;
}

Eigen::VectorXd form_moments(const AssemblyContext& ctx, int k) {
  check_ctx(ctx);
  if (k != 0 && k != 2) throw std::invalid_argument("moments are defined for scalar forms");
  const CurryCache cc = build_curry_cache(*ctx.lad);
  const GaussRule g = gauss_legendre(rule_points(ctx));
  const double jac = ctx.geom.scale[0] * ctx.geom.scale[1];
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ctx.act->dim[k]);
  for (const HierElement& el : build_hier_mesh(*ctx.lad)) {
    ElemQuad eq = element_quad(ctx, g, el);
    std::vector<Shape> sh = shapes_at(ctx, cc, k, el.level, eq.pts);
    for (const Shape& r : sh) {
      double acc = 0.0;
      for (size_t n = 0; n < eq.w.size(); ++n) acc += eq.w[n] * r.val[n];
      b[r.gidx] += acc * r.pull * jac;
    }
  }
  return b;
}

namespace {

std::array<double, 2> to_parametric(const GeometryMap& geom, double px, double py) {
  const double eps = 1e-12;
  std::array<double, 2> t{(px - geom.offset[0]) / geom.scale[0],
                          (py - geom.offset[1]) / geom.scale[1]};
  for (double& v : t) {
    if (v < -eps || v > 1.0 + eps) throw std::domain_error("point outside the physical domain");
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
  }
  return t;
}

}  // namespace

double evaluate_scalar_form(const LevelLadder& lad, const ActiveSets& act, int k,
                            const Eigen::VectorXd& coeff, const GeometryMap& geom, double px,
                            double py) {
  if (k != 0 && k != 2) throw std::invalid_argument("scalar evaluation needs a 0- or 2-form");
  if (coeff.size() != act.dim[k]) throw std::invalid_argument("coefficient vector size mismatch");
  const std::array<double, 2> t = to_parametric(geom, px, py);
  double out = 0.0;
  for (int l = 0; l < lad.num_levels(); ++l) {
    const FormComponent& fc = lad.level[l].x[k].comps[0];
    std::vector<double> cw[2];
    for (int d = 0; d < 2; ++d)
      if (!fc.full[d])
        for (const Rational& r : curry_schoenberg_weights(fc.kv[d])) cw[d].push_back(r.to_double());
    BasisEval b1 = eval_basis(fc.kv[0], t[0], 0);
    BasisEval b2 = eval_basis(fc.kv[1], t[1], 0);
    double pull = 1.0;
    for (int d = 0; d < 2; ++d)
      if (!fc.full[d]) pull /= geom.scale[d];
    for (int a2 = 0; a2 <= fc.kv[1].degree; ++a2)
      for (int a1 = 0; a1 <= fc.kv[0].degree; ++a1) {
        int i1 = b1.first + a1, i2 = b2.first + a2;
        int g = act.global_index(k, l, 0, i1, i2);
        if (g < 0) continue;
        double v1 = b1.ders[0][a1] * (cw[0].empty() ? 1.0 : cw[0][i1]);
        double v2 = b2.ders[0][a2] * (cw[1].empty() ? 1.0 : cw[1][i2]);
        out += coeff[g] * v1 * v2 * pull;
      }
  }
  return out;
}

VectorSample evaluate_vector_form(const LevelLadder& lad, const ActiveSets& act,
                                  const Eigen::VectorXd& coeff, const GeometryMap& geom, double px,
                                  double py) {
  if (coeff.size() != act.dim[1]) throw std::invalid_argument("coefficient vector size mismatch");
  const std::array<double, 2> t = to_parametric(geom, px, py);
  const double sx = geom.scale[0], sy = geom.scale[1];
  VectorSample out;
  for (int l = 0; l < lad.num_levels(); ++l) {
    const FormSpace& fs = lad.level[l].x[1];
    for (size_t c = 0; c < fs.comps.size(); ++c) {
      const FormComponent& fc = fs.comps[c];
      std::vector<double> cw[2];
      for (int d = 0; d < 2; ++d)
        if (!fc.full[d])
          for (const Rational& r : curry_schoenberg_weights(fc.kv[d]))
            cw[d].push_back(r.to_double());
      BasisEval b1 = eval_basis(fc.kv[0], t[0], 1);
      BasisEval b2 = eval_basis(fc.kv[1], t[1], 1);
      double pull = 1.0;
      for (int d = 0; d < 2; ++d)
        if (!fc.full[d]) pull /= geom.scale[d];
      for (int a2 = 0; a2 <= fc.kv[1].degree; ++a2)
        for (int a1 = 0; a1 <= fc.kv[0].degree; ++a1) {
          int i1 = b1.first + a1, i2 = b2.first + a2;
          int g = act.global_index(1, l, static_cast<int>(c), i1, i2);
          if (g < 0) continue;
          double w1 = cw[0].empty() ? 1.0 : cw[0][i1];
          double w2 = cw[1].empty() ? 1.0 : cw[1][i2];
          double v = b1.ders[0][a1] * b2.ders[0][a2] * w1 * w2;
          double dx = b1.ders[1][a1] * b2.ders[0][a2] * w1 * w2 / sx;
          double dy = b1.ders[0][a1] * b2.ders[1][a2] * w1 * w2 / sy;
          double coef = coeff[g] * pull;
          if (c == 0) {
            out.ux += coef * v;
            out.dux_dx += coef * dx;
            out.dux_dy += coef * dy;
          } else {
            out.uy += coef * v;
            out.duy_dx += coef * dx;
            out.duy_dy += coef * dy;
          }
        }
    }
  }
  return out;
}

}  // namespace hbsdr
