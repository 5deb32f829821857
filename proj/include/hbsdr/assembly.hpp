#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "hbsdr/hierarchy.hpp"

namespace hbsdr {

// Axis-aligned affine map from the parametric square (0,1)^2 onto a physical
// rectangle: x = offset + scale * xhat, with positive scales.
struct GeometryMap {
  std::array<double, 2> scale{1.0, 1.0};
  std::array<double, 2> offset{0.0, 0.0};
};

struct GaussRule {
  std::vector<double> node, weight;  // on [0,1]
};
GaussRule gauss_legendre(int q);

struct AssemblyContext {
  const LevelLadder* lad = nullptr;
  const ActiveSets* act = nullptr;
  GeometryMap geom;
  int quad_extra = 0;  // added to the base rule of max(degree)+1 points per direction
};

using SpMat = Eigen::SparseMatrix<double>;

// L2 mass matrix of the k-form space (k = 0, 1, 2), physical inner product.
SpMat mass_matrix(const AssemblyContext& ctx, int k);

// Energy of the scalar curl of 1-forms; curl-conforming family only.
SpMat curl_energy_matrix(const AssemblyContext& ctx);

// (first-derivative image of 0-forms, 1-forms): rows are 1-form dofs, cols
// 0-form dofs.  Equals mass_matrix(1) times the hierarchical degree-0
// difference operator.
SpMat d0_pairing(const AssemblyContext& ctx);

// (second-derivative image of 1-forms, 2-forms): rows are 2-form dofs, cols
// 1-form dofs.  Equals mass_matrix(2) times the hierarchical degree-1
// difference operator.  The 1-form derivative is the scalar curl for the
// curl-conforming family and the divergence for the div-conforming family.
SpMat d1_pairing(const AssemblyContext& ctx);

// Volume term 2 nu (sym grad u, sym grad v) on 1-forms (vector fields).
SpMat symmetric_gradient_stiffness(const AssemblyContext& ctx, double nu);

// Boundary bilinear 2 nu [ (eps(u) n).v + (eps(v) n).u - (cpen/hF) u.v ]
// over the whole domain boundary; subtracted from the volume stiffness.
SpMat nitsche_boundary_matrix(const AssemblyContext& ctx, double nu, double cpen);

// Gram matrix of the velocity stability norm: full-gradient volume term
// (grad u, grad v) plus the boundary penalty (cpen/hF) (u, v)_boundary.
SpMat velocity_norm_gram(const AssemblyContext& ctx, double cpen);

// L(v) = 2 nu [ (eps(v) n).uB - (cpen/hF) uB.v ] with constant boundary data
// per side; side order x=0, x=1, y=0, y=1.
Eigen::VectorXd nitsche_boundary_load(const AssemblyContext& ctx, double nu, double cpen,
                                      const std::array<std::array<double, 2>, 4>& side_velocity);

// Integrals of the scalar basis fields against the constant 1 (k = 0 or 2).
Eigen::VectorXd form_moments(const AssemblyContext& ctx, int k);

// Physical value of a scalar form field (k = 0 or 2) at a physical point.
double evaluate_scalar_form(const LevelLadder& lad, const ActiveSets& act, int k,
                            const Eigen::VectorXd& coeff, const GeometryMap& geom, double px,
                            double py);

struct VectorSample {
  double ux = 0, uy = 0;
  double dux_dx = 0, dux_dy = 0, duy_dx = 0, duy_dy = 0;
  double curl() const { return duy_dx - dux_dy; }
  double div() const { return dux_dx + duy_dy; }
};
// Physical value and first derivatives of a 1-form (vector) field.
VectorSample evaluate_vector_form(const LevelLadder& lad, const ActiveSets& act,
                                  const Eigen::VectorXd& coeff, const GeometryMap& geom, double px,
                                  double py);

}  // namespace hbsdr
