#pragma once

#include <array>
#include <vector>

#include "hbsdr/sparse.hpp"
#include "hbsdr/splines.hpp"

namespace hbsdr {

// Which vector-valued middle space the complex uses.
//   curl: grad -> scalar curl   (1-form components tangent to grid lines)
//   div : vector curl -> div    (1-form components normal to grid lines)
enum class Conforming { curl, div };

// One scalar tensor-product factor of a form space.  `full[a]` marks the
// directions that carry the unreduced degree; with zero_boundary set, the
// first and last basis function of every full direction is removed.
struct FormComponent {
  std::array<KnotVector, 2> kv;
  std::array<bool, 2> full{true, true};
  std::array<int, 2> lo{0, 0};  // active index window [lo, hi) per direction
  std::array<int, 2> hi{0, 0};

  int width(int dir) const { return hi[dir] - lo[dir]; }
  int dim() const { return width(0) * width(1); }
  // flat index within the component, first direction fastest
  int flat(int i1, int i2) const { return (i2 - lo[1]) * width(0) + (i1 - lo[0]); }
  // Greville abscissae of the active basis functions in one direction
  std::vector<Rational> active_greville(int dir) const;
};

// A 0-, 1- or 2-form space at one refinement level.
struct FormSpace {
  int form = 0;
  Conforming conf = Conforming::curl;
  bool zero_boundary = false;
  std::vector<FormComponent> comps;  // 1 (forms 0 and 2) or 2 (form 1)

  int dim() const;
  int comp_offset(int c) const;  // offset of component c in the flat numbering
};

// The full three-space sequence at one level.
struct ComplexLevel {
  std::array<int, 2> degree{};    // degrees of the 0-form space
  std::array<int, 2> elements{};  // elements per direction
  Conforming conf = Conforming::curl;
  bool zero_boundary = false;
  std::array<FormSpace, 3> x;     // 0-, 1-, 2-form spaces
};

// Tensor-product spaces on [0,1]^2 with `elements` uniform elements per
// direction.  Reduced-degree directions use the normalized derived basis, so
// differentiation acts on coefficients as a forward difference.
ComplexLevel make_complex_level(std::array<int, 2> degree, std::array<int, 2> elements,
                                Conforming conf, bool zero_boundary);

// Coefficient-level differentiation matrices (dim x1 x dim x0, dim x2 x dim x1).
//   curl family: d0 = gradient, d1 = scalar curl (dv2/dx1 - dv1/dx2)
//   div  family: d0 = vector curl (du/dx2, -du/dx1), d1 = divergence
RationalSparse incidence_d0(const ComplexLevel& lv);
RationalSparse incidence_d1(const ComplexLevel& lv);

// Differentiate a coefficient vector of x[k] into x[k+1] coefficients.
std::vector<Rational> apply_derivative(const ComplexLevel& lv, int k,
                                       const std::vector<Rational>& coeff);

}  // namespace hbsdr
