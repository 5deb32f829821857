#pragma once

#include <vector>

#include "hbsdr/rational.hpp"

namespace hbsdr {

// Open knot vector with exact rational knots.
// Basis functions are numbered 0..num_basis()-1; elements (non-empty knot
// spans) are numbered 0..num_elements()-1.
struct KnotVector {
  int degree = 0;
  std::vector<Rational> knots;    // non-decreasing, open (first/last repeated degree+1 times)
  std::vector<double> knots_d;    // cached double mirror of `knots`

  int num_basis() const { return static_cast<int>(knots.size()) - degree - 1; }
  int num_elements() const { return static_cast<int>(breakpoints.size()) - 1; }

  std::vector<Rational> breakpoints;  // distinct knot values
  // index into `breakpoints` for every knot
  std::vector<int> knot_breakpoint;
  // knot index s of each element: element e spans [knots[s], knots[s+1])
  std::vector<int> element_span;
  // the degree+1 basis functions that may be nonzero on element e start here
  int first_basis_on_element(int e) const { return element_span[e] - degree; }

  // Inclusive element range covered by the open support (knots[i], knots[i+degree+1]).
  struct ElemRange {
    int lo, hi;
  };
  ElemRange support(int i) const;

  void finalize();  // fills caches; validates openness/monotonicity
};

// Uniform open knot vector of the given degree with n equal elements on [0,1].
KnotVector make_uniform_open_knots(int degree, int n);

// Knot vector of the derived space: drop first and last knot, degree - 1.
KnotVector derive_knot_vector(const KnotVector& kv);

// Greville abscissae (knots[i+1] + ... + knots[i+degree]) / degree, one per basis function.
std::vector<Rational> greville_sites(const KnotVector& kv);

// Curry-Schoenberg normalization weights for a *derived* knot vector of degree q:
// w[j] = (q+1) / (knots[j+q+1] - knots[j]).  The normalized basis has unit integral.
std::vector<Rational> curry_schoenberg_weights(const KnotVector& derived);

// Values (and derivatives) of the basis functions that may be nonzero at x.
// Convention: right-continuous at interior knots; at x = max knot, the left limit.
struct BasisEval {
  int first = 0;  // index of first reported basis function; degree+1 are reported
  // ders[d][a] = d-th derivative of basis function first+a at x
  std::vector<std::vector<double>> ders;
};
BasisEval eval_basis(const KnotVector& kv, double x, int max_deriv = 0);

// Value of one basis function (0 outside its support window).
double eval_one_basis(const KnotVector& kv, int i, double x, int deriv = 0);

// Refinement (two-scale) matrix between nested knot vectors of equal degree:
// coarse basis i = sum_j row[i] * fine basis j.  Rows are contiguous bands.
struct TwoScaleMatrix {
  int rows = 0, cols = 0;
  struct Row {
    int start = 0;
    std::vector<Rational> w;
  };
  std::vector<Row> row;

  Rational at(int i, int j) const;
};
TwoScaleMatrix two_scale_matrix(const KnotVector& coarse, const KnotVector& fine);

}  // namespace hbsdr
