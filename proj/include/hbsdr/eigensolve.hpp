#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "hbsdr/assembly.hpp"

namespace hbsdr {

struct EigPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // matching columns
};

// Dense symmetric generalized eigenproblem A x = lambda M x.  M must be
// symmetric positive definite (invalid_argument otherwise); every returned
// pair is verified to satisfy |A x - lambda M x| <= 1e-8 |A|_F
// (runtime_error on violation).
EigPairs sym_gen_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

// Eigenvalues of the 1-form derivative energy restricted to the subspace
// orthogonal to the derivative images of 0-forms: A on {u : C^T u = 0},
// where C is the d0 pairing (1-form rows, 0-form columns).  The number of
// zero eigenvalues equals the first cohomology dimension.
Eigen::VectorXd constrained_curl_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M1,
                                             const Eigen::MatrixXd& C);

// Eigenvalues of the dual problem on 2-forms with the moment direction
// removed: (g1 M1^{-1} g1^T) psi = lambda M2 psi on {psi : moments^T psi = 0},
// where g1 is the d1 pairing.  The number of zero eigenvalues equals the
// second cohomology dimension minus one.
Eigen::VectorXd schur_eigenvalues(const Eigen::MatrixXd& g1, const Eigen::MatrixXd& M1,
                                  const Eigen::MatrixXd& M2, const Eigen::VectorXd& moments);

// Count of eigenvalues below rel_tol times the largest one.
int count_zero_eigenvalues(const Eigen::VectorXd& values, double rel_tol);

// Exact resonance values m^2 + n^2 (m, n >= 0, m + n >= 1) of the unit-pi
// square, ascending with multiplicity.
std::vector<double> maxwell_square_spectrum(int count);

// Greedy ascending match of a computed spectrum against a reference one.
// A computed value matching the next unconsumed reference value within
// rel_tol (relative) consumes it; anything else is flagged spurious by its
// 1-based rank in the computed list.  Reference values skipped because the
// computed list ran past them are counted as missed.
struct SpuriousReport {
  std::vector<int> spurious_ranks;
  int missed = 0;
};
SpuriousReport detect_spurious(const std::vector<double>& computed,
                               const std::vector<double>& reference, double rel_tol);

// Discrete inf-sup constant of the divergence pairing B against the velocity
// norm G and the pressure mass Mp, on mean-zero pressures (moments^T p = 0):
// the square root of the smallest eigenvalue of B G^{-1} B^T there.
double infsup_constant(const Eigen::MatrixXd& B, const Eigen::MatrixXd& G,
                       const Eigen::MatrixXd& Mp, const Eigen::VectorXd& moments);

// Same constant from an already-formed Schur complement S = B G^{-1} B^T.
double infsup_from_schur(const Eigen::MatrixXd& S, const Eigen::MatrixXd& Mp,
                         const Eigen::VectorXd& moments);

// Sparse-factorization variant: the Schur complement is built with a sparse
// Cholesky solve of G, streamed over column blocks, so the peak memory stays
// far below the dense factorization on larger velocity spaces.
double infsup_constant(const SpMat& B, const SpMat& G, const SpMat& Mp,
                       const Eigen::VectorXd& moments);

// Steady Stokes flow with weakly imposed tangential boundary velocity
// (normal trace strongly zero through the space), a single scalar constraint
// fixing the pressure mean, and a direct dense factorization.
struct StokesResult {
  Eigen::VectorXd velocity, pressure;
  double multiplier = 0.0;    // of the pressure-mean constraint
  double div_residual = 0.0;  // L2 norm of the velocity divergence
};
StokesResult stokes_solve(const AssemblyContext& ctx, double nu, double cpen,
                          const std::array<std::array<double, 2>, 4>& side_velocity);

}  // namespace hbsdr
