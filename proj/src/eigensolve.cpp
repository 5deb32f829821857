#include "hbsdr/eigensolve.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hbsdr {

EigPairs sym_gen_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows())
    throw std::invalid_argument("eigenproblem matrices must be square and of equal size");
  if (A.rows() == 0) return {};
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("the right-hand matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigensolver failed");
  EigPairs out{es.eigenvalues(), es.eigenvectors()};
  const double tol = 1e-8 * std::max(A.norm(), 1e-12);
  for (int i = 0; i < out.values.size(); ++i) {
    double r = (A * out.vectors.col(i) - out.values[i] * (M * out.vectors.col(i))).norm();
    double scale = std::max(1.0, out.vectors.col(i).norm());
    if (r > tol * scale) throw std::runtime_error("eigenpair residual check failed");
  }
  return out;
}

namespace {

// Columns spanning the orthogonal complement of b: the trailing n-1 columns
// of the Householder reflector taking b to a multiple of the first axis.
Eigen::MatrixXd orth_complement(const Eigen::VectorXd& b) {
  const int n = static_cast<int>(b.size());
  if (n < 1) throw std::invalid_argument("cannot deflate an empty vector");
  const double nb = b.norm();
  if (nb == 0.0) throw std::invalid_argument("cannot deflate the zero vector");
  Eigen::VectorXd v = b;
  v[0] += (b[0] >= 0.0 ? 1.0 : -1.0) * nb;
  const double vn2 = v.squaredNorm();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n - 1);
  for (int j = 1; j < n; ++j) {
    z.col(j - 1) = -(2.0 * v[j] / vn2) * v;
    z(j, j - 1) += 1.0;
  }
  return z;
}

}  // namespace

Eigen::VectorXd constrained_curl_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M1,
                                             const Eigen::MatrixXd& C) {
  if (C.rows() != A.rows()) throw std::invalid_argument("constraint row count mismatch");
  Eigen::MatrixXd z;
  if (C.cols() == 0) {
    z = Eigen::MatrixXd::Identity(A.rows(), A.rows());
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C.transpose());
    z = lu.kernel();
  }
  if (z.cols() == 0) return Eigen::VectorXd();
  Eigen::MatrixXd az = z.transpose() * A * z;
  Eigen::MatrixXd mz = z.transpose() * M1 * z;
  az = 0.5 * (az + az.transpose());
  mz = 0.5 * (mz + mz.transpose());
  return sym_gen_eig(az, mz).values;
}

Eigen::VectorXd schur_eigenvalues(const Eigen::MatrixXd& g1, const Eigen::MatrixXd& M1,
                                  const Eigen::MatrixXd& M2, const Eigen::VectorXd& moments) {
  if (g1.cols() != M1.rows() || g1.rows() != M2.rows() || moments.size() != M2.rows())
    throw std::invalid_argument("inconsistent matrix sizes in the dual eigenproblem");
  Eigen::LLT<Eigen::MatrixXd> llt(M1);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("the 1-form mass matrix is not positive definite");
  Eigen::MatrixXd s = g1 * llt.solve(g1.transpose());
  s = 0.5 * (s + s.transpose());
  Eigen::MatrixXd z = orth_complement(moments);
  Eigen::MatrixXd sz = z.transpose() * s * z;
  Eigen::MatrixXd mz = z.transpose() * M2 * z;
  sz = 0.5 * (sz + sz.transpose());
  mz = 0.5 * (mz + mz.transpose());
  return sym_gen_eig(sz, mz).values;
}

int count_zero_eigenvalues(const Eigen::VectorXd& values, double rel_tol) {
  if (values.size() == 0) return 0;
  const double vmax = values.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return static_cast<int>(values.size());
  int n = 0;
  for (int i = 0; i < values.size(); ++i)
    if (std::abs(values[i]) <= rel_tol * vmax) ++n;
  return n;
}

std::vector<double> maxwell_square_spectrum(int count) {
  if (count < 1) return {};
  const int k = static_cast<int>(2.0 * std::sqrt(static_cast<double>(count))) + 2;
  std::vector<double> v;
  for (int m = 0; m <= k; ++m)
    for (int n = 0; n <= k; ++n)
      if (m + n >= 1) v.push_back(static_cast<double>(m * m + n * n));
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

SpuriousReport detect_spurious(const std::vector<double>& computed,
                               const std::vector<double>& reference, double rel_tol) {
  SpuriousReport rep;
  size_t ptr = 0;
  for (size_t i = 0; i < computed.size(); ++i) {
    const double c = computed[i];
    while (ptr < reference.size() && c > reference[ptr] * (1.0 + rel_tol)) {
      ++ptr;
      ++rep.missed;
    }
    if (ptr < reference.size() && std::abs(c - reference[ptr]) <= rel_tol * reference[ptr])
      ++ptr;
    else
      rep.spurious_ranks.push_back(static_cast<int>(i) + 1);
  }
  return rep;
}

double infsup_from_schur(const Eigen::MatrixXd& S, const Eigen::MatrixXd& Mp,
                         const Eigen::VectorXd& moments) {
  if (S.rows() != S.cols() || S.rows() != Mp.rows() || moments.size() != Mp.rows())
    throw std::invalid_argument("inconsistent matrix sizes in the inf-sup problem");
  Eigen::MatrixXd z = orth_complement(moments);
  Eigen::MatrixXd sz = z.transpose() * S * z;
  Eigen::MatrixXd mz = z.transpose() * Mp * z;
  sz = 0.5 * (sz + sz.transpose());
  mz = 0.5 * (mz + mz.transpose());
  Eigen::VectorXd ev = sym_gen_eig(sz, mz).values;
  const double lmin = ev.minCoeff();
  if (lmin < -1e-10)
    throw std::runtime_error("negative inf-sup eigenvalue: the operators are inconsistent");
  return std::sqrt(std::max(lmin, 0.0));
}

double infsup_constant(const Eigen::MatrixXd& B, const Eigen::MatrixXd& G,
                       const Eigen::MatrixXd& Mp, const Eigen::VectorXd& moments) {
  if (B.cols() != G.rows() || B.rows() != Mp.rows() || moments.size() != Mp.rows())
    throw std::invalid_argument("inconsistent matrix sizes in the inf-sup problem");
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("the velocity norm matrix is not positive definite");
  Eigen::MatrixXd s = B * llt.solve(B.transpose());
  return infsup_from_schur(s, Mp, moments);
}

double infsup_constant(const SpMat& B, const SpMat& G, const SpMat& Mp,
                       const Eigen::VectorXd& moments) {
  if (B.cols() != G.rows() || B.rows() != Mp.rows() || moments.size() != Mp.rows())
    throw std::invalid_argument("inconsistent matrix sizes in the inf-sup problem");
  Eigen::SimplicialLLT<SpMat> llt(G);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("the velocity norm matrix is not positive definite");
  const int np = static_cast<int>(B.rows());
  const SpMat bt = B.transpose();
  Eigen::MatrixXd s(np, np);
  const int block = 512;
  for (int c0 = 0; c0 < np; c0 += block) {
    const int nc = std::min(block, np - c0);
    Eigen::MatrixXd rhs = Eigen::MatrixXd(bt.middleCols(c0, nc));
    s.middleCols(c0, nc) = B * llt.solve(rhs);
  }
  return infsup_from_schur(s, Eigen::MatrixXd(Mp), moments);
}

StokesResult stokes_solve(const AssemblyContext& ctx, double nu, double cpen,
                          const std::array<std::array<double, 2>, 4>& side_velocity) {
  if (ctx.lad == nullptr || ctx.act == nullptr)
    throw std::invalid_argument("assembly context is missing the ladder or active sets");
  if (ctx.lad->conf != Conforming::div || !ctx.lad->zero_boundary)
    throw std::invalid_argument(
        "flow solves need the div-conforming family with the boundary mask");

  const Eigen::MatrixXd A = Eigen::MatrixXd(symmetric_gradient_stiffness(ctx, nu)) -
                            Eigen::MatrixXd(nitsche_boundary_matrix(ctx, nu, cpen));
  const Eigen::MatrixXd B = Eigen::MatrixXd(d1_pairing(ctx));
  const Eigen::VectorXd L = nitsche_boundary_load(ctx, nu, cpen, side_velocity);
  const Eigen::VectorXd m = form_moments(ctx, 2);

  const int nu_dim = ctx.act->dim[1];
  const int np = ctx.act->dim[2];
  const int n = nu_dim + np + 1;

  //  [  A   -B^T   0  ] [u]     [-L]
  //  [ -B    0    -m  ] [p]  =  [ 0]      (symmetric indefinite system)
  //  [  0   -m^T   0  ] [mu]    [ 0]
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.head(nu_dim) = -L;
  Eigen::VectorXd sol;
  {
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n, n);
    sys.topLeftCorner(nu_dim, nu_dim) = A;
    sys.block(0, nu_dim, nu_dim, np) = -B.transpose();
    sys.block(nu_dim, 0, np, nu_dim) = -B;
    sys.block(nu_dim, n - 1, np, 1) = -m;
    sys.block(n - 1, nu_dim, 1, np) = -m.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
    sol = lu.solve(rhs);
    const double res = (sys * sol - rhs).cwiseAbs().maxCoeff();
    if (!sol.allFinite() || res > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff()))
      throw std::runtime_error("flow system is singular or ill-conditioned (" +
                               std::to_string(nu_dim) + " velocity + " + std::to_string(np) +
                               " pressure unknowns, residual " + std::to_string(res) + ")");
  }

  StokesResult out;
  out.velocity = sol.head(nu_dim);
  out.pressure = sol.segment(nu_dim, np);
  out.multiplier = sol[n - 1];
  // L2 norm of the divergence field: (Bu)^T M2^{-1} (Bu) since B = M2 * d1
  Eigen::VectorXd bu = B * out.velocity;
  Eigen::LLT<Eigen::MatrixXd> m2llt(Eigen::MatrixXd(mass_matrix(ctx, 2)));
  if (m2llt.info() != Eigen::Success)
    throw std::runtime_error("pressure mass matrix is not positive definite");
  out.div_residual = std::sqrt(std::max(bu.dot(m2llt.solve(bu)), 0.0));
  return out;
}

}  // namespace hbsdr
