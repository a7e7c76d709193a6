// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "helmres/eigen_solvers.hpp"

namespace helmres
{

ContourResult solve_contour(const MatrixFunction &T, std::size_t dimension,
                            const ContourConfig &cfg)
{
  if (!(cfg.radius > 0.0))
  {
    throw std::invalid_argument("solve_contour: radius must be positive");
  }
  if (cfg.quadrature_nodes < 8 || cfg.quadrature_nodes % 2 != 0)
  {
    throw std::invalid_argument("solve_contour: need an even number of at least 8 nodes");
  }
  if (cfg.probe_columns < 1)
  {
    throw std::invalid_argument("solve_contour: need at least one probe column");
  }
  const auto n = static_cast<Eigen::Index>(dimension);
  const Eigen::Index L = std::min<Eigen::Index>(cfg.probe_columns, n);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix V(n, L);
  for (Eigen::Index j = 0; j < L; j++)
  {
    for (Eigen::Index i = 0; i < n; i++)
    {
      const double re = gauss(rng);
      const double im = gauss(rng);
      V(i, j) = Complex(re, im);
    }
  }

  // Trapezoid rule on the circle: (1/2 pi i) oint f dz = (r/N) sum_j e^{i theta_j} f(z_j).
  // Even-indexed nodes form the N/2 rule, used as a convergence check.
  const int N = cfg.quadrature_nodes;
  ComplexMatrix A0 = ComplexMatrix::Zero(n, L), A1 = ComplexMatrix::Zero(n, L);
  ComplexMatrix A0_half = ComplexMatrix::Zero(n, L);
  for (int j = 0; j < N; j++)
  {
    const Complex e = std::polar(1.0, 2.0 * kPi * (j + 0.5) / N);
    const Complex z = cfg.center + cfg.radius * e;
    const ComplexMatrix Tz = T(z);
    Eigen::PartialPivLU<ComplexMatrix> lu(Tz);
    const ComplexMatrix X = lu.solve(V);
    const Complex w = cfg.radius * e / static_cast<double>(N);
    A0 += w * X;
    A1 += (w * z) * X;
    if (j % 2 == 0)
    {
      A0_half += (2.0 * w) * X;
    }
  }

  ContourResult result;
  const double a0_norm = A0.norm();
  if (a0_norm > 0.0 && (A0 - A0_half).norm() > cfg.convergence_tolerance * a0_norm)
  {
    std::ostringstream msg;
    msg << "contour quadrature not converged: moment change "
        << (A0 - A0_half).norm() / a0_norm << " between " << N / 2 << " and " << N << " nodes";
    result.warnings.push_back(msg.str());
  }

  Eigen::BDCSVD<ComplexMatrix> svd(A0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector &s = svd.singularValues();
  result.singular_values.assign(s.data(), s.data() + s.size());
  const double threshold = cfg.rank_tolerance * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  int m = 0;
  while (m < s.size() && s(m) > threshold)
  {
    m++;
  }
  result.rank = m;
  if (m == 0)
  {
    return result;
  }
  if (m == L && L < n)
  {
    std::ostringstream msg;
    msg << "solve_contour: probe too small, numerical rank " << m << " equals probe columns "
        << L;
    throw SolverError(msg.str());
  }

  const ComplexMatrix V0 = svd.matrixU().leftCols(m);
  const ComplexMatrix W0 = svd.matrixV().leftCols(m);
  const RealVector sinv = s.head(m).cwiseInverse();
  const ComplexMatrix Bred = V0.adjoint() * A1 * W0 * sinv.asDiagonal();
  Eigen::ComplexEigenSolver<ComplexMatrix> ces(Bred);
  if (ces.info() != Eigen::Success)
  {
    throw SolverError("solve_contour: reduced eigenproblem failed");
  }
  for (Eigen::Index i = 0; i < m; i++)
  {
    const Complex k = ces.eigenvalues()(i);
    if (std::abs(k - cfg.center) >= cfg.radius)
    {
      continue;
    }
    ComplexVector v = V0 * ces.eigenvectors().col(i);
    v.normalize();
    result.pairs.push_back({k, v, Formulation::LS, k});
  }
  return result;
}

NepRefinement refine_nep_eigenpair(const MatrixFunction &T, Complex guess, int max_iter,
                                   double tol)
{
  NepRefinement out;
  out.k = guess;
  for (int it = 0; it < max_iter && !out.converged; it++)
  {
    const Complex k = out.k;
    const double h = 1e-6 * std::max(1.0, std::abs(k));
    const ComplexMatrix dT = (T(k + h) - T(k - h)) / (2.0 * h);
    Eigen::PartialPivLU<ComplexMatrix> lu(T(k));
    const Complex tr = lu.solve(dT).trace();
    if (tr == Complex(0.0) || !std::isfinite(std::abs(tr)))
    {
      break;
    }
    const Complex step = 1.0 / tr;
    out.k = k - step;
    out.iterations = it + 1;
    out.converged = std::abs(step) <= tol * std::max(1.0, std::abs(out.k));
  }
  Eigen::BDCSVD<ComplexMatrix> svd(T(out.k), Eigen::ComputeFullV);
  out.vector = svd.matrixV().col(svd.matrixV().cols() - 1);
  return out;
}

}  // namespace helmres
