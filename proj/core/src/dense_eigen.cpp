// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "helmres/eigen_solvers.hpp"

namespace helmres
{

namespace
{

std::string qz_failure(const char *routine, lapack_int info, Eigen::Index n)
{
  std::ostringstream msg;
  msg << routine << " failed with info=" << info << " on a pencil of size " << n;
  return msg.str();
}

ComplexVector unit(ComplexVector v)
{
  const double nrm = v.norm();
  if (nrm > 0.0)
  {
    v /= nrm;
  }
  return v;
}

}  // namespace

EigenSolution solve_dtn(const DtnMatrices &mats, const DenseSolveOptions &opts)
{
  const Eigen::Index n = mats.A.rows();
  const Eigen::Index n2 = 2 * n;
  RealMatrix L = RealMatrix::Zero(n2, n2);
  RealMatrix B = RealMatrix::Zero(n2, n2);
  L.topLeftCorner(n, n) = mats.A;
  L.topRightCorner(n, n) = mats.E;
  L.bottomRightCorner(n, n).setIdentity();
  B.topRightCorner(n, n) = -mats.M;
  B.bottomLeftCorner(n, n).setIdentity();

  std::vector<double> alphar(n2), alphai(n2), beta(n2);
  RealMatrix VR(n2, n2);
  double dummy = 0.0;
  const lapack_int info =
      LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n2), L.data(),
                    static_cast<lapack_int>(n2), B.data(), static_cast<lapack_int>(n2),
                    alphar.data(), alphai.data(), beta.data(), &dummy, 1, VR.data(),
                    static_cast<lapack_int>(n2));
  if (info != 0)
  {
    throw SolverError(qz_failure("dggev", info, n2));
  }

  EigenSolution sol;
  sol.pencil_size = static_cast<std::size_t>(n2);
  for (Eigen::Index j = 0; j < n2; j++)
  {
    ComplexVector z(n2);
    if (alphai[j] > 0.0 && j + 1 < n2)
    {
      z = VR.col(j).cast<Complex>() + 1i * VR.col(j + 1).cast<Complex>();
    }
    else if (alphai[j] < 0.0 && j > 0)
    {
      z = VR.col(j - 1).cast<Complex>() - 1i * VR.col(j).cast<Complex>();
    }
    else
    {
      z = VR.col(j).cast<Complex>();
    }
    const Complex alpha(alphar[j], alphai[j]);
    if (beta[j] == 0.0 || std::abs(alpha) > opts.infinite_cutoff * std::abs(beta[j]))
    {
      sol.dropped_infinite++;
      continue;
    }
    const Complex lambda = alpha / beta[j];
    if (std::abs(lambda) < opts.zero_cutoff)
    {
      sol.dropped_zero++;
      continue;
    }
    // Block structure gives eta = lambda xi, so the leading block carries the mode.
    sol.pairs.push_back({1i * lambda, unit(z.head(n)), Formulation::DtN, lambda});
  }
  return sol;
}

EigenSolution solve_pml(const PmlMatrices &mats, const DenseSolveOptions &opts)
{
  const Eigen::Index n = mats.A.rows();
  ComplexMatrix A = mats.A;
  ComplexMatrix B = mats.M;
  std::vector<Complex> alpha(n), beta(n);
  ComplexMatrix VR(n, n);
  Complex dummy = 0.0;
  const lapack_int info =
      LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), A.data(),
                    static_cast<lapack_int>(n), B.data(), static_cast<lapack_int>(n),
                    alpha.data(), beta.data(), &dummy, 1, VR.data(), static_cast<lapack_int>(n));
  if (info != 0)
  {
    throw SolverError(qz_failure("zggev", info, n));
  }

  EigenSolution sol;
  sol.pencil_size = static_cast<std::size_t>(n);
  for (Eigen::Index j = 0; j < n; j++)
  {
    if (beta[j] == 0.0 || std::abs(alpha[j]) > opts.infinite_cutoff * std::abs(beta[j]))
    {
      sol.dropped_infinite++;
      continue;
    }
    const Complex lambda = alpha[j] / beta[j];
    Complex k = std::sqrt(lambda);
    if (k.real() == 0.0 && k.imag() > 0.0)
    {
      k = -k;
    }
    sol.pairs.push_back({k, unit(VR.col(j)), Formulation::PML, lambda});
  }
  return sol;
}

double smallest_singular_value(const ComplexMatrix &T)
{
  if (!T.allFinite())
  {
    throw std::invalid_argument("smallest_singular_value: matrix has non-finite entries");
  }
  if (T.size() == 0)
  {
    return 0.0;
  }
  Eigen::BDCSVD<ComplexMatrix> svd(T);
  return svd.singularValues().minCoeff();
}

}  // namespace helmres
