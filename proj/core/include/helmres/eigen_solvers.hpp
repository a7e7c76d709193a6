// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_EIGEN_SOLVERS_HPP
#define HELMRES_EIGEN_SOLVERS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "helmres/assembly.hpp"

namespace helmres
{

// A computed eigenvalue k with a unit 2-norm coefficient vector in the space of the
// originating formulation. lambda_raw is the solver-native eigenvalue.
struct EigenPair
{
  Complex k;
  ComplexVector vector;
  Formulation formulation = Formulation::DtN;
  Complex lambda_raw;
};

struct EigenSolution
{
  std::vector<EigenPair> pairs;
  std::size_t pencil_size = 0;
  // Eigenvalues with |lambda| above the cutoff or zero beta.
  std::size_t dropped_infinite = 0;
  // DtN only: the lambda = 0 constant mode of the pure Neumann stiffness.
  std::size_t dropped_zero = 0;
};

struct DenseSolveOptions
{
  double infinite_cutoff = 1e12;
  // Relative threshold under which a DtN lambda counts as the trivial k = 0 mode.
  double zero_cutoff = 1e-9;
};

// Companion linearization [[A, E], [0, I]] z = lambda [[0, -M], [I, 0]] z solved by QZ;
// k = i lambda.
EigenSolution solve_dtn(const DtnMatrices &mats, const DenseSolveOptions &opts = {});

// Generalized problem A xi = lambda M xi solved by complex QZ; k = sqrt(lambda), mapped to
// Re k >= 0 and, on the imaginary axis, Im k <= 0.
EigenSolution solve_pml(const PmlMatrices &mats, const DenseSolveOptions &opts = {});

//
// Scalar complex Newton iteration.
//

struct NewtonOptions
{
  double tol = 1e-14;
  int max_iter = 100;
  // Residual scale: converged once |f| <= tol * scale.
  double scale = 1.0;
};

struct NewtonResult
{
  Complex root;
  double residual = 0.0;
  int iterations = 0;
  std::vector<Complex> iterates;
};

class NewtonFailure : public SolverError
{
public:
  NewtonFailure(const std::string &what, Complex last, double residual)
    : SolverError(what), last_iterate(last), last_residual(residual)
  {
  }
  Complex last_iterate;
  double last_residual;
};

// Derivative by central differences with step 1e-7 max(1, |k|).
NewtonResult newton_root(const std::function<Complex(Complex)> &f, Complex guess,
                         const NewtonOptions &opts = {});

//
// Contour-integral solver for analytic matrix functions T(k).
//

struct ContourConfig
{
  Complex center = 0.0;
  double radius = 1.0;
  int quadrature_nodes = 32;
  int probe_columns = 16;
  double rank_tolerance = 1e-10;
  // Relative change of the zeroth moment between N and N/2 nodes that triggers a warning.
  double convergence_tolerance = 1e-8;
  std::uint64_t seed = 12345;
};

struct ContourResult
{
  std::vector<EigenPair> pairs;
  int rank = 0;
  std::vector<double> singular_values;
  std::vector<std::string> warnings;
};

using MatrixFunction = std::function<ComplexMatrix(Complex)>;

ContourResult solve_contour(const MatrixFunction &T, std::size_t dimension,
                            const ContourConfig &cfg);

// Newton iteration k <- k - 1 / tr(T(k)^{-1} T'(k)) for a simple eigenvalue of T, started
// at a contour estimate. The returned vector spans the numerical null space of T(k).
struct NepRefinement
{
  Complex k;
  ComplexVector vector;
  int iterations = 0;
  bool converged = false;
};

NepRefinement refine_nep_eigenpair(const MatrixFunction &T, Complex guess, int max_iter = 20,
                                   double tol = 1e-13);

// Smallest singular value by dense SVD.
double smallest_singular_value(const ComplexMatrix &T);

}  // namespace helmres

#endif  // HELMRES_EIGEN_SOLVERS_HPP
