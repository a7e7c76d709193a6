// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_LIPPMANN_HPP
#define HELMRES_LIPPMANN_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "helmres/assembly.hpp"
#include "helmres/eigen_solvers.hpp"

namespace helmres
{

// Discretization of the volume-integral operator
//   (K(k) u)(x) = (i k / 2 n0) int_{Omega_r} exp(i n0 k |x - y|) (n(y)^2 - n0^2) u(y) dy
// on a nodal space over the resonator support.
class LsContext
{
public:
  // inner_order <= 0 selects p + 6 Gauss-Legendre points per (half) cell.
  LsContext(MeshedSpace space, MediumProfile medium, int inner_order = 0);

  const MeshedSpace &space() const { return space_; }
  const MediumProfile &medium() const { return medium_; }
  const RealMatrix &mass() const { return mass_; }
  int inner_order() const { return inner_.order; }

  // (K(k) u)(x) for every x in points.
  ComplexVector apply_kernel(Complex k, const ComplexVector &u,
                             std::span<const double> points) const;

  // T(k) = I - K(k), collocated at the space nodes.
  ComplexMatrix collocation_matrix(Complex k) const;

  // Coefficients of the L2 projection of K(k) u onto the space.
  ComplexVector project_kernel(Complex k, const ComplexVector &u) const;

  // ||v||_{L2(Omega_r)} for coefficients v.
  double l2_norm(const ComplexVector &v) const;

private:
  struct CellRule
  {
    std::vector<double> y;
    std::vector<double> wc;  // weight * contrast
    RealMatrix phi;          // points x (p+1)
  };

  CellRule make_rule(std::size_t cell, double lo, double hi) const;
  // Adds the contribution of integrating against the rule to `row` (per local dof).
  void accumulate_row(const CellRule &rule, std::size_t cell, double x, Complex k,
                      Eigen::Ref<ComplexVector> row) const;
  Complex kernel_value(Complex k, double x, const ComplexVector &u) const;

  MeshedSpace space_;
  MediumProfile medium_;
  QuadratureRule inner_;
  RealMatrix mass_;
  Eigen::LLT<RealMatrix> mass_llt_;
  std::vector<CellRule> cell_rules_;
  std::vector<bool> cell_has_contrast_;
};

// Builds an LsContext on the resonator support of `medium`, meshed with the same initial
// cell size and refinement count as the FEM discretizations.
LsContext make_ls_context(const MediumProfile &medium, int p, double h, int refinements,
                          int inner_order = 0);

struct FilterReport
{
  Complex k;
  double epsilon = 0.0;
  std::optional<bool> feasible;  // PML only
  Formulation formulation = Formulation::DtN;
};

class NoResonatorSupport : public SolverError
{
public:
  using SolverError::SolverError;
};

// Pseudomode residual ||u - P K(k) u||_{L2(Omega_r)} of the eigenpair, after restricting
// the eigenvector from `source` to the resonator space and normalizing to unit L2 norm.
FilterReport filter_epsilon(const LsContext &ctx, const EigenPair &pair,
                            const MeshedSpace &source);

//
// Pseudospectra.
//

struct PseudospectrumGrid
{
  Rectangle region;
  int nx = 0;
  int ny = 0;
  Formulation formulation = Formulation::LS;
  RealMatrix values;  // ny x nx, row iy has Im k = im_min + iy * dy

  Complex point(int ix, int iy) const;
};

struct PseudospectrumProblem
{
  const LsContext *ls = nullptr;
  const DtnMatrices *dtn = nullptr;
  const PmlMatrices *pml = nullptr;
};

PseudospectrumGrid pseudospectrum(Formulation formulation, const Rectangle &region, int nx,
                                  int ny, const PseudospectrumProblem &problem);

// CSV with header re_k,im_k,smin, row-major over the grid.
void write_pseudospectrum_csv(std::ostream &os, const PseudospectrumGrid &grid);

}  // namespace helmres

#endif  // HELMRES_LIPPMANN_HPP
