// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_REFERENCE_HPP
#define HELMRES_REFERENCE_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "helmres/eigen_solvers.hpp"
#include "helmres/media.hpp"

namespace helmres
{

enum class Provenance
{
  ClosedForm,
  NewtonOnRelation,
  PaperTable,
  FineFem
};

std::string to_string(Provenance p);

struct ReferenceEntry
{
  int index = 0;
  Complex k;
};

struct ReferenceMatch
{
  int index = -1;
  double distance = 0.0;
};

struct ReferenceSet
{
  std::string problem;
  Provenance provenance = Provenance::ClosedForm;
  std::vector<ReferenceEntry> entries;  // ordered by |Re k|
  std::vector<Complex> failed_seeds;

  // Nearest entry to k; nullopt for an empty set.
  std::optional<ReferenceMatch> nearest(Complex k) const;
};

// Sorts by |Re k| (ties by descending Im k) and renumbers from zero.
void sort_reference(ReferenceSet &set);

// k_m = pi m / (2 eta a) - i ln|1/R| / (2 eta a), R = (eta - 1)/(eta + 1), m = 0..m_max.
ReferenceSet slab_dtn_eigenvalues(double eta, double a, int m_max);

// Closed-form eigenvalue family of the finite PML problem for eta = 1.
enum class SlabPmlFamily
{
  // (2m + 1) pi / (2 (beta - a)), m >= 0.
  AsPrinted,
  // m pi / (2 (beta + a)), m >= 1: Dirichlet modes of the stretched interval.
  StretchedLength
};

// Cross-multiplied slab relation with a finite PML,
//   e^{-4 i eta k a} (eta (1 - E) + (1 + E))^2 - (eta (1 - E) - (1 + E))^2,  E = e^{2 i k beta}.
Complex slab_pml_relation_residual(Complex k, double eta, double a, Complex beta);

// eta = 1 uses the closed family (m = 0..m_max entries); otherwise Newton on the relation
// seeded at the DtN values m = 0..m_max. Failed seeds are reported, not thrown.
ReferenceSet slab_pml_eigenvalues(double eta, const PmlConfig &cfg, int m_max,
                                  SlabPmlFamily family = SlabPmlFamily::AsPrinted);
ReferenceSet slab_pml_eigenvalues(double eta, const PmlConfig &cfg,
                                  const std::vector<Complex> &seeds);

// LHS - RHS of the air-filled cavity relation, both fractions cross-multiplied.
Complex cavity_relation_residual(Complex k, double b, double gamma, double eta);

// Newton-refines every seed on the cavity relation.
ReferenceSet cavity_eigenvalues(double b, double gamma, double eta,
                                const std::vector<Complex> &seeds);

// Value and x-derivative of a solution of u'' + k^2 n^2 u = 0.
using FundamentalSolution = std::function<std::pair<Complex, Complex>(double x, Complex k)>;

// Cross-multiplied DtN relation for two independent solutions, truncated at +-d:
//   (psi1'(d) - i k n0 psi1(d)) (psi2'(-d) + i k n0 psi2(-d))
//     - (psi1'(-d) + i k n0 psi1(-d)) (psi2'(d) - i k n0 psi2(d)).
// Throws std::domain_error when the pair is linearly dependent (zero Wronskian).
Complex general_dtn_relation_residual(const FundamentalSolution &psi1,
                                      const FundamentalSolution &psi2, Complex k, double d,
                                      double n0 = 1.0);

// Fundamental pair of a piecewise-constant profile, normalized at x = 0 by
// psi1 = 1, psi1' = 0 and psi2 = 0, psi2' = n(0) k.
std::pair<FundamentalSolution, FundamentalSolution> layered_solutions(
    const MediumProfile &medium);

enum class PaperTable
{
  AirCavity,
  Bump
};

ReferenceSet paper_table(PaperTable table);

// DtN-FEM eigenvalues in `window` on (-d, d), the fine-discretization reference.
ReferenceSet fine_fem_eigenvalues(const MediumProfile &medium, double d, int p, double h,
                                  const Rectangle &window);

}  // namespace helmres

#endif  // HELMRES_REFERENCE_HPP
