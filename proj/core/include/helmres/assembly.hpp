// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_ASSEMBLY_HPP
#define HELMRES_ASSEMBLY_HPP

#include <iosfwd>

#include "helmres/media.hpp"
#include "helmres/mesh_fe.hpp"

namespace helmres
{

// Gauss-Legendre points per cell are p + extra_points + deg n; cells inside the PML ramp
// use ramp_extra_points instead of extra_points.
struct AssemblyOptions
{
  int extra_points = 2;
  int ramp_extra_points = 4;
};

// Matrices of the DtN-truncated quadratic problem (A + lambda E + lambda^2 M) xi = 0
// on (-d, d), with lambda = -i k.
struct DtnMatrices
{
  RealMatrix A;  // int u' v'
  RealMatrix M;  // int n^2 u v
  RealMatrix E;  // n0 (u(-d) v(-d) + u(d) v(d))
  MeshedSpace space;
  double n0 = 1.0;
};

// Complex-symmetric matrices of the finite PML problem A xi = k^2 M xi on (-l, l).
struct PmlMatrices
{
  ComplexMatrix A;  // int (1/alpha) u' v'
  ComplexMatrix M;  // int n^2 alpha u v
  MeshedSpace space;
};

DtnMatrices assemble_dtn(const MeshedSpace &space, const MediumProfile &medium,
                         const AssemblyOptions &opts = {});

PmlMatrices assemble_pml(const MeshedSpace &space, const MediumProfile &medium,
                         const StretchFunction &stretch, const AssemblyOptions &opts = {});

// Unweighted L2 mass matrix on the resonator space.
RealMatrix assemble_resonator_mass(const MeshedSpace &space, const AssemblyOptions &opts = {});

// Writes "# rows cols" followed by one "row col re im" line per nonzero entry.
void write_matrix_text(std::ostream &os, const ComplexMatrix &m);
void write_matrix_text(std::ostream &os, const RealMatrix &m);

}  // namespace helmres

#endif  // HELMRES_ASSEMBLY_HPP
