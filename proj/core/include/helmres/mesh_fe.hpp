// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_MESH_FE_HPP
#define HELMRES_MESH_FE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "helmres/types.hpp"

namespace helmres
{

//
// Quadrature and reference-element polynomials on [-1, 1].
//

struct QuadratureRule
{
  std::vector<double> points;
  std::vector<double> weights;
  int order = 0;  // number of points; exact for polynomials of degree 2*order-1
};

// Gauss-Legendre rule with n points on [-1, 1].
QuadratureRule gauss_legendre(int n);

// The p+1 Gauss-Lobatto nodes on [-1, 1], ascending, endpoints included.
std::vector<double> gauss_lobatto_nodes(int p);

// Nodal Lagrange basis of degree p on the Gauss-Lobatto nodes of [-1, 1].
class LagrangeBasis
{
public:
  explicit LagrangeBasis(int p);

  int degree() const { return degree_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }

  // Values and d/dxi of all p+1 shape functions at xi. Both spans must have size().
  void evaluate(double xi, std::span<double> values, std::span<double> derivatives) const;
  void evaluate(double xi, std::span<double> values) const;

private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> bary_;
  RealMatrix diff_;  // diff_(i, j) = l_j'(x_i)
};

//
// Meshes and spaces.
//

class Mesh1D
{
public:
  // Vertices must be strictly increasing; at least two.
  explicit Mesh1D(std::vector<double> vertices);

  std::span<const double> vertices() const { return vertices_; }
  std::size_t num_cells() const { return vertices_.size() - 1; }
  double cell_left(std::size_t c) const { return vertices_.at(c); }
  double cell_right(std::size_t c) const { return vertices_.at(c + 1); }
  double cell_length(std::size_t c) const { return cell_right(c) - cell_left(c); }
  Interval domain() const { return {vertices_.front(), vertices_.back()}; }

  // True if some vertex lies within tol of x.
  bool has_vertex(double x, double tol = 1e-12) const;

  // Index of the cell containing x; points on an interior vertex go to the right cell,
  // the right domain end to the last cell. Throws if x is outside the domain.
  std::size_t locate(double x) const;

  // Number of coarse cells before refinement, when built by build_mesh.
  std::size_t coarse_cells() const { return coarse_cells_; }
  int refinements() const { return refinements_; }

private:
  friend Mesh1D build_mesh(Interval, std::span<const double>, double, int);

  std::vector<double> vertices_;
  std::size_t coarse_cells_ = 0;
  int refinements_ = 0;
};

// Uniform partition of `domain` with cells of size at most `initial_cell_size` that
// contains every breakpoint as a vertex, bisected `refinements` times.
Mesh1D build_mesh(Interval domain, std::span<const double> breakpoints,
                  double initial_cell_size, int refinements);

enum class BoundaryCondition
{
  None,
  DirichletBothEnds
};

inline constexpr std::ptrdiff_t kNoDof = -1;

class MeshedSpace
{
public:
  MeshedSpace(Mesh1D mesh, int degree, BoundaryCondition bc);

  const Mesh1D &mesh() const { return mesh_; }
  int degree() const { return degree_; }
  BoundaryCondition boundary_condition() const { return bc_; }
  std::size_t dof_count() const { return node_coords_.size(); }
  std::span<const double> node_coords() const { return node_coords_; }
  const LagrangeBasis &basis() const { return basis_; }
  Interval domain() const { return mesh_.domain(); }

  // Global DOF of local shape function `local` on `cell`, or kNoDof for a removed
  // Dirichlet node.
  std::ptrdiff_t dof(std::size_t cell, std::size_t local) const;

  // Physical coordinate of reference point xi on cell c.
  double map_to_physical(std::size_t cell, double xi) const;
  double map_to_reference(std::size_t cell, double x) const;

  // Evaluates the finite element function with the given coefficients at x.
  Complex evaluate(const ComplexVector &coeffs, double x) const;
  Complex evaluate_derivative(const ComplexVector &coeffs, double x) const;

private:
  Mesh1D mesh_;
  int degree_;
  BoundaryCondition bc_;
  LagrangeBasis basis_;
  std::vector<double> node_coords_;
};

MeshedSpace build_space(Mesh1D mesh, int p, BoundaryCondition bc);

// Shape function values and physical derivatives of all cell-local functions,
// one row per requested reference point.
struct BasisTable
{
  RealMatrix values;       // points x (p+1)
  RealMatrix derivatives;  // points x (p+1), d/dx in physical coordinates
};

BasisTable evaluate_basis(const MeshedSpace &space, std::size_t cell,
                          std::span<const double> local_points);

}  // namespace helmres

#endif  // HELMRES_MESH_FE_HPP
