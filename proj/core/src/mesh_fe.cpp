// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include "helmres/mesh_fe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace helmres
{

namespace
{

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x)
{
  double p_prev = 1.0, p = x;
  if (n == 0)
  {
    return {1.0, 0.0};
  }
  for (int k = 2; k <= n; k++)
  {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  return {p, p_prev};
}

}  // namespace

QuadratureRule gauss_legendre(int n)
{
  if (n < 1)
  {
    throw std::invalid_argument("gauss_legendre: need at least one point");
  }
  QuadratureRule rule;
  rule.order = n;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; it++)
    {
      auto [p, pm1] = legendre_pair(n, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    auto [p, pm1] = legendre_pair(n, x);
    dp = n * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
  {
    rule.points[n / 2] = 0.0;
  }
  return rule;
}

std::vector<double> gauss_lobatto_nodes(int p)
{
  if (p < 1)
  {
    throw std::invalid_argument("gauss_lobatto_nodes: degree must be >= 1");
  }
  std::vector<double> x(p + 1);
  for (int j = 0; j <= p; j++)
  {
    double xj = std::cos(kPi * j / p);
    if (j > 0 && j < p)
    {
      for (int it = 0; it < 100; it++)
      {
        auto [pp, pm1] = legendre_pair(p, xj);
        const double dx = (xj * pp - pm1) / ((p + 1) * pp);
        xj -= dx;
        if (std::abs(dx) < 1e-16)
        {
          break;
        }
      }
    }
    x[j] = xj;
  }
  std::sort(x.begin(), x.end());
  x.front() = -1.0;
  x.back() = 1.0;
  if (p % 2 == 0)
  {
    x[p / 2] = 0.0;
  }
  return x;
}

LagrangeBasis::LagrangeBasis(int p) : degree_(p), nodes_(gauss_lobatto_nodes(p))
{
  const std::size_t n = nodes_.size();
  bary_.assign(n, 1.0);
  for (std::size_t j = 0; j < n; j++)
  {
    for (std::size_t k = 0; k < n; k++)
    {
      if (k != j)
      {
        bary_[j] /= (nodes_[j] - nodes_[k]);
      }
    }
  }
  diff_ = RealMatrix::Zero(n, n);
  for (std::size_t i = 0; i < n; i++)
  {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; j++)
    {
      if (i != j)
      {
        diff_(i, j) = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
        row_sum += diff_(i, j);
      }
    }
    diff_(i, i) = -row_sum;
  }
}

void LagrangeBasis::evaluate(double xi, std::span<double> values) const
{
  const std::size_t n = nodes_.size();
  for (std::size_t j = 0; j < n; j++)
  {
    if (xi == nodes_[j])
    {
      std::fill(values.begin(), values.end(), 0.0);
      values[j] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < n; j++)
  {
    values[j] = bary_[j] / (xi - nodes_[j]);
    denom += values[j];
  }
  for (std::size_t j = 0; j < n; j++)
  {
    values[j] /= denom;
  }
}

void LagrangeBasis::evaluate(double xi, std::span<double> values,
                             std::span<double> derivatives) const
{
  evaluate(xi, values);
  // l_j' has degree p-1, so it is reproduced exactly by interpolating its nodal values.
  const std::size_t n = nodes_.size();
  for (std::size_t j = 0; j < n; j++)
  {
    double d = 0.0;
    for (std::size_t i = 0; i < n; i++)
    {
      d += values[i] * diff_(i, j);
    }
    derivatives[j] = d;
  }
}

Mesh1D::Mesh1D(std::vector<double> vertices) : vertices_(std::move(vertices))
{
  if (vertices_.size() < 2)
  {
    throw std::invalid_argument("Mesh1D: need at least two vertices");
  }
  for (std::size_t i = 1; i < vertices_.size(); i++)
  {
    if (!(vertices_[i] > vertices_[i - 1]))
    {
      std::ostringstream msg;
      msg << "Mesh1D: vertices not strictly increasing at index " << i << " ("
          << vertices_[i - 1] << ", " << vertices_[i] << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  coarse_cells_ = num_cells();
}

bool Mesh1D::has_vertex(double x, double tol) const
{
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x - tol);
  return it != vertices_.end() && std::abs(*it - x) <= tol;
}

std::size_t Mesh1D::locate(double x) const
{
  if (x < vertices_.front() || x > vertices_.back())
  {
    std::ostringstream msg;
    msg << "Mesh1D::locate: point " << x << " outside [" << vertices_.front() << ", "
        << vertices_.back() << "]";
    throw std::out_of_range(msg.str());
  }
  auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x);
  std::size_t c = static_cast<std::size_t>(it - vertices_.begin());
  return std::min(c == 0 ? 0 : c - 1, num_cells() - 1);
}

Mesh1D build_mesh(Interval domain, std::span<const double> breakpoints,
                  double initial_cell_size, int refinements)
{
  if (!(domain.hi > domain.lo))
  {
    throw std::invalid_argument("build_mesh: empty domain");
  }
  if (!(initial_cell_size > 0.0))
  {
    throw std::invalid_argument("build_mesh: initial cell size must be positive");
  }
  if (refinements < 0)
  {
    throw std::invalid_argument("build_mesh: refinements must be >= 0");
  }
  const double tol = 1e-12 * std::max(1.0, domain.length());
  std::vector<double> fixed = {domain.lo, domain.hi};
  for (double b : breakpoints)
  {
    if (!domain.contains(b, tol))
    {
      std::ostringstream msg;
      msg << "build_mesh: breakpoint " << b << " outside domain [" << domain.lo << ", "
          << domain.hi << "]";
      throw std::invalid_argument(msg.str());
    }
    fixed.push_back(std::clamp(b, domain.lo, domain.hi));
  }
  std::sort(fixed.begin(), fixed.end());
  fixed.erase(std::unique(fixed.begin(), fixed.end(),
                          [tol](double a, double b) { return std::abs(a - b) <= tol; }),
              fixed.end());

  std::vector<double> coarse = {fixed.front()};
  for (std::size_t s = 1; s < fixed.size(); s++)
  {
    const double lo = fixed[s - 1], hi = fixed[s];
    const auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil((hi - lo) / initial_cell_size - 1e-9)));
    for (std::size_t i = 1; i < n; i++)
    {
      coarse.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    }
    coarse.push_back(hi);
  }

  std::vector<double> verts = coarse;
  for (int r = 0; r < refinements; r++)
  {
    std::vector<double> finer;
    finer.reserve(2 * verts.size());
    for (std::size_t i = 0; i + 1 < verts.size(); i++)
    {
      finer.push_back(verts[i]);
      finer.push_back(0.5 * (verts[i] + verts[i + 1]));
    }
    finer.push_back(verts.back());
    verts = std::move(finer);
  }
  Mesh1D mesh(std::move(verts));
  mesh.coarse_cells_ = coarse.size() - 1;
  mesh.refinements_ = refinements;
  return mesh;
}

MeshedSpace::MeshedSpace(Mesh1D mesh, int degree, BoundaryCondition bc)
  : mesh_(std::move(mesh)), degree_(degree), bc_(bc),
    basis_(degree >= 1 ? degree : throw std::invalid_argument(
                                          "build_space: polynomial degree must be >= 1"))
{
  const std::size_t total = static_cast<std::size_t>(degree_) * mesh_.num_cells() + 1;
  const auto nodes = basis_.nodes();
  std::vector<double> all(total);
  for (std::size_t c = 0; c < mesh_.num_cells(); c++)
  {
    for (std::size_t l = 0; l <= static_cast<std::size_t>(degree_); l++)
    {
      all[c * degree_ + l] = map_to_physical(c, nodes[l]);
    }
  }
  if (bc_ == BoundaryCondition::DirichletBothEnds)
  {
    if (total < 3)
    {
      throw std::invalid_argument("build_space: Dirichlet space has no interior DOFs");
    }
    node_coords_.assign(all.begin() + 1, all.end() - 1);
  }
  else
  {
    node_coords_ = std::move(all);
  }
}

std::ptrdiff_t MeshedSpace::dof(std::size_t cell, std::size_t local) const
{
  const auto g = static_cast<std::ptrdiff_t>(cell * degree_ + local);
  if (bc_ == BoundaryCondition::None)
  {
    return g;
  }
  const auto last = static_cast<std::ptrdiff_t>(degree_ * mesh_.num_cells());
  return (g == 0 || g == last) ? kNoDof : g - 1;
}

double MeshedSpace::map_to_physical(std::size_t cell, double xi) const
{
  const double a = mesh_.cell_left(cell), b = mesh_.cell_right(cell);
  return 0.5 * (a + b) + 0.5 * (b - a) * xi;
}

double MeshedSpace::map_to_reference(std::size_t cell, double x) const
{
  const double a = mesh_.cell_left(cell), b = mesh_.cell_right(cell);
  return (2.0 * x - a - b) / (b - a);
}

Complex MeshedSpace::evaluate(const ComplexVector &coeffs, double x) const
{
  const std::size_t c = mesh_.locate(x);
  std::vector<double> vals(basis_.size());
  basis_.evaluate(std::clamp(map_to_reference(c, x), -1.0, 1.0), vals);
  Complex u = 0.0;
  for (std::size_t l = 0; l < vals.size(); l++)
  {
    const auto g = dof(c, l);
    if (g != kNoDof)
    {
      u += coeffs[g] * vals[l];
    }
  }
  return u;
}

Complex MeshedSpace::evaluate_derivative(const ComplexVector &coeffs, double x) const
{
  const std::size_t c = mesh_.locate(x);
  std::vector<double> vals(basis_.size()), ders(basis_.size());
  basis_.evaluate(std::clamp(map_to_reference(c, x), -1.0, 1.0), vals, ders);
  const double jac = 2.0 / mesh_.cell_length(c);
  Complex du = 0.0;
  for (std::size_t l = 0; l < vals.size(); l++)
  {
    const auto g = dof(c, l);
    if (g != kNoDof)
    {
      du += coeffs[g] * ders[l] * jac;
    }
  }
  return du;
}

MeshedSpace build_space(Mesh1D mesh, int p, BoundaryCondition bc)
{
  return MeshedSpace(std::move(mesh), p, bc);
}

BasisTable evaluate_basis(const MeshedSpace &space, std::size_t cell,
                          std::span<const double> local_points)
{
  if (cell >= space.mesh().num_cells())
  {
    std::ostringstream msg;
    msg << "evaluate_basis: cell " << cell << " out of range (" << space.mesh().num_cells()
        << " cells)";
    throw std::out_of_range(msg.str());
  }
  const std::size_t nb = space.basis().size();
  BasisTable table{RealMatrix(local_points.size(), nb), RealMatrix(local_points.size(), nb)};
  std::vector<double> vals(nb), ders(nb);
  const double jac = 2.0 / space.mesh().cell_length(cell);
  for (std::size_t q = 0; q < local_points.size(); q++)
  {
    space.basis().evaluate(local_points[q], vals, ders);
    for (std::size_t l = 0; l < nb; l++)
    {
      table.values(q, l) = vals[l];
      table.derivatives(q, l) = ders[l] * jac;
    }
  }
  return table;
}

std::string to_string(Formulation f)
{
  switch (f)
  {
    case Formulation::DtN:
      return "dtn";
    case Formulation::PML:
      return "pml";
    case Formulation::LS:
      return "ls";
  }
  return "unknown";
}

Formulation formulation_from_string(const std::string &name)
{
  if (name == "dtn")
  {
    return Formulation::DtN;
  }
  if (name == "pml")
  {
    return Formulation::PML;
  }
  if (name == "ls")
  {
    return Formulation::LS;
  }
  throw std::invalid_argument("unknown formulation '" + name + "' (expected dtn, pml or ls)");
}

}  // namespace helmres
