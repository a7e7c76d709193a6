// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include "helmres/assembly.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace helmres
{

namespace
{

void require_vertex(const Mesh1D &mesh, double x, const char *who, const char *what)
{
  const Interval dom = mesh.domain();
  const double tol = 1e-10 * std::max(1.0, dom.length());
  if (x < dom.lo - tol || x > dom.hi + tol)
  {
    return;
  }
  if (!mesh.has_vertex(x, tol))
  {
    std::ostringstream msg;
    msg << who << ": mesh not aligned with " << what << " at x=" << x;
    throw std::invalid_argument(msg.str());
  }
}

void require_aligned(const Mesh1D &mesh, const MediumProfile &medium, const char *who)
{
  for (double b : medium.breakpoints())
  {
    require_vertex(mesh, b, who, "medium breakpoint");
  }
}

// Cell-wise quadrature data in physical coordinates.
struct CellQuadrature
{
  std::vector<double> x;
  std::vector<double> w;  // includes the Jacobian
  BasisTable basis;
};

CellQuadrature cell_quadrature(const MeshedSpace &space, std::size_t c, const QuadratureRule &rule)
{
  CellQuadrature cq;
  const double jac = 0.5 * space.mesh().cell_length(c);
  for (std::size_t q = 0; q < rule.points.size(); q++)
  {
    cq.x.push_back(space.map_to_physical(c, rule.points[q]));
    cq.w.push_back(rule.weights[q] * jac);
  }
  cq.basis = evaluate_basis(space, c, rule.points);
  return cq;
}

template <typename Matrix, typename Local>
void scatter(const MeshedSpace &space, std::size_t c, const Local &local, Matrix &global)
{
  const std::size_t nb = space.basis().size();
  for (std::size_t i = 0; i < nb; i++)
  {
    const auto gi = space.dof(c, i);
    if (gi == kNoDof)
    {
      continue;
    }
    for (std::size_t j = 0; j < nb; j++)
    {
      const auto gj = space.dof(c, j);
      if (gj != kNoDof)
      {
        global(gi, gj) += local(i, j);
      }
    }
  }
}

}  // namespace

DtnMatrices assemble_dtn(const MeshedSpace &space, const MediumProfile &medium,
                         const AssemblyOptions &opts)
{
  if (space.boundary_condition() != BoundaryCondition::None)
  {
    throw std::invalid_argument("assemble_dtn: space must not carry essential BCs");
  }
  const Interval dom = space.domain();
  const Interval res = medium.resonator_support();
  if (dom.lo > res.lo + 1e-12 || dom.hi < res.hi - 1e-12)
  {
    throw std::invalid_argument("assemble_dtn: domain does not contain resonator support");
  }
  require_aligned(space.mesh(), medium, "assemble_dtn");

  const std::size_t n = space.dof_count();
  const std::size_t nb = space.basis().size();
  DtnMatrices out{RealMatrix::Zero(n, n), RealMatrix::Zero(n, n), RealMatrix::Zero(n, n), space,
                  medium.n0()};
  RealMatrix ka(nb, nb), km(nb, nb);
  for (std::size_t c = 0; c < space.mesh().num_cells(); c++)
  {
    const int deg = medium.degree_on(space.mesh().cell_left(c), space.mesh().cell_right(c));
    const CellQuadrature cq =
        cell_quadrature(space, c, gauss_legendre(space.degree() + opts.extra_points + deg));
    ka.setZero();
    km.setZero();
    for (std::size_t q = 0; q < cq.x.size(); q++)
    {
      const double wn2 = cq.w[q] * medium.n_squared(cq.x[q]);
      const auto phi = cq.basis.values.row(q);
      const auto dphi = cq.basis.derivatives.row(q);
      ka.noalias() += cq.w[q] * dphi.transpose() * dphi;
      km.noalias() += wn2 * phi.transpose() * phi;
    }
    scatter(space, c, ka, out.A);
    scatter(space, c, km, out.M);
  }
  // Nodal basis: only the endpoint shape functions are nonzero at -d and d.
  out.E(0, 0) = medium.n0();
  out.E(n - 1, n - 1) = medium.n0();
  return out;
}

PmlMatrices assemble_pml(const MeshedSpace &space, const MediumProfile &medium,
                         const StretchFunction &stretch, const AssemblyOptions &opts)
{
  if (space.boundary_condition() != BoundaryCondition::DirichletBothEnds)
  {
    throw std::invalid_argument("assemble_pml: space must carry Dirichlet conditions");
  }
  const PmlConfig &cfg = stretch.config();
  const Interval dom = space.domain();
  if (std::abs(dom.lo + cfg.ell()) > 1e-10 || std::abs(dom.hi - cfg.ell()) > 1e-10)
  {
    throw std::invalid_argument("assemble_pml: space domain must be (-l, l)");
  }
  require_aligned(space.mesh(), medium, "assemble_pml");
  for (double x : {-cfg.x_c(), -cfg.d(), cfg.d(), cfg.x_c()})
  {
    require_vertex(space.mesh(), x, "assemble_pml", "PML ramp endpoint");
  }

  const std::size_t n = space.dof_count();
  const std::size_t nb = space.basis().size();
  PmlMatrices out{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n), space};
  ComplexMatrix ka(nb, nb), km(nb, nb);
  for (std::size_t c = 0; c < space.mesh().num_cells(); c++)
  {
    const double lo = space.mesh().cell_left(c);
    const double hi = space.mesh().cell_right(c);
    const double mid = std::abs(0.5 * (lo + hi));
    const bool in_ramp = mid > cfg.d() && mid < cfg.x_c();
    const int extra = (in_ramp ? opts.ramp_extra_points : opts.extra_points) +
                      medium.degree_on(lo, hi);
    const CellQuadrature cq = cell_quadrature(space, c, gauss_legendre(space.degree() + extra));
    ka.setZero();
    km.setZero();
    for (std::size_t q = 0; q < cq.x.size(); q++)
    {
      const Complex alpha = stretch.alpha(cq.x[q]);
      const Complex wa = cq.w[q] / alpha;
      const Complex wm = cq.w[q] * medium.n_squared(cq.x[q]) * alpha;
      const RealVector phi = cq.basis.values.row(q).transpose();
      const RealVector dphi = cq.basis.derivatives.row(q).transpose();
      const RealMatrix dd = dphi * dphi.transpose();
      const RealMatrix pp = phi * phi.transpose();
      ka += wa * dd.cast<Complex>();
      km += wm * pp.cast<Complex>();
    }
    scatter(space, c, ka, out.A);
    scatter(space, c, km, out.M);
  }
  return out;
}

RealMatrix assemble_resonator_mass(const MeshedSpace &space, const AssemblyOptions &opts)
{
  const std::size_t n = space.dof_count();
  const std::size_t nb = space.basis().size();
  RealMatrix mass = RealMatrix::Zero(n, n);
  const QuadratureRule rule = gauss_legendre(space.degree() + opts.extra_points);
  RealMatrix km(nb, nb);
  for (std::size_t c = 0; c < space.mesh().num_cells(); c++)
  {
    const CellQuadrature cq = cell_quadrature(space, c, rule);
    km.setZero();
    for (std::size_t q = 0; q < cq.x.size(); q++)
    {
      const auto phi = cq.basis.values.row(q);
      km.noalias() += cq.w[q] * phi.transpose() * phi;
    }
    scatter(space, c, km, mass);
  }
  return mass;
}

void write_matrix_text(std::ostream &os, const ComplexMatrix &m)
{
  os << "# " << m.rows() << " " << m.cols() << "\n";
  os.precision(17);
  for (Eigen::Index j = 0; j < m.cols(); j++)
  {
    for (Eigen::Index i = 0; i < m.rows(); i++)
    {
      if (m(i, j) != Complex(0.0))
      {
        os << i << " " << j << " " << m(i, j).real() << " " << m(i, j).imag() << "\n";
      }
    }
  }
}

void write_matrix_text(std::ostream &os, const RealMatrix &m)
{
  write_matrix_text(os, ComplexMatrix(m.cast<Complex>()));
}

}  // namespace helmres
