// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include "helmres/lippmann.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace helmres
{

LsContext::LsContext(MeshedSpace space, MediumProfile medium, int inner_order)
  : space_(std::move(space)), medium_(std::move(medium)),
    inner_(gauss_legendre(inner_order > 0 ? inner_order : space_.degree() + 6))
{
  if (space_.boundary_condition() != BoundaryCondition::None)
  {
    throw std::invalid_argument("LsContext: resonator space must not carry boundary conditions");
  }
  const Interval dom = space_.domain();
  const Interval res = medium_.resonator_support();
  if (dom.lo > res.lo + 1e-12 || dom.hi < res.hi - 1e-12)
  {
    throw std::invalid_argument("LsContext: space does not cover the resonator support");
  }
  for (double b : medium_.breakpoints())
  {
    if (dom.contains(b) && !space_.mesh().has_vertex(b, 1e-10))
    {
      std::ostringstream msg;
      msg << "LsContext: mesh not aligned with medium breakpoint at x=" << b;
      throw std::invalid_argument(msg.str());
    }
  }
  mass_ = assemble_resonator_mass(space_);
  mass_llt_.compute(mass_);
  if (mass_llt_.info() != Eigen::Success)
  {
    throw SolverError("LsContext: resonator mass matrix is not positive definite");
  }
  const Mesh1D &mesh = space_.mesh();
  for (std::size_t c = 0; c < mesh.num_cells(); c++)
  {
    cell_rules_.push_back(make_rule(c, mesh.cell_left(c), mesh.cell_right(c)));
    bool any = false;
    for (double v : cell_rules_.back().wc)
    {
      any = any || v != 0.0;
    }
    cell_has_contrast_.push_back(any);
  }
}

LsContext::CellRule LsContext::make_rule(std::size_t cell, double lo, double hi) const
{
  CellRule rule;
  const double jac = 0.5 * (hi - lo);
  std::vector<double> ref(inner_.points.size());
  for (std::size_t q = 0; q < inner_.points.size(); q++)
  {
    const double y = 0.5 * (lo + hi) + jac * inner_.points[q];
    rule.y.push_back(y);
    rule.wc.push_back(inner_.weights[q] * jac * medium_.contrast(y));
    ref[q] = space_.map_to_reference(cell, y);
  }
  rule.phi = evaluate_basis(space_, cell, ref).values;
  return rule;
}

void LsContext::accumulate_row(const CellRule &rule, std::size_t cell, double x, Complex k,
                               Eigen::Ref<ComplexVector> row) const
{
  const Complex ikn0 = 1i * medium_.n0() * k;
  const std::size_t nb = space_.basis().size();
  for (std::size_t m = 0; m < rule.y.size(); m++)
  {
    if (rule.wc[m] == 0.0)
    {
      continue;
    }
    const Complex g = std::exp(ikn0 * std::abs(x - rule.y[m])) * rule.wc[m];
    for (std::size_t l = 0; l < nb; l++)
    {
      row[space_.dof(cell, l)] += g * rule.phi(m, l);
    }
  }
}

Complex LsContext::kernel_value(Complex k, double x, const ComplexVector &u) const
{
  const Complex ikn0 = 1i * medium_.n0() * k;
  const Mesh1D &mesh = space_.mesh();
  const std::size_t nb = space_.basis().size();
  Complex sum = 0.0;
  auto integrate = [&](const CellRule &rule, std::size_t c)
  {
    for (std::size_t m = 0; m < rule.y.size(); m++)
    {
      if (rule.wc[m] == 0.0)
      {
        continue;
      }
      Complex um = 0.0;
      for (std::size_t l = 0; l < nb; l++)
      {
        um += rule.phi(m, l) * u[space_.dof(c, l)];
      }
      sum += std::exp(ikn0 * std::abs(x - rule.y[m])) * rule.wc[m] * um;
    }
  };
  for (std::size_t c = 0; c < mesh.num_cells(); c++)
  {
    if (!cell_has_contrast_[c])
    {
      continue;
    }
    const double lo = mesh.cell_left(c), hi = mesh.cell_right(c);
    if (x > lo && x < hi)
    {
      integrate(make_rule(c, lo, x), c);
      integrate(make_rule(c, x, hi), c);
    }
    else
    {
      integrate(cell_rules_[c], c);
    }
  }
  return sum * (1i * k / (2.0 * medium_.n0()));
}

ComplexVector LsContext::apply_kernel(Complex k, const ComplexVector &u,
                                      std::span<const double> points) const
{
  if (static_cast<std::size_t>(u.size()) != space_.dof_count())
  {
    throw std::invalid_argument("apply_kernel: coefficient vector has wrong size");
  }
  if (!u.allFinite())
  {
    throw std::invalid_argument("apply_kernel: coefficient vector contains NaN or Inf");
  }
  ComplexVector out(points.size());
  for (std::size_t i = 0; i < points.size(); i++)
  {
    out[static_cast<Eigen::Index>(i)] = kernel_value(k, points[i], u);
  }
  return out;
}

ComplexMatrix LsContext::collocation_matrix(Complex k) const
{
  const auto n = static_cast<Eigen::Index>(space_.dof_count());
  ComplexMatrix K = ComplexMatrix::Zero(n, n);
  const Mesh1D &mesh = space_.mesh();
  const auto nodes = space_.node_coords();
  for (Eigen::Index i = 0; i < n; i++)
  {
    const double x = nodes[static_cast<std::size_t>(i)];
    ComplexVector row = ComplexVector::Zero(n);
    for (std::size_t c = 0; c < mesh.num_cells(); c++)
    {
      if (!cell_has_contrast_[c])
      {
        continue;
      }
      const double lo = mesh.cell_left(c), hi = mesh.cell_right(c);
      if (x > lo && x < hi)
      {
        accumulate_row(make_rule(c, lo, x), c, x, k, row);
        accumulate_row(make_rule(c, x, hi), c, x, k, row);
      }
      else
      {
        accumulate_row(cell_rules_[c], c, x, k, row);
      }
    }
    K.row(i) = row.transpose();
  }
  K *= 1i * k / (2.0 * medium_.n0());
  return ComplexMatrix::Identity(n, n) - K;
}

ComplexVector LsContext::project_kernel(Complex k, const ComplexVector &u) const
{
  const auto n = static_cast<Eigen::Index>(space_.dof_count());
  const Mesh1D &mesh = space_.mesh();
  const std::size_t nb = space_.basis().size();
  ComplexVector b = ComplexVector::Zero(n);
  std::vector<double> ref(inner_.points.begin(), inner_.points.end());
  for (std::size_t c = 0; c < mesh.num_cells(); c++)
  {
    const double jac = 0.5 * mesh.cell_length(c);
    const BasisTable table = evaluate_basis(space_, c, ref);
    for (std::size_t q = 0; q < ref.size(); q++)
    {
      const double x = space_.map_to_physical(c, ref[q]);
      const Complex ku = kernel_value(k, x, u) * (inner_.weights[q] * jac);
      for (std::size_t l = 0; l < nb; l++)
      {
        b[space_.dof(c, l)] += table.values(q, l) * ku;
      }
    }
  }
  // M^r is real SPD: solve real and imaginary parts separately.
  ComplexVector eta(n);
  eta.real() = mass_llt_.solve(b.real());
  eta.imag() = mass_llt_.solve(b.imag());
  return eta;
}

double LsContext::l2_norm(const ComplexVector &v) const
{
  const double re = v.real().dot(mass_ * v.real());
  const double im = v.imag().dot(mass_ * v.imag());
  return std::sqrt(std::max(0.0, re + im));
}

LsContext make_ls_context(const MediumProfile &medium, int p, double h, int refinements,
                          int inner_order)
{
  const Interval support = medium.resonator_support();
  Mesh1D mesh = build_mesh(support, medium.breakpoints(), h, refinements);
  return LsContext(build_space(std::move(mesh), p, BoundaryCondition::None), medium,
                   inner_order);
}

FilterReport filter_epsilon(const LsContext &ctx, const EigenPair &pair,
                            const MeshedSpace &source)
{
  const auto nodes = ctx.space().node_coords();
  ComplexVector xi(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); i++)
  {
    xi[static_cast<Eigen::Index>(i)] = source.evaluate(pair.vector, nodes[i]);
  }
  const double nrm = ctx.l2_norm(xi);
  if (!(nrm >= 1e-12))
  {
    std::ostringstream msg;
    msg << "filter_epsilon: eigenvector at k=" << pair.k << " has no support on the resonator";
    throw NoResonatorSupport(msg.str());
  }
  xi /= nrm;
  const ComplexVector eta = ctx.project_kernel(pair.k, xi);
  FilterReport rep;
  rep.k = pair.k;
  rep.epsilon = ctx.l2_norm(xi - eta);
  rep.formulation = pair.formulation;
  return rep;
}

Complex PseudospectrumGrid::point(int ix, int iy) const
{
  const double dx = nx > 1 ? (region.re_max - region.re_min) / (nx - 1) : 0.0;
  const double dy = ny > 1 ? (region.im_max - region.im_min) / (ny - 1) : 0.0;
  return {region.re_min + ix * dx, region.im_min + iy * dy};
}

PseudospectrumGrid pseudospectrum(Formulation formulation, const Rectangle &region, int nx,
                                  int ny, const PseudospectrumProblem &problem)
{
  if (nx < 1 || ny < 1)
  {
    throw std::invalid_argument("pseudospectrum: resolution must be positive");
  }
  PseudospectrumGrid grid{region, nx, ny, formulation, RealMatrix::Zero(ny, nx)};
  for (int iy = 0; iy < ny; iy++)
  {
    for (int ix = 0; ix < nx; ix++)
    {
      const Complex z = grid.point(ix, iy);
      double smin = 0.0;
      switch (formulation)
      {
        case Formulation::LS:
          if (problem.ls == nullptr)
          {
            throw std::invalid_argument("pseudospectrum: LS context missing");
          }
          smin = smallest_singular_value(problem.ls->collocation_matrix(z));
          break;
        case Formulation::DtN:
        {
          if (problem.dtn == nullptr)
          {
            throw std::invalid_argument("pseudospectrum: DtN matrices missing");
          }
          const Complex lambda = -1i * z;
          const auto &m = *problem.dtn;
          const ComplexMatrix Q = m.A.cast<Complex>() + lambda * m.E.cast<Complex>() +
                                  (lambda * lambda) * m.M.cast<Complex>();
          smin = smallest_singular_value(Q);
          break;
        }
        case Formulation::PML:
          if (problem.pml == nullptr)
          {
            throw std::invalid_argument("pseudospectrum: PML matrices missing");
          }
          smin = smallest_singular_value(problem.pml->A - (z * z) * problem.pml->M);
          break;
      }
      grid.values(iy, ix) = smin;
    }
  }
  return grid;
}

void write_pseudospectrum_csv(std::ostream &os, const PseudospectrumGrid &grid)
{
  os << "re_k,im_k,smin\n";
  os.precision(12);
  for (int iy = 0; iy < grid.ny; iy++)
  {
    for (int ix = 0; ix < grid.nx; ix++)
    {
      const Complex z = grid.point(ix, iy);
      os << z.real() << "," << z.imag() << "," << grid.values(iy, ix) << "\n";
    }
  }
}

}  // namespace helmres
