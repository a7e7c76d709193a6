// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <doctest.h>

#include "support.hpp"

using namespace helmres;
using namespace helmres::testing;

TEST_CASE("single linear element matrices")
{
  const double d = 1.0;
  const MediumProfile m = slab_profile(1.0, d);
  const DtnMatrices mats = assemble_dtn(dtn_space(m, d, 1, 2.0), m);
  REQUIRE(mats.A.rows() == 2);
  const double s = 1.0 / (2.0 * d);
  CHECK(mats.A(0, 0) == doctest::Approx(s));
  CHECK(mats.A(0, 1) == doctest::Approx(-s));
  CHECK(mats.A(1, 1) == doctest::Approx(s));
  CHECK(mats.E(0, 0) == 1.0);
  CHECK(mats.E(1, 1) == 1.0);
  CHECK(mats.E(0, 1) == 0.0);
  CHECK(mats.M(0, 0) == doctest::Approx(2.0 * d / 3.0));
  CHECK(mats.M(0, 1) == doctest::Approx(2.0 * d / 6.0));
  CHECK(mats.M.sum() == doctest::Approx(2.0 * d));
}

TEST_CASE("boundary matrix carries n0")
{
  const MediumProfile m = air_filled_cavity_profile(1.5, std::sqrt(3.5), std::sqrt(2.5));
  const DtnMatrices mats = assemble_dtn(dtn_space(m, 2.0, 3, 0.5), m);
  const auto n = mats.E.rows();
  CHECK(mats.E(0, 0) == doctest::Approx(std::sqrt(2.5)));
  CHECK(mats.E(n - 1, n - 1) == doctest::Approx(std::sqrt(2.5)));
  Eigen::JacobiSVD<RealMatrix> svd(mats.E);
  const auto sv = svd.singularValues();
  for (Eigen::Index i = 2; i < sv.size(); i++)
  {
    CHECK(sv(i) <= 1e-14 * sv(0));
  }
}

TEST_CASE("mass patch test for piecewise constant n")
{
  // Linear elements: each cell contributes n^2 L/6 [[2,1],[1,2]].
  const MediumProfile m = slab_profile(2.0, 1.0);
  const MeshedSpace s = dtn_space(m, 2.0, 1, 0.5);
  const DtnMatrices mats = assemble_dtn(s, m);
  RealMatrix exact = RealMatrix::Zero(s.dof_count(), s.dof_count());
  for (std::size_t c = 0; c < s.mesh().num_cells(); c++)
  {
    const double lo = s.mesh().cell_left(c), hi = s.mesh().cell_right(c);
    const double n2 = std::pow(m.n(0.5 * (lo + hi)), 2);
    const double L = hi - lo;
    exact(c, c) += n2 * L / 3.0;
    exact(c + 1, c + 1) += n2 * L / 3.0;
    exact(c, c + 1) += n2 * L / 6.0;
    exact(c + 1, c) += n2 * L / 6.0;
  }
  CHECK((mats.M - exact).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("mass row sums equal the weighted integral")
{
  const MediumProfile m = slab_profile(1.0, 1.0);
  const DtnMatrices mats = assemble_dtn(dtn_space(m, 1.5, 5, 0.5), m);
  CHECK(mats.M.sum() == doctest::Approx(3.0).epsilon(1e-13));
  const MediumProfile b = bump_profile();
  const DtnMatrices mb = assemble_dtn(dtn_space(b, 1.0, 5, 0.5), b);
  // int_{-1}^{1} (2 - x^2)^2 dx = 8 - 8/3 + 2/5
  CHECK(mb.M.sum() == doctest::Approx(8.0 - 8.0 / 3.0 + 0.4).epsilon(1e-13));
}

TEST_CASE("DtN matrices are symmetric and the stiffness annihilates constants")
{
  const MediumProfile m = air_filled_cavity_profile(1.5, std::sqrt(3.5), std::sqrt(2.5));
  const DtnMatrices mats = assemble_dtn(dtn_space(m, 2.0, 6, 0.25), m);
  CHECK((mats.A - mats.A.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((mats.M - mats.M.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((mats.A * RealVector::Ones(mats.A.rows())).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("quadrature refinement leaves matrices unchanged")
{
  AssemblyOptions fine;
  fine.extra_points = 10;
  fine.ramp_extra_points = 20;
  const MediumProfile ms[] = {slab_profile(2.0, 1.0),
                              air_filled_cavity_profile(1.5, std::sqrt(3.5), std::sqrt(2.5)),
                              bump_profile()};
  for (const auto &m : ms)
  {
    for (int p : {1, 4, 9})
    {
      const MeshedSpace s = dtn_space(m, 2.0, p, 0.5);
      const DtnMatrices a = assemble_dtn(s, m);
      const DtnMatrices b = assemble_dtn(s, m, fine);
      CHECK((a.M - b.M).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((a.A - b.A).cwiseAbs().maxCoeff() < 1e-12 * b.A.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("DtN assembly rejects bad spaces")
{
  const MediumProfile m = slab_profile(2.0, 1.0);
  CHECK_THROWS_AS(assemble_dtn(dtn_space(m, 0.5, 2, 0.25), m), std::invalid_argument);
  const MeshedSpace dir =
      build_space(build_mesh({-1.0, 1.0}, std::vector<double>{}, 0.5, 0), 2,
                  BoundaryCondition::DirichletBothEnds);
  CHECK_THROWS_AS(assemble_dtn(dir, m), std::invalid_argument);
  const MeshedSpace misaligned =
      build_space(build_mesh({-1.2, 1.2}, std::vector<double>{}, 0.8, 0), 2,
                  BoundaryCondition::None);
  CHECK_THROWS_AS(assemble_dtn(misaligned, m), std::invalid_argument);
}

TEST_CASE("PML with zero strength is the Dirichlet Laplacian")
{
  const MediumProfile m = slab_profile(2.0, 1.0);
  const PmlConfig cfg(1.0, 2.0, 3.0, 5.0, 0.0);
  const MeshedSpace s = pml_space(m, cfg, 3, 0.5);
  const PmlMatrices pml = assemble_pml(s, m, StretchFunction(cfg));
  CHECK(pml.A.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(pml.M.imag().cwiseAbs().maxCoeff() == 0.0);

  const MeshedSpace full = build_space(s.mesh(), 3, BoundaryCondition::None);
  const DtnMatrices dtn = assemble_dtn(full, m);
  const auto n = static_cast<Eigen::Index>(s.dof_count());
  // Dirichlet nodes are the two endpoint dofs of the unconstrained space.
  RealMatrix a_int(n, n), m_int(n, n);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < dtn.A.rows(); i++)
  {
    const double x = full.node_coords()[i];
    if (std::abs(std::abs(x) - 5.0) > 1e-12)
    {
      keep.push_back(i);
    }
  }
  REQUIRE(static_cast<Eigen::Index>(keep.size()) == n);
  // Match by coordinate: both spaces order nodes by position.
  for (Eigen::Index i = 0; i < n; i++)
  {
    CHECK(s.node_coords()[i] == doctest::Approx(full.node_coords()[keep[i]]));
    for (Eigen::Index j = 0; j < n; j++)
    {
      a_int(i, j) = dtn.A(keep[i], keep[j]);
      m_int(i, j) = dtn.M(keep[i], keep[j]);
    }
  }
  CHECK((pml.A.real() - a_int).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((pml.M.real() - m_int).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("PML cells beyond the ramp are scaled by the constant stretch")
{
  const MediumProfile m = slab_profile(2.0, 1.0);
  const PmlConfig cfg(1.0, 2.0, 3.0, 5.0, 5.0);
  const PmlConfig off(1.0, 2.0, 3.0, 5.0, 0.0);
  const MeshedSpace s = pml_space(m, cfg, 2, 0.5);
  const PmlMatrices a = assemble_pml(s, m, StretchFunction(cfg));
  const PmlMatrices b = assemble_pml(s, m, StretchFunction(off));
  const Complex alpha(1.0, 5.0);
  int checked = 0;
  for (Eigen::Index i = 0; i < a.A.rows(); i++)
  {
    // Mid-cell nodes of p=2 belong to one cell only.
    const double x = s.node_coords()[i];
    const double rem = std::fmod(std::abs(x), 0.5);
    if (std::abs(x) > 3.0 && std::abs(rem - 0.25) < 1e-12)
    {
      CHECK(std::abs(a.A(i, i) - b.A(i, i) / alpha) < 1e-12 * std::abs(b.A(i, i)));
      CHECK(std::abs(a.M(i, i) - b.M(i, i) * alpha) < 1e-12 * std::abs(b.M(i, i)));
      checked++;
    }
  }
  CHECK(checked == 8);
}

TEST_CASE("PML matrices are complex symmetric")
{
  const MediumProfile m = air_filled_cavity_profile(1.5, std::sqrt(3.5), std::sqrt(2.5));
  const PmlConfig cfg(1.5, 2.0, 3.0, 5.0, 5.0);
  const PmlMatrices pml = assemble_pml(pml_space(m, cfg, 5, 0.5), m, StretchFunction(cfg));
  CHECK((pml.A - pml.A.transpose()).cwiseAbs().maxCoeff() < 1e-14 * pml.A.norm());
  CHECK((pml.M - pml.M.transpose()).cwiseAbs().maxCoeff() < 1e-14 * pml.M.norm());
}

TEST_CASE("PML assembly requires the ramp endpoints as vertices")
{
  const MediumProfile m = slab_profile(2.0, 1.0);
  const PmlConfig cfg(1.0, 2.0, 3.2, 5.0, 5.0);
  const MeshedSpace s = build_space(build_mesh({-5.0, 5.0}, std::vector<double>{-1.0, 1.0}, 0.5, 0),
                                    2, BoundaryCondition::DirichletBothEnds);
  CHECK_THROWS_AS(assemble_pml(s, m, StretchFunction(cfg)), std::invalid_argument);
}

TEST_CASE("resonator mass matrix")
{
  const MeshedSpace one = build_space(Mesh1D({0.0, 0.6}), 1, BoundaryCondition::None);
  const RealMatrix m1 = assemble_resonator_mass(one);
  CHECK(m1(0, 0) == doctest::Approx(0.2));
  CHECK(m1(0, 1) == doctest::Approx(0.1));
  CHECK(m1(1, 1) == doctest::Approx(0.2));

  const MeshedSpace s = build_space(build_mesh({-1.5, 1.5}, std::vector<double>{-1.0, 1.0}, 0.5, 1),
                                    6, BoundaryCondition::None);
  const RealMatrix mr = assemble_resonator_mass(s);
  CHECK(mr.sum() == doctest::Approx(3.0).epsilon(1e-13));
  Eigen::LLT<RealMatrix> llt(mr);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("matrix text dump")
{
  RealMatrix m = RealMatrix::Zero(2, 3);
  m(0, 1) = 1.5;
  m(1, 2) = -2.0;
  std::ostringstream os;
  write_matrix_text(os, m);
  std::istringstream in(os.str());
  std::string hash;
  int rows = 0, cols = 0;
  in >> hash >> rows >> cols;
  CHECK(hash == "#");
  CHECK(rows == 2);
  CHECK(cols == 3);
  int r, c;
  double re, im;
  int lines = 0;
  while (in >> r >> c >> re >> im)
  {
    CHECK(m(r, c) == re);
    CHECK(im == 0.0);
    lines++;
  }
  CHECK(lines == 2);
}
