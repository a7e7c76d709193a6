// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_TESTS_SUPPORT_HPP
#define HELMRES_TESTS_SUPPORT_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "helmres/assembly.hpp"
#include "helmres/eigen_solvers.hpp"
#include "helmres/media.hpp"
#include "helmres/mesh_fe.hpp"

namespace helmres::testing
{

inline MeshedSpace dtn_space(const MediumProfile &m, double d, int p, double h, int ref = 0)
{
  std::vector<double> bps;
  for (double b : m.breakpoints())
  {
    if (b > -d && b < d)
    {
      bps.push_back(b);
    }
  }
  return build_space(build_mesh({-d, d}, bps, h, ref), p, BoundaryCondition::None);
}

inline MeshedSpace pml_space(const MediumProfile &m, const PmlConfig &cfg, int p, double h,
                             int ref = 0)
{
  std::vector<double> bps;
  for (double b : m.breakpoints())
  {
    if (b > -cfg.ell() && b < cfg.ell())
    {
      bps.push_back(b);
    }
  }
  for (double x : {-cfg.x_c(), -cfg.d(), cfg.d(), cfg.x_c()})
  {
    bps.push_back(x);
  }
  return build_space(build_mesh({-cfg.ell(), cfg.ell()}, bps, h, ref), p,
                     BoundaryCondition::DirichletBothEnds);
}

inline double nearest(const std::vector<EigenPair> &pairs, Complex k)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto &pr : pairs)
  {
    best = std::min(best, std::abs(pr.k - k));
  }
  return best;
}

// k_m of the slab with eta, a.
inline Complex slab_k(double eta, double a, int m)
{
  return Complex(m * kPi, std::log((eta - 1.0) / (eta + 1.0))) / (2.0 * eta * a);
}

}  // namespace helmres::testing

#endif  // HELMRES_TESTS_SUPPORT_HPP
