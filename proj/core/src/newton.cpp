// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <sstream>

#include "helmres/eigen_solvers.hpp"

namespace helmres
{

NewtonResult newton_root(const std::function<Complex(Complex)> &f, Complex guess,
                         const NewtonOptions &opts)
{
  NewtonResult res;
  Complex k = guess;
  Complex fk = f(k);
  res.iterates.push_back(k);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < opts.max_iter; it++)
  {
    res.iterations = it;
    if (std::abs(fk) <= opts.tol * opts.scale)
    {
      res.root = k;
      res.residual = std::abs(fk);
      return res;
    }
    const double h = 1e-7 * std::max(1.0, std::abs(k));
    const Complex df = (f(k + h) - f(k - h)) / (2.0 * h);
    if (df == Complex(0.0) || !std::isfinite(std::abs(df)))
    {
      std::ostringstream msg;
      msg << "newton_root: vanishing derivative at k=" << k;
      throw NewtonFailure(msg.str(), k, std::abs(fk));
    }
    const Complex step = fk / df;
    k -= step;
    fk = f(k);
    res.iterates.push_back(k);
    if (!std::isfinite(std::abs(fk)))
    {
      throw NewtonFailure("newton_root: non-finite residual", k, std::abs(fk));
    }
    if (std::abs(step) <= 4.0 * eps * std::max(1.0, std::abs(k)))
    {
      res.root = k;
      res.residual = std::abs(fk);
      res.iterations = it + 1;
      return res;
    }
  }
  std::ostringstream msg;
  msg << "newton_root: no convergence after " << opts.max_iter << " iterations, last k=" << k
      << " |f|=" << std::abs(fk);
  throw NewtonFailure(msg.str(), k, std::abs(fk));
}

}  // namespace helmres
