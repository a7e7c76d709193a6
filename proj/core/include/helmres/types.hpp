// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_TYPES_HPP
#define HELMRES_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace helmres
{

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

using namespace std::complex_literals;

inline constexpr double kPi = 3.14159265358979323846;

// Closed interval [lo, hi] on the real line.
struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

// Axis-aligned rectangle in the complex k-plane.
struct Rectangle
{
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(Complex z, double tol = 0.0) const
  {
    return z.real() >= re_min - tol && z.real() <= re_max + tol && z.imag() >= im_min - tol &&
           z.imag() <= im_max + tol;
  }
};

enum class Formulation
{
  DtN,
  PML,
  LS
};

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string &name);

// Thrown when a solver stage fails for numerical reasons (as opposed to bad input,
// which raises std::invalid_argument).
class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace helmres

#endif  // HELMRES_TYPES_HPP
