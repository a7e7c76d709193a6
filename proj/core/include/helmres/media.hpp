// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_MEDIA_HPP
#define HELMRES_MEDIA_HPP

#include <map>
#include <string>
#include <vector>

#include "helmres/types.hpp"

namespace helmres
{

// One polynomial piece of a refractive index profile: n(x) = sum_i coeffs[i] x^i on
// lo < |x| <= hi (the innermost piece also owns x = 0 and uses lo = 0 inclusively).
struct ProfilePiece
{
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> coeffs;
};

// Even, piecewise polynomial refractive index with a constant background n0 outside the
// resonator support (-a, a).
class MediumProfile
{
public:
  MediumProfile(std::string name, std::vector<ProfilePiece> pieces, double n0,
                std::map<std::string, double> parameters = {});

  double n(double x) const;
  double n_squared(double x) const { return n(x) * n(x); }
  // n(x)^2 - n0^2; zero outside the resonator support.
  double contrast(double x) const { return n_squared(x) - n0_ * n0_; }

  double n0() const { return n0_; }
  double half_width() const { return a_; }
  Interval resonator_support() const { return {-a_, a_}; }
  // Points where n is not smooth, ascending (both signs).
  const std::vector<double> &breakpoints() const { return breakpoints_; }
  const std::string &name() const { return name_; }
  const std::map<std::string, double> &parameters() const { return parameters_; }
  const std::vector<ProfilePiece> &pieces() const { return pieces_; }
  // Highest polynomial degree of n over the cell (lo, hi); 0 in the background.
  int degree_on(double lo, double hi) const;

private:
  std::string name_;
  std::vector<ProfilePiece> pieces_;
  double n0_;
  double a_;
  std::vector<double> breakpoints_;
  std::map<std::string, double> parameters_;
};

// n = eta on |x| <= a, 1 outside.
MediumProfile slab_profile(double eta, double a);

// n = 1 on |x| <= 1, gamma on 1 < |x| <= b, eta outside; n0 = eta.
MediumProfile air_filled_cavity_profile(double b, double gamma, double eta);

// n = 2 - x^2 on |x| <= 1, 1 outside.
MediumProfile bump_profile();

// Which length normalizes sigma_l and beta. AsPrinted uses (l - a); RampStart uses (l - d).
enum class BetaVariant
{
  AsPrinted,
  RampStart
};

// Geometry and strength of a finite perfectly matched layer on (-l, l).
class PmlConfig
{
public:
  PmlConfig(double a, double d, double x_c, double ell, double sigma0,
            BetaVariant variant = BetaVariant::AsPrinted);

  double a() const { return a_; }
  double d() const { return d_; }
  double x_c() const { return x_c_; }
  double ell() const { return ell_; }
  double sigma0() const { return sigma0_; }
  BetaVariant variant() const { return variant_; }

  double x_hat() const { return 0.5 * (d_ + x_c_); }
  double sigma_ell() const;
  Complex beta(double n0) const;
  // arg(1 / (1 + i sigma_l)) = -atan(sigma_l).
  double critical_angle() const;
  // True when arg k lies strictly above the critical line.
  bool is_feasible(Complex k) const;

private:
  double a_, d_, x_c_, ell_, sigma0_;
  BetaVariant variant_;
};

double sigma_eval(const PmlConfig &cfg, double x);
double critical_angle(const PmlConfig &cfg, double n0);

// PML strength sigma(x) and the complex stretch alpha(x) = 1 + i sigma(x).
class StretchFunction
{
public:
  explicit StretchFunction(PmlConfig cfg) : cfg_(std::move(cfg)) {}

  double sigma(double x) const { return sigma_eval(cfg_, x); }
  double sigma_derivative(double x) const;
  Complex alpha(double x) const { return {1.0, sigma(x)}; }
  const PmlConfig &config() const { return cfg_; }

private:
  PmlConfig cfg_;
};

}  // namespace helmres

#endif  // HELMRES_MEDIA_HPP
