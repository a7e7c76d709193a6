// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include "helmres/media.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace helmres
{

MediumProfile::MediumProfile(std::string name, std::vector<ProfilePiece> pieces, double n0,
                             std::map<std::string, double> parameters)
  : name_(std::move(name)), pieces_(std::move(pieces)), n0_(n0), a_(0.0),
    parameters_(std::move(parameters))
{
  if (!(n0_ > 0.0))
  {
    throw std::invalid_argument("MediumProfile: background index n0 must be positive");
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const ProfilePiece &l, const ProfilePiece &r) { return l.lo < r.lo; });
  for (const auto &pc : pieces_)
  {
    if (pc.lo < 0.0 || !(pc.hi > pc.lo) || pc.coeffs.empty())
    {
      throw std::invalid_argument("MediumProfile: malformed piece");
    }
    a_ = std::max(a_, pc.hi);
    for (double x : {pc.lo, pc.hi})
    {
      if (x > 0.0)
      {
        breakpoints_.push_back(x);
        breakpoints_.push_back(-x);
      }
    }
    for (int s = 0; s <= 16; s++)
    {
      const double x = pc.lo + (pc.hi - pc.lo) * s / 16.0;
      if (!(n(x) > 0.0))
      {
        std::ostringstream msg;
        msg << "MediumProfile '" << name_ << "': refractive index not positive at x=" << x;
        throw std::invalid_argument(msg.str());
      }
    }
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

int MediumProfile::degree_on(double lo, double hi) const
{
  const double alo = (lo < 0.0 && hi > 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
  const double ahi = std::max(std::abs(lo), std::abs(hi));
  int deg = 0;
  for (const auto &pc : pieces_)
  {
    if (pc.hi <= alo || pc.lo >= ahi)
    {
      continue;
    }
    for (int i = static_cast<int>(pc.coeffs.size()) - 1; i > deg; i--)
    {
      if (pc.coeffs[i] != 0.0)
      {
        deg = i;
        break;
      }
    }
  }
  return deg;
}

double MediumProfile::n(double x) const
{
  const double ax = std::abs(x);
  for (const auto &pc : pieces_)
  {
    if ((ax > pc.lo || (pc.lo == 0.0 && ax == 0.0)) && ax <= pc.hi)
    {
      double v = 0.0;
      for (auto it = pc.coeffs.rbegin(); it != pc.coeffs.rend(); ++it)
      {
        v = v * x + *it;
      }
      return v;
    }
  }
  return n0_;
}

MediumProfile slab_profile(double eta, double a)
{
  if (!(eta >= 1.0))
  {
    throw std::invalid_argument("slab_profile: eta must be >= 1");
  }
  if (!(a > 0.0))
  {
    throw std::invalid_argument("slab_profile: half-width a must be positive");
  }
  return MediumProfile("slab", {{0.0, a, {eta}}}, 1.0, {{"eta", eta}, {"a", a}});
}

MediumProfile air_filled_cavity_profile(double b, double gamma, double eta)
{
  if (!(b > 1.0))
  {
    throw std::invalid_argument("air_filled_cavity_profile: b must exceed 1");
  }
  return MediumProfile("air_cavity", {{0.0, 1.0, {1.0}}, {1.0, b, {gamma}}}, eta,
                       {{"b", b}, {"gamma", gamma}, {"eta", eta}});
}

MediumProfile bump_profile()
{
  return MediumProfile("bump", {{0.0, 1.0, {2.0, 0.0, -1.0}}}, 1.0);
}

PmlConfig::PmlConfig(double a, double d, double x_c, double ell, double sigma0,
                     BetaVariant variant)
  : a_(a), d_(d), x_c_(x_c), ell_(ell), sigma0_(sigma0), variant_(variant)
{
  if (!(a_ <= d_ && d_ < x_c_ && x_c_ < ell_))
  {
    std::ostringstream msg;
    msg << "PmlConfig: need a <= d < x_c < l, got a=" << a_ << " d=" << d_ << " x_c=" << x_c_
        << " l=" << ell_;
    throw std::invalid_argument(msg.str());
  }
  if (!(sigma0_ >= 0.0))
  {
    throw std::invalid_argument("PmlConfig: sigma0 must be non-negative");
  }
}

double PmlConfig::sigma_ell() const
{
  const double base = variant_ == BetaVariant::AsPrinted ? a_ : d_;
  return sigma0_ * (ell_ - x_hat()) / (ell_ - base);
}

Complex PmlConfig::beta(double n0) const
{
  const double base = variant_ == BetaVariant::AsPrinted ? a_ : d_;
  return n0 * (ell_ - base) * Complex(1.0, sigma_ell());
}

double PmlConfig::critical_angle() const { return -std::atan(sigma_ell()); }

bool PmlConfig::is_feasible(Complex k) const { return std::arg(k) > critical_angle(); }

double sigma_eval(const PmlConfig &cfg, double x)
{
  const double ax = std::abs(x);
  if (ax <= cfg.d())
  {
    return 0.0;
  }
  if (ax > cfg.x_c())
  {
    return cfg.sigma0();
  }
  const double t = (ax - cfg.d()) / (cfg.x_c() - cfg.d());
  return cfg.sigma0() * t * t * (3.0 - 2.0 * t);
}

double critical_angle(const PmlConfig &cfg, double /*n0*/) { return cfg.critical_angle(); }

double StretchFunction::sigma_derivative(double x) const
{
  const double ax = std::abs(x);
  if (ax <= cfg_.d() || ax > cfg_.x_c())
  {
    return 0.0;
  }
  const double w = cfg_.x_c() - cfg_.d();
  const double t = (ax - cfg_.d()) / w;
  const double ds = cfg_.sigma0() * 6.0 * t * (1.0 - t) / w;
  return x < 0.0 ? -ds : ds;
}

}  // namespace helmres
