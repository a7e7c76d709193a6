// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include "helmres/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace helmres
{

std::string to_string(Provenance p)
{
  switch (p)
  {
    case Provenance::ClosedForm:
      return "closed_form";
    case Provenance::NewtonOnRelation:
      return "newton_on_relation";
    case Provenance::PaperTable:
      return "table";
    case Provenance::FineFem:
      return "fine_fem";
  }
  return "unknown";
}

std::optional<ReferenceMatch> ReferenceSet::nearest(Complex k) const
{
  if (entries.empty())
  {
    return std::nullopt;
  }
  ReferenceMatch best{-1, std::numeric_limits<double>::infinity()};
  for (const auto &e : entries)
  {
    const double dist = std::abs(e.k - k);
    if (dist < best.distance)
    {
      best = {e.index, dist};
    }
  }
  return best;
}

void sort_reference(ReferenceSet &set)
{
  std::stable_sort(set.entries.begin(), set.entries.end(),
                   [](const ReferenceEntry &x, const ReferenceEntry &y)
                   {
                     const double rx = std::abs(x.k.real()), ry = std::abs(y.k.real());
                     if (rx != ry)
                     {
                       return rx < ry;
                     }
                     return x.k.imag() > y.k.imag();
                   });
  for (std::size_t i = 0; i < set.entries.size(); i++)
  {
    set.entries[i].index = static_cast<int>(i);
  }
}

ReferenceSet slab_dtn_eigenvalues(double eta, double a, int m_max)
{
  if (!(eta > 1.0))
  {
    throw std::invalid_argument("slab_dtn_eigenvalues: eta must exceed 1 (no resonances)");
  }
  if (!(a > 0.0) || m_max < 0)
  {
    throw std::invalid_argument("slab_dtn_eigenvalues: need a > 0 and m_max >= 0");
  }
  ReferenceSet set;
  set.problem = "slab";
  set.provenance = Provenance::ClosedForm;
  const double R = (eta - 1.0) / (eta + 1.0);
  const double im = -std::log(std::abs(1.0 / R)) / (2.0 * eta * a);
  for (int m = 0; m <= m_max; m++)
  {
    set.entries.push_back({m, {kPi * m / (2.0 * eta * a), im}});
  }
  return set;
}

Complex slab_pml_relation_residual(Complex k, double eta, double a, Complex beta)
{
  const Complex E = std::exp(2i * k * beta);
  const Complex plus = eta * (1.0 - E) + (1.0 + E);
  const Complex minus = eta * (1.0 - E) - (1.0 + E);
  return std::exp(-4i * eta * k * a) * plus * plus - minus * minus;
}

namespace
{

ReferenceSet newton_batch(const std::string &problem, const std::function<Complex(Complex)> &f,
                          const std::function<double(Complex)> &scale,
                          const std::vector<Complex> &seeds)
{
  ReferenceSet set;
  set.problem = problem;
  set.provenance = Provenance::NewtonOnRelation;
  for (Complex seed : seeds)
  {
    NewtonOptions opts;
    opts.tol = 1e-14;
    opts.scale = scale(seed);
    try
    {
      const NewtonResult r = newton_root(f, seed, opts);
      bool dup = false;
      for (const auto &e : set.entries)
      {
        dup = dup || std::abs(e.k - r.root) < 1e-9 * std::max(1.0, std::abs(r.root));
      }
      if (!dup)
      {
        set.entries.push_back({0, r.root});
      }
    }
    catch (const NewtonFailure &)
    {
      set.failed_seeds.push_back(seed);
    }
  }
  sort_reference(set);
  return set;
}

}  // namespace

ReferenceSet slab_pml_eigenvalues(double eta, const PmlConfig &cfg,
                                  const std::vector<Complex> &seeds)
{
  if (!(eta >= 1.0))
  {
    throw std::invalid_argument("slab_pml_eigenvalues: eta must be at least 1");
  }
  const double a = cfg.a();
  const Complex beta = cfg.beta(1.0);
  auto f = [=](Complex k) { return slab_pml_relation_residual(k, eta, a, beta); };
  auto scale = [=](Complex k)
  {
    const Complex E = std::exp(2i * k * beta);
    return std::max(1.0, std::norm(eta * (1.0 - E) - (1.0 + E)));
  };
  return newton_batch("slab_pml", f, scale, seeds);
}

ReferenceSet slab_pml_eigenvalues(double eta, const PmlConfig &cfg, int m_max,
                                  SlabPmlFamily family)
{
  if (m_max < 0)
  {
    throw std::invalid_argument("slab_pml_eigenvalues: m_max must be non-negative");
  }
  if (eta == 1.0)
  {
    ReferenceSet set;
    set.problem = "slab_pml";
    set.provenance = Provenance::ClosedForm;
    const Complex beta = cfg.beta(1.0);
    for (int m = 0; m <= m_max; m++)
    {
      const Complex k = family == SlabPmlFamily::AsPrinted
                            ? (2.0 * m + 1.0) * kPi / (2.0 * (beta - cfg.a()))
                            : (m + 1.0) * kPi / (2.0 * (beta + cfg.a()));
      set.entries.push_back({m, k});
    }
    return set;
  }
  const ReferenceSet dtn = slab_dtn_eigenvalues(eta, cfg.a(), m_max);
  std::vector<Complex> seeds;
  for (const auto &e : dtn.entries)
  {
    seeds.push_back(e.k);
  }
  return slab_pml_eigenvalues(eta, cfg, seeds);
}

namespace
{

struct CavityTerms
{
  Complex n1, d1, n2, d2, phase;
};

CavityTerms cavity_terms(Complex k, double b, double gamma, double eta)
{
  const double p = eta / gamma;
  const double c1 = b * (eta - gamma) + gamma;
  const double c2 = b * (eta + gamma) - gamma;
  const double c3 = b * (gamma - eta) - gamma;
  const double c4 = b * (gamma + eta) - gamma;
  const Complex e1 = std::exp(1i * k * c1), e2 = std::exp(1i * k * c2);
  const Complex e3 = std::exp(1i * k * c3), e4 = std::exp(-1i * k * c4);
  CavityTerms t;
  t.n1 = (1.0 + p) * (1.0 + gamma) * e1 + (1.0 - p) * (1.0 - gamma) * e2;
  t.d1 = (1.0 + p) * (1.0 - gamma) * e1 + (1.0 - p) * (1.0 + gamma) * e2;
  t.n2 = (1.0 - p) * (1.0 + gamma) * e3 + (1.0 + p) * (1.0 - gamma) * e4;
  t.d2 = (1.0 - p) * (1.0 - gamma) * e3 + (1.0 + p) * (1.0 + gamma) * e4;
  t.phase = std::exp(-4i * k);
  return t;
}

}  // namespace

Complex cavity_relation_residual(Complex k, double b, double gamma, double eta)
{
  const CavityTerms t = cavity_terms(k, b, gamma, eta);
  const double tiny = 1e-300;
  if (std::abs(t.d1) < tiny && std::abs(t.d2) < tiny)
  {
    std::ostringstream msg;
    msg << "cavity_relation_residual: both denominators vanish at k=" << k;
    throw std::domain_error(msg.str());
  }
  return t.phase * t.n1 * t.d2 - t.n2 * t.d1;
}

ReferenceSet cavity_eigenvalues(double b, double gamma, double eta,
                                const std::vector<Complex> &seeds)
{
  auto f = [=](Complex k) { return cavity_relation_residual(k, b, gamma, eta); };
  auto scale = [=](Complex k)
  {
    const CavityTerms t = cavity_terms(k, b, gamma, eta);
    return std::max(1.0, std::abs(t.phase * t.n1 * t.d2) + std::abs(t.n2 * t.d1));
  };
  ReferenceSet set = newton_batch("air_cavity", f, scale, seeds);
  return set;
}

Complex general_dtn_relation_residual(const FundamentalSolution &psi1,
                                      const FundamentalSolution &psi2, Complex k, double d,
                                      double n0)
{
  const Complex ikn = 1i * k * n0;
  const auto [p1r, dp1r] = psi1(d, k);
  const auto [p2r, dp2r] = psi2(d, k);
  const auto [p1l, dp1l] = psi1(-d, k);
  const auto [p2l, dp2l] = psi2(-d, k);
  // A dependent pair makes the relation vanish identically.
  const Complex wronskian = p1r * dp2r - dp1r * p2r;
  const double size = (std::abs(p1r) + std::abs(dp1r)) * (std::abs(p2r) + std::abs(dp2r));
  if (!(std::abs(wronskian) > 1e-14 * size))
  {
    std::ostringstream msg;
    msg << "general_dtn_relation_residual: degenerate fundamental pair at k=" << k;
    throw std::domain_error(msg.str());
  }
  const Complex lhs = (dp1r - ikn * p1r) * (dp2l + ikn * p2l);
  const Complex rhs = (dp1l + ikn * p1l) * (dp2r - ikn * p2r);
  return lhs - rhs;
}

std::pair<FundamentalSolution, FundamentalSolution> layered_solutions(
    const MediumProfile &medium)
{
  struct Layer
  {
    double hi;
    double n;
  };
  std::vector<Layer> layers;
  for (const auto &piece : medium.pieces())
  {
    for (std::size_t i = 1; i < piece.coeffs.size(); i++)
    {
      if (piece.coeffs[i] != 0.0)
      {
        throw std::invalid_argument("layered_solutions: profile '" + medium.name() +
                                    "' is not piecewise constant");
      }
    }
    layers.push_back({piece.hi, piece.coeffs.empty() ? 0.0 : piece.coeffs[0]});
  }
  const double n0 = medium.n0();
  const double n_center = medium.n(0.0);

  // Propagates (u, u') from 0 to x through the layers (|x| is what matters; the profile is
  // even, so the signed offset handles both sides).
  auto propagate = [layers, n0](double x, Complex k, Complex u, Complex du)
  {
    const double sign = x < 0.0 ? -1.0 : 1.0;
    const double ax = std::abs(x);
    double pos = 0.0;
    auto step = [&](double to, double n)
    {
      const double delta = sign * (to - pos);
      const Complex kappa = k * n;
      if (kappa == Complex(0.0))
      {
        u += du * delta;
      }
      else
      {
        const Complex c = std::cos(kappa * delta), s = std::sin(kappa * delta);
        const Complex nu = u * c + du / kappa * s;
        du = -u * kappa * s + du * c;
        u = nu;
      }
      pos = to;
    };
    for (const auto &layer : layers)
    {
      if (pos >= ax)
      {
        break;
      }
      step(std::min(ax, layer.hi), layer.n);
    }
    if (pos < ax)
    {
      step(ax, n0);
    }
    return std::make_pair(u, du);
  };
  FundamentalSolution psi1 = [propagate](double x, Complex k)
  { return propagate(x, k, 1.0, 0.0); };
  FundamentalSolution psi2 = [propagate, n_center](double x, Complex k)
  { return propagate(x, k, 0.0, n_center * k); };
  return {psi1, psi2};
}

namespace
{

ReferenceSet parse_table(const std::string &problem,
                         const std::vector<std::pair<const char *, const char *>> &rows)
{
  ReferenceSet set;
  set.problem = problem;
  set.provenance = Provenance::PaperTable;
  for (std::size_t i = 0; i < rows.size(); i++)
  {
    set.entries.push_back(
        {static_cast<int>(i), {std::stod(rows[i].first), std::stod(rows[i].second)}});
  }
  return set;
}

}  // namespace

ReferenceSet paper_table(PaperTable table)
{
  switch (table)
  {
    case PaperTable::AirCavity:
      return parse_table("air_cavity", {{"0.0000000000", "-0.8948801287"},
                                        {"0.4869949494", "-0.6502632860"},
                                        {"1.5955486049", "-0.3950551466"},
                                        {"2.7503593706", "-0.5843773974"},
                                        {"3.3047923378", "-0.8909296467"},
                                        {"3.7465666834", "-0.7159810538"},
                                        {"4.7869777032", "-0.4021092410"},
                                        {"5.9689601644", "-0.5268047778"},
                                        {"6.6087515863", "-0.8788560394"},
                                        {"7.0248667636", "-0.7730423533"},
                                        {"7.9794721839", "-0.4166038034"},
                                        {"9.1753687526", "-0.4808796847"},
                                        {"9.9108347715", "-0.8579829521"},
                                        {"10.3153076002", "-0.8180915326"},
                                        {"11.1740110180", "-0.4393352673"},
                                        {"12.3746790920", "-0.4461923754"}});
    case PaperTable::Bump:
      return parse_table("bump", {{"0.0000000000", "-0.4271986734"},
                                  {"1.1402018812", "-0.4825101535"},
                                  {"2.1432843061", "-0.5771518110"},
                                  {"3.1204984325", "-0.6473255266"},
                                  {"4.0868340691", "-0.7036943333"},
                                  {"5.0470974941", "-0.7510601464"},
                                  {"6.0034893253", "-0.7920181369"},
                                  {"6.9572111153", "-0.8281487827"},
                                  {"7.9089927230", "-0.8604952505"},
                                  {"8.8593105049", "-0.8897868318"},
                                  {"9.8084919100", "-0.9165558262"},
                                  {"10.7567710490", "-0.9412039599"}});
  }
  throw std::invalid_argument("paper_table: unknown table");
}

ReferenceSet fine_fem_eigenvalues(const MediumProfile &medium, double d, int p, double h,
                                  const Rectangle &window)
{
  const Interval domain{-d, d};
  std::vector<double> bps;
  for (double b : medium.breakpoints())
  {
    if (b > -d && b < d)
    {
      bps.push_back(b);
    }
  }
  const MeshedSpace space = build_space(build_mesh(domain, bps, h, 0), p, BoundaryCondition::None);
  const DtnMatrices mats = assemble_dtn(space, medium);
  const EigenSolution sol = solve_dtn(mats);
  ReferenceSet set;
  set.problem = medium.name();
  set.provenance = Provenance::FineFem;
  for (const auto &pair : sol.pairs)
  {
    if (window.contains(pair.k))
    {
      set.entries.push_back({0, pair.k});
    }
  }
  sort_reference(set);
  return set;
}

}  // namespace helmres
