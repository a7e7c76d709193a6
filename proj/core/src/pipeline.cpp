// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include "helmres/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace helmres
{

namespace
{

// Eigenvalues this close outside the window still count as inside (purely imaginary
// resonances computed with a rounding-level negative real part).
constexpr double kWindowTol = 1e-10;

double param(const RunConfig &cfg, const std::string &name)
{
  auto it = cfg.parameters.find(name);
  if (it == cfg.parameters.end())
  {
    throw std::invalid_argument("problem '" + cfg.problem + "' needs parameter '" + name + "'");
  }
  return it->second;
}

std::vector<double> breakpoints_inside(std::vector<double> pts, const Interval &dom)
{
  std::vector<double> out;
  for (double x : pts)
  {
    if (x > dom.lo && x < dom.hi)
    {
      out.push_back(x);
    }
  }
  return out;
}

class StageTimer
{
public:
  StageTimer(RunReport &report, std::string name)
    : report_(report), name_(std::move(name)), start_(std::chrono::steady_clock::now())
  {
  }
  ~StageTimer()
  {
    const auto dt = std::chrono::steady_clock::now() - start_;
    report_.timing[name_] += std::chrono::duration<double>(dt).count();
  }

private:
  RunReport &report_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

template <class F>
auto stage(const std::string &name, F &&f)
{
  try
  {
    return f();
  }
  catch (const PipelineError &)
  {
    throw;
  }
  catch (const std::exception &e)
  {
    throw PipelineError(name, e.what());
  }
}

bool entry_order(const ReportEntry &x, const ReportEntry &y)
{
  const double rx = std::abs(x.k.real()), ry = std::abs(y.k.real());
  if (rx != ry)
  {
    return rx < ry;
  }
  return x.k.imag() > y.k.imag();
}

MeshedSpace dtn_space(const RunConfig &cfg, const MediumProfile &medium, int p, int ref)
{
  const double d = cfg.truncation();
  const Interval dom{-d, d};
  const auto bps = breakpoints_inside(medium.breakpoints(), dom);
  return build_space(build_mesh(dom, bps, cfg.h, ref), p, BoundaryCondition::None);
}

MeshedSpace pml_space(const RunConfig &cfg, const MediumProfile &medium, int p, int ref)
{
  const PmlConfig pml = cfg.pml();
  const Interval dom{-pml.ell(), pml.ell()};
  std::vector<double> pts = medium.breakpoints();
  for (double x : {pml.d(), pml.x_c()})
  {
    pts.push_back(x);
    pts.push_back(-x);
  }
  return build_space(build_mesh(dom, breakpoints_inside(pts, dom), cfg.h, ref), p,
                     BoundaryCondition::DirichletBothEnds);
}

// Contour solves over square tiles covering the window; each eigenvalue is kept by the
// tile that contains it.
std::vector<EigenPair> solve_ls_window(const RunConfig &cfg, const LsContext &ctx,
                                       std::vector<std::string> &warnings)
{
  const Rectangle &w = cfg.window;
  const int nx = std::max(1, static_cast<int>(std::ceil((w.re_max - w.re_min) / cfg.ls_tile - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil((w.im_max - w.im_min) / cfg.ls_tile - 1e-9)));
  const double dx = (w.re_max - w.re_min) / nx, dy = (w.im_max - w.im_min) / ny;
  const MatrixFunction T = [&ctx](Complex z) { return ctx.collocation_matrix(z); };
  std::vector<EigenPair> pairs;
  for (int iy = 0; iy < ny; iy++)
  {
    for (int ix = 0; ix < nx; ix++)
    {
      const double x0 = w.re_min + ix * dx, y0 = w.im_min + iy * dy;
      ContourConfig cc;
      cc.center = Complex(x0 + 0.5 * dx, y0 + 0.5 * dy);
      cc.radius = 0.6 * std::hypot(dx, dy);
      cc.quadrature_nodes = cfg.ls_nodes;
      cc.probe_columns = cfg.ls_probe;
      cc.seed = cfg.seed + static_cast<std::uint64_t>(iy * nx + ix);
      const ContourResult res = solve_contour(T, ctx.space().dof_count(), cc);
      for (const auto &msg : res.warnings)
      {
        warnings.push_back(msg);
      }
      for (const auto &pair : res.pairs)
      {
        const NepRefinement r = refine_nep_eigenpair(T, pair.k);
        const Complex k = r.converged ? r.k : pair.k;
        // Half-open tiles, closed (with a small margin) along the window boundary.
        const double lo_re = ix == 0 ? x0 - kWindowTol : x0;
        const double lo_im = iy == 0 ? y0 - kWindowTol : y0;
        const bool in_re = k.real() >= lo_re && (k.real() < x0 + dx || ix == nx - 1);
        const bool in_im = k.imag() >= lo_im && (k.imag() < y0 + dy || iy == ny - 1);
        if (!in_re || !in_im)
        {
          continue;
        }
        if (!r.converged)
        {
          std::ostringstream msg;
          msg << "LS refinement did not converge near k=" << pair.k;
          warnings.push_back(msg.str());
        }
        pairs.push_back({k, r.converged ? r.vector : pair.vector, Formulation::LS, k});
      }
    }
  }
  return pairs;
}

}  // namespace

void RunConfig::validate() const
{
  if (p < 1)
  {
    throw std::invalid_argument("config: p must be >= 1");
  }
  if (!(h > 0.0))
  {
    throw std::invalid_argument("config: h must be positive");
  }
  if (refinements < 0)
  {
    throw std::invalid_argument("config: refinements must be >= 0");
  }
  if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min))
  {
    throw std::invalid_argument("config: window must have positive extent");
  }
  if (!(epsilon_threshold > 0.0))
  {
    throw std::invalid_argument("config: epsilon threshold must be positive");
  }
  if (pseudo_nx < 0 || pseudo_ny < 0 || (pseudo_nx == 0) != (pseudo_ny == 0))
  {
    throw std::invalid_argument("config: pseudospectrum resolution must be both zero or both positive");
  }
  if (!(ls_tile > 0.0) || ls_nodes < 8 || ls_nodes % 2 != 0 || ls_probe < 1)
  {
    throw std::invalid_argument("config: invalid contour settings");
  }
  const MediumProfile m = medium();
  if (truncation() < m.half_width() - 1e-12)
  {
    std::ostringstream msg;
    msg << "config: truncation d=" << truncation() << " cuts the resonator (a=" << m.half_width()
        << ")";
    throw std::invalid_argument(msg.str());
  }
  if (formulation == Formulation::PML)
  {
    (void)pml();
  }
}

MediumProfile RunConfig::medium() const
{
  if (problem == "slab")
  {
    return slab_profile(param(*this, "eta"), param(*this, "a"));
  }
  if (problem == "air_cavity")
  {
    return air_filled_cavity_profile(param(*this, "b"), param(*this, "gamma"),
                                     param(*this, "eta"));
  }
  if (problem == "bump")
  {
    return bump_profile();
  }
  throw std::invalid_argument("unknown problem '" + problem +
                              "' (expected slab, air_cavity or bump)");
}

double RunConfig::truncation() const
{
  return d ? *d : medium().half_width();
}

PmlConfig RunConfig::pml() const
{
  const double dd = truncation();
  return PmlConfig(medium().half_width(), dd, x_c ? *x_c : dd + 1.0, ell ? *ell : dd + 3.0,
                   sigma0, beta_variant);
}

RunConfig with_problem_defaults(RunConfig cfg)
{
  std::map<std::string, double> defaults;
  if (cfg.problem == "slab")
  {
    defaults = {{"eta", 2.0}, {"a", 1.0}};
  }
  else if (cfg.problem == "air_cavity")
  {
    defaults = {{"b", 1.5}, {"gamma", std::sqrt(3.5)}, {"eta", std::sqrt(2.5)}};
  }
  for (const auto &[key, value] : defaults)
  {
    cfg.parameters.emplace(key, value);
  }
  return cfg;
}

std::vector<ReportEntry> RunReport::accepted() const
{
  std::vector<ReportEntry> out;
  for (const auto &e : entries)
  {
    if (e.epsilon < config.epsilon_threshold)
    {
      out.push_back(e);
    }
  }
  return out;
}

std::optional<ReferenceSet> reference_for(const RunConfig &cfg)
{
  if (cfg.problem == "slab")
  {
    const double eta = param(cfg, "eta"), a = param(cfg, "a");
    if (!(eta > 1.0))
    {
      return std::nullopt;
    }
    const double reach = std::max(std::abs(cfg.window.re_min), std::abs(cfg.window.re_max));
    const int m_max = static_cast<int>(std::ceil(reach * 2.0 * eta * a / kPi)) + 1;
    return slab_dtn_eigenvalues(eta, a, m_max);
  }
  if (cfg.problem == "air_cavity")
  {
    const bool paper_instance = std::abs(param(cfg, "b") - 1.5) < 1e-12 &&
                                std::abs(param(cfg, "gamma") - std::sqrt(3.5)) < 1e-12 &&
                                std::abs(param(cfg, "eta") - std::sqrt(2.5)) < 1e-12;
    if (paper_instance)
    {
      return paper_table(PaperTable::AirCavity);
    }
    return std::nullopt;
  }
  if (cfg.problem == "bump")
  {
    return paper_table(PaperTable::Bump);
  }
  return std::nullopt;
}

RunReport run_pipeline(const RunConfig &cfg_in)
{
  RunReport report;
  report.config = cfg_in;
  const RunConfig &cfg = report.config;
  stage("configure", [&] { cfg.validate(); return 0; });
  const MediumProfile medium = cfg.medium();

  std::optional<DtnMatrices> dtn;
  std::optional<PmlMatrices> pml;
  std::optional<LsContext> ls;
  std::vector<EigenPair> pairs;
  const MeshedSpace *source = nullptr;

  if (cfg.filter || cfg.formulation == Formulation::LS)
  {
    StageTimer t(report, "ls_setup");
    ls.emplace(stage("ls_setup",
                     [&] { return make_ls_context(medium, cfg.p, cfg.h, cfg.refinements); }));
  }

  switch (cfg.formulation)
  {
    case Formulation::DtN:
    {
      {
        StageTimer t(report, "assemble");
        dtn.emplace(stage("assemble", [&] {
          return assemble_dtn(dtn_space(cfg, medium, cfg.p, cfg.refinements), medium);
        }));
      }
      StageTimer t(report, "solve");
      const EigenSolution sol = stage("solve", [&] { return solve_dtn(*dtn); });
      pairs = sol.pairs;
      report.pencil_size = sol.pencil_size;
      report.dropped_infinite = sol.dropped_infinite;
      report.dropped_zero = sol.dropped_zero;
      report.dof_count = dtn->space.dof_count();
      source = &dtn->space;
      break;
    }
    case Formulation::PML:
    {
      {
        StageTimer t(report, "assemble");
        pml.emplace(stage("assemble", [&] {
          return assemble_pml(pml_space(cfg, medium, cfg.p, cfg.refinements), medium,
                              StretchFunction(cfg.pml()));
        }));
      }
      StageTimer t(report, "solve");
      const EigenSolution sol = stage("solve", [&] { return solve_pml(*pml); });
      pairs = sol.pairs;
      report.pencil_size = sol.pencil_size;
      report.dropped_infinite = sol.dropped_infinite;
      report.dof_count = pml->space.dof_count();
      source = &pml->space;
      break;
    }
    case Formulation::LS:
    {
      StageTimer t(report, "solve");
      pairs = stage("solve", [&] { return solve_ls_window(cfg, *ls, report.warnings); });
      report.pencil_size = ls->space().dof_count();
      report.dof_count = ls->space().dof_count();
      source = &ls->space();
      break;
    }
  }

  for (const auto &pair : pairs)
  {
    if (!cfg.window.contains(pair.k, kWindowTol))
    {
      continue;
    }
    ReportEntry e;
    e.k = pair.k;
    e.vector = pair.vector;
    e.epsilon = std::numeric_limits<double>::quiet_NaN();
    if (cfg.formulation == Formulation::PML)
    {
      e.feasible = cfg.pml().is_feasible(pair.k);
    }
    if (cfg.filter)
    {
      StageTimer t(report, "filter");
      e.epsilon = stage("filter", [&] {
        try
        {
          return filter_epsilon(*ls, pair, *source).epsilon;
        }
        catch (const NoResonatorSupport &)
        {
          return std::numeric_limits<double>::infinity();
        }
      });
    }
    report.entries.push_back(std::move(e));
  }
  std::stable_sort(report.entries.begin(), report.entries.end(), entry_order);
  for (std::size_t i = 0; i < report.entries.size(); i++)
  {
    report.entries[i].j = static_cast<int>(i);
  }

  {
    StageTimer t(report, "reference");
    const auto ref = stage("reference", [&] { return reference_for(cfg); });
    if (ref)
    {
      report.reference_provenance = ref->provenance;
      for (auto &e : report.entries)
      {
        e.match = ref->nearest(e.k);
      }
    }
  }

  if (cfg.pseudo_nx > 0)
  {
    StageTimer t(report, "pseudospectrum");
    PseudospectrumProblem prob{ls ? &*ls : nullptr, dtn ? &*dtn : nullptr, pml ? &*pml : nullptr};
    report.pseudospectrum = stage("pseudospectrum", [&] {
      return pseudospectrum(cfg.formulation, cfg.window, cfg.pseudo_nx, cfg.pseudo_ny, prob);
    });
  }
  return report;
}

PseudospectrumGrid run_pseudospectrum(const RunConfig &cfg)
{
  stage("configure", [&] { cfg.validate(); return 0; });
  if (cfg.pseudo_nx < 1)
  {
    throw PipelineError("configure", "pseudospectrum resolution not set");
  }
  const MediumProfile medium = cfg.medium();
  std::optional<DtnMatrices> dtn;
  std::optional<PmlMatrices> pml;
  std::optional<LsContext> ls;
  stage("assemble", [&] {
    switch (cfg.formulation)
    {
      case Formulation::DtN:
        dtn.emplace(assemble_dtn(dtn_space(cfg, medium, cfg.p, cfg.refinements), medium));
        break;
      case Formulation::PML:
        pml.emplace(assemble_pml(pml_space(cfg, medium, cfg.p, cfg.refinements), medium,
                                 StretchFunction(cfg.pml())));
        break;
      case Formulation::LS:
        ls.emplace(make_ls_context(medium, cfg.p, cfg.h, cfg.refinements));
        break;
    }
    return 0;
  });
  PseudospectrumProblem prob{ls ? &*ls : nullptr, dtn ? &*dtn : nullptr, pml ? &*pml : nullptr};
  return stage("pseudospectrum", [&] {
    return pseudospectrum(cfg.formulation, cfg.window, cfg.pseudo_nx, cfg.pseudo_ny, prob);
  });
}

std::vector<ConvergenceRow> run_convergence(const RunConfig &cfg, SweepKind kind,
                                            const std::vector<int> &values,
                                            const std::vector<Complex> &targets)
{
  cfg.validate();
  if (cfg.formulation == Formulation::LS)
  {
    throw std::invalid_argument("run_convergence: sweeps support the dtn and pml formulations");
  }
  const MediumProfile medium = cfg.medium();
  std::vector<ConvergenceRow> rows;
  for (int v : values)
  {
    ConvergenceRow row;
    row.p = kind == SweepKind::Degree ? v : cfg.p;
    row.refinements = kind == SweepKind::Refinement ? v : cfg.refinements;
    row.h = cfg.h / std::pow(2.0, row.refinements);
    EigenSolution sol;
    if (cfg.formulation == Formulation::DtN)
    {
      const DtnMatrices m = assemble_dtn(dtn_space(cfg, medium, row.p, row.refinements), medium);
      row.dof_count = m.space.dof_count();
      sol = solve_dtn(m);
    }
    else
    {
      const PmlMatrices m = assemble_pml(pml_space(cfg, medium, row.p, row.refinements), medium,
                                         StretchFunction(cfg.pml()));
      row.dof_count = m.space.dof_count();
      sol = solve_pml(m);
    }
    for (Complex target : targets)
    {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &pair : sol.pairs)
      {
        best = std::min(best, std::abs(pair.k - target));
      }
      row.errors.push_back(best);
    }
    row.orders.assign(targets.size(), std::numeric_limits<double>::quiet_NaN());
    if (!rows.empty() && kind == SweepKind::Refinement)
    {
      const ConvergenceRow &prev = rows.back();
      const double ratio = prev.h / row.h;
      for (std::size_t i = 0; i < targets.size(); i++)
      {
        row.orders[i] = std::log(prev.errors[i] / row.errors[i]) / std::log(ratio);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace helmres
