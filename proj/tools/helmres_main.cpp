// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

// Command line driver. Settings are resolved as built-in defaults, then --config file,
// then individual flags.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "helmres/pipeline.hpp"

namespace
{

using namespace helmres;

struct Flags
{
  std::string config;
  std::string problem;
  std::string formulation;
  int p = 0;
  double h = 0.0;
  int ref = 0;
  double sigma0 = 0.0;
  double d = 0.0;
  double xc = 0.0;
  double ell = 0.0;
  std::string beta_variant;
  std::vector<double> window;
  bool filter = true;
  double threshold = 0.0;
  std::vector<int> pseudo;
  std::string out;
  std::uint64_t seed = 0;
  double eta = 0.0, a = 0.0, b = 0.0, gamma = 0.0;
  double ls_tile = 0.0;
  int ls_nodes = 0;

  std::map<std::string, CLI::Option *> opts;
};

void add_common(CLI::App &app, Flags &f)
{
  f.opts["config"] = app.add_option("--config", f.config, "JSON configuration file")
                         ->check(CLI::ExistingFile);
  f.opts["problem"] = app.add_option("--problem", f.problem, "slab, air_cavity or bump")
                          ->check(CLI::IsMember({"slab", "air_cavity", "bump"}));
  f.opts["formulation"] = app.add_option("--formulation", f.formulation, "dtn, pml or ls")
                              ->check(CLI::IsMember({"dtn", "pml", "ls"}));
  f.opts["p"] = app.add_option("--p", f.p, "polynomial degree");
  f.opts["h"] = app.add_option("--h", f.h, "initial cell size");
  f.opts["ref"] = app.add_option("--ref", f.ref, "uniform refinements");
  f.opts["sigma0"] = app.add_option("--sigma0", f.sigma0, "PML strength");
  f.opts["d"] = app.add_option("--d", f.d, "DtN truncation / PML ramp start");
  f.opts["xc"] = app.add_option("--xc", f.xc, "PML ramp end");
  f.opts["ell"] = app.add_option("--ell", f.ell, "PML truncation");
  f.opts["beta"] = app.add_option("--beta-variant", f.beta_variant, "as_printed or ramp_start")
                       ->check(CLI::IsMember({"as_printed", "ramp_start"}));
  f.opts["window"] = app.add_option("--window", f.window, "re_min re_max im_min im_max")
                         ->expected(4);
  f.opts["filter"] = app.add_flag("--filter,!--no-filter", f.filter, "compute epsilon per pair");
  f.opts["threshold"] =
      app.add_option("--epsilon-threshold", f.threshold, "epsilon below which a pair is kept");
  f.opts["pseudo"] = app.add_option("--pseudo", f.pseudo, "pseudospectrum grid nx ny")
                         ->expected(2);
  f.opts["out"] = app.add_option("--out", f.out, "output directory");
  f.opts["seed"] = app.add_option("--seed", f.seed, "contour probe seed");
  f.opts["eta"] = app.add_option("--eta", f.eta, "profile parameter eta");
  f.opts["a"] = app.add_option("--a", f.a, "slab half-width");
  f.opts["b"] = app.add_option("--b", f.b, "cavity outer interface");
  f.opts["gamma"] = app.add_option("--gamma", f.gamma, "cavity wall index");
  f.opts["ls_tile"] = app.add_option("--ls-tile", f.ls_tile, "LS contour tile edge");
  f.opts["ls_nodes"] = app.add_option("--ls-nodes", f.ls_nodes, "LS contour quadrature nodes");
}

bool given(const Flags &f, const std::string &name)
{
  return f.opts.at(name)->count() > 0;
}

RunConfig resolve(const Flags &f)
{
  RunConfig cfg;
  if (given(f, "config"))
  {
    cfg = load_run_config(f.config);
  }
  if (given(f, "problem") && f.problem != cfg.problem)
  {
    cfg.problem = f.problem;
    cfg.parameters.clear();
  }
  if (given(f, "formulation")) cfg.formulation = formulation_from_string(f.formulation);
  if (given(f, "p")) cfg.p = f.p;
  if (given(f, "h")) cfg.h = f.h;
  if (given(f, "ref")) cfg.refinements = f.ref;
  if (given(f, "sigma0")) cfg.sigma0 = f.sigma0;
  if (given(f, "d")) cfg.d = f.d;
  if (given(f, "xc")) cfg.x_c = f.xc;
  if (given(f, "ell")) cfg.ell = f.ell;
  if (given(f, "beta"))
    cfg.beta_variant = f.beta_variant == "as_printed" ? BetaVariant::AsPrinted : BetaVariant::RampStart;
  if (given(f, "window")) cfg.window = {f.window[0], f.window[1], f.window[2], f.window[3]};
  if (given(f, "filter")) cfg.filter = f.filter;
  if (given(f, "threshold")) cfg.epsilon_threshold = f.threshold;
  if (given(f, "pseudo"))
  {
    cfg.pseudo_nx = f.pseudo[0];
    cfg.pseudo_ny = f.pseudo[1];
  }
  if (given(f, "out")) cfg.out = f.out;
  if (given(f, "seed")) cfg.seed = f.seed;
  if (given(f, "eta")) cfg.parameters["eta"] = f.eta;
  if (given(f, "a")) cfg.parameters["a"] = f.a;
  if (given(f, "b")) cfg.parameters["b"] = f.b;
  if (given(f, "gamma")) cfg.parameters["gamma"] = f.gamma;
  if (given(f, "ls_tile")) cfg.ls_tile = f.ls_tile;
  if (given(f, "ls_nodes")) cfg.ls_nodes = f.ls_nodes;
  cfg = with_problem_defaults(std::move(cfg));
  cfg.validate();
  return cfg;
}

std::string fmt(double v, int prec = 12)
{
  std::ostringstream os;
  os << std::setprecision(prec) << v + 0.0;
  return os.str();
}

void print_report(const RunReport &r, bool classify)
{
  std::cout << "# problem=" << r.config.problem << " formulation=" << to_string(r.config.formulation)
            << " p=" << r.config.p << " h=" << r.config.h << " ref=" << r.config.refinements
            << " dofs=" << r.dof_count << " pencil=" << r.pencil_size << "\n";
  for (const auto &e : r.entries)
  {
    std::cout << std::setw(4) << e.j << "  " << std::setw(18) << fmt(e.k.real()) << " "
              << std::setw(18) << fmt(e.k.imag()) << "i";
    if (!std::isnan(e.epsilon))
    {
      std::cout << "  eps=" << fmt(e.epsilon, 3);
    }
    if (e.feasible)
    {
      std::cout << (*e.feasible ? "  feasible" : "  nonfeasible");
    }
    if (e.match)
    {
      std::cout << "  ref " << e.match->index << " dist=" << fmt(e.match->distance, 3);
    }
    if (classify)
    {
      std::cout << (e.epsilon < r.config.epsilon_threshold ? "  kept" : "  spurious");
    }
    std::cout << "\n";
  }
  for (const auto &w : r.warnings)
  {
    std::cerr << "warning: " << w << "\n";
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"helmres: scattering resonances of the 1D Helmholtz operator"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", helmres::version_string());
  app.require_subcommand(1);

  Flags solve_f, filter_f, pseudo_f, ref_f, conv_f;
  auto *solve = app.add_subcommand("solve", "solve, filter and write eigenvalues.csv");
  add_common(*solve, solve_f);
  auto *filter = app.add_subcommand("filter", "solve and classify every pair by epsilon");
  add_common(*filter, filter_f);
  auto *pseudo = app.add_subcommand("pseudospectrum", "smallest singular value over the window");
  add_common(*pseudo, pseudo_f);
  auto *reference = app.add_subcommand("reference", "reference eigenvalues for the problem");
  add_common(*reference, ref_f);
  int m_max = 10;
  std::string family = "as_printed";
  reference->add_option("--m-max", m_max, "highest closed-form index");
  reference->add_option("--family", family, "eta = 1 PML family: as_printed or stretched")
      ->check(CLI::IsMember({"as_printed", "stretched"}));
  auto *conv = app.add_subcommand("convergence", "eigenvalue error under p or h refinement");
  add_common(*conv, conv_f);
  std::string sweep = "p";
  std::vector<int> values{1, 2, 3, 4};
  std::vector<int> targets{1};
  conv->add_option("--sweep", sweep, "p or ref")->check(CLI::IsMember({"p", "ref"}));
  conv->add_option("--values", values, "degrees or refinement counts");
  conv->add_option("--targets", targets, "reference indices to track");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (solve->parsed() || filter->parsed())
    {
      const RunConfig cfg = resolve(solve->parsed() ? solve_f : filter_f);
      RunConfig run = cfg;
      if (filter->parsed())
      {
        run.filter = true;
      }
      const RunReport report = run_pipeline(run);
      emit_outputs(report, run.out);
      print_report(report, filter->parsed());
    }
    else if (pseudo->parsed())
    {
      const RunConfig cfg = resolve(pseudo_f);
      const PseudospectrumGrid grid = run_pseudospectrum(cfg);
      std::filesystem::create_directories(cfg.out);
      std::ofstream csv(std::filesystem::path(cfg.out) / "pseudospectrum.csv");
      write_pseudospectrum_csv(csv, grid);
      std::ofstream side(std::filesystem::path(cfg.out) / "pseudospectrum.json");
      side << pseudospectrum_sidecar_json(grid, cfg) << "\n";
      std::cout << "min s_min = " << grid.values.minCoeff() << ", max s_min = "
                << grid.values.maxCoeff() << "\n";
    }
    else if (reference->parsed())
    {
      const RunConfig cfg = resolve(ref_f);
      ReferenceSet set;
      if (cfg.problem == "slab" && cfg.formulation == Formulation::PML)
      {
        set = slab_pml_eigenvalues(cfg.parameters.at("eta"), cfg.pml(), m_max,
                                   family == "as_printed" ? SlabPmlFamily::AsPrinted
                                                          : SlabPmlFamily::StretchedLength);
      }
      else if (cfg.problem == "slab")
      {
        set = slab_dtn_eigenvalues(cfg.parameters.at("eta"), cfg.parameters.at("a"), m_max);
      }
      else
      {
        const auto ref = reference_for(cfg);
        if (!ref)
        {
          throw std::invalid_argument("no reference available for this problem instance");
        }
        set = *ref;
      }
      std::filesystem::create_directories(cfg.out);
      std::ofstream csv(std::filesystem::path(cfg.out) / "reference.csv");
      write_reference_csv(csv, set);
      write_reference_csv(std::cout, set);
      for (Complex s : set.failed_seeds)
      {
        std::cerr << "warning: Newton failed from seed " << s << "\n";
      }
    }
    else if (conv->parsed())
    {
      const RunConfig cfg = resolve(conv_f);
      const auto ref = reference_for(cfg);
      if (!ref)
      {
        throw std::invalid_argument("convergence needs a reference set for the problem");
      }
      std::vector<Complex> ks;
      for (int t : targets)
      {
        if (t < 0 || t >= static_cast<int>(ref->entries.size()))
        {
          throw std::invalid_argument("target index out of range: " + std::to_string(t));
        }
        ks.push_back(ref->entries[t].k);
      }
      const auto rows = run_convergence(cfg, sweep == "p" ? SweepKind::Degree : SweepKind::Refinement,
                                        values, ks);
      std::filesystem::create_directories(cfg.out);
      std::ofstream csv(std::filesystem::path(cfg.out) / "convergence.csv");
      for (std::ostream *os : {static_cast<std::ostream *>(&csv), static_cast<std::ostream *>(&std::cout)})
      {
        *os << "p,h,ref,dofs";
        for (int t : targets)
        {
          *os << ",err_" << t << ",order_" << t;
        }
        *os << "\n";
        for (const auto &row : rows)
        {
          *os << row.p << "," << fmt(row.h) << "," << row.refinements << "," << row.dof_count;
          for (std::size_t i = 0; i < row.errors.size(); i++)
          {
            *os << "," << fmt(row.errors[i], 6) << ",";
            if (!std::isnan(row.orders[i]))
            {
              *os << fmt(row.orders[i], 4);
            }
          }
          *os << "\n";
        }
      }
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
