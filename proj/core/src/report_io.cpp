// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

#include "helmres/pipeline.hpp"

#ifndef HELMRES_VERSION
#define HELMRES_VERSION "unknown"
#endif

namespace helmres
{

using nlohmann::json;

namespace
{

std::string beta_name(BetaVariant v)
{
  return v == BetaVariant::AsPrinted ? "as_printed" : "ramp_start";
}

BetaVariant beta_from_name(const std::string &s)
{
  if (s == "as_printed")
  {
    return BetaVariant::AsPrinted;
  }
  if (s == "ramp_start")
  {
    return BetaVariant::RampStart;
  }
  throw std::invalid_argument("config: unknown beta_variant '" + s + "'");
}

json optional_number(const std::optional<double> &v)
{
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json &j)
{
  if (j.is_null())
  {
    return std::nullopt;
  }
  return j.get<double>();
}

json config_to_json(const RunConfig &cfg)
{
  json j;
  j["problem"] = cfg.problem;
  j["parameters"] = cfg.parameters;
  j["formulation"] = to_string(cfg.formulation);
  j["p"] = cfg.p;
  j["h"] = cfg.h;
  j["refinements"] = cfg.refinements;
  j["d"] = optional_number(cfg.d);
  j["sigma0"] = cfg.sigma0;
  j["x_c"] = optional_number(cfg.x_c);
  j["ell"] = optional_number(cfg.ell);
  j["beta_variant"] = beta_name(cfg.beta_variant);
  j["window"] = {cfg.window.re_min, cfg.window.re_max, cfg.window.im_min, cfg.window.im_max};
  j["filter"] = cfg.filter;
  j["epsilon_threshold"] = cfg.epsilon_threshold;
  j["pseudo"] = {cfg.pseudo_nx, cfg.pseudo_ny};
  j["ls"] = {{"tile", cfg.ls_tile}, {"nodes", cfg.ls_nodes}, {"probe", cfg.ls_probe}};
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  return j;
}

std::string fmt12(double v)
{
  std::ostringstream os;
  os << std::setprecision(12) << v + 0.0;
  return os.str();
}

}  // namespace

std::string version_string()
{
  return HELMRES_VERSION;
}

std::string to_json_string(const RunConfig &cfg)
{
  return config_to_json(cfg).dump(2);
}

RunConfig run_config_from_json(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object())
  {
    throw std::invalid_argument("config: top level must be an object");
  }
  RunConfig cfg;
  try
  {
    for (const auto &[key, v] : j.items())
    {
      if (key == "problem")
        cfg.problem = v.get<std::string>();
      else if (key == "parameters")
        cfg.parameters = v.get<std::map<std::string, double>>();
      else if (key == "formulation")
        cfg.formulation = formulation_from_string(v.get<std::string>());
      else if (key == "p")
        cfg.p = v.get<int>();
      else if (key == "h")
        cfg.h = v.get<double>();
      else if (key == "refinements")
        cfg.refinements = v.get<int>();
      else if (key == "d")
        cfg.d = read_optional(v);
      else if (key == "sigma0")
        cfg.sigma0 = v.get<double>();
      else if (key == "x_c")
        cfg.x_c = read_optional(v);
      else if (key == "ell")
        cfg.ell = read_optional(v);
      else if (key == "beta_variant")
        cfg.beta_variant = beta_from_name(v.get<std::string>());
      else if (key == "window")
      {
        const auto w = v.get<std::vector<double>>();
        if (w.size() != 4)
        {
          throw std::invalid_argument("config: window needs 4 numbers");
        }
        cfg.window = {w[0], w[1], w[2], w[3]};
      }
      else if (key == "filter")
        cfg.filter = v.get<bool>();
      else if (key == "epsilon_threshold")
        cfg.epsilon_threshold = v.get<double>();
      else if (key == "pseudo")
      {
        const auto r = v.get<std::vector<int>>();
        if (r.size() != 2)
        {
          throw std::invalid_argument("config: pseudo needs 2 integers");
        }
        cfg.pseudo_nx = r[0];
        cfg.pseudo_ny = r[1];
      }
      else if (key == "ls")
      {
        cfg.ls_tile = v.value("tile", cfg.ls_tile);
        cfg.ls_nodes = v.value("nodes", cfg.ls_nodes);
        cfg.ls_probe = v.value("probe", cfg.ls_probe);
      }
      else if (key == "seed")
        cfg.seed = v.get<std::uint64_t>();
      else if (key == "out")
        cfg.out = v.get<std::string>();
      else
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  catch (const json::exception &e)
  {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg = with_problem_defaults(std::move(cfg));
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path &file)
{
  std::ifstream in(file);
  if (!in)
  {
    throw std::runtime_error("cannot open config file " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  json j = json::parse(buf.str(), nullptr, false);
  // run.json wraps the configuration.
  if (j.is_object() && j.contains("config") && j["config"].is_object())
  {
    return run_config_from_json(j["config"].dump());
  }
  return run_config_from_json(buf.str());
}

void write_eigenvalues_csv(std::ostream &os, const RunReport &report)
{
  os << "j,re_k,im_k,epsilon,feasible,ref_match,ref_dist\n";
  for (const auto &e : report.entries)
  {
    os << e.j << "," << fmt12(e.k.real()) << "," << fmt12(e.k.imag()) << ",";
    if (!std::isnan(e.epsilon))
    {
      os << (std::isinf(e.epsilon) ? std::string("inf") : fmt12(e.epsilon));
    }
    os << ",";
    if (e.feasible)
    {
      os << (*e.feasible ? "true" : "false");
    }
    os << ",";
    if (e.match)
    {
      os << e.match->index;
    }
    os << ",";
    if (e.match)
    {
      os << fmt12(e.match->distance);
    }
    os << "\n";
  }
}

void write_reference_csv(std::ostream &os, const ReferenceSet &set)
{
  os << "j,re_k,im_k,provenance\n";
  for (const auto &e : set.entries)
  {
    os << e.index << "," << fmt12(e.k.real()) << "," << fmt12(e.k.imag()) << ","
       << to_string(set.provenance) << "\n";
  }
}

std::string pseudospectrum_sidecar_json(const PseudospectrumGrid &grid, const RunConfig &cfg)
{
  json j;
  j["region"] = {grid.region.re_min, grid.region.re_max, grid.region.im_min, grid.region.im_max};
  j["resolution"] = {grid.nx, grid.ny};
  j["formulation"] = to_string(grid.formulation);
  j["layout"] = "row-major, im_k outer, re_k inner";
  j["parameters"] = config_to_json(cfg);
  return j.dump(2);
}

void emit_outputs(const RunReport &report, const std::filesystem::path &dir)
{
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string &name)
  {
    std::ofstream os(dir / name);
    if (!os)
    {
      throw std::runtime_error("cannot write " + (dir / name).string());
    }
    return os;
  };
  {
    auto os = open("eigenvalues.csv");
    write_eigenvalues_csv(os, report);
  }
  {
    json j;
    j["config"] = config_to_json(report.config);
    j["versions"] = {{"helmres", version_string()},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)}};
    j["diagnostics"] = {{"dof_count", report.dof_count},
                        {"pencil_size", report.pencil_size},
                        {"dropped_infinite", report.dropped_infinite},
                        {"dropped_zero", report.dropped_zero},
                        {"eigenvalues_in_window", report.entries.size()},
                        {"warnings", report.warnings}};
    j["reference"] = report.reference_provenance
                         ? json(to_string(*report.reference_provenance))
                         : json(nullptr);
    auto os = open("run.json");
    os << j.dump(2) << "\n";
  }
  {
    auto os = open("timing.json");
    os << json(report.timing).dump(2) << "\n";
  }
  if (report.pseudospectrum)
  {
    {
      auto os = open("pseudospectrum.csv");
      write_pseudospectrum_csv(os, *report.pseudospectrum);
    }
    auto os = open("pseudospectrum.json");
    os << pseudospectrum_sidecar_json(*report.pseudospectrum, report.config) << "\n";
  }
}

}  // namespace helmres
