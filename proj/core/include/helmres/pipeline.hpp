// Copyright 2026 The helmres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMRES_PIPELINE_HPP
#define HELMRES_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helmres/lippmann.hpp"
#include "helmres/reference.hpp"

namespace helmres
{

// Everything a run needs. Physical parameters are re-validated by validate().
struct RunConfig
{
  // "slab", "air_cavity" or "bump".
  std::string problem = "slab";
  // slab: eta, a. air_cavity: b, gamma, eta. bump: none.
  std::map<std::string, double> parameters;

  Formulation formulation = Formulation::DtN;
  int p = 4;
  double h = 0.5;
  int refinements = 0;

  // DtN truncation point, also the start of the PML ramp. Defaults to the resonator
  // half-width when unset.
  std::optional<double> d;
  double sigma0 = 5.0;
  // Ramp end and truncation point; default d + 1 and d + 3.
  std::optional<double> x_c;
  std::optional<double> ell;
  BetaVariant beta_variant = BetaVariant::AsPrinted;

  Rectangle window{0.0, 12.5, -2.0, 0.0};

  bool filter = true;
  double epsilon_threshold = 1e-2;

  // Pseudospectrum resolution over the window; zero disables it.
  int pseudo_nx = 0;
  int pseudo_ny = 0;

  // LS contour tiling: square tiles of this edge, each covered by its circumcircle.
  double ls_tile = 1.0;
  int ls_nodes = 32;
  int ls_probe = 16;

  std::uint64_t seed = 12345;
  std::string out = "out";

  void validate() const;
  MediumProfile medium() const;
  double truncation() const;
  PmlConfig pml() const;
};

// Fills defaulted profile parameters for the chosen problem.
RunConfig with_problem_defaults(RunConfig cfg);

struct ReportEntry
{
  int j = 0;
  Complex k;
  // NaN when the filter is off, +inf when the mode has no support on the resonator.
  double epsilon = 0.0;
  std::optional<bool> feasible;
  std::optional<ReferenceMatch> match;
  // Coefficient vector in the formulation's space (not written to disk).
  ComplexVector vector;
};

struct RunReport
{
  RunConfig config;
  std::vector<ReportEntry> entries;  // ordered by |Re k|, then descending Im k
  std::size_t dof_count = 0;
  std::size_t pencil_size = 0;
  std::size_t dropped_infinite = 0;
  std::size_t dropped_zero = 0;
  std::optional<Provenance> reference_provenance;
  std::vector<std::string> warnings;
  std::map<std::string, double> timing;  // seconds per stage
  std::optional<PseudospectrumGrid> pseudospectrum;

  // Entries with epsilon below the configured threshold.
  std::vector<ReportEntry> accepted() const;
};

// Thrown when a pipeline stage fails; what() names the stage.
class PipelineError : public std::runtime_error
{
public:
  PipelineError(const std::string &stage, const std::string &cause)
    : std::runtime_error(stage + ": " + cause), stage_(stage)
  {
  }
  const std::string &stage() const { return stage_; }

private:
  std::string stage_;
};

// Reference resonances for the configured problem, if any exist.
std::optional<ReferenceSet> reference_for(const RunConfig &cfg);

RunReport run_pipeline(const RunConfig &cfg);

// Pseudospectrum of the configured formulation over the window, without an eigensolve.
PseudospectrumGrid run_pseudospectrum(const RunConfig &cfg);

// Eigenvalue errors for a sequence of discretizations.
struct ConvergenceRow
{
  int p = 0;
  double h = 0.0;
  int refinements = 0;
  std::size_t dof_count = 0;
  std::vector<double> errors;  // one per target
  std::vector<double> orders;  // observed order vs previous row (h sweeps), NaN otherwise
};

enum class SweepKind
{
  Degree,
  Refinement
};

// Solves the configured problem (DtN or PML) for each value (p, or refinement count) and
// reports the distance of the eigenvalue nearest each target.
std::vector<ConvergenceRow> run_convergence(const RunConfig &cfg, SweepKind kind,
                                            const std::vector<int> &values,
                                            const std::vector<Complex> &targets);

//
// Serialization and file output.
//

std::string to_json_string(const RunConfig &cfg);
RunConfig run_config_from_json(const std::string &text);
RunConfig load_run_config(const std::filesystem::path &file);

void write_eigenvalues_csv(std::ostream &os, const RunReport &report);
void write_reference_csv(std::ostream &os, const ReferenceSet &set);
std::string pseudospectrum_sidecar_json(const PseudospectrumGrid &grid, const RunConfig &cfg);

// Writes eigenvalues.csv, run.json, timing.json and, when present, pseudospectrum.csv with
// its pseudospectrum.json sidecar.
void emit_outputs(const RunReport &report, const std::filesystem::path &dir);

std::string version_string();

}  // namespace helmres

#endif  // HELMRES_PIPELINE_HPP
