// SPDX-License-Identifier: MIT

#pragma once

#include "romdd/config.hpp"
#include "romdd/io.hpp"
#include "romdd/rom.hpp"

namespace romdd
{

/// Components plus trained reduced operators for one experiment config.
struct TrainedModel
{
   ExperimentConfig cfg;
   std::vector<PoissonComponent> poisson_components;
   std::vector<StokesComponent> stokes_components;
   ReducedBlockLibrary library;
   std::vector<SparseMatrix> cell_mass; // per reference, coupled for Stokes

   std::vector<const PoissonComponent *> poisson_refs() const;
   std::vector<const StokesComponent *> stokes_refs() const;
};

/// Builds components from the config specs (no training).
TrainedModel build_components(const ExperimentConfig &cfg);

/// Snapshot collection + POD + operator projection, in memory.
TrainedModel train_model(const ExperimentConfig &cfg);

/// train_model + persistence under <out>/library plus the singular-value
/// summary CSV.
void cmd_train(const ExperimentConfig &cfg);

/// Reads a previously trained library from <out>/library and rebuilds
/// the components from the stored meshes.
TrainedModel load_model(const ExperimentConfig &cfg);

struct MetricsRow
{
   int layout_size = 0; // M = size^2 components
   int trial = 0;
   bool has_fom = false;
   double epsilon = 0.0;
   double fom_assembly_s = 0.0, fom_solve_s = 0.0;
   double rom_assembly_s = 0.0, rom_solve_s = 0.0;
   int iterations = 0;
   int rank = 0;
};

std::string metrics_csv(const std::vector<MetricsRow> &rows);

/// Scale-up study: per (layout size, trial), sampled test problem, FOM
/// when affordable, ROM always. Writes <out>/metrics.csv.
std::vector<MetricsRow> cmd_scaleup(const TrainedModel &model);

struct RankRow
{
   int rank = 0;
   int trial = 0;
   double epsilon = 0.0;
   double rom_assembly_s = 0.0;
   double rom_solve_s = 0.0;
};

std::string rank_csv(const std::vector<RankRow> &rows);

/// Error and solve time against the basis dimension, fixed layout size
/// (first entry of cfg.sizes). Writes <out>/rank_sweep.csv.
std::vector<RankRow> cmd_rank_sweep(const TrainedModel &model);

struct MmsRow
{
   int n = 0; // elements per side
   double h = 0.0;
   int dofs = 0;
   double vel_err = 0.0;
   double pres_err = 0.0;
   int iters_noprec = 0;
   int iters_prec = 0;
   bool converged_noprec = false;
   bool converged_prec = false;
   double solve_s = 0.0;
};

std::string mms_csv(const std::vector<MmsRow> &rows);

/// Manufactured-solution convergence of the Stokes solver, grids n = 8,
/// 16, ... doubling cfg.mms_levels times. Writes <out>/mms.csv.
std::vector<MmsRow> cmd_mms(const ExperimentConfig &cfg);

/// Out-of-training problems: the spiral forcing for Poisson, channel
/// flow for Stokes. Writes <out>/extrapolate.csv.
std::vector<MetricsRow> cmd_extrapolate(const TrainedModel &model);

/// Parameter stream dump for `romdd sample`; columns depend on physics.
std::string sample_params_csv(Physics physics, int count, uint64_t seed, SampleRange range);

/// Least-squares slope of log(y) against log(x); the fit behind every
/// scaling assertion here.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

double median(std::vector<double> values);

} // namespace romdd
