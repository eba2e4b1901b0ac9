// SPDX-License-Identifier: MIT

#include "romdd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace romdd
{

namespace
{

namespace fs = std::filesystem;

class StopWatch
{
public:
   StopWatch() : t0_(std::chrono::steady_clock::now()) {}
   double elapsed() const
   {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
   }
   void restart() { t0_ = std::chrono::steady_clock::now(); }

private:
   std::chrono::steady_clock::time_point t0_;
};

// fixed tags keep the substreams of distinct studies apart
enum : uint64_t
{
   kStreamScaleup = 1,
   kStreamRankSweep = 2,
   kStreamExtrapolate = 3
};

Rng trial_rng(uint64_t seed, uint64_t tag, int size, int trial)
{
   return Rng::substream(seed + tag * 0x9e3779b9ull,
                         static_cast<uint64_t>(size) * 100000ull + static_cast<uint64_t>(trial));
}

SideBc channel_bc()
{
   SideBc bc;
   bc[Side::Left] = BcKind::Dirichlet;
   bc[Side::Bottom] = BcKind::Dirichlet;
   bc[Side::Top] = BcKind::Dirichlet;
   bc[Side::Right] = BcKind::Neumann;
   return bc;
}

} // namespace

std::vector<const PoissonComponent *> TrainedModel::poisson_refs() const
{
   std::vector<const PoissonComponent *> out;
   for (const auto &c : poisson_components)
   {
      out.push_back(&c);
   }
   return out;
}

std::vector<const StokesComponent *> TrainedModel::stokes_refs() const
{
   std::vector<const StokesComponent *> out;
   for (const auto &c : stokes_components)
   {
      out.push_back(&c);
   }
   return out;
}

TrainedModel build_components(const ExperimentConfig &cfg)
{
   TrainedModel model;
   model.cfg = cfg;
   for (const auto &[name, spec] : cfg.components)
   {
      Mesh2D mesh = build_component_mesh(spec);
      if (cfg.physics == Physics::Poisson)
      {
         model.poisson_components.push_back(
            make_poisson_component(name, std::move(mesh), cfg.effective_gamma()));
         model.cell_mass.push_back(model.poisson_components.back().mass);
      }
      else
      {
         model.stokes_components.push_back(
            make_stokes_component(name, std::move(mesh), cfg.nu, cfg.effective_gamma()));
         model.cell_mass.push_back(coupled_mass(model.stokes_components.back()));
      }
   }
   return model;
}

TrainedModel train_model(const ExperimentConfig &cfg)
{
   TrainedModel model = build_components(cfg);
   const double gamma = cfg.effective_gamma();

   std::vector<PodBasis> bases;
   if (cfg.physics == Physics::Poisson)
   {
      for (const auto &c : model.poisson_components)
      {
         const SnapshotSet snap = collect_snapshots_poisson(c, cfg.samples, cfg.seed, gamma);
         PodBasis basis = (cfg.energy > 0.0) ? pod_train_energy(snap, cfg.energy)
                                             : pod_train(snap, cfg.rank);
         basis.seed = cfg.seed;
         bases.push_back(std::move(basis));
      }
      model.library = project_poisson_operators(model.poisson_refs(), std::move(bases), gamma);
   }
   else
   {
      const auto snaps = collect_snapshots_stokes(model.stokes_refs(), cfg.samples, cfg.seed,
                                                  cfg.nu, gamma);
      for (const auto &snap : snaps)
      {
         PodBasis basis = (cfg.energy > 0.0) ? pod_train_energy(snap, cfg.energy)
                                             : pod_train(snap, cfg.rank);
         basis.seed = cfg.seed;
         bases.push_back(std::move(basis));
      }
      model.library = project_stokes_operators(model.stokes_refs(), std::move(bases),
                                               gamma, cfg.nu);
   }
   return model;
}

void cmd_train(const ExperimentConfig &cfg)
{
   TrainedModel model = train_model(cfg);
   std::vector<const Mesh2D *> meshes;
   if (cfg.physics == Physics::Poisson)
   {
      for (const auto &c : model.poisson_components)
      {
         meshes.push_back(c.mesh.get());
      }
   }
   else
   {
      for (const auto &c : model.stokes_components)
      {
         meshes.push_back(c.mesh.get());
      }
   }
   save_library(fs::path(cfg.out_dir) / "library", model.library, meshes);

   std::string csv = "ref,index,sigma\n";
   for (const auto &basis : model.library.bases)
   {
      for (Eigen::Index i = 0; i < basis.sigma.size(); i++)
      {
         csv += basis.ref + "," + std::to_string(i) + "," + format_g17(basis.sigma[i]) + "\n";
      }
   }
   write_text_file(fs::path(cfg.out_dir) / "singular_values.csv", csv);
}

TrainedModel load_model(const ExperimentConfig &cfg)
{
   LoadedLibrary loaded = load_library(fs::path(cfg.out_dir) / "library");
   TrainedModel model;
   model.cfg = cfg;
   model.library = std::move(loaded.library);
   for (size_t r = 0; r < model.library.ref_names.size(); r++)
   {
      if (model.library.physics == Physics::Poisson)
      {
         model.poisson_components.push_back(make_poisson_component(
            model.library.ref_names[r], std::move(loaded.meshes[r]), model.library.gamma));
         model.cell_mass.push_back(model.poisson_components.back().mass);
      }
      else
      {
         model.stokes_components.push_back(make_stokes_component(
            model.library.ref_names[r], std::move(loaded.meshes[r]), model.library.nu,
            model.library.gamma));
         model.cell_mass.push_back(coupled_mass(model.stokes_components.back()));
      }
   }
   model.cfg.physics = model.library.physics;
   return model;
}

namespace
{

std::string csv_cell(double v, bool available)
{
   return available ? format_g17(v) : std::string();
}

struct TrialResult
{
   MetricsRow row;
};

std::vector<const SparseMatrix *> layout_masses(const TrainedModel &model, const Layout &layout)
{
   std::vector<const SparseMatrix *> masses;
   for (int m = 0; m < layout.cells(); m++)
   {
      masses.push_back(&model.cell_mass[layout.ref_of(m)]);
   }
   return masses;
}

// One scale-up style trial: FOM when affordable, ROM always.
MetricsRow run_trial(const TrainedModel &model, const ReducedBlockLibrary &lib,
                     const Layout &layout, const PoissonProblem *pproblem,
                     const StokesProblem *sproblem, const SideBc &bc,
                     int size, int trial)
{
   MetricsRow row;
   row.layout_size = size;
   row.trial = trial;
   row.rank = lib.bases.empty() ? 0 : lib.bases[0].rank();
   const int M = layout.cells();
   const bool fom_affordable = M <= model.cfg.fom_cutoff;

   std::vector<Vector> fom_parts;
   GlobalSystem fom_sys;
   if (fom_affordable)
   {
      StopWatch sw;
      fom_sys = (model.cfg.physics == Physics::Poisson)
                   ? assemble_global_fom_poisson(layout, model.poisson_refs(), *pproblem,
                                                 lib.gamma)
                   : assemble_global_fom_stokes(layout, model.stokes_refs(), *sproblem, bc,
                                                lib.gamma);
      row.fom_assembly_s = sw.elapsed();
      sw.restart();
      const Vector x = direct_solve(fom_sys.A, fom_sys.rhs);
      row.fom_solve_s = sw.elapsed();
      fom_parts = split_cells(fom_sys, x);
      row.has_fom = true;
   }

   StopWatch sw;
   const ReducedSystem rsys =
      (model.cfg.physics == Physics::Poisson)
         ? assemble_reduced_poisson(layout, lib, model.poisson_refs(), *pproblem)
         : assemble_reduced_stokes(layout, lib, model.stokes_refs(), *sproblem, bc);
   row.rom_assembly_s = sw.elapsed();
   sw.restart();
   const Vector qhat = solve_reduced(rsys);
   row.rom_solve_s = sw.elapsed();

   if (row.has_fom)
   {
      const std::vector<Vector> lifted = lift_solution(layout, lib, rsys, qhat);
      row.epsilon = relative_error(fom_parts, lifted, layout_masses(model, layout));
   }
   return row;
}

std::vector<std::string> ref_name_list(const TrainedModel &model)
{
   return model.library.ref_names;
}

} // namespace

std::string metrics_csv(const std::vector<MetricsRow> &rows)
{
   std::string out = "M,trial,epsilon,fom_assembly_s,fom_solve_s,rom_assembly_s,rom_solve_s,iterations,R\n";
   for (const auto &r : rows)
   {
      out += std::to_string(r.layout_size * r.layout_size) + "," + std::to_string(r.trial) + "," +
             csv_cell(r.epsilon, r.has_fom) + "," +
             csv_cell(r.fom_assembly_s, r.has_fom) + "," +
             csv_cell(r.fom_solve_s, r.has_fom) + "," +
             format_g17(r.rom_assembly_s) + "," + format_g17(r.rom_solve_s) + "," +
             std::to_string(r.iterations) + "," + std::to_string(r.rank) + "\n";
   }
   return out;
}

std::vector<MetricsRow> cmd_scaleup(const TrainedModel &model)
{
   const ExperimentConfig &cfg = model.cfg;
   std::vector<MetricsRow> rows;
   for (int size : cfg.sizes)
   {
      for (int trial = 0; trial < cfg.trials; trial++)
      {
         Rng rng = trial_rng(cfg.seed, kStreamScaleup, size, trial);
         if (cfg.physics == Physics::Poisson)
         {
            const PoissonProblem problem = sample_poisson_params(rng, SampleRange::Test);
            const Layout layout =
               (model.poisson_components.size() == 1)
                  ? uniform_layout(size, size, model.poisson_components[0].name)
                  : random_layout(size, size, ref_name_list(model), rng);
            rows.push_back(run_trial(model, model.library, layout, &problem, nullptr, {},
                                     size, trial));
         }
         else
         {
            StokesProblem problem;
            problem.nu = cfg.nu;
            const FlowPastArray params = sample_stokes_params(rng, SampleRange::Test);
            problem.variant = params;
            const SideBc bc = assign_upwind_sides(params);
            const Layout layout = random_layout(size, size, ref_name_list(model), rng, bc);
            rows.push_back(run_trial(model, model.library, layout, nullptr, &problem, bc,
                                     size, trial));
         }
      }
   }
   write_text_file(fs::path(cfg.out_dir) / "metrics.csv", metrics_csv(rows));
   return rows;
}

std::string rank_csv(const std::vector<RankRow> &rows)
{
   std::string out = "R,trial,epsilon,rom_assembly_s,rom_solve_s\n";
   for (const auto &r : rows)
   {
      out += std::to_string(r.rank) + "," + std::to_string(r.trial) + "," +
             format_g17(r.epsilon) + "," + format_g17(r.rom_assembly_s) + "," +
             format_g17(r.rom_solve_s) + "\n";
   }
   return out;
}

std::vector<RankRow> cmd_rank_sweep(const TrainedModel &model)
{
   const ExperimentConfig &cfg = model.cfg;
   const int size = cfg.sizes.empty() ? 4 : cfg.sizes.front();
   const int stored_rank = model.library.bases.empty() ? 0 : model.library.bases[0].rank();
   for (int r : cfg.ranks)
   {
      if (r > stored_rank)
      {
         throw ConfigError("rank sweep rank " + std::to_string(r) +
                           " exceeds the stored basis rank " + std::to_string(stored_rank));
      }
   }
   std::vector<ReducedBlockLibrary> truncated;
   for (int r : cfg.ranks)
   {
      truncated.push_back(truncate_library(model.library, r));
   }

   std::vector<RankRow> rows;
   for (int trial = 0; trial < cfg.trials; trial++)
   {
      Rng rng = trial_rng(cfg.seed, kStreamRankSweep, size, trial);
      // FOM once per trial, reused across ranks
      PoissonProblem pproblem;
      StokesProblem sproblem;
      SideBc bc;
      Layout layout;
      GlobalSystem fom_sys;
      if (cfg.physics == Physics::Poisson)
      {
         pproblem = sample_poisson_params(rng, SampleRange::Test);
         layout = (model.poisson_components.size() == 1)
                     ? uniform_layout(size, size, model.poisson_components[0].name)
                     : random_layout(size, size, ref_name_list(model), rng);
         fom_sys = assemble_global_fom_poisson(layout, model.poisson_refs(), pproblem,
                                               model.library.gamma);
      }
      else
      {
         sproblem.nu = cfg.nu;
         const FlowPastArray params = sample_stokes_params(rng, SampleRange::Test);
         sproblem.variant = params;
         bc = assign_upwind_sides(params);
         layout = random_layout(size, size, ref_name_list(model), rng, bc);
         fom_sys = assemble_global_fom_stokes(layout, model.stokes_refs(), sproblem, bc,
                                              model.library.gamma);
      }
      const Vector x = direct_solve(fom_sys.A, fom_sys.rhs);
      const std::vector<Vector> fom_parts = split_cells(fom_sys, x);
      const auto masses = layout_masses(model, layout);

      for (size_t k = 0; k < cfg.ranks.size(); k++)
      {
         const ReducedBlockLibrary &lib = truncated[k];
         RankRow row;
         row.rank = cfg.ranks[k];
         row.trial = trial;
         StopWatch sw;
         const ReducedSystem rsys =
            (cfg.physics == Physics::Poisson)
               ? assemble_reduced_poisson(layout, lib, model.poisson_refs(), pproblem)
               : assemble_reduced_stokes(layout, lib, model.stokes_refs(), sproblem, bc);
         row.rom_assembly_s = sw.elapsed();
         sw.restart();
         const Vector qhat = solve_reduced(rsys);
         row.rom_solve_s = sw.elapsed();
         const std::vector<Vector> lifted = lift_solution(layout, lib, rsys, qhat);
         row.epsilon = relative_error(fom_parts, lifted, masses);
         rows.push_back(row);
      }
   }
   write_text_file(fs::path(cfg.out_dir) / "rank_sweep.csv", rank_csv(rows));
   return rows;
}

std::string mms_csv(const std::vector<MmsRow> &rows)
{
   std::string out = "n,h,dofs,vel_err,pres_err,iters_noprec,iters_prec,converged_noprec,converged_prec,solve_s\n";
   for (const auto &r : rows)
   {
      out += std::to_string(r.n) + "," + format_g17(r.h) + "," + std::to_string(r.dofs) + "," +
             format_g17(r.vel_err) + "," + format_g17(r.pres_err) + "," +
             std::to_string(r.iters_noprec) + "," + std::to_string(r.iters_prec) + "," +
             std::to_string(r.converged_noprec ? 1 : 0) + "," +
             std::to_string(r.converged_prec ? 1 : 0) + "," + format_g17(r.solve_s) + "\n";
   }
   return out;
}

std::vector<MmsRow> cmd_mms(const ExperimentConfig &cfg)
{
   if (cfg.mms_levels < 1)
   {
      throw ConfigError("mms requires at least one level");
   }
   std::vector<MmsRow> rows;
   StokesProblem problem;
   problem.nu = cfg.nu;
   problem.variant = StokesMms{};
   const SideBc all_dirichlet; // manufactured solution is Dirichlet everywhere

   for (int level = 0; level < cfg.mms_levels; level++)
   {
      const int n = 8 << level;
      const StokesComponent comp =
         make_stokes_component("mms", gen_quad_grid(n), cfg.nu, cfg.effective_gamma());
      const Layout layout = uniform_layout(1, 1, "mms");
      const std::vector<const StokesComponent *> refs = {&comp};
      const GlobalSystem sys =
         assemble_global_fom_stokes(layout, refs, problem, all_dirichlet, cfg.effective_gamma());

      MmsRow row;
      row.n = n;
      row.h = 1.0 / n;
      row.dofs = comp.ndof();

      auto [x_noprec, rep_noprec] = minres_solve(sys.A, sys.rhs, cfg.tol);
      row.iters_noprec = rep_noprec.iterations;
      row.converged_noprec = rep_noprec.converged;

      const PrecondFn precond = make_stokes_block_precond(sys, refs, layout);
      StopWatch sw;
      auto [x, rep] = minres_solve(sys.A, sys.rhs, cfg.tol, -1, precond);
      row.solve_s = sw.elapsed();
      row.iters_prec = rep.iterations;
      row.converged_prec = rep.converged;

      const int nu_dof = comp.velocity.dof_count;
      const Vector u_h = x.segment(0, nu_dof);
      const Vector p_h = x.segment(nu_dof, comp.pressure.dof_count);

      // true L2 errors by element quadrature; the discrete pressure has
      // mean zero, so the exact pressure is shifted to match
      auto exact_u = [](double x1, double x2) { return mms_velocity(x1, x2); };
      const double exact_p_mean = assemble_load(comp.pressure, [&](double x1, double x2)
                                                { return mms_pressure(cfg.nu, x1, x2); })
                                     .sum(); // area is 1
      auto exact_p = [&](double x1, double x2)
      { return mms_pressure(cfg.nu, x1, x2) - exact_p_mean; };

      const Vector zero_u = Vector::Zero(nu_dof);
      const Vector zero_p = Vector::Zero(comp.pressure.dof_count);
      row.vel_err = l2_error(comp.velocity, u_h, exact_u) /
                    l2_error(comp.velocity, zero_u, exact_u);
      row.pres_err = l2_error(comp.pressure, p_h, exact_p) /
                     l2_error(comp.pressure, zero_p, exact_p);
      rows.push_back(row);
   }
   write_text_file(fs::path(cfg.out_dir) / "mms.csv", mms_csv(rows));
   return rows;
}

std::vector<MetricsRow> cmd_extrapolate(const TrainedModel &model)
{
   const ExperimentConfig &cfg = model.cfg;
   std::vector<MetricsRow> rows;
   for (int size : cfg.sizes)
   {
      for (int trial = 0; trial < cfg.trials; trial++)
      {
         Rng rng = trial_rng(cfg.seed, kStreamExtrapolate, size, trial);
         if (cfg.physics == Physics::Poisson)
         {
            const double length = static_cast<double>(size);
            SpiralPoisson spiral =
               sample_spiral_params(rng, length, cfg.spiral_width_ratio * length);
            const PoissonProblem problem = spiral;
            const Layout layout =
               (model.poisson_components.size() == 1)
                  ? uniform_layout(size, size, model.poisson_components[0].name)
                  : random_layout(size, size, ref_name_list(model), rng);
            rows.push_back(run_trial(model, model.library, layout, &problem, nullptr, {},
                                     size, trial));
         }
         else
         {
            StokesProblem problem;
            problem.nu = cfg.nu;
            problem.variant = ChannelFlow{1.0, size};
            const SideBc bc = channel_bc();
            const Layout layout = random_layout(size, size, ref_name_list(model), rng, bc);
            rows.push_back(run_trial(model, model.library, layout, nullptr, &problem, bc,
                                     size, trial));
         }
      }
   }
   write_text_file(fs::path(cfg.out_dir) / "extrapolate.csv", metrics_csv(rows));
   return rows;
}

std::string sample_params_csv(Physics physics, int count, uint64_t seed, SampleRange range)
{
   std::string out;
   if (physics == Physics::Poisson)
   {
      out = "sample,k1,k2,theta,kb1,kb2,theta_b\n";
      for (int i = 0; i < count; i++)
      {
         Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
         const SinusoidalPoisson p = sample_poisson_params(rng, range);
         out += std::to_string(i) + "," + format_g17(p.k[0]) + "," + format_g17(p.k[1]) + "," +
                format_g17(p.theta) + "," + format_g17(p.kb[0]) + "," + format_g17(p.kb[1]) +
                "," + format_g17(p.theta_b) + "\n";
      }
   }
   else
   {
      out = "sample,g1,g2,dg1,dg2,k11,k12,k21,k22,theta1,theta2\n";
      for (int i = 0; i < count; i++)
      {
         Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
         const FlowPastArray p = sample_stokes_params(rng, range);
         out += std::to_string(i) + "," + format_g17(p.g1) + "," + format_g17(p.g2) + "," +
                format_g17(p.dg1) + "," + format_g17(p.dg2) + "," + format_g17(p.k1[0]) + "," +
                format_g17(p.k1[1]) + "," + format_g17(p.k2[0]) + "," + format_g17(p.k2[1]) +
                "," + format_g17(p.theta1) + "," + format_g17(p.theta2) + "\n";
      }
   }
   return out;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
   if (x.size() != y.size() || x.size() < 2)
   {
      throw std::invalid_argument("loglog_slope: need matching samples, at least two");
   }
   double sx = 0, sy = 0, sxx = 0, sxy = 0;
   const double n = static_cast<double>(x.size());
   for (size_t i = 0; i < x.size(); i++)
   {
      const double lx = std::log(x[i]);
      const double ly = std::log(y[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
   }
   return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median(std::vector<double> values)
{
   if (values.empty())
   {
      throw std::invalid_argument("median: empty sample");
   }
   std::sort(values.begin(), values.end());
   const size_t mid = values.size() / 2;
   return (values.size() % 2 == 1) ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

} // namespace romdd
