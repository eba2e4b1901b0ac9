// SPDX-License-Identifier: MIT

#include "romdd/rom.hpp"

#include <algorithm>
#include <cmath>

namespace romdd
{

namespace
{

PodBasis make_basis(const SnapshotSet &snap, int rank)
{
   const ThinSvd svd = thin_svd(snap.Q);
   PodBasis basis;
   basis.ref = snap.ref;
   basis.sigma = svd.sigma;
   basis.Phi = svd.U.leftCols(rank);
   basis.sample_count = static_cast<int>(snap.Q.cols());
   return basis;
}

} // namespace

PodBasis pod_train(const SnapshotSet &snap, int rank)
{
   if (snap.Q.cols() < 1)
   {
      throw std::invalid_argument("pod_train: empty snapshot set");
   }
   const int max_rank = static_cast<int>(std::min(snap.Q.rows(), snap.Q.cols()));
   if (rank < 1 || rank > max_rank)
   {
      throw std::invalid_argument("pod_train: rank " + std::to_string(rank) +
                                  " out of range [1, " + std::to_string(max_rank) + "]");
   }
   return make_basis(snap, rank);
}

PodBasis pod_train_energy(const SnapshotSet &snap, double eta)
{
   if (snap.Q.cols() < 1)
   {
      throw std::invalid_argument("pod_train: empty snapshot set");
   }
   if (!(eta > 0.0) || eta > 1.0)
   {
      throw std::invalid_argument("pod_train: energy fraction must be in (0, 1]");
   }
   const ThinSvd svd = thin_svd(snap.Q);
   const double total = svd.sigma.sum();
   double partial = 0.0;
   int rank = static_cast<int>(svd.sigma.size());
   for (int i = 0; i < svd.sigma.size(); i++)
   {
      partial += svd.sigma[i];
      if (partial >= eta * total)
      {
         rank = i + 1;
         break;
      }
   }
   PodBasis basis;
   basis.ref = snap.ref;
   basis.sigma = svd.sigma;
   basis.Phi = svd.U.leftCols(rank);
   basis.sample_count = static_cast<int>(snap.Q.cols());
   return basis;
}

int ReducedBlockLibrary::ref_id(const std::string &name) const
{
   for (size_t i = 0; i < ref_names.size(); i++)
   {
      if (ref_names[i] == name)
      {
         return static_cast<int>(i);
      }
   }
   throw std::runtime_error("ReducedBlockLibrary: unknown reference '" + name + "'");
}

namespace
{

DenseMatrix project(const DenseMatrix &Phi_row, const SparseMatrix &B, const DenseMatrix &Phi_col)
{
   if (Phi_row.rows() != B.rows() || Phi_col.rows() != B.cols())
   {
      throw std::invalid_argument("project_operators: basis/operator dimension mismatch");
   }
   return Phi_row.transpose() * (B * Phi_col);
}

template <typename Component>
void project_interfaces(const std::vector<const Component *> &refs,
                        ReducedBlockLibrary &lib,
                        const std::function<InterfaceBlocks(int, int, const InterfaceQuad &)> &assemble)
{
   const int nref = static_cast<int>(refs.size());
   for (int r = 0; r < nref; r++)
   {
      for (int rp = 0; rp < nref; rp++)
      {
         for (IfaceAxis axis : {IfaceAxis::Horizontal, IfaceAxis::Vertical})
         {
            const Side sm = (axis == IfaceAxis::Vertical) ? Side::Right : Side::Top;
            const Side sn = (axis == IfaceAxis::Vertical) ? Side::Left : Side::Bottom;
            const InterfaceQuad iface = build_mortar(refs[r]->traces[static_cast<int>(sm)],
                                                     refs[rp]->traces[static_cast<int>(sn)]);
            const InterfaceBlocks blocks = assemble(r, rp, iface);
            const DenseMatrix &Pm = lib.bases[r].Phi;
            const DenseMatrix &Pn = lib.bases[rp].Phi;
            lib.interface_blocks[{r, rp, axis}] = {project(Pm, blocks.mm, Pm),
                                                   project(Pm, blocks.mn, Pn),
                                                   project(Pn, blocks.nm, Pm),
                                                   project(Pn, blocks.nn, Pn)};
         }
      }
   }
}

} // namespace

ReducedBlockLibrary project_poisson_operators(const std::vector<const PoissonComponent *> &refs,
                                              std::vector<PodBasis> bases, double gamma)
{
   if (refs.size() != bases.size())
   {
      throw std::invalid_argument("project_operators: one basis per reference required");
   }
   ReducedBlockLibrary lib;
   lib.physics = Physics::Poisson;
   lib.gamma = gamma;
   lib.bases = std::move(bases);
   for (size_t r = 0; r < refs.size(); r++)
   {
      lib.ref_names.push_back(refs[r]->name);
      const DenseMatrix &Phi = lib.bases[r].Phi;
      lib.domain_blocks.push_back(project(Phi, refs[r]->domain_op, Phi));
      std::array<DenseMatrix, 4> bnd;
      for (int s = 0; s < 4; s++)
      {
         bnd[s] = project(Phi, assemble_boundary_matrix_poisson(refs[r]->space,
                                                                static_cast<Side>(s), gamma),
                          Phi);
      }
      lib.boundary_blocks.push_back(std::move(bnd));
   }
   project_interfaces<PoissonComponent>(
      refs, lib,
      [&](int r, int rp, const InterfaceQuad &iface)
      { return assemble_interface_poisson(refs[r]->space, refs[rp]->space, iface, gamma); });
   return lib;
}

ReducedBlockLibrary project_stokes_operators(const std::vector<const StokesComponent *> &refs,
                                             std::vector<PodBasis> bases,
                                             double gamma, double nu)
{
   if (refs.size() != bases.size())
   {
      throw std::invalid_argument("project_operators: one basis per reference required");
   }
   if (gamma <= 0.0)
   {
      gamma = nu * 9.0;
   }
   ReducedBlockLibrary lib;
   lib.physics = Physics::Stokes;
   lib.gamma = gamma;
   lib.nu = nu;
   lib.bases = std::move(bases);
   for (size_t r = 0; r < refs.size(); r++)
   {
      lib.ref_names.push_back(refs[r]->name);
      const DenseMatrix &Phi = lib.bases[r].Phi;
      lib.domain_blocks.push_back(project(Phi, refs[r]->domain_op, Phi));
      std::array<DenseMatrix, 4> bnd;
      for (int s = 0; s < 4; s++)
      {
         bnd[s] = project(Phi, assemble_boundary_matrix_stokes(refs[r]->spaces(),
                                                               static_cast<Side>(s), gamma, nu),
                          Phi);
      }
      lib.boundary_blocks.push_back(std::move(bnd));
      lib.mean_weights.push_back(Phi.transpose() * refs[r]->mean_weights);
   }
   project_interfaces<StokesComponent>(
      refs, lib,
      [&](int r, int rp, const InterfaceQuad &iface)
      { return assemble_interface_stokes(refs[r]->spaces(), refs[rp]->spaces(), iface, gamma, nu); });
   return lib;
}

ReducedBlockLibrary truncate_library(const ReducedBlockLibrary &lib, int rank)
{
   ReducedBlockLibrary out = lib;
   std::vector<int> ranks(lib.bases.size());
   for (size_t r = 0; r < lib.bases.size(); r++)
   {
      ranks[r] = std::min(rank, lib.bases[r].rank());
      out.bases[r].Phi = lib.bases[r].Phi.leftCols(ranks[r]);
      out.domain_blocks[r] = lib.domain_blocks[r].topLeftCorner(ranks[r], ranks[r]);
      for (int s = 0; s < 4; s++)
      {
         out.boundary_blocks[r][s] = lib.boundary_blocks[r][s].topLeftCorner(ranks[r], ranks[r]);
      }
      if (!lib.mean_weights.empty())
      {
         out.mean_weights[r] = lib.mean_weights[r].head(ranks[r]);
      }
   }
   for (auto &kv : out.interface_blocks)
   {
      const int rm = ranks[std::get<0>(kv.first)];
      const int rn = ranks[std::get<1>(kv.first)];
      const auto &src = lib.interface_blocks.at(kv.first);
      kv.second = {src[0].topLeftCorner(rm, rm), src[1].topLeftCorner(rm, rn),
                   src[2].topLeftCorner(rn, rm), src[3].topLeftCorner(rn, rn)};
   }
   return out;
}

namespace
{

void scatter_dense(std::vector<Triplet> &trip, const DenseMatrix &block,
                   int row_off, int col_off)
{
   for (int i = 0; i < block.rows(); i++)
   {
      for (int j = 0; j < block.cols(); j++)
      {
         trip.emplace_back(row_off + i, col_off + j, block(i, j));
      }
   }
}

std::vector<Side> outer_sides_of(const Layout &layout, int cell)
{
   const int ix = cell % layout.nx;
   const int iy = cell / layout.nx;
   std::vector<Side> out;
   if (ix == 0) { out.push_back(Side::Left); }
   if (ix == layout.nx - 1) { out.push_back(Side::Right); }
   if (iy == 0) { out.push_back(Side::Bottom); }
   if (iy == layout.ny - 1) { out.push_back(Side::Top); }
   return out;
}

template <typename RhsFn>
ReducedSystem assemble_reduced_common(const Layout &layout, const ReducedBlockLibrary &lib,
                                      const SideBc &bc, RhsFn &&cell_fom_rhs)
{
   ReducedSystem sys;
   const int M = layout.cells();
   sys.offsets.assign(M + 1, 0);
   for (int m = 0; m < M; m++)
   {
      const int r = layout.ref_of(m);
      if (r < 0 || r >= static_cast<int>(lib.bases.size()))
      {
         throw std::runtime_error("assemble_reduced: unresolved reference id " +
                                  std::to_string(r));
      }
      sys.offsets[m + 1] = sys.offsets[m] + lib.rank_of(r);
   }
   sys.rhs = Vector::Zero(sys.offsets.back());

   std::vector<Triplet> trip;
   for (int m = 0; m < M; m++)
   {
      const int r = layout.ref_of(m);
      scatter_dense(trip, lib.domain_blocks[r], sys.offsets[m], sys.offsets[m]);
      for (Side side : outer_sides_of(layout, m))
      {
         if (bc[side] == BcKind::Dirichlet)
         {
            scatter_dense(trip, lib.boundary_blocks[r][static_cast<int>(side)],
                          sys.offsets[m], sys.offsets[m]);
         }
      }
      // FOM-size rhs assembled per subdomain at run time, then projected
      const Vector fom_rhs = cell_fom_rhs(m, r);
      sys.rhs.segment(sys.offsets[m], lib.rank_of(r)) =
         lib.bases[r].Phi.transpose() * fom_rhs;
   }

   for (const InterfacePair &ip : find_interfaces(layout))
   {
      const int rm = layout.ref_of(ip.m), rn = layout.ref_of(ip.n);
      const auto key = std::make_tuple(rm, rn, ip.axis);
      const auto it = lib.interface_blocks.find(key);
      if (it == lib.interface_blocks.end())
      {
         throw std::runtime_error("assemble_reduced: missing interface block (" +
                                  lib.ref_names[rm] + ", " + lib.ref_names[rn] + ", " +
                                  (ip.axis == IfaceAxis::Horizontal ? "H" : "V") + ")");
      }
      scatter_dense(trip, it->second[0], sys.offsets[ip.m], sys.offsets[ip.m]);
      scatter_dense(trip, it->second[1], sys.offsets[ip.m], sys.offsets[ip.n]);
      scatter_dense(trip, it->second[2], sys.offsets[ip.n], sys.offsets[ip.m]);
      scatter_dense(trip, it->second[3], sys.offsets[ip.n], sys.offsets[ip.n]);
   }

   sys.A = SparseMatrix(sys.dim(), sys.dim());
   sys.A.setFromTriplets(trip.begin(), trip.end());
   sys.A.makeCompressed();
   return sys;
}

} // namespace

ReducedSystem assemble_reduced_poisson(const Layout &layout, const ReducedBlockLibrary &lib,
                                       const std::vector<const PoissonComponent *> &refs,
                                       const PoissonProblem &problem)
{
   SideBc all_dirichlet;
   return assemble_reduced_common(layout, lib, all_dirichlet, [&](int m, int r)
   {
      const PoissonComponent &c = *refs[r];
      const auto off = layout.cell_offset(m);
      Vector rhs = assemble_load(c.space, [&](double x, double y)
                                 { return poisson_forcing(problem, x + off[0], y + off[1]); });
      for (Side side : outer_sides_of(layout, m))
      {
         rhs += assemble_boundary_rhs_poisson(c.space, side, lib.gamma,
                                              [&](double x, double y)
                                              { return poisson_dirichlet(problem, x + off[0], y + off[1]); });
      }
      return rhs;
   });
}

ReducedSystem assemble_reduced_stokes(const Layout &layout, const ReducedBlockLibrary &lib,
                                      const std::vector<const StokesComponent *> &refs,
                                      const StokesProblem &problem, const SideBc &bc)
{
   const bool has_forcing = std::holds_alternative<StokesMms>(problem.variant);
   ReducedSystem sys = assemble_reduced_common(layout, lib, bc, [&](int m, int r)
   {
      const StokesComponent &c = *refs[r];
      const auto off = layout.cell_offset(m);
      Vector rhs = Vector::Zero(c.ndof());
      if (has_forcing)
      {
         rhs.head(c.velocity.dof_count) =
            assemble_load(c.velocity, [&](double x, double y)
                          { return stokes_forcing(problem, x + off[0], y + off[1]); });
      }
      for (Side side : outer_sides_of(layout, m))
      {
         if (bc[side] == BcKind::Dirichlet)
         {
            rhs += assemble_boundary_rhs_stokes(c.spaces(), side, lib.gamma, lib.nu,
                                                [&](double x, double y)
                                                { return stokes_dirichlet(problem, x + off[0], y + off[1], side); });
         }
      }
      return rhs;
   });

   if (!bc.any_neumann())
   {
      Vector w = Vector::Zero(sys.dim());
      for (int m = 0; m < layout.cells(); m++)
      {
         const int r = layout.ref_of(m);
         w.segment(sys.offsets[m], lib.rank_of(r)) = lib.mean_weights[r];
      }
      border_with_constraint(sys.A, sys.rhs, w);
      sys.mean_zero = true;
   }
   return sys;
}

Vector solve_reduced(const ReducedSystem &sys)
{
   try
   {
      return direct_solve(sys.A, sys.rhs);
   }
   catch (const SingularMatrixError &)
   {
      throw SingularMatrixError("solve_reduced: singular reduced system (basis deficiency)");
   }
}

std::vector<Vector> lift_solution(const Layout &layout, const ReducedBlockLibrary &lib,
                                  const ReducedSystem &sys, const Vector &qhat)
{
   std::vector<Vector> parts;
   parts.reserve(layout.cells());
   for (int m = 0; m < layout.cells(); m++)
   {
      const int r = layout.ref_of(m);
      parts.push_back(lib.bases[r].Phi *
                      qhat.segment(sys.offsets[m], lib.rank_of(r)));
   }
   return parts;
}

std::vector<Vector> split_cells(const GlobalSystem &sys, const Vector &x)
{
   std::vector<Vector> parts;
   const int M = static_cast<int>(sys.offsets.size()) - 1;
   parts.reserve(M);
   for (int m = 0; m < M; m++)
   {
      parts.push_back(x.segment(sys.offsets[m], sys.offsets[m + 1] - sys.offsets[m]));
   }
   return parts;
}

double relative_error(const std::vector<Vector> &fom_parts,
                      const std::vector<Vector> &rom_parts,
                      const std::vector<const SparseMatrix *> &cell_masses)
{
   if (fom_parts.size() != rom_parts.size() || fom_parts.size() != cell_masses.size())
   {
      throw std::invalid_argument("relative_error: mismatched cell counts");
   }
   double num = 0.0, den = 0.0;
   for (size_t m = 0; m < fom_parts.size(); m++)
   {
      const Vector diff = fom_parts[m] - rom_parts[m];
      num += diff.dot(*cell_masses[m] * diff);
      den += fom_parts[m].dot(*cell_masses[m] * fom_parts[m]);
   }
   if (den <= 0.0)
   {
      throw std::runtime_error("relative_error: zero reference norm");
   }
   return std::sqrt(num / den);
}

SnapshotSet collect_snapshots_poisson(const PoissonComponent &component, int count,
                                      uint64_t seed, double gamma)
{
   if (count < 1)
   {
      throw std::invalid_argument("collect_snapshots_poisson: count must be >= 1");
   }
   const Layout layout = uniform_layout(1, 1, component.name);
   const std::vector<const PoissonComponent *> refs = {&component};
   SnapshotSet snap;
   snap.ref = component.name;
   snap.Q.resize(component.space.dof_count, count);
   for (int i = 0; i < count; i++)
   {
      Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
      const PoissonProblem problem = sample_poisson_params(rng, SampleRange::Training);
      const GlobalSystem sys = assemble_global_fom_poisson(layout, refs, problem, gamma);
      try
      {
         snap.Q.col(i) = direct_solve(sys.A, sys.rhs);
      }
      catch (const std::exception &e)
      {
         throw std::runtime_error("collect_snapshots_poisson: sample " + std::to_string(i) +
                                  " failed: " + e.what());
      }
   }
   return snap;
}

std::vector<SnapshotSet> collect_snapshots_stokes(const std::vector<const StokesComponent *> &pool,
                                                  int count, uint64_t seed,
                                                  double nu, double gamma)
{
   if (pool.empty())
   {
      throw std::invalid_argument("collect_snapshots_stokes: empty component pool");
   }
   if (count < 1)
   {
      throw std::invalid_argument("collect_snapshots_stokes: count must be >= 1");
   }
   std::vector<std::string> names;
   for (const auto *c : pool)
   {
      names.push_back(c->name);
   }
   std::vector<std::vector<Vector>> columns(pool.size());

   for (int i = 0; i < count; i++)
   {
      Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
      const FlowPastArray params = sample_stokes_params(rng, SampleRange::Training);
      const SideBc bc = assign_upwind_sides(params);
      const Layout layout = random_layout(2, 2, names, rng, bc);
      StokesProblem problem;
      problem.nu = nu;
      problem.variant = params;
      const GlobalSystem sys = assemble_global_fom_stokes(layout, pool, problem, bc, gamma);
      Vector sol;
      try
      {
         sol = direct_solve(sys.A, sys.rhs);
      }
      catch (const std::exception &e)
      {
         throw std::runtime_error("collect_snapshots_stokes: sample " + std::to_string(i) +
                                  " failed: " + e.what());
      }
      for (int m = 0; m < 4; m++)
      {
         columns[layout.ref_of(m)].push_back(sys.cell_part(sol, m));
      }
   }

   std::vector<SnapshotSet> out;
   for (size_t r = 0; r < pool.size(); r++)
   {
      SnapshotSet snap;
      snap.ref = names[r];
      if (!columns[r].empty())
      {
         snap.Q.resize(columns[r][0].size(), columns[r].size());
         for (size_t j = 0; j < columns[r].size(); j++)
         {
            snap.Q.col(j) = columns[r][j];
         }
      }
      else
      {
         snap.Q.resize(pool[r]->ndof(), 0);
      }
      out.push_back(std::move(snap));
   }
   return out;
}

} // namespace romdd
