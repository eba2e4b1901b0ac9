// SPDX-License-Identifier: MIT

#pragma once

#include "romdd/dgdd.hpp"

#include <map>
#include <tuple>

namespace romdd
{

/// Columns are full-order dof vectors on one reference domain (coupled
/// (u,p) concatenation for Stokes).
struct SnapshotSet
{
   std::string ref;
   DenseMatrix Q;
};

struct PodBasis
{
   std::string ref;
   DenseMatrix Phi; // N x R, orthonormal columns
   Vector sigma;    // full computed spectrum, descending
   int sample_count = 0;
   uint64_t seed = 0;

   int rank() const { return static_cast<int>(Phi.cols()); }
};

/// Truncation at a fixed rank.
PodBasis pod_train(const SnapshotSet &snap, int rank);

/// Truncation at an energy fraction eta in (0, 1]: the smallest R with
/// sum_{i<=R} sigma_i >= eta * sum_i sigma_i.
PodBasis pod_train_energy(const SnapshotSet &snap, double eta);

/// Precomputed reduced operators keyed by reference domain, reference
/// pair + interface axis, and reference + boundary side. Interface keys
/// use the left (or bottom) cell's reference first.
struct ReducedBlockLibrary
{
   Physics physics = Physics::Poisson;
   std::vector<std::string> ref_names;
   std::vector<PodBasis> bases;
   std::vector<DenseMatrix> domain_blocks;
   std::map<std::tuple<int, int, IfaceAxis>, std::array<DenseMatrix, 4>> interface_blocks;
   std::vector<std::array<DenseMatrix, 4>> boundary_blocks; // [ref][side]
   std::vector<Vector> mean_weights;                        // Phi^T w per ref (Stokes)
   double gamma = 4.0;
   double nu = 1.1;

   int ref_id(const std::string &name) const;
   int rank_of(int ref) const { return bases[ref].rank(); }
};

ReducedBlockLibrary project_poisson_operators(const std::vector<const PoissonComponent *> &refs,
                                              std::vector<PodBasis> bases, double gamma);

ReducedBlockLibrary project_stokes_operators(const std::vector<const StokesComponent *> &refs,
                                             std::vector<PodBasis> bases,
                                             double gamma, double nu);

/// Library with every basis and block truncated to the leading `rank`
/// modes (per reference, capped at the stored rank). Leading-column
/// truncation makes this a pure submatrix slice.
ReducedBlockLibrary truncate_library(const ReducedBlockLibrary &lib, int rank);

struct ReducedSystem
{
   std::vector<int> offsets; // per-cell reduced offsets
   SparseMatrix A;           // block-sparse reduced operator
   Vector rhs;
   bool mean_zero = false;

   int dim() const { return offsets.back(); }
};

/// Reduced global assembly. Touches only reference-level operators plus
/// per-subdomain rhs vectors; never the FOM global matrix.
ReducedSystem assemble_reduced_poisson(const Layout &layout, const ReducedBlockLibrary &lib,
                                       const std::vector<const PoissonComponent *> &refs,
                                       const PoissonProblem &problem);

ReducedSystem assemble_reduced_stokes(const Layout &layout, const ReducedBlockLibrary &lib,
                                      const std::vector<const StokesComponent *> &refs,
                                      const StokesProblem &problem, const SideBc &bc);

/// Direct sparse solve of the reduced system; singular systems flag a
/// basis deficiency.
Vector solve_reduced(const ReducedSystem &sys);

/// Per-subdomain lift q_m = Phi_{r(m)} qhat_m.
std::vector<Vector> lift_solution(const Layout &layout, const ReducedBlockLibrary &lib,
                                  const ReducedSystem &sys, const Vector &qhat);

/// Splits a FOM solution vector into per-cell parts.
std::vector<Vector> split_cells(const GlobalSystem &sys, const Vector &x);

/// epsilon = sqrt(sum_m |q_m - rom_m|^2_M / sum_m |q_m|^2_M) with
/// subdomain mass-matrix norms.
double relative_error(const std::vector<Vector> &fom_parts,
                      const std::vector<Vector> &rom_parts,
                      const std::vector<const SparseMatrix *> &cell_masses);

/// Poisson snapshots: solves the sinusoidal component problem on the
/// single reference domain, one direct solve per sample; sample i draws
/// from the (seed, i) substream.
SnapshotSet collect_snapshots_poisson(const PoissonComponent &component, int count,
                                      uint64_t seed, double gamma = 4.0);

/// Stokes snapshots: 2x2 random-component domains under the
/// flow-past-array problem with upwind Dirichlet sides; every subdomain
/// solution is appended to its reference's set.
std::vector<SnapshotSet> collect_snapshots_stokes(const std::vector<const StokesComponent *> &pool,
                                                  int count, uint64_t seed,
                                                  double nu = 1.1, double gamma = -1.0);

} // namespace romdd
