// SPDX-License-Identifier: MIT

#pragma once

#include "romdd/fem.hpp"
#include "romdd/physics.hpp"

#include <memory>
#include <string>

namespace romdd
{

enum class Physics
{
   Poisson,
   Stokes
};

// ---- layouts ---------------------------------------------------------

/// Grid of component instances. Cell (ix, iy) sits at [ix, ix+1] x
/// [iy, iy+1] and has index ix + nx*iy; cell_ref names a reference
/// domain per cell.
struct Layout
{
   int nx = 0, ny = 0;
   std::vector<int> cell_ref;
   std::vector<std::string> ref_names;
   SideBc bc;

   int cells() const { return nx * ny; }
   int ref_of(int cell) const { return cell_ref.at(cell); }
   std::array<double, 2> cell_offset(int cell) const
   {
      return {static_cast<double>(cell % nx), static_cast<double>(cell / nx)};
   }
};

/// Uniform layout: every cell the same reference.
Layout uniform_layout(int nx, int ny, const std::string &ref_name, const SideBc &bc = {});

/// Random layout drawn from a reference pool.
Layout random_layout(int nx, int ny, const std::vector<std::string> &pool, Rng &rng,
                     const SideBc &bc = {});

/// LAY1 text format: header, ny rows of reference names (bottom row
/// first), optional `bc <side> <dirichlet|neumann>` lines.
std::string write_layout(const Layout &layout);
Layout parse_layout(std::string_view text);

/// Axis of the shared interface segment: Vertical between left/right
/// neighbors, Horizontal between bottom/top neighbors.
enum class IfaceAxis
{
   Horizontal,
   Vertical
};

struct InterfacePair
{
   int m = 0, n = 0; // m < n; m is the left (or bottom) cell
   IfaceAxis axis = IfaceAxis::Vertical;
};

std::vector<InterfacePair> find_interfaces(const Layout &layout);

// ---- mortar quadrature on non-matching traces ------------------------

struct MortarSegment
{
   double t0 = 0.0, t1 = 0.0;
   int edge_m = -1, edge_n = -1; // owning boundary edges in each mesh
   double dx = 0.0;              // penalty length: min owning edge length
   std::vector<double> gauss_t;  // parameter values on the interface
   std::vector<double> gauss_w;  // weights, sum = t1 - t0
};

struct InterfaceQuad
{
   Side side_m = Side::Right, side_n = Side::Left;
   std::vector<MortarSegment> segments;
};

/// Common refinement of two side traces with Gauss points per
/// sub-segment. 2(s+1)+1 points are exact for every trace product
/// appearing in the forms here.
InterfaceQuad build_mortar(const SideTrace &trace_m, const SideTrace &trace_n,
                           int gauss_points = 5);

// ---- interface / boundary weak forms ----------------------------------

/// Interior-penalty blocks for one interface; normal taken from side m.
/// The composite [[mm, mn], [nm, nn]] matrix is symmetric.
struct InterfaceBlocks
{
   SparseMatrix mm, mn, nm, nn;
};

InterfaceBlocks assemble_interface_poisson(const FunctionSpace &space_m,
                                           const FunctionSpace &space_n,
                                           const InterfaceQuad &iface, double gamma);

/// Nitsche Dirichlet matrix on one boundary attribute.
SparseMatrix assemble_boundary_matrix_poisson(const FunctionSpace &space, Side side,
                                              double gamma);

/// Matching rhs: <gamma/dx v, g> - <n.grad v, g>. The flux term carries
/// the adjoint-consistent minus sign; see the manufactured-solution and
/// patch tests.
Vector assemble_boundary_rhs_poisson(const FunctionSpace &space, Side side, double gamma,
                                     const std::function<double(double, double)> &g);

Vector assemble_neumann_rhs_poisson(const FunctionSpace &space, Side side,
                                    const std::function<double(double, double)> &g);

/// Taylor-Hood pair on one component with pre-assembled operators.
/// Coupled dof layout per component: velocity dofs first, pressure after.
struct StokesSpaces
{
   const FunctionSpace *velocity = nullptr;
   const FunctionSpace *pressure = nullptr;
   int ndof() const { return velocity->dof_count + pressure->dof_count; }
   int p_offset() const { return velocity->dof_count; }
};

/// Interface blocks in the coupled layout: velocity jump/average terms
/// plus the <[[n.u]], {p}> coupling and its transpose.
InterfaceBlocks assemble_interface_stokes(const StokesSpaces &m, const StokesSpaces &n,
                                          const InterfaceQuad &iface, double gamma, double nu);

SparseMatrix assemble_boundary_matrix_stokes(const StokesSpaces &s, Side side,
                                             double gamma, double nu);

Vector assemble_boundary_rhs_stokes(const StokesSpaces &s, Side side, double gamma, double nu,
                                    const std::function<Vec2(double, double)> &g);

Vector assemble_neumann_rhs_stokes(const StokesSpaces &s, Side side,
                                   const std::function<Vec2(double, double)> &g);

// ---- components --------------------------------------------------------

struct PoissonComponent
{
   std::string name;
   std::shared_ptr<const Mesh2D> mesh;
   FunctionSpace space;
   SparseMatrix domain_op; // stiffness (+ homogeneous obstacle terms if present)
   SparseMatrix mass;
   std::array<SideTrace, 4> traces;
   double gamma = 4.0;
};

PoissonComponent make_poisson_component(const std::string &name, Mesh2D mesh,
                                        double gamma = 4.0);

struct StokesComponent
{
   std::string name;
   std::shared_ptr<const Mesh2D> mesh;
   FunctionSpace velocity;
   FunctionSpace pressure;
   SparseMatrix domain_op; // [[a, b^T], [b, 0]] + no-slip obstacle terms
   SparseMatrix vel_mass;
   SparseMatrix p_mass;
   Vector mean_weights; // coupled size; integral of each pressure basis
   std::array<SideTrace, 4> traces;
   double nu = 1.1;
   double gamma = 4.4;

   StokesSpaces spaces() const { return {&velocity, &pressure}; }
   int ndof() const { return velocity.dof_count + pressure.dof_count; }
};

StokesComponent make_stokes_component(const std::string &name, Mesh2D mesh,
                                      double nu = 1.1, double gamma = -1.0);

/// Coupled (u,p) mass for the discrete L2 norm of a component state.
SparseMatrix coupled_mass(const StokesComponent &c);

// ---- global full-order system ------------------------------------------

struct GlobalSystem
{
   Physics physics = Physics::Poisson;
   std::vector<int> offsets; // per-cell dof offsets, size cells()+1
   SparseMatrix A;
   Vector rhs;
   bool mean_zero = false;
   std::vector<int> vel_dofs, pres_dofs; // global index sets (Stokes)

   int unconstrained_dim() const { return offsets.back(); }
   Vector cell_part(const Vector &x, int cell) const
   {
      return x.segment(offsets[cell], offsets[cell + 1] - offsets[cell]);
   }
};

/// Counts assemble_global_fom_* invocations; the ROM path must leave it
/// untouched.
long fom_global_assembly_count();

GlobalSystem assemble_global_fom_poisson(const Layout &layout,
                                         const std::vector<const PoissonComponent *> &refs,
                                         const PoissonProblem &problem, double gamma = 4.0);

GlobalSystem assemble_global_fom_stokes(const Layout &layout,
                                        const std::vector<const StokesComponent *> &refs,
                                        const StokesProblem &problem,
                                        const SideBc &bc, double gamma = -1.0);

/// Block-diagonal MINRES preconditioner: symmetric Gauss-Seidel on the
/// velocity block and on the pressure mass, identity on any constraint
/// row.
PrecondFn make_stokes_block_precond(const GlobalSystem &sys,
                                    const std::vector<const StokesComponent *> &refs,
                                    const Layout &layout);

} // namespace romdd
