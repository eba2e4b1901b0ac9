// SPDX-License-Identifier: MIT

#pragma once

#include "romdd/linalg.hpp"
#include "romdd/mesh.hpp"
#include "romdd/quadrature.hpp"

#include <functional>

namespace romdd
{

enum class SpaceKind
{
   ScalarP1, // linear on triangles
   ScalarQ1, // bilinear on quads
   ScalarP2, // quadratic: 6-node P2 on triangles, 8-node serendipity on quads
   VectorP2  // two interleaved ScalarP2 components
};

/// Dof layout on one component mesh. Scalar nodes are the mesh vertices
/// (in mesh order) followed, for second-order kinds, by one node per
/// mesh edge with edges sorted by their (min, max) vertex pair. Vector
/// dofs interleave per node: dof = 2*node + component.
struct FunctionSpace
{
   const Mesh2D *mesh = nullptr;
   SpaceKind kind = SpaceKind::ScalarP1;
   int components = 1;
   int scalar_node_count = 0;
   int dof_count = 0;

   std::vector<std::vector<int>> element_nodes;     // local order matches shape tables
   std::vector<std::array<double, 2>> node_coords;  // scalar node positions
   std::array<std::vector<int>, 5> side_nodes;      // scalar node ids per Side
   std::vector<std::pair<int, int>> edge_owner;     // per boundary edge: (element, local edge)
};

FunctionSpace build_space(const Mesh2D &mesh, SpaceKind kind);

int field_order(SpaceKind kind); // 1 or 2

/// (nu grad u, grad v); for VectorP2 couples components independently.
/// Symmetric positive semidefinite with constants in the kernel.
SparseMatrix assemble_stiffness(const FunctionSpace &space, double nu = 1.0);

/// (u, v); symmetric positive definite, 1^T M 1 = mesh area.
SparseMatrix assemble_mass(const FunctionSpace &space);

/// -(div u, q) with pressure rows and velocity columns (Taylor-Hood pair
/// on the same mesh).
SparseMatrix assemble_divergence(const FunctionSpace &velocity, const FunctionSpace &pressure);

Vector assemble_load(const FunctionSpace &space,
                     const std::function<double(double, double)> &f);
Vector assemble_load(const FunctionSpace &space,
                     const std::function<std::array<double, 2>(double, double)> &f);

/// Nodal interpolant of a smooth function (scalar or vector kinds).
Vector interpolate(const FunctionSpace &space,
                   const std::function<double(double, double)> &f);
Vector interpolate(const FunctionSpace &space,
                   const std::function<std::array<double, 2>(double, double)> &f);

/// L2 norm of (u_h - exact) by element quadrature.
double l2_error(const FunctionSpace &space, const Vector &u,
                const std::function<double(double, double)> &exact, int quad_order = 6);
double l2_error(const FunctionSpace &space, const Vector &u,
                const std::function<std::array<double, 2>(double, double)> &exact,
                int quad_order = 6);

/// Trace data of every element basis function at one boundary point,
/// located as the fraction u in [0,1] along directed boundary edge
/// `edge_index`. Gradients are physical.
struct TraceEval
{
   const std::vector<int> *nodes = nullptr; // element scalar node ids
   std::vector<double> values;
   std::vector<std::array<double, 2>> grads;
   std::array<double, 2> x{};
};

TraceEval eval_at_boundary_edge(const FunctionSpace &space, int edge_index, double u);

/// Length and outward unit normal of a boundary edge (domain lies left
/// of the directed edge).
double boundary_edge_length(const Mesh2D &mesh, int edge_index);
std::array<double, 2> boundary_edge_normal(const Mesh2D &mesh, int edge_index);

} // namespace romdd
