// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace romdd
{

enum class Side
{
   Left = 0,
   Right = 1,
   Bottom = 2,
   Top = 3,
   Obstacle = 4
};

const char *side_name(Side s);

struct Element
{
   std::array<int, 4> v{};
   int nv = 0; // 3 = triangle, 4 = quad, counter-clockwise
};

struct BoundaryEdge
{
   // Directed as it appears in the owning element, so the domain lies to
   // the left of a->b and the outward normal is rot(-90) of the tangent.
   int a = 0;
   int b = 0;
   Side attr = Side::Left;
};

/// One component's geometry on the unit square. Immutable after
/// construction; safe to share across threads.
struct Mesh2D
{
   std::vector<std::array<double, 2>> vertices;
   std::vector<Element> elements;
   std::vector<BoundaryEdge> boundary_edges;
};

class MeshParseError : public std::runtime_error
{
public:
   MeshParseError(const std::string &what, int line)
      : std::runtime_error(what + ", line " + std::to_string(line)), line_number(line) {}
   int line_number;
};

/// n x n uniform quad grid of the unit square.
Mesh2D gen_quad_grid(int n);

/// gen_quad_grid(n) with every cell split along the lower-left to
/// upper-right diagonal. Boundary edge set identical to the quad grid.
Mesh2D gen_tri_grid(int n);

/// Triangular mesh of the unit square minus a disk of radius r centered
/// at (0.5, 0.5). Rings of elements interpolate between the inscribed
/// circle polygon (4*n_boundary segments, attribute Obstacle) and the
/// square outline (n_boundary segments per side).
Mesh2D gen_circle_obstacle(double radius, int n_boundary, int n_ring);

/// MESH1 text format round trip. write is deterministic (17 significant
/// digits); parse(write(m)) == m.
std::string write_mesh(const Mesh2D &mesh);
Mesh2D parse_mesh(std::string_view text);

/// Signed area of element e (positive for CCW).
double element_area(const Mesh2D &mesh, int e);

/// Sum of element areas.
double mesh_area(const Mesh2D &mesh);

/// Checks the Mesh2D invariants (positive areas, boundary edges owned by
/// exactly one element, non-obstacle edges on the unit-square outline).
/// Throws std::runtime_error naming the first violation.
void validate_mesh(const Mesh2D &mesh);

struct TraceSegment
{
   double t0 = 0.0;
   double t1 = 0.0;
   int edge = -1; // index into mesh.boundary_edges
};

/// Boundary edges of one side as sorted intervals of the side parameter
/// t in [0,1]. Bottom/Top use t = x1, Left/Right use t = x2, so opposing
/// sides of adjacent components share the parameterization.
struct SideTrace
{
   Side side = Side::Left;
   std::vector<TraceSegment> segments;
};

SideTrace side_trace(const Mesh2D &mesh, Side side);

} // namespace romdd
