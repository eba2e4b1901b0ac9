// SPDX-License-Identifier: MIT

#include "romdd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace romdd
{

namespace
{

constexpr double kSideTol = 1e-12;

char side_letter(Side s)
{
   switch (s)
   {
      case Side::Left: return 'L';
      case Side::Right: return 'R';
      case Side::Bottom: return 'B';
      case Side::Top: return 'T';
      case Side::Obstacle: return 'O';
   }
   return '?';
}

Side side_from_letter(char c, int line)
{
   switch (c)
   {
      case 'L': return Side::Left;
      case 'R': return Side::Right;
      case 'B': return Side::Bottom;
      case 'T': return Side::Top;
      case 'O': return Side::Obstacle;
   }
   throw MeshParseError(std::string("unknown boundary attribute '") + c + "'", line);
}

std::string fmt17(double x)
{
   char buf[40];
   std::snprintf(buf, sizeof(buf), "%.17g", x);
   return buf;
}

} // namespace

const char *side_name(Side s)
{
   switch (s)
   {
      case Side::Left: return "Left";
      case Side::Right: return "Right";
      case Side::Bottom: return "Bottom";
      case Side::Top: return "Top";
      case Side::Obstacle: return "Obstacle";
   }
   return "?";
}

double element_area(const Mesh2D &mesh, int e)
{
   const Element &el = mesh.elements[e];
   double a = 0.0;
   for (int k = 0; k < el.nv; k++)
   {
      const auto &p = mesh.vertices[el.v[k]];
      const auto &q = mesh.vertices[el.v[(k + 1) % el.nv]];
      a += p[0] * q[1] - q[0] * p[1];
   }
   return 0.5 * a;
}

double mesh_area(const Mesh2D &mesh)
{
   double a = 0.0;
   for (int e = 0; e < static_cast<int>(mesh.elements.size()); e++)
   {
      a += element_area(mesh, e);
   }
   return a;
}

Mesh2D gen_quad_grid(int n)
{
   if (n < 1)
   {
      throw std::invalid_argument("gen_quad_grid: n must be >= 1");
   }
   Mesh2D m;
   const double h = 1.0 / n;
   m.vertices.reserve((n + 1) * (n + 1));
   for (int j = 0; j <= n; j++)
   {
      for (int i = 0; i <= n; i++)
      {
         m.vertices.push_back({i * h, j * h});
      }
   }
   auto vid = [n](int i, int j) { return j * (n + 1) + i; };
   m.elements.reserve(n * n);
   for (int j = 0; j < n; j++)
   {
      for (int i = 0; i < n; i++)
      {
         Element e;
         e.nv = 4;
         e.v = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
         m.elements.push_back(e);
      }
   }
   for (int i = 0; i < n; i++)
   {
      m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), Side::Bottom});
   }
   for (int j = 0; j < n; j++)
   {
      m.boundary_edges.push_back({vid(n, j), vid(n, j + 1), Side::Right});
   }
   for (int i = n; i > 0; i--)
   {
      m.boundary_edges.push_back({vid(i, n), vid(i - 1, n), Side::Top});
   }
   for (int j = n; j > 0; j--)
   {
      m.boundary_edges.push_back({vid(0, j), vid(0, j - 1), Side::Left});
   }
   return m;
}

Mesh2D gen_tri_grid(int n)
{
   Mesh2D quad = gen_quad_grid(n);
   Mesh2D m;
   m.vertices = quad.vertices;
   m.boundary_edges = quad.boundary_edges;
   m.elements.reserve(2 * n * n);
   for (const Element &q : quad.elements)
   {
      // split along the lower-left to upper-right diagonal (v0-v2)
      Element t1, t2;
      t1.nv = 3;
      t1.v = {q.v[0], q.v[1], q.v[2], 0};
      t2.nv = 3;
      t2.v = {q.v[0], q.v[2], q.v[3], 0};
      m.elements.push_back(t1);
      m.elements.push_back(t2);
   }
   return m;
}

Mesh2D gen_circle_obstacle(double radius, int n_boundary, int n_ring)
{
   if (!(radius > 0.0) || radius >= 0.5)
   {
      throw std::invalid_argument("gen_circle_obstacle: radius must satisfy 0 < r < 0.5");
   }
   if (n_boundary < 4)
   {
      throw std::invalid_argument("gen_circle_obstacle: n_boundary must be >= 4");
   }
   if (n_ring < 2)
   {
      throw std::invalid_argument("gen_circle_obstacle: n_ring must be >= 2");
   }

   const int np = 4 * n_boundary; // points around the perimeter
   const double cx = 0.5, cy = 0.5;

   // square outline, CCW from (0,0)
   std::vector<std::array<double, 2>> outer(np);
   const double h = 1.0 / n_boundary;
   for (int i = 0; i < n_boundary; i++)
   {
      outer[i] = {i * h, 0.0};
      outer[n_boundary + i] = {1.0, i * h};
      outer[2 * n_boundary + i] = {1.0 - i * h, 1.0};
      outer[3 * n_boundary + i] = {0.0, 1.0 - i * h};
   }

   Mesh2D m;
   m.vertices.resize(static_cast<size_t>(n_ring + 1) * np);
   auto vid = [np](int ring, int i) { return ring * np + (i % np); };
   for (int i = 0; i < np; i++)
   {
      const double dx = outer[i][0] - cx;
      const double dy = outer[i][1] - cy;
      const double len = std::hypot(dx, dy);
      const std::array<double, 2> inner = {cx + radius * dx / len, cy + radius * dy / len};
      for (int ring = 0; ring <= n_ring; ring++)
      {
         const double s = static_cast<double>(ring) / n_ring;
         m.vertices[vid(ring, i)] = {inner[0] + s * (outer[i][0] - inner[0]),
                                     inner[1] + s * (outer[i][1] - inner[1])};
      }
   }

   for (int ring = 0; ring < n_ring; ring++)
   {
      for (int i = 0; i < np; i++)
      {
         // CCW: radial direction first, then the tangential one
         const int a = vid(ring, i), b = vid(ring, i + 1);
         const int c = vid(ring + 1, i + 1), d = vid(ring + 1, i);
         Element t1, t2;
         t1.nv = 3;
         t1.v = {a, d, c, 0};
         t2.nv = 3;
         t2.v = {a, c, b, 0};
         m.elements.push_back(t1);
         m.elements.push_back(t2);
      }
   }

   // hole boundary: traversed opposite to the outer CCW direction so the
   // domain stays on the left of each directed edge
   for (int i = 0; i < np; i++)
   {
      m.boundary_edges.push_back({vid(0, i + 1), vid(0, i), Side::Obstacle});
   }
   for (int i = 0; i < np; i++)
   {
      Side attr;
      if (i < n_boundary)
      {
         attr = Side::Bottom;
      }
      else if (i < 2 * n_boundary)
      {
         attr = Side::Right;
      }
      else if (i < 3 * n_boundary)
      {
         attr = Side::Top;
      }
      else
      {
         attr = Side::Left;
      }
      m.boundary_edges.push_back({vid(n_ring, i), vid(n_ring, i + 1), attr});
   }
   return m;
}

std::string write_mesh(const Mesh2D &mesh)
{
   std::string out;
   out += "MESH1 " + std::to_string(mesh.vertices.size()) + " " +
          std::to_string(mesh.elements.size()) + " " +
          std::to_string(mesh.boundary_edges.size()) + "\n";
   for (const auto &v : mesh.vertices)
   {
      out += "v " + fmt17(v[0]) + " " + fmt17(v[1]) + "\n";
   }
   for (const auto &e : mesh.elements)
   {
      out += "e " + std::to_string(e.nv);
      for (int k = 0; k < e.nv; k++)
      {
         out += " " + std::to_string(e.v[k]);
      }
      out += "\n";
   }
   for (const auto &b : mesh.boundary_edges)
   {
      out += "b " + std::to_string(b.a) + " " + std::to_string(b.b) + " ";
      out += side_letter(b.attr);
      out += "\n";
   }
   return out;
}

Mesh2D parse_mesh(std::string_view text)
{
   std::istringstream in{std::string(text)};
   std::string line;
   int lineno = 0;

   auto next_line = [&]() -> bool
   {
      while (std::getline(in, line))
      {
         lineno++;
         if (!line.empty() && line.back() == '\r')
         {
            line.pop_back();
         }
         if (!line.empty())
         {
            return true;
         }
      }
      return false;
   };

   if (!next_line())
   {
      throw MeshParseError("empty input", 1);
   }
   std::istringstream hdr(line);
   std::string magic;
   long nv = -1, ne = -1, nb = -1;
   hdr >> magic >> nv >> ne >> nb;
   if (magic != "MESH1" || nv < 0 || ne < 0 || nb < 0 || hdr.fail())
   {
      throw MeshParseError("malformed MESH1 header", lineno);
   }

   Mesh2D m;
   m.vertices.reserve(nv);
   for (long i = 0; i < nv; i++)
   {
      if (!next_line())
      {
         throw MeshParseError("unexpected end of file in vertex list", lineno + 1);
      }
      std::istringstream ls(line);
      std::string tag;
      double x = 0, y = 0;
      ls >> tag >> x >> y;
      if (tag != "v" || ls.fail())
      {
         throw MeshParseError("malformed vertex record", lineno);
      }
      m.vertices.push_back({x, y});
   }
   for (long i = 0; i < ne; i++)
   {
      if (!next_line())
      {
         throw MeshParseError("unexpected end of file in element list", lineno + 1);
      }
      std::istringstream ls(line);
      std::string tag;
      int k = 0;
      ls >> tag >> k;
      if (tag != "e" || ls.fail() || (k != 3 && k != 4))
      {
         throw MeshParseError("malformed element record", lineno);
      }
      Element e;
      e.nv = k;
      for (int j = 0; j < k; j++)
      {
         ls >> e.v[j];
         if (ls.fail())
         {
            throw MeshParseError("malformed element record", lineno);
         }
         if (e.v[j] < 0 || e.v[j] >= static_cast<int>(m.vertices.size()))
         {
            throw MeshParseError("vertex index out of range", lineno);
         }
      }
      m.elements.push_back(e);
      if (element_area(m, static_cast<int>(m.elements.size()) - 1) <= 0.0)
      {
         throw MeshParseError("element is not counter-clockwise", lineno);
      }
   }
   for (long i = 0; i < nb; i++)
   {
      if (!next_line())
      {
         throw MeshParseError("unexpected end of file in boundary list", lineno + 1);
      }
      std::istringstream ls(line);
      std::string tag, attr;
      int a = 0, b = 0;
      ls >> tag >> a >> b >> attr;
      if (tag != "b" || ls.fail() || attr.size() != 1)
      {
         throw MeshParseError("malformed boundary record", lineno);
      }
      if (a < 0 || a >= static_cast<int>(m.vertices.size()) ||
          b < 0 || b >= static_cast<int>(m.vertices.size()))
      {
         throw MeshParseError("vertex index out of range", lineno);
      }
      m.boundary_edges.push_back({a, b, side_from_letter(attr[0], lineno)});
   }

   // dangling-edge detection: each boundary edge must appear as a
   // directed edge of exactly one element
   std::map<std::pair<int, int>, int> owners;
   for (const Element &e : m.elements)
   {
      for (int k = 0; k < e.nv; k++)
      {
         owners[{e.v[k], e.v[(k + 1) % e.nv]}]++;
      }
   }
   for (size_t i = 0; i < m.boundary_edges.size(); i++)
   {
      const auto &be = m.boundary_edges[i];
      auto it = owners.find({be.a, be.b});
      if (it == owners.end() || it->second != 1)
      {
         throw MeshParseError("dangling boundary edge",
                              static_cast<int>(1 + nv + ne + i + 1));
      }
   }
   return m;
}

void validate_mesh(const Mesh2D &mesh)
{
   for (int e = 0; e < static_cast<int>(mesh.elements.size()); e++)
   {
      if (element_area(mesh, e) <= 0.0)
      {
         throw std::runtime_error("validate_mesh: element " + std::to_string(e) +
                                  " has non-positive area");
      }
   }
   std::map<std::pair<int, int>, int> owners;
   for (const Element &e : mesh.elements)
   {
      for (int k = 0; k < e.nv; k++)
      {
         owners[{e.v[k], e.v[(k + 1) % e.nv]}]++;
      }
   }
   for (size_t i = 0; i < mesh.boundary_edges.size(); i++)
   {
      const auto &be = mesh.boundary_edges[i];
      auto it = owners.find({be.a, be.b});
      if (it == owners.end() || it->second != 1)
      {
         throw std::runtime_error("validate_mesh: boundary edge " + std::to_string(i) +
                                  " is not owned by exactly one element");
      }
      if (be.attr == Side::Obstacle)
      {
         continue;
      }
      const auto &pa = mesh.vertices[be.a];
      const auto &pb = mesh.vertices[be.b];
      bool on_outline = false;
      for (int c = 0; c < 2; c++)
      {
         for (double val : {0.0, 1.0})
         {
            if (std::abs(pa[c] - val) <= kSideTol && std::abs(pb[c] - val) <= kSideTol)
            {
               on_outline = true;
            }
         }
      }
      if (!on_outline)
      {
         throw std::runtime_error("validate_mesh: boundary edge " + std::to_string(i) +
                                  " tagged " + side_name(be.attr) +
                                  " does not lie on the unit-square outline");
      }
   }
}

SideTrace side_trace(const Mesh2D &mesh, Side side)
{
   SideTrace trace;
   trace.side = side;
   for (int i = 0; i < static_cast<int>(mesh.boundary_edges.size()); i++)
   {
      const auto &be = mesh.boundary_edges[i];
      if (be.attr != side)
      {
         continue;
      }
      const auto &pa = mesh.vertices[be.a];
      const auto &pb = mesh.vertices[be.b];
      const int coord = (side == Side::Left || side == Side::Right) ? 1 : 0;
      double t0 = pa[coord], t1 = pb[coord];
      if (t0 > t1)
      {
         std::swap(t0, t1);
      }
      trace.segments.push_back({t0, t1, i});
   }
   if (trace.segments.empty())
   {
      throw std::runtime_error(std::string("side_trace: no boundary edges on side ") +
                               side_name(side));
   }
   std::sort(trace.segments.begin(), trace.segments.end(),
             [](const TraceSegment &a, const TraceSegment &b) { return a.t0 < b.t0; });
   return trace;
}

} // namespace romdd
