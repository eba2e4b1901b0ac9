// SPDX-License-Identifier: MIT

#include "romdd/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace romdd
{

namespace
{

// ---- reference shape functions -------------------------------------
// Triangles use the unit triangle (0,0)-(1,0)-(0,1); quads the unit
// square [0,1]^2. Local node order: corners CCW, then edge midpoints
// (m01, m12, m20) / (m01, m12, m23, m30).

void shapes_tri_p1(double xi, double eta, double *N, double (*dN)[2])
{
   N[0] = 1.0 - xi - eta;
   N[1] = xi;
   N[2] = eta;
   dN[0][0] = -1.0; dN[0][1] = -1.0;
   dN[1][0] = 1.0;  dN[1][1] = 0.0;
   dN[2][0] = 0.0;  dN[2][1] = 1.0;
}

void shapes_tri_p2(double xi, double eta, double *N, double (*dN)[2])
{
   const double l[3] = {1.0 - xi - eta, xi, eta};
   const double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
   for (int i = 0; i < 3; i++)
   {
      N[i] = l[i] * (2.0 * l[i] - 1.0);
      dN[i][0] = (4.0 * l[i] - 1.0) * dl[i][0];
      dN[i][1] = (4.0 * l[i] - 1.0) * dl[i][1];
   }
   const int pair[3][2] = {{0, 1}, {1, 2}, {2, 0}};
   for (int k = 0; k < 3; k++)
   {
      const int i = pair[k][0], j = pair[k][1];
      N[3 + k] = 4.0 * l[i] * l[j];
      dN[3 + k][0] = 4.0 * (l[j] * dl[i][0] + l[i] * dl[j][0]);
      dN[3 + k][1] = 4.0 * (l[j] * dl[i][1] + l[i] * dl[j][1]);
   }
}

void shapes_quad_q1(double xi, double eta, double *N, double (*dN)[2])
{
   N[0] = (1.0 - xi) * (1.0 - eta);
   N[1] = xi * (1.0 - eta);
   N[2] = xi * eta;
   N[3] = (1.0 - xi) * eta;
   dN[0][0] = -(1.0 - eta); dN[0][1] = -(1.0 - xi);
   dN[1][0] = 1.0 - eta;    dN[1][1] = -xi;
   dN[2][0] = eta;          dN[2][1] = xi;
   dN[3][0] = -eta;         dN[3][1] = 1.0 - xi;
}

// 8-node serendipity; quadratic on edges, no interior node
void shapes_quad_s2(double xi, double eta, double *N, double (*dN)[2])
{
   const double a = 2.0 * xi - 1.0;
   const double b = 2.0 * eta - 1.0;
   const double ca[4] = {-1.0, 1.0, 1.0, -1.0};
   const double cb[4] = {-1.0, -1.0, 1.0, 1.0};
   for (int i = 0; i < 4; i++)
   {
      N[i] = 0.25 * (1.0 + a * ca[i]) * (1.0 + b * cb[i]) * (a * ca[i] + b * cb[i] - 1.0);
      const double dNda = 0.25 * ca[i] * (1.0 + b * cb[i]) * (2.0 * a * ca[i] + b * cb[i]);
      const double dNdb = 0.25 * cb[i] * (1.0 + a * ca[i]) * (2.0 * b * cb[i] + a * ca[i]);
      dN[i][0] = 2.0 * dNda;
      dN[i][1] = 2.0 * dNdb;
   }
   // m01 (b=-1), m12 (a=+1), m23 (b=+1), m30 (a=-1)
   const double ma[4] = {0.0, 1.0, 0.0, -1.0};
   const double mb[4] = {-1.0, 0.0, 1.0, 0.0};
   for (int k = 0; k < 4; k++)
   {
      double dNda, dNdb;
      if (ma[k] == 0.0)
      {
         N[4 + k] = 0.5 * (1.0 - a * a) * (1.0 + b * mb[k]);
         dNda = -a * (1.0 + b * mb[k]);
         dNdb = 0.5 * (1.0 - a * a) * mb[k];
      }
      else
      {
         N[4 + k] = 0.5 * (1.0 + a * ma[k]) * (1.0 - b * b);
         dNda = 0.5 * ma[k] * (1.0 - b * b);
         dNdb = -b * (1.0 + a * ma[k]);
      }
      dN[4 + k][0] = 2.0 * dNda;
      dN[4 + k][1] = 2.0 * dNdb;
   }
}

constexpr int kMaxShapes = 8;

int shapes_per_element(ElementShape shape, int order)
{
   if (shape == ElementShape::Triangle)
   {
      return order == 1 ? 3 : 6;
   }
   return order == 1 ? 4 : 8;
}

void eval_shapes(ElementShape shape, int order, double xi, double eta,
                 double *N, double (*dN)[2])
{
   if (shape == ElementShape::Triangle)
   {
      order == 1 ? shapes_tri_p1(xi, eta, N, dN) : shapes_tri_p2(xi, eta, N, dN);
   }
   else
   {
      order == 1 ? shapes_quad_q1(xi, eta, N, dN) : shapes_quad_s2(xi, eta, N, dN);
   }
}

struct GeomEval
{
   std::array<double, 2> x{};
   double detJ = 0.0;
   double Jinv[2][2] = {{0, 0}, {0, 0}};
};

// geometry is always first order on the element corners (straight sides)
GeomEval eval_geometry(const Mesh2D &mesh, const Element &el, double xi, double eta)
{
   double N[4];
   double dN[4][2];
   const ElementShape shape = el.nv == 3 ? ElementShape::Triangle : ElementShape::Quad;
   eval_shapes(shape, 1, xi, eta, N, dN);

   GeomEval g;
   double J[2][2] = {{0, 0}, {0, 0}};
   for (int i = 0; i < el.nv; i++)
   {
      const auto &v = mesh.vertices[el.v[i]];
      g.x[0] += N[i] * v[0];
      g.x[1] += N[i] * v[1];
      for (int c = 0; c < 2; c++)
      {
         J[0][c] += v[0] * dN[i][c];
         J[1][c] += v[1] * dN[i][c];
      }
   }
   g.detJ = J[0][0] * J[1][1] - J[0][1] * J[1][0];
   const double inv = 1.0 / g.detJ;
   g.Jinv[0][0] = J[1][1] * inv;
   g.Jinv[0][1] = -J[0][1] * inv;
   g.Jinv[1][0] = -J[1][0] * inv;
   g.Jinv[1][1] = J[0][0] * inv;
   return g;
}

ElementShape mesh_shape(const Mesh2D &mesh)
{
   if (mesh.elements.empty())
   {
      throw std::invalid_argument("build_space: mesh has no elements");
   }
   const int nv = mesh.elements[0].nv;
   for (const Element &e : mesh.elements)
   {
      if (e.nv != nv)
      {
         throw std::invalid_argument("build_space: mixed element shapes are not supported");
      }
   }
   return nv == 3 ? ElementShape::Triangle : ElementShape::Quad;
}

int volume_quad_order(int order) { return 2 * order + 1; }

} // namespace

int field_order(SpaceKind kind)
{
   return (kind == SpaceKind::ScalarP1 || kind == SpaceKind::ScalarQ1) ? 1 : 2;
}

FunctionSpace build_space(const Mesh2D &mesh, SpaceKind kind)
{
   const ElementShape shape = mesh_shape(mesh);
   if (kind == SpaceKind::ScalarP1 && shape != ElementShape::Triangle)
   {
      throw std::invalid_argument("build_space: ScalarP1 requires a triangle mesh");
   }
   if (kind == SpaceKind::ScalarQ1 && shape != ElementShape::Quad)
   {
      throw std::invalid_argument("build_space: ScalarQ1 requires a quad mesh");
   }

   FunctionSpace fs;
   fs.mesh = &mesh;
   fs.kind = kind;
   fs.components = (kind == SpaceKind::VectorP2) ? 2 : 1;
   const int order = field_order(kind);
   const int nvert = static_cast<int>(mesh.vertices.size());

   fs.node_coords = mesh.vertices;
   std::map<std::pair<int, int>, int> edge_ids; // sorted by vertex pair
   if (order == 2)
   {
      for (const Element &e : mesh.elements)
      {
         for (int k = 0; k < e.nv; k++)
         {
            const int a = e.v[k], b = e.v[(k + 1) % e.nv];
            edge_ids[{std::min(a, b), std::max(a, b)}] = 0;
         }
      }
      int next = nvert;
      for (auto &kv : edge_ids)
      {
         kv.second = next++;
         fs.node_coords.push_back({0.5 * (mesh.vertices[kv.first.first][0] +
                                          mesh.vertices[kv.first.second][0]),
                                   0.5 * (mesh.vertices[kv.first.first][1] +
                                          mesh.vertices[kv.first.second][1])});
      }
   }
   fs.scalar_node_count = static_cast<int>(fs.node_coords.size());
   fs.dof_count = fs.components * fs.scalar_node_count;

   fs.element_nodes.resize(mesh.elements.size());
   for (size_t e = 0; e < mesh.elements.size(); e++)
   {
      const Element &el = mesh.elements[e];
      auto &nodes = fs.element_nodes[e];
      nodes.assign(el.v.begin(), el.v.begin() + el.nv);
      if (order == 2)
      {
         for (int k = 0; k < el.nv; k++)
         {
            const int a = el.v[k], b = el.v[(k + 1) % el.nv];
            nodes.push_back(edge_ids.at({std::min(a, b), std::max(a, b)}));
         }
      }
   }

   // side node sets and boundary edge owners
   std::map<std::pair<int, int>, std::pair<int, int>> directed; // (a,b) -> (elem, local edge)
   for (size_t e = 0; e < mesh.elements.size(); e++)
   {
      const Element &el = mesh.elements[e];
      for (int k = 0; k < el.nv; k++)
      {
         directed[{el.v[k], el.v[(k + 1) % el.nv]}] = {static_cast<int>(e), k};
      }
   }
   fs.edge_owner.resize(mesh.boundary_edges.size());
   for (size_t i = 0; i < mesh.boundary_edges.size(); i++)
   {
      const auto &be = mesh.boundary_edges[i];
      auto it = directed.find({be.a, be.b});
      if (it == directed.end())
      {
         throw std::invalid_argument("build_space: boundary edge " + std::to_string(i) +
                                     " is not an element edge");
      }
      fs.edge_owner[i] = it->second;
      auto &set = fs.side_nodes[static_cast<int>(be.attr)];
      set.push_back(be.a);
      set.push_back(be.b);
      if (order == 2)
      {
         set.push_back(edge_ids.at({std::min(be.a, be.b), std::max(be.a, be.b)}));
      }
   }
   for (auto &set : fs.side_nodes)
   {
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
   }
   return fs;
}

namespace
{

ElementShape space_shape(const FunctionSpace &space)
{
   return space.mesh->elements[0].nv == 3 ? ElementShape::Triangle : ElementShape::Quad;
}

template <typename Kernel>
void for_each_qpoint(const FunctionSpace &space, int quad_order, Kernel &&kernel)
{
   const ElementShape shape = space_shape(space);
   const int order = field_order(space.kind);
   const int nsh = shapes_per_element(shape, order);
   const QuadratureRule rule = quad_rule(shape, quad_order);

   double N[kMaxShapes];
   double dN[kMaxShapes][2];
   double grad[kMaxShapes][2];
   for (size_t e = 0; e < space.mesh->elements.size(); e++)
   {
      const Element &el = space.mesh->elements[e];
      for (size_t q = 0; q < rule.points.size(); q++)
      {
         const double xi = rule.points[q][0], eta = rule.points[q][1];
         eval_shapes(shape, order, xi, eta, N, dN);
         const GeomEval g = eval_geometry(*space.mesh, el, xi, eta);
         for (int i = 0; i < nsh; i++)
         {
            grad[i][0] = g.Jinv[0][0] * dN[i][0] + g.Jinv[1][0] * dN[i][1];
            grad[i][1] = g.Jinv[0][1] * dN[i][0] + g.Jinv[1][1] * dN[i][1];
         }
         kernel(static_cast<int>(e), rule.weights[q] * g.detJ, g.x, nsh, N, grad);
      }
   }
}

} // namespace

SparseMatrix assemble_stiffness(const FunctionSpace &space, double nu)
{
   if (!(nu > 0.0))
   {
      throw std::invalid_argument("assemble_stiffness: nu must be positive");
   }
   std::vector<Triplet> trip;
   for_each_qpoint(space, volume_quad_order(field_order(space.kind)),
                   [&](int e, double w, const std::array<double, 2> &, int nsh,
                       const double *, const double (*grad)[2])
   {
      const auto &nodes = space.element_nodes[e];
      for (int i = 0; i < nsh; i++)
      {
         for (int j = 0; j < nsh; j++)
         {
            const double kij = nu * w * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
            for (int c = 0; c < space.components; c++)
            {
               trip.emplace_back(space.components * nodes[i] + c,
                                 space.components * nodes[j] + c, kij);
            }
         }
      }
   });
   SparseMatrix K(space.dof_count, space.dof_count);
   K.setFromTriplets(trip.begin(), trip.end());
   K.makeCompressed();
   return K;
}

SparseMatrix assemble_mass(const FunctionSpace &space)
{
   std::vector<Triplet> trip;
   for_each_qpoint(space, volume_quad_order(field_order(space.kind)),
                   [&](int e, double w, const std::array<double, 2> &, int nsh,
                       const double *N, const double (*)[2])
   {
      const auto &nodes = space.element_nodes[e];
      for (int i = 0; i < nsh; i++)
      {
         for (int j = 0; j < nsh; j++)
         {
            const double mij = w * N[i] * N[j];
            for (int c = 0; c < space.components; c++)
            {
               trip.emplace_back(space.components * nodes[i] + c,
                                 space.components * nodes[j] + c, mij);
            }
         }
      }
   });
   SparseMatrix M(space.dof_count, space.dof_count);
   M.setFromTriplets(trip.begin(), trip.end());
   M.makeCompressed();
   return M;
}

SparseMatrix assemble_divergence(const FunctionSpace &velocity, const FunctionSpace &pressure)
{
   if (velocity.mesh != pressure.mesh)
   {
      throw std::invalid_argument("assemble_divergence: spaces live on different meshes");
   }
   if (velocity.components != 2 || pressure.components != 1)
   {
      throw std::invalid_argument("assemble_divergence: expected vector velocity and scalar pressure");
   }
   const ElementShape shape = space_shape(velocity);
   const int porder = field_order(pressure.kind);
   const int npsh = shapes_per_element(shape, porder);
   double Np[kMaxShapes];
   double dNp[kMaxShapes][2];

   std::vector<Triplet> trip;
   // explicit loop so both shape sets share the same quadrature points,
   // driven by the higher-order velocity space
   const int vorder = field_order(velocity.kind);
   const int nvsh = shapes_per_element(shape, vorder);
   const QuadratureRule rule = quad_rule(shape, volume_quad_order(vorder));
   double Nv[kMaxShapes];
   double dNv[kMaxShapes][2];
   double gradv[kMaxShapes][2];
   for (size_t e = 0; e < velocity.mesh->elements.size(); e++)
   {
      const Element &el = velocity.mesh->elements[e];
      const auto &vnodes = velocity.element_nodes[e];
      const auto &pnodes = pressure.element_nodes[e];
      for (size_t q = 0; q < rule.points.size(); q++)
      {
         const double xi = rule.points[q][0], eta = rule.points[q][1];
         eval_shapes(shape, vorder, xi, eta, Nv, dNv);
         eval_shapes(shape, porder, xi, eta, Np, dNp);
         const GeomEval g = eval_geometry(*velocity.mesh, el, xi, eta);
         const double w = rule.weights[q] * g.detJ;
         for (int i = 0; i < nvsh; i++)
         {
            gradv[i][0] = g.Jinv[0][0] * dNv[i][0] + g.Jinv[1][0] * dNv[i][1];
            gradv[i][1] = g.Jinv[0][1] * dNv[i][0] + g.Jinv[1][1] * dNv[i][1];
         }
         for (int qn = 0; qn < npsh; qn++)
         {
            for (int i = 0; i < nvsh; i++)
            {
               for (int c = 0; c < 2; c++)
               {
                  trip.emplace_back(pnodes[qn], 2 * vnodes[i] + c,
                                    -w * Np[qn] * gradv[i][c]);
               }
            }
         }
      }
   }
   SparseMatrix B(pressure.dof_count, velocity.dof_count);
   B.setFromTriplets(trip.begin(), trip.end());
   B.makeCompressed();
   return B;
}

Vector assemble_load(const FunctionSpace &space,
                     const std::function<double(double, double)> &f)
{
   if (space.components != 1)
   {
      throw std::invalid_argument("assemble_load: scalar load on a vector space");
   }
   Vector L = Vector::Zero(space.dof_count);
   for_each_qpoint(space, volume_quad_order(field_order(space.kind)),
                   [&](int e, double w, const std::array<double, 2> &x, int nsh,
                       const double *N, const double (*)[2])
   {
      const double fx = f(x[0], x[1]);
      const auto &nodes = space.element_nodes[e];
      for (int i = 0; i < nsh; i++)
      {
         L[nodes[i]] += w * fx * N[i];
      }
   });
   return L;
}

Vector assemble_load(const FunctionSpace &space,
                     const std::function<std::array<double, 2>(double, double)> &f)
{
   if (space.components != 2)
   {
      throw std::invalid_argument("assemble_load: vector load on a scalar space");
   }
   Vector L = Vector::Zero(space.dof_count);
   for_each_qpoint(space, volume_quad_order(field_order(space.kind)),
                   [&](int e, double w, const std::array<double, 2> &x, int nsh,
                       const double *N, const double (*)[2])
   {
      const std::array<double, 2> fx = f(x[0], x[1]);
      const auto &nodes = space.element_nodes[e];
      for (int i = 0; i < nsh; i++)
      {
         L[2 * nodes[i]] += w * fx[0] * N[i];
         L[2 * nodes[i] + 1] += w * fx[1] * N[i];
      }
   });
   return L;
}

Vector interpolate(const FunctionSpace &space,
                   const std::function<double(double, double)> &f)
{
   Vector v(space.dof_count);
   for (int n = 0; n < space.scalar_node_count; n++)
   {
      v[n] = f(space.node_coords[n][0], space.node_coords[n][1]);
   }
   return v;
}

Vector interpolate(const FunctionSpace &space,
                   const std::function<std::array<double, 2>(double, double)> &f)
{
   Vector v(space.dof_count);
   for (int n = 0; n < space.scalar_node_count; n++)
   {
      const auto fx = f(space.node_coords[n][0], space.node_coords[n][1]);
      v[2 * n] = fx[0];
      v[2 * n + 1] = fx[1];
   }
   return v;
}

double l2_error(const FunctionSpace &space, const Vector &u,
                const std::function<double(double, double)> &exact, int quad_order)
{
   double err = 0.0;
   for_each_qpoint(space, quad_order,
                   [&](int e, double w, const std::array<double, 2> &x, int nsh,
                       const double *N, const double (*)[2])
   {
      const auto &nodes = space.element_nodes[e];
      double uh = 0.0;
      for (int i = 0; i < nsh; i++)
      {
         uh += N[i] * u[nodes[i]];
      }
      const double d = uh - exact(x[0], x[1]);
      err += w * d * d;
   });
   return std::sqrt(err);
}

double l2_error(const FunctionSpace &space, const Vector &u,
                const std::function<std::array<double, 2>(double, double)> &exact,
                int quad_order)
{
   double err = 0.0;
   for_each_qpoint(space, quad_order,
                   [&](int e, double w, const std::array<double, 2> &x, int nsh,
                       const double *N, const double (*)[2])
   {
      const auto &nodes = space.element_nodes[e];
      double uh0 = 0.0, uh1 = 0.0;
      for (int i = 0; i < nsh; i++)
      {
         uh0 += N[i] * u[2 * nodes[i]];
         uh1 += N[i] * u[2 * nodes[i] + 1];
      }
      const auto ex = exact(x[0], x[1]);
      err += w * ((uh0 - ex[0]) * (uh0 - ex[0]) + (uh1 - ex[1]) * (uh1 - ex[1]));
   });
   return std::sqrt(err);
}

TraceEval eval_at_boundary_edge(const FunctionSpace &space, int edge_index, double u)
{
   const auto [elem, local_edge] = space.edge_owner.at(edge_index);
   const Element &el = space.mesh->elements[elem];
   const ElementShape shape = el.nv == 3 ? ElementShape::Triangle : ElementShape::Quad;

   static const double tri_corners[3][2] = {{0, 0}, {1, 0}, {0, 1}};
   static const double quad_corners[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
   const double(*corners)[2] = (shape == ElementShape::Triangle) ? tri_corners : quad_corners;
   const int k2 = (local_edge + 1) % el.nv;
   const double xi = (1.0 - u) * corners[local_edge][0] + u * corners[k2][0];
   const double eta = (1.0 - u) * corners[local_edge][1] + u * corners[k2][1];

   const int order = field_order(space.kind);
   const int nsh = shapes_per_element(shape, order);
   double N[kMaxShapes];
   double dN[kMaxShapes][2];
   eval_shapes(shape, order, xi, eta, N, dN);
   const GeomEval g = eval_geometry(*space.mesh, el, xi, eta);

   TraceEval out;
   out.nodes = &space.element_nodes[elem];
   out.values.assign(N, N + nsh);
   out.grads.resize(nsh);
   for (int i = 0; i < nsh; i++)
   {
      out.grads[i] = {g.Jinv[0][0] * dN[i][0] + g.Jinv[1][0] * dN[i][1],
                      g.Jinv[0][1] * dN[i][0] + g.Jinv[1][1] * dN[i][1]};
   }
   out.x = g.x;
   return out;
}

double boundary_edge_length(const Mesh2D &mesh, int edge_index)
{
   const auto &be = mesh.boundary_edges[edge_index];
   const auto &a = mesh.vertices[be.a];
   const auto &b = mesh.vertices[be.b];
   return std::hypot(b[0] - a[0], b[1] - a[1]);
}

std::array<double, 2> boundary_edge_normal(const Mesh2D &mesh, int edge_index)
{
   const auto &be = mesh.boundary_edges[edge_index];
   const auto &a = mesh.vertices[be.a];
   const auto &b = mesh.vertices[be.b];
   const double dx = b[0] - a[0], dy = b[1] - a[1];
   const double len = std::hypot(dx, dy);
   return {dy / len, -dx / len};
}

} // namespace romdd
