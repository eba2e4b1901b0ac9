// SPDX-License-Identifier: MIT

#include "romdd/dgdd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>

namespace romdd
{

namespace
{

std::atomic<long> g_fom_assembly_count{0};

std::array<double, 2> side_normal(Side s)
{
   switch (s)
   {
      case Side::Left: return {-1.0, 0.0};
      case Side::Right: return {1.0, 0.0};
      case Side::Bottom: return {0.0, -1.0};
      case Side::Top: return {0.0, 1.0};
      default: throw std::invalid_argument("side_normal: obstacle has no constant normal");
   }
}

// side parameter of a vertex (x2 on vertical sides, x1 on horizontal)
double side_param(const Mesh2D &mesh, Side side, int vertex)
{
   const int coord = (side == Side::Left || side == Side::Right) ? 1 : 0;
   return mesh.vertices[vertex][coord];
}

std::vector<int> side_edge_indices(const Mesh2D &mesh, Side side)
{
   std::vector<int> out;
   for (int i = 0; i < static_cast<int>(mesh.boundary_edges.size()); i++)
   {
      if (mesh.boundary_edges[i].attr == side)
      {
         out.push_back(i);
      }
   }
   return out;
}

SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> &trip)
{
   SparseMatrix A(rows, cols);
   A.setFromTriplets(trip.begin(), trip.end());
   A.makeCompressed();
   return A;
}

void scatter(std::vector<Triplet> &trip, const SparseMatrix &block,
             int row_off, int col_off, double scale = 1.0)
{
   for (int i = 0; i < block.rows(); i++)
   {
      for (SparseMatrix::InnerIterator it(block, i); it; ++it)
      {
         trip.emplace_back(row_off + i, col_off + static_cast<int>(it.col()),
                           scale * it.value());
      }
   }
}

} // namespace

// ---- layouts ---------------------------------------------------------

Layout uniform_layout(int nx, int ny, const std::string &ref_name, const SideBc &bc)
{
   if (nx < 1 || ny < 1)
   {
      throw std::invalid_argument("uniform_layout: dimensions must be >= 1");
   }
   Layout l;
   l.nx = nx;
   l.ny = ny;
   l.cell_ref.assign(static_cast<size_t>(nx) * ny, 0);
   l.ref_names = {ref_name};
   l.bc = bc;
   return l;
}

Layout random_layout(int nx, int ny, const std::vector<std::string> &pool, Rng &rng,
                     const SideBc &bc)
{
   if (pool.empty())
   {
      throw std::invalid_argument("random_layout: empty reference pool");
   }
   Layout l;
   l.nx = nx;
   l.ny = ny;
   l.ref_names = pool;
   l.bc = bc;
   l.cell_ref.resize(static_cast<size_t>(nx) * ny);
   for (auto &r : l.cell_ref)
   {
      r = static_cast<int>(rng.uniform_index(pool.size()));
   }
   return l;
}

std::string write_layout(const Layout &layout)
{
   std::string out = "LAY1 " + std::to_string(layout.nx) + " " + std::to_string(layout.ny) + "\n";
   for (int iy = 0; iy < layout.ny; iy++)
   {
      for (int ix = 0; ix < layout.nx; ix++)
      {
         out += layout.ref_names[layout.cell_ref[ix + layout.nx * iy]];
         out += (ix + 1 == layout.nx) ? "\n" : " ";
      }
   }
   const Side sides[4] = {Side::Left, Side::Right, Side::Bottom, Side::Top};
   const char *names[4] = {"left", "right", "bottom", "top"};
   for (int k = 0; k < 4; k++)
   {
      out += std::string("bc ") + names[k] + " " +
             (layout.bc[sides[k]] == BcKind::Dirichlet ? "dirichlet" : "neumann") + "\n";
   }
   return out;
}

Layout parse_layout(std::string_view text)
{
   std::istringstream in{std::string(text)};
   std::string magic;
   Layout l;
   in >> magic >> l.nx >> l.ny;
   if (magic != "LAY1" || l.nx < 1 || l.ny < 1 || in.fail())
   {
      throw std::runtime_error("parse_layout: malformed LAY1 header");
   }
   l.cell_ref.resize(static_cast<size_t>(l.nx) * l.ny);
   std::map<std::string, int> ids;
   for (int iy = 0; iy < l.ny; iy++)
   {
      for (int ix = 0; ix < l.nx; ix++)
      {
         std::string name;
         in >> name;
         if (in.fail())
         {
            throw std::runtime_error("parse_layout: missing cell entries");
         }
         auto [it, inserted] = ids.try_emplace(name, static_cast<int>(l.ref_names.size()));
         if (inserted)
         {
            l.ref_names.push_back(name);
         }
         l.cell_ref[ix + l.nx * iy] = it->second;
      }
   }
   std::string tok;
   while (in >> tok)
   {
      if (tok != "bc")
      {
         throw std::runtime_error("parse_layout: unexpected token '" + tok + "'");
      }
      std::string side, kind;
      in >> side >> kind;
      Side s;
      if (side == "left") { s = Side::Left; }
      else if (side == "right") { s = Side::Right; }
      else if (side == "bottom") { s = Side::Bottom; }
      else if (side == "top") { s = Side::Top; }
      else { throw std::runtime_error("parse_layout: unknown side '" + side + "'"); }
      if (kind == "dirichlet") { l.bc[s] = BcKind::Dirichlet; }
      else if (kind == "neumann") { l.bc[s] = BcKind::Neumann; }
      else { throw std::runtime_error("parse_layout: unknown bc kind '" + kind + "'"); }
   }
   return l;
}

std::vector<InterfacePair> find_interfaces(const Layout &layout)
{
   std::vector<InterfacePair> out;
   for (int iy = 0; iy < layout.ny; iy++)
   {
      for (int ix = 0; ix < layout.nx; ix++)
      {
         const int m = ix + layout.nx * iy;
         if (ix + 1 < layout.nx)
         {
            out.push_back({m, m + 1, IfaceAxis::Vertical});
         }
         if (iy + 1 < layout.ny)
         {
            out.push_back({m, m + layout.nx, IfaceAxis::Horizontal});
         }
      }
   }
   return out;
}

InterfaceQuad build_mortar(const SideTrace &trace_m, const SideTrace &trace_n,
                           int gauss_points)
{
   InterfaceQuad iface;
   iface.side_m = trace_m.side;
   iface.side_n = trace_n.side;

   std::vector<double> breaks;
   for (const auto &seg : trace_m.segments)
   {
      breaks.push_back(seg.t0);
      breaks.push_back(seg.t1);
   }
   for (const auto &seg : trace_n.segments)
   {
      breaks.push_back(seg.t0);
      breaks.push_back(seg.t1);
   }
   std::sort(breaks.begin(), breaks.end());
   breaks.erase(std::unique(breaks.begin(), breaks.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                breaks.end());

   const GaussRule1D gauss = gauss_rule_1d(gauss_points);
   auto owner = [](const SideTrace &trace, double mid) -> const TraceSegment &
   {
      for (const auto &seg : trace.segments)
      {
         if (mid >= seg.t0 - 1e-12 && mid <= seg.t1 + 1e-12)
         {
            return seg;
         }
      }
      throw std::runtime_error("build_mortar: traces do not cover the interface");
   };

   for (size_t k = 0; k + 1 < breaks.size(); k++)
   {
      MortarSegment seg;
      seg.t0 = breaks[k];
      seg.t1 = breaks[k + 1];
      const double mid = 0.5 * (seg.t0 + seg.t1);
      const TraceSegment &om = owner(trace_m, mid);
      const TraceSegment &on = owner(trace_n, mid);
      seg.edge_m = om.edge;
      seg.edge_n = on.edge;
      seg.dx = std::min(om.t1 - om.t0, on.t1 - on.t0);
      const double len = seg.t1 - seg.t0;
      for (size_t g = 0; g < gauss.points.size(); g++)
      {
         seg.gauss_t.push_back(seg.t0 + len * gauss.points[g]);
         seg.gauss_w.push_back(len * gauss.weights[g]);
      }
      iface.segments.push_back(std::move(seg));
   }
   return iface;
}

// ---- interface assembly ------------------------------------------------

namespace
{

// trace of all element basis functions at side parameter t
struct SideEval
{
   TraceEval ev;
   std::vector<double> flux; // n . grad of each basis
};

SideEval eval_side(const FunctionSpace &space, int edge_index, double t,
                   Side side, const std::array<double, 2> &normal)
{
   const auto &be = space.mesh->boundary_edges[edge_index];
   const double ta = side_param(*space.mesh, side, be.a);
   const double tb = side_param(*space.mesh, side, be.b);
   const double u = (t - ta) / (tb - ta);
   SideEval out;
   out.ev = eval_at_boundary_edge(space, edge_index, u);
   out.flux.resize(out.ev.values.size());
   for (size_t i = 0; i < out.ev.values.size(); i++)
   {
      out.flux[i] = normal[0] * out.ev.grads[i][0] + normal[1] * out.ev.grads[i][1];
   }
   return out;
}

} // namespace

InterfaceBlocks assemble_interface_poisson(const FunctionSpace &space_m,
                                           const FunctionSpace &space_n,
                                           const InterfaceQuad &iface, double gamma)
{
   if (!(gamma > 0.0))
   {
      throw std::invalid_argument("assemble_interface_poisson: gamma must be positive");
   }
   const std::array<double, 2> nrm = side_normal(iface.side_m);
   std::vector<Triplet> tmm, tmn, tnm, tnn;

   for (const MortarSegment &seg : iface.segments)
   {
      const double pen = gamma / seg.dx;
      for (size_t g = 0; g < seg.gauss_t.size(); g++)
      {
         const double t = seg.gauss_t[g];
         const double w = seg.gauss_w[g];
         const SideEval m = eval_side(space_m, seg.edge_m, t, iface.side_m, nrm);
         const SideEval n = eval_side(space_n, seg.edge_n, t, iface.side_n, nrm);
         const auto &Nm = *m.ev.nodes;
         const auto &Nn = *n.ev.nodes;
         for (size_t i = 0; i < Nm.size(); i++)
         {
            for (size_t j = 0; j < Nm.size(); j++)
            {
               tmm.emplace_back(Nm[i], Nm[j],
                                w * (-0.5 * m.flux[i] * m.ev.values[j]
                                     - 0.5 * m.ev.values[i] * m.flux[j]
                                     + pen * m.ev.values[i] * m.ev.values[j]));
            }
            for (size_t j = 0; j < Nn.size(); j++)
            {
               tmn.emplace_back(Nm[i], Nn[j],
                                w * (0.5 * m.flux[i] * n.ev.values[j]
                                     - 0.5 * m.ev.values[i] * n.flux[j]
                                     - pen * m.ev.values[i] * n.ev.values[j]));
            }
         }
         for (size_t i = 0; i < Nn.size(); i++)
         {
            for (size_t j = 0; j < Nm.size(); j++)
            {
               tnm.emplace_back(Nn[i], Nm[j],
                                w * (-0.5 * n.flux[i] * m.ev.values[j]
                                     + 0.5 * n.ev.values[i] * m.flux[j]
                                     - pen * n.ev.values[i] * m.ev.values[j]));
            }
            for (size_t j = 0; j < Nn.size(); j++)
            {
               tnn.emplace_back(Nn[i], Nn[j],
                                w * (0.5 * n.flux[i] * n.ev.values[j]
                                     + 0.5 * n.ev.values[i] * n.flux[j]
                                     + pen * n.ev.values[i] * n.ev.values[j]));
            }
         }
      }
   }
   InterfaceBlocks b;
   b.mm = from_triplets(space_m.dof_count, space_m.dof_count, tmm);
   b.mn = from_triplets(space_m.dof_count, space_n.dof_count, tmn);
   b.nm = from_triplets(space_n.dof_count, space_m.dof_count, tnm);
   b.nn = from_triplets(space_n.dof_count, space_n.dof_count, tnn);
   return b;
}

SparseMatrix assemble_boundary_matrix_poisson(const FunctionSpace &space, Side side,
                                              double gamma)
{
   if (!(gamma > 0.0))
   {
      throw std::invalid_argument("assemble_boundary_matrix_poisson: gamma must be positive");
   }
   const GaussRule1D gauss = gauss_rule_1d(5);
   std::vector<Triplet> trip;
   for (int e : side_edge_indices(*space.mesh, side))
   {
      const double len = boundary_edge_length(*space.mesh, e);
      const auto nrm = boundary_edge_normal(*space.mesh, e);
      const double pen = gamma / len;
      for (size_t g = 0; g < gauss.points.size(); g++)
      {
         const double w = gauss.weights[g] * len;
         const TraceEval ev = eval_at_boundary_edge(space, e, gauss.points[g]);
         const auto &N = *ev.nodes;
         for (size_t i = 0; i < N.size(); i++)
         {
            const double flux_i = nrm[0] * ev.grads[i][0] + nrm[1] * ev.grads[i][1];
            for (size_t j = 0; j < N.size(); j++)
            {
               const double flux_j = nrm[0] * ev.grads[j][0] + nrm[1] * ev.grads[j][1];
               trip.emplace_back(N[i], N[j],
                                 w * (-flux_i * ev.values[j] - ev.values[i] * flux_j
                                      + pen * ev.values[i] * ev.values[j]));
            }
         }
      }
   }
   return from_triplets(space.dof_count, space.dof_count, trip);
}

Vector assemble_boundary_rhs_poisson(const FunctionSpace &space, Side side, double gamma,
                                     const std::function<double(double, double)> &g)
{
   const GaussRule1D gauss = gauss_rule_1d(5);
   Vector rhs = Vector::Zero(space.dof_count);
   for (int e : side_edge_indices(*space.mesh, side))
   {
      const double len = boundary_edge_length(*space.mesh, e);
      const auto nrm = boundary_edge_normal(*space.mesh, e);
      const double pen = gamma / len;
      for (size_t q = 0; q < gauss.points.size(); q++)
      {
         const double w = gauss.weights[q] * len;
         const TraceEval ev = eval_at_boundary_edge(space, e, gauss.points[q]);
         const double gval = g(ev.x[0], ev.x[1]);
         const auto &N = *ev.nodes;
         for (size_t i = 0; i < N.size(); i++)
         {
            const double flux_i = nrm[0] * ev.grads[i][0] + nrm[1] * ev.grads[i][1];
            rhs[N[i]] += w * gval * (pen * ev.values[i] - flux_i);
         }
      }
   }
   return rhs;
}

Vector assemble_neumann_rhs_poisson(const FunctionSpace &space, Side side,
                                    const std::function<double(double, double)> &g)
{
   const GaussRule1D gauss = gauss_rule_1d(5);
   Vector rhs = Vector::Zero(space.dof_count);
   for (int e : side_edge_indices(*space.mesh, side))
   {
      const double len = boundary_edge_length(*space.mesh, e);
      for (size_t q = 0; q < gauss.points.size(); q++)
      {
         const double w = gauss.weights[q] * len;
         const TraceEval ev = eval_at_boundary_edge(space, e, gauss.points[q]);
         const double gval = g(ev.x[0], ev.x[1]);
         const auto &N = *ev.nodes;
         for (size_t i = 0; i < N.size(); i++)
         {
            rhs[N[i]] += w * gval * ev.values[i];
         }
      }
   }
   return rhs;
}

// ---- Stokes interface / boundary ----------------------------------------

InterfaceBlocks assemble_interface_stokes(const StokesSpaces &m, const StokesSpaces &n,
                                          const InterfaceQuad &iface, double gamma, double nu)
{
   if (!(gamma > 0.0) || !(nu > 0.0))
   {
      throw std::invalid_argument("assemble_interface_stokes: gamma and nu must be positive");
   }
   const std::array<double, 2> nrm = side_normal(iface.side_m);
   const int pm = m.p_offset(), pn = n.p_offset();
   std::vector<Triplet> tmm, tmn, tnm, tnn;

   for (const MortarSegment &seg : iface.segments)
   {
      const double pen = gamma / seg.dx;
      for (size_t g = 0; g < seg.gauss_t.size(); g++)
      {
         const double t = seg.gauss_t[g];
         const double w = seg.gauss_w[g];
         const SideEval vm = eval_side(*m.velocity, seg.edge_m, t, iface.side_m, nrm);
         const SideEval vn = eval_side(*n.velocity, seg.edge_n, t, iface.side_n, nrm);
         const SideEval qm = eval_side(*m.pressure, seg.edge_m, t, iface.side_m, nrm);
         const SideEval qn = eval_side(*n.pressure, seg.edge_n, t, iface.side_n, nrm);
         const auto &Vm = *vm.ev.nodes;
         const auto &Vn = *vn.ev.nodes;
         const auto &Pm = *qm.ev.nodes;
         const auto &Pn = *qn.ev.nodes;

         // velocity jump/average terms, per component
         for (size_t i = 0; i < Vm.size(); i++)
         {
            for (size_t j = 0; j < Vm.size(); j++)
            {
               const double val = w * (-0.5 * nu * vm.flux[i] * vm.ev.values[j]
                                       - 0.5 * nu * vm.ev.values[i] * vm.flux[j]
                                       + pen * vm.ev.values[i] * vm.ev.values[j]);
               for (int c = 0; c < 2; c++)
               {
                  tmm.emplace_back(2 * Vm[i] + c, 2 * Vm[j] + c, val);
               }
            }
            for (size_t j = 0; j < Vn.size(); j++)
            {
               const double val = w * (0.5 * nu * vm.flux[i] * vn.ev.values[j]
                                       - 0.5 * nu * vm.ev.values[i] * vn.flux[j]
                                       - pen * vm.ev.values[i] * vn.ev.values[j]);
               for (int c = 0; c < 2; c++)
               {
                  tmn.emplace_back(2 * Vm[i] + c, 2 * Vn[j] + c, val);
               }
            }
         }
         for (size_t i = 0; i < Vn.size(); i++)
         {
            for (size_t j = 0; j < Vm.size(); j++)
            {
               const double val = w * (-0.5 * nu * vn.flux[i] * vm.ev.values[j]
                                       + 0.5 * nu * vn.ev.values[i] * vm.flux[j]
                                       - pen * vn.ev.values[i] * vm.ev.values[j]);
               for (int c = 0; c < 2; c++)
               {
                  tnm.emplace_back(2 * Vn[i] + c, 2 * Vm[j] + c, val);
               }
            }
            for (size_t j = 0; j < Vn.size(); j++)
            {
               const double val = w * (0.5 * nu * vn.flux[i] * vn.ev.values[j]
                                       + 0.5 * nu * vn.ev.values[i] * vn.flux[j]
                                       + pen * vn.ev.values[i] * vn.ev.values[j]);
               for (int c = 0; c < 2; c++)
               {
                  tnn.emplace_back(2 * Vn[i] + c, 2 * Vn[j] + c, val);
               }
            }
         }

         // <[[n.u']], {p}> and its transpose
         auto add_b = [&](std::vector<Triplet> &fwd, std::vector<Triplet> &bwd,
                          int urow, int pcol, double val)
         {
            fwd.emplace_back(urow, pcol, val);
            bwd.emplace_back(pcol, urow, val);
         };
         for (int c = 0; c < 2; c++)
         {
            for (size_t i = 0; i < Vm.size(); i++)
            {
               const double base = w * 0.5 * nrm[c] * vm.ev.values[i];
               for (size_t j = 0; j < Pm.size(); j++)
               {
                  add_b(tmm, tmm, 2 * Vm[i] + c, pm + Pm[j], base * qm.ev.values[j]);
               }
               for (size_t j = 0; j < Pn.size(); j++)
               {
                  add_b(tmn, tnm, 2 * Vm[i] + c, pn + Pn[j], base * qn.ev.values[j]);
               }
            }
            for (size_t i = 0; i < Vn.size(); i++)
            {
               const double base = -w * 0.5 * nrm[c] * vn.ev.values[i];
               for (size_t j = 0; j < Pm.size(); j++)
               {
                  add_b(tnm, tmn, 2 * Vn[i] + c, pm + Pm[j], base * qm.ev.values[j]);
               }
               for (size_t j = 0; j < Pn.size(); j++)
               {
                  add_b(tnn, tnn, 2 * Vn[i] + c, pn + Pn[j], base * qn.ev.values[j]);
               }
            }
         }
      }
   }

   InterfaceBlocks b;
   b.mm = from_triplets(m.ndof(), m.ndof(), tmm);
   b.mn = from_triplets(m.ndof(), n.ndof(), tmn);
   b.nm = from_triplets(n.ndof(), m.ndof(), tnm);
   b.nn = from_triplets(n.ndof(), n.ndof(), tnn);
   return b;
}

SparseMatrix assemble_boundary_matrix_stokes(const StokesSpaces &s, Side side,
                                             double gamma, double nu)
{
   const GaussRule1D gauss = gauss_rule_1d(5);
   const int poff = s.p_offset();
   std::vector<Triplet> trip;
   for (int e : side_edge_indices(*s.velocity->mesh, side))
   {
      const double len = boundary_edge_length(*s.velocity->mesh, e);
      const auto nrm = boundary_edge_normal(*s.velocity->mesh, e);
      const double pen = gamma / len;
      for (size_t q = 0; q < gauss.points.size(); q++)
      {
         const double w = gauss.weights[q] * len;
         const double u = gauss.points[q];
         const TraceEval vev = eval_at_boundary_edge(*s.velocity, e, u);
         const TraceEval pev = eval_at_boundary_edge(*s.pressure, e, u);
         const auto &V = *vev.nodes;
         const auto &P = *pev.nodes;
         std::vector<double> flux(V.size());
         for (size_t i = 0; i < V.size(); i++)
         {
            flux[i] = nrm[0] * vev.grads[i][0] + nrm[1] * vev.grads[i][1];
         }
         for (size_t i = 0; i < V.size(); i++)
         {
            for (size_t j = 0; j < V.size(); j++)
            {
               const double val = w * (-nu * flux[i] * vev.values[j]
                                       - nu * vev.values[i] * flux[j]
                                       + pen * vev.values[i] * vev.values[j]);
               for (int c = 0; c < 2; c++)
               {
                  trip.emplace_back(2 * V[i] + c, 2 * V[j] + c, val);
               }
            }
            for (size_t j = 0; j < P.size(); j++)
            {
               for (int c = 0; c < 2; c++)
               {
                  const double val = w * nrm[c] * vev.values[i] * pev.values[j];
                  trip.emplace_back(2 * V[i] + c, poff + P[j], val);
                  trip.emplace_back(poff + P[j], 2 * V[i] + c, val);
               }
            }
         }
      }
   }
   return from_triplets(s.ndof(), s.ndof(), trip);
}

Vector assemble_boundary_rhs_stokes(const StokesSpaces &s, Side side, double gamma, double nu,
                                    const std::function<Vec2(double, double)> &g)
{
   const GaussRule1D gauss = gauss_rule_1d(5);
   const int poff = s.p_offset();
   Vector rhs = Vector::Zero(s.ndof());
   for (int e : side_edge_indices(*s.velocity->mesh, side))
   {
      const double len = boundary_edge_length(*s.velocity->mesh, e);
      const auto nrm = boundary_edge_normal(*s.velocity->mesh, e);
      const double pen = gamma / len;
      for (size_t q = 0; q < gauss.points.size(); q++)
      {
         const double w = gauss.weights[q] * len;
         const double u = gauss.points[q];
         const TraceEval vev = eval_at_boundary_edge(*s.velocity, e, u);
         const TraceEval pev = eval_at_boundary_edge(*s.pressure, e, u);
         const Vec2 gval = g(vev.x[0], vev.x[1]);
         const auto &V = *vev.nodes;
         const auto &P = *pev.nodes;
         for (size_t i = 0; i < V.size(); i++)
         {
            const double flux_i = nrm[0] * vev.grads[i][0] + nrm[1] * vev.grads[i][1];
            for (int c = 0; c < 2; c++)
            {
               rhs[2 * V[i] + c] += w * gval[c] * (pen * vev.values[i] - nu * flux_i);
            }
         }
         const double ng = nrm[0] * gval[0] + nrm[1] * gval[1];
         for (size_t j = 0; j < P.size(); j++)
         {
            rhs[poff + P[j]] += w * ng * pev.values[j];
         }
      }
   }
   return rhs;
}

Vector assemble_neumann_rhs_stokes(const StokesSpaces &s, Side side,
                                   const std::function<Vec2(double, double)> &g)
{
   const GaussRule1D gauss = gauss_rule_1d(5);
   Vector rhs = Vector::Zero(s.ndof());
   for (int e : side_edge_indices(*s.velocity->mesh, side))
   {
      const double len = boundary_edge_length(*s.velocity->mesh, e);
      for (size_t q = 0; q < gauss.points.size(); q++)
      {
         const double w = gauss.weights[q] * len;
         const TraceEval vev = eval_at_boundary_edge(*s.velocity, e, gauss.points[q]);
         const Vec2 gval = g(vev.x[0], vev.x[1]);
         const auto &V = *vev.nodes;
         for (size_t i = 0; i < V.size(); i++)
         {
            for (int c = 0; c < 2; c++)
            {
               rhs[2 * V[i] + c] += w * gval[c] * vev.values[i];
            }
         }
      }
   }
   return rhs;
}

// ---- components ----------------------------------------------------------

namespace
{

bool has_obstacle(const Mesh2D &mesh)
{
   for (const auto &be : mesh.boundary_edges)
   {
      if (be.attr == Side::Obstacle)
      {
         return true;
      }
   }
   return false;
}

} // namespace

PoissonComponent make_poisson_component(const std::string &name, Mesh2D mesh, double gamma)
{
   PoissonComponent c;
   c.name = name;
   c.mesh = std::make_shared<Mesh2D>(std::move(mesh));
   c.gamma = gamma;
   const SpaceKind kind = (c.mesh->elements[0].nv == 4) ? SpaceKind::ScalarQ1 : SpaceKind::ScalarP1;
   c.space = build_space(*c.mesh, kind);
   c.domain_op = assemble_stiffness(c.space, 1.0);
   if (has_obstacle(*c.mesh))
   {
      c.domain_op = c.domain_op + assemble_boundary_matrix_poisson(c.space, Side::Obstacle, gamma);
   }
   c.mass = assemble_mass(c.space);
   c.traces = {side_trace(*c.mesh, Side::Left), side_trace(*c.mesh, Side::Right),
               side_trace(*c.mesh, Side::Bottom), side_trace(*c.mesh, Side::Top)};
   return c;
}

StokesComponent make_stokes_component(const std::string &name, Mesh2D mesh,
                                      double nu, double gamma)
{
   StokesComponent c;
   c.name = name;
   c.mesh = std::make_shared<Mesh2D>(std::move(mesh));
   c.nu = nu;
   c.gamma = (gamma > 0.0) ? gamma : nu * 9.0; // nu (s_u+1)^2 for the quadratic velocity space
   c.velocity = build_space(*c.mesh, SpaceKind::VectorP2);
   const SpaceKind pkind = (c.mesh->elements[0].nv == 4) ? SpaceKind::ScalarQ1 : SpaceKind::ScalarP1;
   c.pressure = build_space(*c.mesh, pkind);

   const SparseMatrix A = assemble_stiffness(c.velocity, nu);
   const SparseMatrix D = assemble_divergence(c.velocity, c.pressure);
   const int nu_dof = c.velocity.dof_count;
   const int np_dof = c.pressure.dof_count;
   std::vector<Triplet> trip;
   scatter(trip, A, 0, 0);
   scatter(trip, D, nu_dof, 0);
   for (int i = 0; i < D.rows(); i++)
   {
      for (SparseMatrix::InnerIterator it(D, i); it; ++it)
      {
         trip.emplace_back(static_cast<int>(it.col()), nu_dof + i, it.value());
      }
   }
   c.domain_op = from_triplets(nu_dof + np_dof, nu_dof + np_dof, trip);
   if (has_obstacle(*c.mesh))
   {
      c.domain_op = c.domain_op +
                    assemble_boundary_matrix_stokes(c.spaces(), Side::Obstacle, c.gamma, nu);
   }

   c.vel_mass = assemble_mass(c.velocity);
   c.p_mass = assemble_mass(c.pressure);
   c.mean_weights = Vector::Zero(nu_dof + np_dof);
   const Vector ones = Vector::Ones(np_dof);
   c.mean_weights.tail(np_dof) = c.p_mass * ones;
   c.traces = {side_trace(*c.mesh, Side::Left), side_trace(*c.mesh, Side::Right),
               side_trace(*c.mesh, Side::Bottom), side_trace(*c.mesh, Side::Top)};
   return c;
}

SparseMatrix coupled_mass(const StokesComponent &c)
{
   std::vector<Triplet> trip;
   scatter(trip, c.vel_mass, 0, 0);
   scatter(trip, c.p_mass, c.velocity.dof_count, c.velocity.dof_count);
   SparseMatrix M(c.ndof(), c.ndof());
   M.setFromTriplets(trip.begin(), trip.end());
   M.makeCompressed();
   return M;
}

// ---- global FOM assembly ---------------------------------------------------

long fom_global_assembly_count() { return g_fom_assembly_count.load(); }

namespace
{

// which outer layout sides a cell touches
std::vector<Side> outer_sides(const Layout &layout, int cell)
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

struct MortarKey
{
   int rm, rn;
   IfaceAxis axis;
   bool operator<(const MortarKey &o) const
   {
      return std::tie(rm, rn, axis) < std::tie(o.rm, o.rn, o.axis);
   }
};

void check_refs(const Layout &layout, size_t nref)
{
   for (int r : layout.cell_ref)
   {
      if (r < 0 || r >= static_cast<int>(nref))
      {
         throw std::runtime_error("assemble_global_fom: unresolved reference id " +
                                  std::to_string(r));
      }
   }
}

} // namespace

GlobalSystem assemble_global_fom_poisson(const Layout &layout,
                                         const std::vector<const PoissonComponent *> &refs,
                                         const PoissonProblem &problem, double gamma)
{
   g_fom_assembly_count++;
   check_refs(layout, refs.size());

   GlobalSystem sys;
   sys.physics = Physics::Poisson;
   const int M = layout.cells();
   sys.offsets.assign(M + 1, 0);
   for (int m = 0; m < M; m++)
   {
      sys.offsets[m + 1] = sys.offsets[m] + refs[layout.ref_of(m)]->space.dof_count;
   }
   const int N = sys.offsets.back();
   std::vector<Triplet> trip;
   sys.rhs = Vector::Zero(N);

   for (int m = 0; m < M; m++)
   {
      const PoissonComponent &c = *refs[layout.ref_of(m)];
      scatter(trip, c.domain_op, sys.offsets[m], sys.offsets[m]);
      const auto off = layout.cell_offset(m);
      sys.rhs.segment(sys.offsets[m], c.space.dof_count) +=
         assemble_load(c.space, [&](double x, double y)
                       { return poisson_forcing(problem, x + off[0], y + off[1]); });
   }

   std::map<MortarKey, InterfaceQuad> mortars;
   for (const InterfacePair &ip : find_interfaces(layout))
   {
      const int rm = layout.ref_of(ip.m), rn = layout.ref_of(ip.n);
      const Side sm = (ip.axis == IfaceAxis::Vertical) ? Side::Right : Side::Top;
      const Side sn = (ip.axis == IfaceAxis::Vertical) ? Side::Left : Side::Bottom;
      const MortarKey key{rm, rn, ip.axis};
      auto it = mortars.find(key);
      if (it == mortars.end())
      {
         it = mortars.emplace(key, build_mortar(refs[rm]->traces[static_cast<int>(sm)],
                                                refs[rn]->traces[static_cast<int>(sn)]))
                 .first;
      }
      const InterfaceBlocks blocks =
         assemble_interface_poisson(refs[rm]->space, refs[rn]->space, it->second, gamma);
      scatter(trip, blocks.mm, sys.offsets[ip.m], sys.offsets[ip.m]);
      scatter(trip, blocks.mn, sys.offsets[ip.m], sys.offsets[ip.n]);
      scatter(trip, blocks.nm, sys.offsets[ip.n], sys.offsets[ip.m]);
      scatter(trip, blocks.nn, sys.offsets[ip.n], sys.offsets[ip.n]);
   }

   for (int m = 0; m < M; m++)
   {
      const PoissonComponent &c = *refs[layout.ref_of(m)];
      const auto off = layout.cell_offset(m);
      for (Side side : outer_sides(layout, m))
      {
         // the Poisson studies are all-Dirichlet
         scatter(trip, assemble_boundary_matrix_poisson(c.space, side, gamma),
                 sys.offsets[m], sys.offsets[m]);
         sys.rhs.segment(sys.offsets[m], c.space.dof_count) +=
            assemble_boundary_rhs_poisson(c.space, side, gamma,
                                          [&](double x, double y)
                                          { return poisson_dirichlet(problem, x + off[0], y + off[1]); });
      }
   }

   sys.A = from_triplets(N, N, trip);
   return sys;
}

GlobalSystem assemble_global_fom_stokes(const Layout &layout,
                                        const std::vector<const StokesComponent *> &refs,
                                        const StokesProblem &problem,
                                        const SideBc &bc, double gamma)
{
   g_fom_assembly_count++;
   check_refs(layout, refs.size());
   const double nu = problem.nu;
   if (gamma <= 0.0)
   {
      gamma = nu * 9.0;
   }

   GlobalSystem sys;
   sys.physics = Physics::Stokes;
   const int M = layout.cells();
   sys.offsets.assign(M + 1, 0);
   for (int m = 0; m < M; m++)
   {
      sys.offsets[m + 1] = sys.offsets[m] + refs[layout.ref_of(m)]->ndof();
   }
   const int N = sys.offsets.back();
   std::vector<Triplet> trip;
   sys.rhs = Vector::Zero(N);

   const bool has_forcing = std::holds_alternative<StokesMms>(problem.variant);
   for (int m = 0; m < M; m++)
   {
      const StokesComponent &c = *refs[layout.ref_of(m)];
      scatter(trip, c.domain_op, sys.offsets[m], sys.offsets[m]);
      if (has_forcing)
      {
         const auto off = layout.cell_offset(m);
         sys.rhs.segment(sys.offsets[m], c.velocity.dof_count) +=
            assemble_load(c.velocity, [&](double x, double y)
                          { return stokes_forcing(problem, x + off[0], y + off[1]); });
      }
      for (int d = 0; d < c.velocity.dof_count; d++)
      {
         sys.vel_dofs.push_back(sys.offsets[m] + d);
      }
      for (int d = 0; d < c.pressure.dof_count; d++)
      {
         sys.pres_dofs.push_back(sys.offsets[m] + c.velocity.dof_count + d);
      }
   }

   std::map<MortarKey, InterfaceQuad> mortars;
   for (const InterfacePair &ip : find_interfaces(layout))
   {
      const int rm = layout.ref_of(ip.m), rn = layout.ref_of(ip.n);
      const Side sm = (ip.axis == IfaceAxis::Vertical) ? Side::Right : Side::Top;
      const Side sn = (ip.axis == IfaceAxis::Vertical) ? Side::Left : Side::Bottom;
      const MortarKey key{rm, rn, ip.axis};
      auto it = mortars.find(key);
      if (it == mortars.end())
      {
         it = mortars.emplace(key, build_mortar(refs[rm]->traces[static_cast<int>(sm)],
                                                refs[rn]->traces[static_cast<int>(sn)]))
                 .first;
      }
      const InterfaceBlocks blocks =
         assemble_interface_stokes(refs[rm]->spaces(), refs[rn]->spaces(), it->second, gamma, nu);
      scatter(trip, blocks.mm, sys.offsets[ip.m], sys.offsets[ip.m]);
      scatter(trip, blocks.mn, sys.offsets[ip.m], sys.offsets[ip.n]);
      scatter(trip, blocks.nm, sys.offsets[ip.n], sys.offsets[ip.m]);
      scatter(trip, blocks.nn, sys.offsets[ip.n], sys.offsets[ip.n]);
   }

   for (int m = 0; m < M; m++)
   {
      const StokesComponent &c = *refs[layout.ref_of(m)];
      const auto off = layout.cell_offset(m);
      for (Side side : outer_sides(layout, m))
      {
         if (bc[side] == BcKind::Dirichlet)
         {
            scatter(trip, assemble_boundary_matrix_stokes(c.spaces(), side, gamma, nu),
                    sys.offsets[m], sys.offsets[m]);
            sys.rhs.segment(sys.offsets[m], c.ndof()) +=
               assemble_boundary_rhs_stokes(c.spaces(), side, gamma, nu,
                                            [&](double x, double y)
                                            { return stokes_dirichlet(problem, x + off[0], y + off[1], side); });
         }
         // homogeneous Neumann sides contribute nothing
      }
   }

   sys.A = from_triplets(N, N, trip);
   if (!bc.any_neumann())
   {
      Vector w = Vector::Zero(N);
      for (int m = 0; m < M; m++)
      {
         const StokesComponent &c = *refs[layout.ref_of(m)];
         w.segment(sys.offsets[m], c.ndof()) = c.mean_weights;
      }
      border_with_constraint(sys.A, sys.rhs, w);
      sys.mean_zero = true;
   }
   return sys;
}

PrecondFn make_stokes_block_precond(const GlobalSystem &sys,
                                    const std::vector<const StokesComponent *> &refs,
                                    const Layout &layout)
{
   const int total = static_cast<int>(sys.A.rows());
   const int nvel = static_cast<int>(sys.vel_dofs.size());
   const int npres = static_cast<int>(sys.pres_dofs.size());

   auto g2v = std::make_shared<std::vector<int>>(total, -1);
   for (int i = 0; i < nvel; i++)
   {
      (*g2v)[sys.vel_dofs[i]] = i;
   }
   auto g2p = std::make_shared<std::vector<int>>(total, -1);
   for (int i = 0; i < npres; i++)
   {
      (*g2p)[sys.pres_dofs[i]] = i;
   }

   // velocity-velocity submatrix of the assembled system
   std::vector<Triplet> tv;
   for (int d = 0; d < nvel; d++)
   {
      const int row = sys.vel_dofs[d];
      for (SparseMatrix::InnerIterator it(sys.A, row); it; ++it)
      {
         const int cv = (*g2v)[it.col()];
         if (cv >= 0)
         {
            tv.emplace_back(d, cv, it.value());
         }
      }
   }
   auto A_vv = std::make_shared<SparseMatrix>(nvel, nvel);
   A_vv->setFromTriplets(tv.begin(), tv.end());
   A_vv->makeCompressed();

   // pressure mass from the component operators
   std::vector<Triplet> tp;
   int poff = 0;
   for (int m = 0; m < layout.cells(); m++)
   {
      const StokesComponent &c = *refs[layout.ref_of(m)];
      for (int i = 0; i < c.p_mass.rows(); i++)
      {
         for (SparseMatrix::InnerIterator it(c.p_mass, i); it; ++it)
         {
            tp.emplace_back(poff + i, poff + static_cast<int>(it.col()), it.value());
         }
      }
      poff += c.pressure.dof_count;
   }
   auto M_p = std::make_shared<SparseMatrix>(npres, npres);
   M_p->setFromTriplets(tp.begin(), tp.end());
   M_p->makeCompressed();

   auto vel_dofs = std::make_shared<std::vector<int>>(sys.vel_dofs);
   auto pres_dofs = std::make_shared<std::vector<int>>(sys.pres_dofs);

   return [=](const Vector &r, Vector &z)
   {
      Vector rv(vel_dofs->size()), rp(pres_dofs->size());
      for (size_t i = 0; i < vel_dofs->size(); i++)
      {
         rv[i] = r[(*vel_dofs)[i]];
      }
      for (size_t i = 0; i < pres_dofs->size(); i++)
      {
         rp[i] = r[(*pres_dofs)[i]];
      }
      Vector zv, zp;
      sgs_apply(*A_vv, rv, zv);
      sgs_apply(*M_p, rp, zp);
      z = r; // identity on any constraint row
      for (size_t i = 0; i < vel_dofs->size(); i++)
      {
         z[(*vel_dofs)[i]] = zv[i];
      }
      for (size_t i = 0; i < pres_dofs->size(); i++)
      {
         z[(*pres_dofs)[i]] = zp[i];
      }
   };
}

} // namespace romdd
