// SPDX-License-Identifier: MIT

#include <doctest.h>

#include "romdd/dgdd.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace romdd;

namespace
{

DenseMatrix dense(const SparseMatrix &s)
{
   return DenseMatrix(s);
}

DenseMatrix composite(const InterfaceBlocks &b)
{
   const int nm = static_cast<int>(b.mm.rows());
   const int nn = static_cast<int>(b.nn.rows());
   DenseMatrix C(nm + nn, nm + nn);
   C.topLeftCorner(nm, nm) = dense(b.mm);
   C.topRightCorner(nm, nn) = dense(b.mn);
   C.bottomLeftCorner(nn, nm) = dense(b.nm);
   C.bottomRightCorner(nn, nn) = dense(b.nn);
   return C;
}

} // namespace

TEST_CASE("find_interfaces counts grid adjacency")
{
   CHECK(find_interfaces(uniform_layout(1, 1, "c")).empty());
   CHECK(find_interfaces(uniform_layout(2, 2, "c")).size() == 4);
   CHECK(find_interfaces(uniform_layout(3, 3, "c")).size() == 12);
   CHECK(find_interfaces(uniform_layout(5, 2, "c")).size() == 5 * 1 + 2 * 4);
   for (const InterfacePair &ip : find_interfaces(uniform_layout(4, 4, "c")))
   {
      CHECK(ip.m < ip.n);
   }
}

TEST_CASE("layout LAY1 round trip and errors")
{
   Rng rng(3);
   Layout l = random_layout(3, 2, {"a", "bb"}, rng);
   l.bc[Side::Top] = BcKind::Neumann;
   const std::string text = write_layout(l);
   const Layout p = parse_layout(text);
   CHECK(p.nx == 3);
   CHECK(p.ny == 2);
   CHECK(p.bc[Side::Top] == BcKind::Neumann);
   CHECK(p.bc[Side::Left] == BcKind::Dirichlet);
   for (int m = 0; m < 6; m++)
   {
      CHECK(p.ref_names[p.ref_of(m)] == l.ref_names[l.ref_of(m)]);
   }
   CHECK_THROWS((void)parse_layout("LAYX 2 2\n"));
   CHECK_THROWS((void)parse_layout("LAY1 2 2\na a\n")); // missing row
   CHECK_THROWS((void)parse_layout("LAY1 1 1\na\nbc up dirichlet\n"));
}

TEST_CASE("build_mortar common refinement")
{
   // breakpoints {0, 1/2, 1} vs {0, 1/3, 2/3, 1}
   const SideTrace tm{Side::Right, {{0.0, 0.5, 0}, {0.5, 1.0, 1}}};
   const SideTrace tn{Side::Left, {{0.0, 1.0 / 3.0, 0}, {1.0 / 3.0, 2.0 / 3.0, 1}, {2.0 / 3.0, 1.0, 2}}};
   const InterfaceQuad iface = build_mortar(tm, tn);
   REQUIRE(iface.segments.size() == 4);
   const double expect[5] = {0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0};
   double wsum = 0.0;
   for (int k = 0; k < 4; k++)
   {
      CHECK(iface.segments[k].t0 == doctest::Approx(expect[k]).epsilon(1e-14));
      CHECK(iface.segments[k].t1 == doctest::Approx(expect[k + 1]).epsilon(1e-14));
      for (double w : iface.segments[k].gauss_w)
      {
         wsum += w;
      }
   }
   CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

   // identical traces reproduce the original partition
   const InterfaceQuad same = build_mortar(tm, tm);
   CHECK(same.segments.size() == 2);

   // penalty length is the min of the owning edges
   CHECK(iface.segments[1].dx == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("poisson interface blocks are symmetric and linear in gamma")
{
   const Mesh2D mesh_m = gen_quad_grid(2);
   const Mesh2D mesh_n = gen_tri_grid(3); // non-matching across the interface
   const FunctionSpace sm = build_space(mesh_m, SpaceKind::ScalarQ1);
   const FunctionSpace sn = build_space(mesh_n, SpaceKind::ScalarP1);
   const InterfaceQuad iface = build_mortar(side_trace(mesh_m, Side::Right),
                                            side_trace(mesh_n, Side::Left));
   const InterfaceBlocks b1 = assemble_interface_poisson(sm, sn, iface, 4.0);
   const DenseMatrix C = composite(b1);
   CHECK((C - C.transpose()).lpNorm<Eigen::Infinity>() <= 1e-14);

   // gamma enters only through the penalty term
   const InterfaceBlocks b2 = assemble_interface_poisson(sm, sn, iface, 8.0);
   const InterfaceBlocks b3 = assemble_interface_poisson(sm, sn, iface, 12.0);
   const DenseMatrix d21 = composite(b2) - composite(b1);
   const DenseMatrix d32 = composite(b3) - composite(b2);
   CHECK((d21 - d32).lpNorm<Eigen::Infinity>() <= 1e-13);
   // the isolated penalty matrix is positive semidefinite
   Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(d21);
   CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("two one-element components give a positive definite system")
{
   const Mesh2D mesh = gen_quad_grid(1);
   const PoissonComponent comp = make_poisson_component("c", mesh);
   const Layout layout = uniform_layout(2, 1, "c");
   SinusoidalPoisson p;
   const GlobalSystem sys =
      assemble_global_fom_poisson(layout, {&comp}, PoissonProblem(p), 4.0);
   CHECK(sys.A.rows() == 8);
   Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(dense(sys.A));
   CHECK(eig.eigenvalues().minCoeff() > 0.0);
   CHECK((dense(sys.A) - dense(sys.A).transpose()).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("poisson global residual vanishes for exact linear data")
{
   // u = 0.25 + 0.75 x1 - 0.5 x2 solves the Poisson problem with f = 0
   auto exact = [](double x, double y) { return 0.25 + 0.75 * x - 0.5 * y; };
   const Mesh2D mq = gen_quad_grid(3);
   const Mesh2D mt = gen_tri_grid(2);
   PoissonComponent cq = make_poisson_component("q", mq);
   PoissonComponent ct = make_poisson_component("t", mt);

   Layout layout;
   layout.nx = 2;
   layout.ny = 1;
   layout.cell_ref = {0, 1};
   layout.ref_names = {"q", "t"};

   SinusoidalPoisson p; // unused data: forcing is replaced below
   const GlobalSystem sys = assemble_global_fom_poisson(layout, {&cq, &ct}, PoissonProblem(p), 4.0);
   // rebuild the rhs for f = 0, g = exact trace via the boundary assemblers
   Vector rhs = Vector::Zero(sys.A.rows());
   const std::vector<const PoissonComponent *> refs = {&cq, &ct};
   for (int m = 0; m < 2; m++)
   {
      const auto off = layout.cell_offset(m);
      const PoissonComponent &c = *refs[layout.ref_of(m)];
      std::vector<Side> sides = {Side::Bottom, Side::Top};
      sides.push_back(m == 0 ? Side::Left : Side::Right);
      for (Side s : sides)
      {
         rhs.segment(sys.offsets[m], c.space.dof_count) +=
            assemble_boundary_rhs_poisson(c.space, s, 4.0,
                                          [&](double x, double y)
                                          { return exact(x + off[0], y + off[1]); });
      }
   }
   Vector u(sys.A.rows());
   for (int m = 0; m < 2; m++)
   {
      const auto off = layout.cell_offset(m);
      const PoissonComponent &c = *refs[layout.ref_of(m)];
      u.segment(sys.offsets[m], c.space.dof_count) =
         interpolate(c.space, [&](double x, double y) { return exact(x + off[0], y + off[1]); });
   }
   CHECK((sys.A * u - rhs).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("poisson patch test through a 2x2 decomposed solve")
{
   auto exact = [](double x, double y) { return 1.0 + 0.5 * x + 0.25 * y; };
   const PoissonComponent comp = make_poisson_component("c", gen_quad_grid(4));
   const Layout layout = uniform_layout(2, 2, "c");
   // build with the sinusoidal plumbing, then substitute exact data
   SinusoidalPoisson dummy;
   GlobalSystem sys = assemble_global_fom_poisson(layout, {&comp}, PoissonProblem(dummy), 4.0);
   sys.rhs.setZero();
   for (int m = 0; m < 4; m++)
   {
      const auto off = layout.cell_offset(m);
      const int ix = m % 2, iy = m / 2;
      std::vector<Side> sides;
      if (ix == 0) { sides.push_back(Side::Left); }
      if (ix == 1) { sides.push_back(Side::Right); }
      if (iy == 0) { sides.push_back(Side::Bottom); }
      if (iy == 1) { sides.push_back(Side::Top); }
      for (Side s : sides)
      {
         sys.rhs.segment(sys.offsets[m], comp.space.dof_count) +=
            assemble_boundary_rhs_poisson(comp.space, s, 4.0,
                                          [&](double x, double y)
                                          { return exact(x + off[0], y + off[1]); });
      }
   }
   const Vector u = direct_solve(sys.A, sys.rhs);
   for (int m = 0; m < 4; m++)
   {
      const auto off = layout.cell_offset(m);
      const Vector expect = interpolate(comp.space, [&](double x, double y)
                                        { return exact(x + off[0], y + off[1]); });
      CHECK((sys.cell_part(u, m) - expect).lpNorm<Eigen::Infinity>() <= 1e-10);
   }
}

TEST_CASE("interface jump decreases monotonically with gamma")
{
   const PoissonComponent comp = make_poisson_component("c", gen_quad_grid(4));
   const Layout layout = uniform_layout(2, 1, "c");
   SinusoidalPoisson p;
   p.k = {0.45, -0.3};
   p.theta = 0.2;
   p.kb = {0.3, 0.25};
   p.theta_b = 0.6;

   double last_jump = 1e300;
   for (double gamma : {4.0, 40.0, 400.0})
   {
      const GlobalSystem sys =
         assemble_global_fom_poisson(layout, {&comp}, PoissonProblem(p), gamma);
      const Vector u = direct_solve(sys.A, sys.rhs);
      // L2 norm of the jump along the shared vertical interface
      const InterfaceQuad iface = build_mortar(comp.traces[static_cast<int>(Side::Right)],
                                               comp.traces[static_cast<int>(Side::Left)]);
      double jump_sq = 0.0;
      for (const MortarSegment &seg : iface.segments)
      {
         for (size_t g = 0; g < seg.gauss_t.size(); g++)
         {
            const auto &bem = comp.mesh->boundary_edges[seg.edge_m];
            const double ta = comp.mesh->vertices[bem.a][1];
            const double tb = comp.mesh->vertices[bem.b][1];
            const TraceEval evm = eval_at_boundary_edge(comp.space, seg.edge_m,
                                                        (seg.gauss_t[g] - ta) / (tb - ta));
            const auto &ben = comp.mesh->boundary_edges[seg.edge_n];
            const double sa = comp.mesh->vertices[ben.a][1];
            const double sb = comp.mesh->vertices[ben.b][1];
            const TraceEval evn = eval_at_boundary_edge(comp.space, seg.edge_n,
                                                        (seg.gauss_t[g] - sa) / (sb - sa));
            double um = 0.0, un = 0.0;
            for (size_t i = 0; i < evm.values.size(); i++)
            {
               um += evm.values[i] * u[sys.offsets[0] + (*evm.nodes)[i]];
            }
            for (size_t i = 0; i < evn.values.size(); i++)
            {
               un += evn.values[i] * u[sys.offsets[1] + (*evn.nodes)[i]];
            }
            jump_sq += seg.gauss_w[g] * (um - un) * (um - un);
         }
      }
      CHECK(jump_sq < last_jump);
      last_jump = jump_sq;
   }
}

TEST_CASE("stokes residual vanishes for linear velocity and zero pressure")
{
   // u = (0.2 + 0.3 x1 + 0.7 x2, -0.1 + 0.4 x1 - 0.3 x2) is divergence
   // free; with p = 0 it solves the Stokes system with f = 0
   auto exact_u = [](double x, double y)
   { return Vec2{0.2 + 0.3 * x + 0.7 * y, -0.1 + 0.4 * x - 0.3 * y}; };

   StokesComponent cq = make_stokes_component("q", gen_quad_grid(2), 1.1);
   StokesComponent ct = make_stokes_component("t", gen_tri_grid(2), 1.1);
   Layout layout;
   layout.nx = 2;
   layout.ny = 1;
   layout.cell_ref = {0, 1};
   layout.ref_names = {"q", "t"};
   const std::vector<const StokesComponent *> refs = {&cq, &ct};

   StokesProblem problem;
   problem.nu = 1.1;
   problem.variant = StokesMms{}; // replaced below; forcing reset to zero
   SideBc bc;                     // all Dirichlet -> mean-zero constraint appended
   GlobalSystem sys = assemble_global_fom_stokes(layout, refs, problem, bc, -1.0);

   // rebuild the rhs for g = exact_u
   sys.rhs.setZero();
   for (int m = 0; m < 2; m++)
   {
      const auto off = layout.cell_offset(m);
      const StokesComponent &c = *refs[layout.ref_of(m)];
      std::vector<Side> sides = {Side::Bottom, Side::Top};
      sides.push_back(m == 0 ? Side::Left : Side::Right);
      for (Side s : sides)
      {
         sys.rhs.segment(sys.offsets[m], c.ndof()) +=
            assemble_boundary_rhs_stokes(c.spaces(), s, c.gamma, 1.1,
                                         [&](double x, double y)
                                         { return exact_u(x + off[0], y + off[1]); });
      }
   }

   Vector q = Vector::Zero(sys.A.rows());
   for (int m = 0; m < 2; m++)
   {
      const auto off = layout.cell_offset(m);
      const StokesComponent &c = *refs[layout.ref_of(m)];
      q.segment(sys.offsets[m], c.velocity.dof_count) =
         interpolate(c.velocity, [&](double x, double y)
                     { return exact_u(x + off[0], y + off[1]); });
      // pressure part stays zero
   }
   const Vector r = sys.A * q - sys.rhs;
   CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-11);
}

TEST_CASE("stokes interface blocks keep the saddle symmetry")
{
   const StokesComponent cq = make_stokes_component("q", gen_quad_grid(2), 1.1);
   const StokesComponent ct = make_stokes_component("t", gen_circle_obstacle(0.25, 4, 2), 1.1);
   const InterfaceQuad iface = build_mortar(cq.traces[static_cast<int>(Side::Right)],
                                            ct.traces[static_cast<int>(Side::Left)]);
   const InterfaceBlocks b = assemble_interface_stokes(cq.spaces(), ct.spaces(), iface, 4.4, 1.1);
   const DenseMatrix C = composite(b);
   CHECK((C - C.transpose()).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("stokes default gamma scales with the velocity order")
{
   // nu (s_u+1)^2 with quadratic velocity; the pressure-order variant
   // of the same formula loses the manufactured-solution convergence
   const StokesComponent c = make_stokes_component("q", gen_quad_grid(1), 1.1);
   CHECK(c.gamma == doctest::Approx(9.9).epsilon(1e-15));
}

TEST_CASE("neumann sides contribute rhs only and vanish for g = 0")
{
   const StokesComponent c = make_stokes_component("q", gen_quad_grid(2), 1.1);
   const Vector rhs = assemble_neumann_rhs_stokes(c.spaces(), Side::Right,
                                                  [](double, double) { return Vec2{0.0, 0.0}; });
   CHECK(rhs.norm() == 0.0);
   const PoissonComponent pc = make_poisson_component("q", gen_quad_grid(2));
   const Vector prhs = assemble_neumann_rhs_poisson(pc.space, Side::Top,
                                                    [](double, double) { return 0.0; });
   CHECK(prhs.norm() == 0.0);
}

TEST_CASE("dirichlet rhs penalty identity for constant data")
{
   const PoissonComponent c = make_poisson_component("q", gen_quad_grid(3));
   auto one = [](double, double) { return 1.0; };
   const Vector r1 = assemble_boundary_rhs_poisson(c.space, Side::Left, 4.0, one);
   const Vector r2 = assemble_boundary_rhs_poisson(c.space, Side::Left, 8.0, one);
   const SparseMatrix B1 = assemble_boundary_matrix_poisson(c.space, Side::Left, 4.0);
   const SparseMatrix B2 = assemble_boundary_matrix_poisson(c.space, Side::Left, 8.0);
   const Vector ones = Vector::Ones(c.space.dof_count);
   // rhs(2g) - rhs(g) equals the penalty-part row sums at strength gamma
   CHECK(((r2 - r1) - (B2 - B1) * ones).lpNorm<Eigen::Infinity>() <= 1e-13);
   const Vector r0 = assemble_boundary_rhs_poisson(c.space, Side::Left, 4.0,
                                                   [](double, double) { return 0.0; });
   CHECK(r0.norm() == 0.0);
}

TEST_CASE("fom assembly counter increments")
{
   const long before = fom_global_assembly_count();
   const PoissonComponent comp = make_poisson_component("c", gen_quad_grid(2));
   SinusoidalPoisson p;
   (void)assemble_global_fom_poisson(uniform_layout(1, 1, "c"), {&comp}, PoissonProblem(p), 4.0);
   CHECK(fom_global_assembly_count() == before + 1);
}

TEST_CASE("unresolved reference ids are rejected")
{
   const PoissonComponent comp = make_poisson_component("c", gen_quad_grid(2));
   Layout layout = uniform_layout(1, 1, "c");
   layout.cell_ref[0] = 3;
   SinusoidalPoisson p;
   CHECK_THROWS((void)assemble_global_fom_poisson(layout, {&comp}, PoissonProblem(p), 4.0));
}
