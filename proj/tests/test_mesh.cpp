// SPDX-License-Identifier: MIT

#include <doctest.h>

#include "romdd/mesh.hpp"

#include <cmath>

using namespace romdd;

namespace
{

// shoelace area of the obstacle hole polygon
double obstacle_polygon_area(const Mesh2D &mesh)
{
   std::vector<int> loop;
   for (const auto &be : mesh.boundary_edges)
   {
      if (be.attr == Side::Obstacle)
      {
         loop.push_back(be.a);
      }
   }
   if (loop.empty())
   {
      return 0.0;
   }
   double a = 0.0;
   for (size_t k = 0; k < loop.size(); k++)
   {
      const auto &p = mesh.vertices[loop[k]];
      const auto &q = mesh.vertices[loop[(k + 1) % loop.size()]];
      a += p[0] * q[1] - q[0] * p[1];
   }
   return std::abs(0.5 * a);
}

} // namespace

TEST_CASE("gen_quad_grid counts")
{
   const Mesh2D m1 = gen_quad_grid(1);
   CHECK(m1.vertices.size() == 4);
   CHECK(m1.elements.size() == 1);
   CHECK(m1.boundary_edges.size() == 4);

   CHECK(gen_quad_grid(64).vertices.size() == 4225);

   const Mesh2D m8 = gen_quad_grid(8);
   CHECK(m8.vertices.size() == 81);
   CHECK(m8.elements.size() == 64);
   CHECK(m8.boundary_edges.size() == 32);

   CHECK_THROWS_AS((void)gen_quad_grid(0), std::invalid_argument);
}

TEST_CASE("gen_tri_grid counts and areas")
{
   const Mesh2D m1 = gen_tri_grid(1);
   CHECK(m1.elements.size() == 2);
   CHECK(mesh_area(m1) == doctest::Approx(1.0).epsilon(1e-14));

   const Mesh2D m8 = gen_tri_grid(8);
   CHECK(m8.elements.size() == 128);
   CHECK(m8.vertices.size() == 81);

   for (int n : {1, 3, 7, 12})
   {
      CHECK(std::abs(mesh_area(gen_tri_grid(n)) - 1.0) <= 1e-12);
   }
   CHECK_THROWS_AS((void)gen_tri_grid(0), std::invalid_argument);
}

TEST_CASE("generated meshes validate")
{
   validate_mesh(gen_quad_grid(4));
   validate_mesh(gen_tri_grid(4));
   validate_mesh(gen_circle_obstacle(0.25, 8, 3));
   validate_mesh(gen_circle_obstacle(0.4, 5, 2));
}

TEST_CASE("gen_circle_obstacle geometry")
{
   const Mesh2D m = gen_circle_obstacle(0.25, 8, 3);
   // hole vertices sit on the circle
   for (const auto &be : m.boundary_edges)
   {
      if (be.attr != Side::Obstacle)
      {
         continue;
      }
      for (int v : {be.a, be.b})
      {
         const double r = std::hypot(m.vertices[v][0] - 0.5, m.vertices[v][1] - 0.5);
         CHECK(std::abs(r - 0.25) <= 1e-12);
      }
   }
   // obstacle edge count equals the circle segment count
   int obstacle_edges = 0;
   for (const auto &be : m.boundary_edges)
   {
      obstacle_edges += (be.attr == Side::Obstacle) ? 1 : 0;
   }
   CHECK(obstacle_edges == 32);

   // area within the inscribed-polygon deficit of the analytic value
   const double analytic = 1.0 - M_PI * 0.25 * 0.25;
   CHECK(std::abs(mesh_area(m) - analytic) / analytic <= 0.02);
   // and exactly the square minus the actual hole polygon
   CHECK(std::abs(mesh_area(m) + obstacle_polygon_area(m) - 1.0) <= 1e-10);

   CHECK_THROWS_AS((void)gen_circle_obstacle(0.5, 8, 3), std::invalid_argument);
   CHECK_THROWS_AS((void)gen_circle_obstacle(0.25, 3, 3), std::invalid_argument);
   CHECK_THROWS_AS((void)gen_circle_obstacle(0.25, 8, 1), std::invalid_argument);
}

TEST_CASE("mesh write/parse round trip")
{
   for (const Mesh2D &m : {gen_quad_grid(1), gen_tri_grid(3), gen_circle_obstacle(0.25, 8, 3)})
   {
      const std::string text = write_mesh(m);
      const Mesh2D parsed = parse_mesh(text);
      CHECK(write_mesh(parsed) == text); // bit-identical round trip
      CHECK(parsed.vertices == m.vertices);
      CHECK(parsed.elements.size() == m.elements.size());
      CHECK(parsed.boundary_edges.size() == m.boundary_edges.size());
   }
}

TEST_CASE("parse_mesh errors name the line")
{
   CHECK_THROWS_WITH_AS((void)parse_mesh("MESH2 1 0 0\nv 0 0\n"),
                        "malformed MESH1 header, line 1", MeshParseError);

   // vertex index out of range on the element line
   const std::string bad_index =
      "MESH1 4 1 0\nv 0 0\nv 1 0\nv 1 1\nv 0 1\ne 4 0 1 99 3\n";
   try
   {
      (void)parse_mesh(bad_index);
      CHECK(false);
   }
   catch (const MeshParseError &e)
   {
      CHECK(std::string(e.what()).find("vertex index out of range") != std::string::npos);
      CHECK(e.line_number == 6);
   }

   // clockwise element
   CHECK_THROWS_WITH_AS(
      (void)parse_mesh("MESH1 4 1 0\nv 0 0\nv 1 0\nv 1 1\nv 0 1\ne 4 0 3 2 1\n"),
      "element is not counter-clockwise, line 6", MeshParseError);

   // boundary edge that is no element edge
   const std::string dangling =
      "MESH1 4 1 1\nv 0 0\nv 1 0\nv 1 1\nv 0 1\ne 4 0 1 2 3\nb 0 2 B\n";
   CHECK_THROWS_AS((void)parse_mesh(dangling), MeshParseError);
}

TEST_CASE("side_trace partitions")
{
   const SideTrace left = side_trace(gen_quad_grid(2), Side::Left);
   REQUIRE(left.segments.size() == 2);
   CHECK(left.segments[0].t0 == 0.0);
   CHECK(left.segments[0].t1 == 0.5);
   CHECK(left.segments[1].t0 == 0.5);
   CHECK(left.segments[1].t1 == 1.0);

   const SideTrace bottom = side_trace(gen_tri_grid(2), Side::Bottom);
   REQUIRE(bottom.segments.size() == 2);
   CHECK(bottom.segments[0].t0 == 0.0);
   CHECK(bottom.segments[1].t1 == 1.0);

   const SideTrace top = side_trace(gen_circle_obstacle(0.25, 8, 3), Side::Top);
   REQUIRE(top.segments.size() == 8);
   for (int k = 0; k < 8; k++)
   {
      CHECK(top.segments[k].t0 == doctest::Approx(k / 8.0).epsilon(1e-14));
      CHECK(top.segments[k].t1 == doctest::Approx((k + 1) / 8.0).epsilon(1e-14));
   }

   CHECK_THROWS(side_trace(gen_quad_grid(2), Side::Obstacle));

   // exact partition of [0,1] on a mix of generated meshes
   for (const Mesh2D &m : {gen_quad_grid(5), gen_tri_grid(3), gen_circle_obstacle(0.3, 6, 2)})
   {
      for (Side s : {Side::Left, Side::Right, Side::Bottom, Side::Top})
      {
         const SideTrace trace = side_trace(m, s);
         CHECK(trace.segments.front().t0 == doctest::Approx(0.0).epsilon(1e-12));
         CHECK(trace.segments.back().t1 == doctest::Approx(1.0).epsilon(1e-12));
         for (size_t k = 1; k < trace.segments.size(); k++)
         {
            CHECK(std::abs(trace.segments[k].t0 - trace.segments[k - 1].t1) <= 1e-12);
         }
      }
   }
}
