// SPDX-License-Identifier: MIT

#include <doctest.h>

#include "romdd/physics.hpp"

#include <cmath>

using namespace romdd;

TEST_CASE("sinusoidal forcing values")
{
   SinusoidalPoisson p;
   p.k = {0.4, -0.3};
   p.theta = 0.1;
   const PoissonProblem prob = p;
   CHECK(poisson_forcing(prob, 0.0, 0.0) ==
         doctest::Approx(std::sin(0.2 * M_PI)).epsilon(1e-14));

   SinusoidalPoisson zero;
   zero.k = {0.0, 0.0};
   zero.theta = 0.0;
   CHECK(poisson_forcing(PoissonProblem(zero), 0.3, 0.7) == 0.0);
}

TEST_CASE("spiral problem is homogeneous Dirichlet and bounded")
{
   SpiralPoisson s;
   s.s = 1.53;
   s.k = 3.0;
   s.length = 32.0;
   s.width = 2.0;
   const PoissonProblem prob = s;
   Rng rng(3);
   for (int i = 0; i < 1000; i++)
   {
      const double x = rng.uniform(0.0, 32.0);
      const double y = rng.uniform(0.0, 32.0);
      CHECK(poisson_dirichlet(prob, x, y) == 0.0);
      CHECK(std::abs(poisson_forcing(prob, x, y)) <= 1.0);
   }
}

TEST_CASE("poisson sampling ranges and determinism")
{
   Rng rng(42);
   double kmin = 1e9, kmax = -1e9, tmin = 1e9, tmax = -1e9;
   for (int i = 0; i < 10000; i++)
   {
      const SinusoidalPoisson p = sample_poisson_params(rng);
      for (double v : {p.k[0], p.k[1], p.kb[0], p.kb[1]})
      {
         kmin = std::min(kmin, v);
         kmax = std::max(kmax, v);
      }
      for (double v : {p.theta, p.theta_b})
      {
         tmin = std::min(tmin, v);
         tmax = std::max(tmax, v);
      }
   }
   CHECK(kmin >= -0.5);
   CHECK(kmin <= -0.45);
   CHECK(kmax <= 0.5);
   CHECK(kmax >= 0.45);
   CHECK(tmin >= 0.0);
   CHECK(tmax <= 1.0);

   Rng a(7), b(7);
   for (int i = 0; i < 100; i++)
   {
      const SinusoidalPoisson pa = sample_poisson_params(a);
      const SinusoidalPoisson pb = sample_poisson_params(b);
      CHECK(pa.k == pb.k);
      CHECK(pa.theta == pb.theta);
   }

   Rng t(11);
   double wide = 0.0;
   for (int i = 0; i < 10000; i++)
   {
      const SinusoidalPoisson p = sample_poisson_params(t, SampleRange::Test);
      wide = std::max({wide, std::abs(p.k[0]), std::abs(p.k[1])});
   }
   CHECK(wide > 0.5); // the test range widens to [-0.7, 0.7]
   CHECK(wide <= 0.7);
}

TEST_CASE("stokes boundary data")
{
   StokesProblem channel;
   channel.variant = ChannelFlow{1.0, 4};
   const Vec2 inlet = stokes_dirichlet(channel, 0.0, 2.0, Side::Left);
   CHECK(inlet[0] == doctest::Approx(1.0).epsilon(1e-14)); // centerline
   CHECK(inlet[1] == 0.0);
   const Vec2 wall = stokes_dirichlet(channel, 1.0, 0.0, Side::Bottom);
   CHECK(wall[0] == 0.0);
   CHECK(wall[1] == 0.0);

   StokesProblem fpa;
   FlowPastArray f;
   f.g1 = 0.3;
   f.g2 = -0.2;
   f.dg1 = 0.0;
   f.dg2 = 0.0;
   f.k1 = {0.4, 0.2};
   fpa.variant = f;
   for (double x : {0.0, 0.5, 3.0})
   {
      const Vec2 g = stokes_dirichlet(fpa, x, 1.0, Side::Left);
      CHECK(g[0] == doctest::Approx(0.3).epsilon(1e-14));
      CHECK(g[1] == doctest::Approx(-0.2).epsilon(1e-14));
   }
   CHECK(stokes_dirichlet(fpa, 0.2, 0.9, Side::Obstacle)[0] == 0.0);
}

TEST_CASE("upwind side assignment")
{
   FlowPastArray f;
   f.g1 = 0.5;
   f.g2 = 0.4;
   SideBc bc = assign_upwind_sides(f);
   CHECK(bc[Side::Left] == BcKind::Dirichlet);
   CHECK(bc[Side::Bottom] == BcKind::Dirichlet);
   CHECK(bc[Side::Right] == BcKind::Neumann);
   CHECK(bc[Side::Top] == BcKind::Neumann);

   f.g2 = -0.4;
   bc = assign_upwind_sides(f);
   CHECK(bc[Side::Left] == BcKind::Dirichlet);
   CHECK(bc[Side::Top] == BcKind::Dirichlet);
   CHECK(bc[Side::Bottom] == BcKind::Neumann);

   f.g1 = 0.0;
   f.g2 = 0.4;
   bc = assign_upwind_sides(f);
   CHECK(bc[Side::Left] == BcKind::Dirichlet); // tie goes to the low side
   CHECK(bc[Side::Bottom] == BcKind::Dirichlet);
}

TEST_CASE("stokes sampling ranges")
{
   Rng rng(9);
   for (int i = 0; i < 10000; i++)
   {
      const FlowPastArray f = sample_stokes_params(rng);
      CHECK(std::abs(f.g1) <= 1.0);
      CHECK(std::abs(f.dg1) <= 0.1);
      CHECK(std::abs(f.dg2) <= 0.1);
      CHECK(std::abs(f.k1[0]) <= 0.5);
      CHECK(f.theta1 >= 0.0);
      CHECK(f.theta1 <= 1.0);
   }
   Rng t(10);
   double g_extent = 0.0;
   for (int i = 0; i < 10000; i++)
   {
      const FlowPastArray f = sample_stokes_params(t, SampleRange::Test);
      g_extent = std::max({g_extent, std::abs(f.g1), std::abs(f.g2)});
   }
   CHECK(g_extent > 1.0);
   CHECK(g_extent <= 1.5);
}

TEST_CASE("manufactured solution satisfies the Stokes equations")
{
   const double nu = 1.1;
   Rng rng(21);
   for (int i = 0; i < 1000; i++)
   {
      const double x = rng.uniform(0.0, 1.0);
      const double y = rng.uniform(0.0, 1.0);
      // analytic derivatives of the closed forms
      const Vec2 lap_u = {-2.0 * std::cos(x) * std::sin(y), 2.0 * std::sin(x) * std::cos(y)};
      const Vec2 grad_p = {2.0 * nu * std::cos(x) * std::sin(y),
                           2.0 * nu * std::sin(x) * std::cos(y)};
      const Vec2 f = mms_forcing(nu, x, y);
      CHECK(std::abs(-nu * lap_u[0] + grad_p[0] - f[0]) <= 1e-12);
      CHECK(std::abs(-nu * lap_u[1] + grad_p[1] - f[1]) <= 1e-12);
      const double div = -std::sin(x) * std::sin(y) + std::sin(x) * std::sin(y);
      CHECK(std::abs(div) <= 1e-14);
   }
   const Vec2 f01 = mms_forcing(nu, 0.0, 1.0);
   CHECK(f01[0] == doctest::Approx(4.0 * 1.1 * std::sin(1.0)).epsilon(1e-13));
   CHECK(f01[1] == 0.0);
   CHECK(mms_pressure(nu, 0.0, 0.77) == 0.0);
}
