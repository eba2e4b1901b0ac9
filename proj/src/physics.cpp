// SPDX-License-Identifier: MIT

#include "romdd/physics.hpp"

namespace romdd
{

namespace
{

constexpr double kTwoPi = 6.283185307179586476925286766559;

double spiral_forcing(const SpiralPoisson &p, double x1, double x2)
{
   const double cx = 0.5 * p.length, cy = 0.5 * p.length;
   const double r = std::hypot(x1 - cx, x2 - cy);
   // two-argument arctangent mapped to [0, 2pi) keeps one continuous arm
   double theta = std::atan2(x2 - cy, x1 - cx);
   if (theta < 0.0)
   {
      theta += kTwoPi;
   }
   const double d = std::abs(r - p.s * theta * p.length / (2.0 * kTwoPi));
   return std::exp(-d * d / (2.0 * p.width * p.width)) * std::cos(kTwoPi * p.k * d);
}

} // namespace

double poisson_forcing(const PoissonProblem &p, double x1, double x2)
{
   if (const auto *sin_p = std::get_if<SinusoidalPoisson>(&p))
   {
      return std::sin(kTwoPi * (sin_p->k[0] * x1 + sin_p->k[1] * x2 + sin_p->theta));
   }
   return spiral_forcing(std::get<SpiralPoisson>(p), x1, x2);
}

double poisson_dirichlet(const PoissonProblem &p, double x1, double x2)
{
   if (const auto *sin_p = std::get_if<SinusoidalPoisson>(&p))
   {
      return std::sin(kTwoPi * (sin_p->kb[0] * x1 + sin_p->kb[1] * x2 + sin_p->theta_b));
   }
   return 0.0; // spiral problem is homogeneous Dirichlet
}

SinusoidalPoisson sample_poisson_params(Rng &rng, SampleRange range)
{
   const double half = (range == SampleRange::Training) ? 0.5 : 0.7;
   SinusoidalPoisson p;
   p.k = {rng.uniform(-half, half), rng.uniform(-half, half)};
   p.kb = {rng.uniform(-half, half), rng.uniform(-half, half)};
   p.theta = rng.uniform(0.0, 1.0);
   p.theta_b = rng.uniform(0.0, 1.0);
   return p;
}

SpiralPoisson sample_spiral_params(Rng &rng, double length, double width)
{
   SpiralPoisson p;
   p.s = rng.uniform(0.0, 0.7);
   p.k = rng.uniform(0.0, 0.7);
   p.length = length;
   p.width = width;
   return p;
}

Vec2 stokes_dirichlet(const StokesProblem &p, double x1, double x2, Side side)
{
   if (side == Side::Obstacle)
   {
      return {0.0, 0.0}; // no-slip
   }
   if (const auto *fpa = std::get_if<FlowPastArray>(&p.variant))
   {
      return {fpa->g1 + fpa->dg1 * std::sin(kTwoPi * (fpa->k1[0] * x1 + fpa->k1[1] * x2 + fpa->theta1)),
              fpa->g2 + fpa->dg2 * std::sin(kTwoPi * (fpa->k2[0] * x1 + fpa->k2[1] * x2 + fpa->theta2))};
   }
   if (const auto *ch = std::get_if<ChannelFlow>(&p.variant))
   {
      if (side == Side::Left)
      {
         const double y = x2 / ch->n_c - 0.5;
         return {ch->u_in * (1.0 - 4.0 * y * y), 0.0};
      }
      return {0.0, 0.0}; // channel walls
   }
   (void)x1;
   return mms_velocity(x1, x2);
}

Vec2 stokes_neumann(const StokesProblem &, double, double, Side)
{
   return {0.0, 0.0};
}

Vec2 stokes_forcing(const StokesProblem &p, double x1, double x2)
{
   if (std::holds_alternative<StokesMms>(p.variant))
   {
      return mms_forcing(p.nu, x1, x2);
   }
   return {0.0, 0.0};
}

SideBc assign_upwind_sides(const FlowPastArray &f)
{
   SideBc bc;
   bc[Side::Left] = BcKind::Neumann;
   bc[Side::Right] = BcKind::Neumann;
   bc[Side::Bottom] = BcKind::Neumann;
   bc[Side::Top] = BcKind::Neumann;
   // tie at g = 0 resolves to the low-coordinate side
   bc[f.g1 >= 0.0 ? Side::Left : Side::Right] = BcKind::Dirichlet;
   bc[f.g2 >= 0.0 ? Side::Bottom : Side::Top] = BcKind::Dirichlet;
   return bc;
}

FlowPastArray sample_stokes_params(Rng &rng, SampleRange range)
{
   const double g_half = (range == SampleRange::Training) ? 1.0 : 1.5;
   FlowPastArray f;
   f.g1 = rng.uniform(-g_half, g_half);
   f.g2 = rng.uniform(-g_half, g_half);
   f.dg1 = rng.uniform(-0.1, 0.1);
   f.dg2 = rng.uniform(-0.1, 0.1);
   f.k1 = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
   f.k2 = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
   f.theta1 = rng.uniform(0.0, 1.0);
   f.theta2 = rng.uniform(0.0, 1.0);
   return f;
}

Vec2 mms_velocity(double x1, double x2)
{
   return {std::cos(x1) * std::sin(x2), -std::sin(x1) * std::cos(x2)};
}

double mms_pressure(double nu, double x1, double x2)
{
   return 2.0 * nu * std::sin(x1) * std::sin(x2);
}

Vec2 mms_forcing(double nu, double x1, double x2)
{
   return {4.0 * nu * std::cos(x1) * std::sin(x2), 0.0};
}

} // namespace romdd
