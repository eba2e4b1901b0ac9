// SPDX-License-Identifier: MIT

#pragma once

#include "romdd/mesh.hpp"
#include "romdd/rng.hpp"

#include <array>
#include <cmath>
#include <variant>

namespace romdd
{

using Vec2 = std::array<double, 2>;

// ---- Poisson ---------------------------------------------------------

/// f = sin 2pi(k.x + theta), g_di = sin 2pi(k_b.x + theta_b)
struct SinusoidalPoisson
{
   Vec2 k{0.0, 0.0};
   double theta = 0.0;
   Vec2 kb{0.0, 0.0};
   double theta_b = 0.0;
};

/// Sinusoidal wave along an Archimedean spiral on [0,L]^2, g_di = 0.
struct SpiralPoisson
{
   double s = 0.0;
   double k = 0.0;
   double length = 1.0; // L
   double width = 1.0;  // w
};

using PoissonProblem = std::variant<SinusoidalPoisson, SpiralPoisson>;

double poisson_forcing(const PoissonProblem &p, double x1, double x2);
double poisson_dirichlet(const PoissonProblem &p, double x1, double x2);

enum class SampleRange
{
   Training,
   Test
};

/// Training: k, k_b in U[-0.5,0.5]^2, theta, theta_b in U[0,1].
/// Test widens k, k_b to U[-0.7,0.7]^2.
SinusoidalPoisson sample_poisson_params(Rng &rng, SampleRange range = SampleRange::Training);

/// Spiral test parameters: s, k in U[0, 0.7].
SpiralPoisson sample_spiral_params(Rng &rng, double length, double width);

// ---- Stokes ----------------------------------------------------------

struct FlowPastArray
{
   double g1 = 0.0, g2 = 0.0;
   double dg1 = 0.0, dg2 = 0.0;
   Vec2 k1{0.0, 0.0}, k2{0.0, 0.0};
   double theta1 = 0.0, theta2 = 0.0;
};

struct ChannelFlow
{
   double u_in = 1.0;
   int n_c = 1; // channel spans [0, N_c]^2
};

struct StokesMms
{
};

struct StokesProblem
{
   double nu = 1.1;
   std::variant<FlowPastArray, ChannelFlow, StokesMms> variant;
};

enum class BcKind
{
   Dirichlet,
   Neumann
};

/// Boundary conditions on the four outer sides of the global domain.
struct SideBc
{
   std::array<BcKind, 4> kind{BcKind::Dirichlet, BcKind::Dirichlet,
                              BcKind::Dirichlet, BcKind::Dirichlet};

   BcKind &operator[](Side s) { return kind[static_cast<int>(s)]; }
   BcKind operator[](Side s) const { return kind[static_cast<int>(s)]; }
   bool any_neumann() const
   {
      for (auto k : kind)
      {
         if (k == BcKind::Neumann)
         {
            return true;
         }
      }
      return false;
   }
};

/// Dirichlet datum of a Stokes problem at a global point. Obstacle sides
/// are always no-slip (0,0). The channel inlet parabola lives on the
/// Left side; channel walls are no-slip.
Vec2 stokes_dirichlet(const StokesProblem &p, double x1, double x2, Side side);

/// Neumann datum; homogeneous for every variant here.
Vec2 stokes_neumann(const StokesProblem &p, double x1, double x2, Side side);

/// Volume forcing (zero except for the manufactured solution).
Vec2 stokes_forcing(const StokesProblem &p, double x1, double x2);

/// Upwind side map for flow-past-array: x1 = 0 is Dirichlet iff g1 >= 0
/// (else x1 = L), likewise for x2/g2; the two remaining outer sides are
/// homogeneous Neumann.
SideBc assign_upwind_sides(const FlowPastArray &f);

/// Training ranges of the flow-past-array sampling; Test widens
/// (g1, g2) to U[-1.5, 1.5]^2.
FlowPastArray sample_stokes_params(Rng &rng, SampleRange range = SampleRange::Training);

/// Manufactured solution u = (cos x1 sin x2, -sin x1 cos x2),
/// p = 2 nu sin x1 sin x2, f = (4 nu cos x1 sin x2, 0).
Vec2 mms_velocity(double x1, double x2);
double mms_pressure(double nu, double x1, double x2);
Vec2 mms_forcing(double nu, double x1, double x2);

} // namespace romdd
