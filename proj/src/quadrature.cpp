// SPDX-License-Identifier: MIT

#include "romdd/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace romdd
{

namespace
{

// appends the 3 permutations of barycentric (a, a, 1-2a)
void push_orbit3(QuadratureRule &r, double a, double w)
{
   const double c = 1.0 - 2.0 * a;
   r.points.push_back({a, a});
   r.points.push_back({c, a});
   r.points.push_back({a, c});
   for (int k = 0; k < 3; k++)
   {
      r.weights.push_back(w);
   }
}

// appends the 6 permutations of barycentric (a, b, 1-a-b)
void push_orbit6(QuadratureRule &r, double a, double b, double w)
{
   const double c = 1.0 - a - b;
   r.points.push_back({a, b});
   r.points.push_back({b, a});
   r.points.push_back({a, c});
   r.points.push_back({c, a});
   r.points.push_back({b, c});
   r.points.push_back({c, b});
   for (int k = 0; k < 6; k++)
   {
      r.weights.push_back(w);
   }
}

QuadratureRule triangle_rule(int order)
{
   // weights in the tables sum to 1; scale by the reference measure 1/2
   QuadratureRule r;
   r.order = order;
   switch (order)
   {
      case 1:
         r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
         r.weights.push_back(0.5);
         break;
      case 2:
         push_orbit3(r, 1.0 / 6.0, 1.0 / 3.0 * 0.5);
         break;
      case 3:
      case 4:
         push_orbit3(r, 0.445948490915965, 0.223381589678011 * 0.5);
         push_orbit3(r, 0.091576213509771, 0.109951743655322 * 0.5);
         break;
      case 5:
         r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
         r.weights.push_back(0.225 * 0.5);
         push_orbit3(r, 0.470142064105115, 0.132394152788506 * 0.5);
         push_orbit3(r, 0.101286507323456, 0.125939180544827 * 0.5);
         break;
      case 6:
         push_orbit3(r, 0.063089014491502, 0.050844906370207 * 0.5);
         push_orbit3(r, 0.249286745170910, 0.116786275726379 * 0.5);
         push_orbit6(r, 0.310352451033785, 0.053145049844816, 0.082851075618374 * 0.5);
         break;
      default:
         throw std::invalid_argument("quad_rule: unsupported triangle order");
   }
   return r;
}

} // namespace

GaussRule1D gauss_rule_1d(int npoints)
{
   if (npoints < 1 || npoints > 32)
   {
      throw std::invalid_argument("gauss_rule_1d: npoints out of range");
   }
   GaussRule1D r;
   r.points.resize(npoints);
   r.weights.resize(npoints);
   const int n = npoints;
   for (int i = 0; i < (n + 1) / 2; i++)
   {
      // Newton iteration for the i-th root of P_n on [-1,1]
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; iter++)
      {
         double p0 = 1.0, p1 = x;
         for (int k = 2; k <= n; k++)
         {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
         }
         pp = n * (x * p1 - p0) / (x * x - 1.0);
         const double dx = p1 / pp;
         x -= dx;
         if (std::abs(dx) < 1e-15)
         {
            break;
         }
      }
      const double w = 2.0 / ((1.0 - x * x) * pp * pp);
      // map [-1,1] -> [0,1]
      r.points[i] = 0.5 * (1.0 - x);
      r.points[n - 1 - i] = 0.5 * (1.0 + x);
      r.weights[i] = 0.5 * w;
      r.weights[n - 1 - i] = 0.5 * w;
   }
   return r;
}

QuadratureRule quad_rule(ElementShape shape, int order)
{
   if (order < 1 || order > 6)
   {
      throw std::invalid_argument("quad_rule: order must be in [1, 6]");
   }
   if (shape == ElementShape::Triangle)
   {
      return triangle_rule(order);
   }
   QuadratureRule r;
   r.order = order;
   const int k = (order + 2) / 2; // 2k-1 >= order
   const GaussRule1D g = gauss_rule_1d(k);
   for (int i = 0; i < k; i++)
   {
      for (int j = 0; j < k; j++)
      {
         r.points.push_back({g.points[i], g.points[j]});
         r.weights.push_back(g.weights[i] * g.weights[j]);
      }
   }
   return r;
}

} // namespace romdd
