// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <vector>

namespace romdd
{

enum class ElementShape
{
   Triangle,
   Quad
};

/// Reference-element rule: unit triangle (0,0)-(1,0)-(0,1) with measure
/// 1/2, or unit square [0,1]^2 with measure 1. Exact for all polynomials
/// up to `order`.
struct QuadratureRule
{
   std::vector<std::array<double, 2>> points;
   std::vector<double> weights;
   int order = 0;
};

/// Supported orders: 1..6. Triangles use symmetric (Dunavant-type)
/// rules with positive weights; quads use tensor Gauss rules.
QuadratureRule quad_rule(ElementShape shape, int order);

/// Gauss-Legendre nodes/weights on [0,1]; n points are exact to degree
/// 2n-1. Nodes are computed by Newton iteration and are deterministic.
struct GaussRule1D
{
   std::vector<double> points;
   std::vector<double> weights;
};

GaussRule1D gauss_rule_1d(int npoints);

} // namespace romdd
