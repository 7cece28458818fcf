#pragma once

#include <vector>

#include "anisoframe/index_geometry.hpp"

namespace anisoframe {

struct WeightedCube {
  ShearIndex index;  // two-dimensional cone index
  double weight = 0;
};

// Integral over the plane of g^p where g = (sum_Q (w_Q chi_Q)^q)^{1/q} (max for q = inf).
// The arrangement of the parallelograms is swept slab by slab with exact integer predicates;
// only the final area accumulation is in floating point.
double overlay_integral(const std::vector<WeightedCube>& cubes, double p, double q);

struct GridIntegral {
  double value = 0;
  double cell_x = 0;
  double cell_y = 0;
};

// Midpoint Riemann sum of the same integral on an m x m grid over the bounding box.
GridIntegral grid_integral(const std::vector<WeightedCube>& cubes, double p, double q, int m);

}  // namespace anisoframe
