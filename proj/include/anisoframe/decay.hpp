#pragma once

#include <cstddef>
#include <vector>

#include "anisoframe/frame2d.hpp"

namespace anisoframe {

// Disk of radius 1/4 with polynomial shading over a smooth periodic background, sampled on N x N.
GridFunction cartoon_image(int n);

// Full-depth orthonormal separable Haar transform of a real N x N array (N a power of two).
std::vector<double> haar2d_forward(const std::vector<double>& x, int n);
std::vector<double> haar2d_inverse(const std::vector<double>& c, int n);

struct DecayCurve {
  std::vector<std::size_t> budget;
  std::vector<double> error;  // mean squared error (1/N^2) sum |f - f_N|^2
  double slope = 0;           // least-squares slope of log error against log budget, positive budgets
  bool monotone() const;
};

struct DecayResult {
  int n = 0;
  double radius = 0;
  double energy = 0;
  std::size_t frame_coefficients = 0;
  DecayCurve frame;
  DecayCurve haar;
};

// N-term thresholding curves of both systems for the given budgets; the budget list should be
// ascending. Ties between equal magnitudes are broken by coefficient order.
DecayResult decay_curves(const ShearletSystem2D& sys, const GridFunction& f, const std::vector<std::size_t>& budgets);

}  // namespace anisoframe
