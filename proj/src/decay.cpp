#include "anisoframe/decay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "anisoframe/errors.hpp"

namespace anisoframe {

namespace {

void haar_1d(double* x, std::size_t stride, int n, bool forward, std::vector<double>& tmp) {
  const double r = std::numbers::sqrt2 / 2;
  tmp.resize(n);
  if (forward) {
    for (int len = n; len > 1; len /= 2) {
      for (int i = 0; i < len / 2; ++i) {
        const double a = x[(2 * i) * stride], b = x[(2 * i + 1) * stride];
        tmp[i] = (a + b) * r;
        tmp[len / 2 + i] = (a - b) * r;
      }
      for (int i = 0; i < len; ++i) x[i * stride] = tmp[i];
    }
  } else {
    for (int len = 2; len <= n; len *= 2) {
      for (int i = 0; i < len / 2; ++i) {
        const double s = x[i * stride], d = x[(len / 2 + i) * stride];
        tmp[2 * i] = (s + d) * r;
        tmp[2 * i + 1] = (s - d) * r;
      }
      for (int i = 0; i < len; ++i) x[i * stride] = tmp[i];
    }
  }
}

std::vector<double> haar2d(std::vector<double> x, int n, bool forward) {
  if (n < 1 || (n & (n - 1)) != 0) throw ParameterError("Haar transform needs a power-of-two size");
  if (x.size() != static_cast<std::size_t>(n) * n) throw ParameterError("Haar input has the wrong size");
  std::vector<double> tmp;
  for (int i = 0; i < n; ++i) haar_1d(x.data() + static_cast<std::size_t>(i) * n, 1, n, forward, tmp);
  for (int j = 0; j < n; ++j) haar_1d(x.data() + j, n, n, forward, tmp);
  return x;
}

double fit_slope(const DecayCurve& c, std::size_t full) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < c.budget.size(); ++i) {
    if (c.budget[i] == 0 || c.budget[i] >= full || !(c.error[i] > 0)) continue;
    lx.push_back(std::log(static_cast<double>(c.budget[i])));
    ly.push_back(std::log(c.error[i]));
  }
  if (lx.size() < 2) return 0;
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

// Positions sorted by decreasing magnitude, stable.
std::vector<std::size_t> magnitude_order(const std::vector<double>& mag) {
  std::vector<std::size_t> order(mag.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  return order;
}

}  // namespace

GridFunction cartoon_image(int n) {
  GridFunction f = GridFunction::zeros(n);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const double x = static_cast<double>(i1) / n, y = static_cast<double>(i2) / n;
      const double dx = x - 0.5, dy = y - 0.5;
      double v = 0.2 + 0.1 * std::cos(2 * std::numbers::pi * x) * std::cos(2 * std::numbers::pi * y);
      if (dx * dx + dy * dy < 1.0 / 16) v = 0.8 + 1.5 * dx * dx - 0.6 * dy + 0.8 * dx * dy;
      f(i1, i2) = v;
    }
  return f;
}

std::vector<double> haar2d_forward(const std::vector<double>& x, int n) { return haar2d(x, n, true); }
std::vector<double> haar2d_inverse(const std::vector<double>& c, int n) { return haar2d(c, n, false); }

bool DecayCurve::monotone() const {
  for (std::size_t i = 1; i < error.size(); ++i)
    if (error[i] > error[i - 1]) return false;
  return true;
}

DecayResult decay_curves(const ShearletSystem2D& sys, const GridFunction& f, const std::vector<std::size_t>& budgets) {
  if (f.n != sys.n()) throw ParameterError("image size does not match the system");
  DecayResult out;
  out.n = f.n;
  out.radius = sys.resolvable_radius();
  out.energy = f.norm_sq();
  out.frame_coefficients = sys.coefficient_count();

  const BandCoefficients coeffs = analyze_bands(f, sys);
  std::vector<double> mag;
  for (const auto& band : coeffs.bands)
    for (const auto& v : band) mag.push_back(std::abs(v));
  const auto frame_order = magnitude_order(mag);

  const int n = f.n;
  std::vector<double> real(f.data.size());
  for (std::size_t i = 0; i < real.size(); ++i) real[i] = f.data[i].real();
  const std::vector<double> haar = haar2d_forward(real, n);
  std::vector<double> haar_mag(haar.size());
  for (std::size_t i = 0; i < haar.size(); ++i) haar_mag[i] = std::abs(haar[i]);
  const auto haar_order = magnitude_order(haar_mag);

  for (std::size_t budget : budgets) {
    BandCoefficients kept;
    for (const auto& band : coeffs.bands) kept.bands.emplace_back(band.size(), Complex{});
    const std::size_t take = std::min(budget, frame_order.size());
    std::vector<char> keep(mag.size(), 0);
    for (std::size_t i = 0; i < take; ++i) keep[frame_order[i]] = 1;
    std::size_t flat = 0;
    for (std::size_t b = 0; b < coeffs.bands.size(); ++b)
      for (std::size_t k = 0; k < coeffs.bands[b].size(); ++k, ++flat)
        if (keep[flat]) kept.bands[b][k] = coeffs.bands[b][k];
    const GridFunction approx = synthesize_bands(kept, sys);
    double err = 0;
    for (std::size_t i = 0; i < f.data.size(); ++i) err += std::norm(f.data[i] - approx.data[i]);
    out.frame.budget.push_back(budget);
    out.frame.error.push_back(err / static_cast<double>(f.data.size()));

    // Orthonormal basis: the error is the energy of the dropped coefficients.
    double dropped = 0;
    for (std::size_t i = std::min(budget, haar_order.size()); i < haar_order.size(); ++i)
      dropped += haar[haar_order[i]] * haar[haar_order[i]];
    out.haar.budget.push_back(budget);
    out.haar.error.push_back(dropped / static_cast<double>(f.data.size()));
  }
  out.frame.slope = fit_slope(out.frame, out.frame_coefficients);
  out.haar.slope = fit_slope(out.haar, haar.size());
  return out;
}

}  // namespace anisoframe
