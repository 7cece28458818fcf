#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "anisoframe/coeff_seq.hpp"

namespace anisoframe {

// N x N complex samples on the unit torus. data[i1 * n + i2] = f(i1 / n, i2 / n);
// the first array index runs along the first coordinate.
struct GridFunction {
  int n = 0;
  std::vector<Complex> data;

  static GridFunction zeros(int n);
  Complex& operator()(int i1, int i2) { return data[static_cast<std::size_t>(i1) * n + i2]; }
  const Complex& operator()(int i1, int i2) const { return data[static_cast<std::size_t>(i1) * n + i2]; }
  double norm_sq() const;  // (1/N^2) sum |f|^2
};

// Frequency windows built from a polynomial ramp with `order` vanishing derivatives at both ends.
class Window1D {
 public:
  explicit Window1D(int order = 3);

  int order() const { return order_; }
  double ramp(double x) const;
  double psi1(double w) const;
  double psi2(double w) const;
  double coarse(double xi1, double xi2) const;

  static constexpr double kPsi1Inner = 1.0 / 16;
  static constexpr double kPsi1Outer = 0.5;
  static constexpr double kPsi2Radius = 1.0;
  static constexpr double kCoarseFlat = 1.0 / 16;
  static constexpr double kCoarseOuter = 1.0 / 8;

 private:
  int order_;
  std::vector<double> coef_;  // ramp(x) = x^{order+1} * sum coef_k (1-x)^k
};

Window1D build_windows(int order);

struct BandKey {
  bool coarse = false;
  int cone = 0;
  int scale = 0;
  int shear = 0;

  static BandKey coarse_band() { return BandKey{true, 0, 0, 0}; }
  static BandKey cone_band(int cone, int scale, int shear) { return BandKey{false, cone, scale, shear}; }
  bool is_seam() const;
  std::string label() const;
  friend auto operator<=>(const BandKey& a, const BandKey& b) {
    // Coarse first, matching the ShearIndex order.
    if (auto c = b.coarse <=> a.coarse; c != 0) return c;
    if (auto c = a.cone <=> b.cone; c != 0) return c;
    if (auto c = a.scale <=> b.scale; c != 0) return c;
    return a.shear <=> b.shear;
  }
  friend bool operator==(const BandKey&, const BandKey&) = default;
};

// Spectrum of a band at a continuous frequency. Bands with |shear| = 2^j live in cone 1 and
// switch to the cone-2 profile across the diagonal.
double band_value(const Window1D& w, const BandKey& band, double xi1, double xi2);

struct SystemConfig {
  int n = 256;
  int max_scale = 3;
  int window_order = 3;
  bool include_coarse = true;
  bool include_cones = true;
  std::vector<BandKey> omitted;
};

class ShearletSystem2D {
 public:
  explicit ShearletSystem2D(const SystemConfig& cfg);
  ~ShearletSystem2D();
  ShearletSystem2D(const ShearletSystem2D&);
  ShearletSystem2D& operator=(const ShearletSystem2D&);

  int n() const;
  int max_scale() const;
  const Window1D& windows() const;
  const std::vector<BandKey>& bands() const;
  bool has_band(const BandKey& b) const;
  std::size_t band_position(const BandKey& b) const;  // throws InvalidIndex if absent
  // Largest sup-norm radius on which the full system sums to one.
  double resolvable_radius() const;
  std::size_t coefficient_count() const;

  // Translate grid of a band: rows x cols sample points (a / rows, b / cols).
  int grid_rows(std::size_t band) const;
  int grid_cols(std::size_t band) const;
  ShearIndex coefficient_index(std::size_t band, int a, int b) const;
  // Canonical grid position of an arbitrary translate in the band; returns a * cols + b.
  std::size_t grid_position(std::size_t band, const IntVec& k) const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<Impl> impl_;
};

// N x N spectrum in FFT index order (index u maps to frequency u or u - N).
std::vector<double> band_spectrum(const ShearletSystem2D& sys, const BandKey& band);
std::vector<double> band_spectrum(const ShearletSystem2D& sys, int cone, int scale, int shear);

struct ParsevalReport {
  double interior = 0;  // points touched by no seam band
  double seam = 0;
  double radius = 0;
  std::size_t points = 0;
  double max() const { return interior > seam ? interior : seam; }
};

// max |1 - sum |spectrum|^2| over lattice points with sup-norm <= radius (default: resolvable radius).
ParsevalReport parseval_defect(const ShearletSystem2D& sys);
ParsevalReport parseval_defect(const ShearletSystem2D& sys, double radius);

// Coefficients as one array per band, laid out on the band's translate grid.
struct BandCoefficients {
  std::vector<std::vector<Complex>> bands;
  double energy() const;
};

BandCoefficients analyze_bands(const GridFunction& f, const ShearletSystem2D& sys);
GridFunction synthesize_bands(const BandCoefficients& c, const ShearletSystem2D& sys);
CoeffSeq to_coeff_seq(const BandCoefficients& c, const ShearletSystem2D& sys);
BandCoefficients from_coeff_seq(const CoeffSeq& c, const ShearletSystem2D& sys);

CoeffSeq analyze(const GridFunction& f, const ShearletSystem2D& sys);
GridFunction synthesize(const CoeffSeq& c, const ShearletSystem2D& sys);

// Random function whose spectrum is supported on sup-norm <= radius.
GridFunction random_band_limited(int n, double radius, unsigned long long seed, bool real_valued = true);
// Zeroes every frequency outside the sup-norm ball.
GridFunction band_limit(const GridFunction& f, double radius);

// Unnormalized 2-D FFTs (sign -1 forward, +1 backward).
std::vector<Complex> fft2(const std::vector<Complex>& x, int rows, int cols, bool forward);

// Image I/O. PGM samples are scaled to [0, 1]; CSV holds the real part, N rows of N values.
GridFunction read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GridFunction& f, int maxval = 255);
GridFunction read_csv_grid(const std::string& path);
void write_csv_grid(const std::string& path, const GridFunction& f);
GridFunction read_grid(const std::string& path);  // by extension

}  // namespace anisoframe
