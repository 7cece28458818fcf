#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "anisoframe/errors.hpp"
#include "anisoframe/frame2d.hpp"

using namespace anisoframe;

namespace {

// Order-3 ramp written out: x^4 (35 - 84x + 70x^2 - 20x^3).
double ramp3(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  return std::pow(x, 4) * (35 - 84 * x + 70 * x * x - 20 * x * x * x);
}

const ShearletSystem2D& small_system() {
  static const ShearletSystem2D sys(SystemConfig{64, 2, 3, true, true, {}});
  return sys;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("anisoframe_test_" + name);
}

}  // namespace

TEST_CASE("ramp matches the explicit polynomial and is symmetric") {
  const Window1D w(3);
  for (double x = -0.5; x <= 1.5; x += 1.0 / 64) {
    CHECK(w.ramp(x) == doctest::Approx(ramp3(x)).epsilon(1e-14));
    CHECK(w.ramp(x) + w.ramp(1 - x) == doctest::Approx(1).epsilon(1e-14));
  }
  CHECK_THROWS_AS(Window1D(0), ParameterError);
}

TEST_CASE("radial windows sum to one in squares over dyadic dilations") {
  const Window1D w(3);
  for (double om = 0.125; om < 200; om *= 1.093) {
    double s = 0;
    for (int j = 0; j < 12; ++j) s += std::pow(w.psi1(om * std::ldexp(1.0, -2 * j)), 2);
    CHECK(s == doctest::Approx(1).epsilon(1e-14));
  }
  // Below the first band the coarse window takes over along the axis.
  for (double r = 1.0 / 16; r <= 1.0 / 8; r += 1.0 / 512)
    CHECK(std::pow(w.coarse(r, 0), 2) + std::pow(w.psi1(r), 2) == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("angular windows sum to one in squares over integer shifts") {
  const Window1D w(3);
  for (double x = -3; x <= 3; x += 0.0371) {
    double s = 0;
    for (int l = -6; l <= 6; ++l) s += std::pow(w.psi2(x + l), 2);
    CHECK(s == doctest::Approx(1).epsilon(1e-14));
  }
}

TEST_CASE("band value at a hand-computed point") {
  const Window1D w(3);
  // psi1(1/4) = 1 and psi2(2 * (-1/4) + 1) = cos(pi/4) since the ramp is 1/2 at 1/2.
  CHECK(band_value(w, BandKey::cone_band(1, 1, -1), 1, -0.25) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(band_value(w, BandKey::cone_band(2, 1, -1), -0.25, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(band_value(w, BandKey::cone_band(1, 1, -1), 1, 0.25) == 0);
  CHECK(band_value(w, BandKey::coarse_band(), 0.01, -0.05) == 1);
}

TEST_CASE("shearing moves the angular window") {
  const Window1D w(3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-40, 40);
  for (int j = 1; j <= 3; ++j)
    for (int l = -(1 << j) + 1; l < (1 << j); ++l)
      for (int i = 0; i < 50; ++i) {
        const double x1 = u(rng), x2 = u(rng);
        CHECK(band_value(w, BandKey::cone_band(1, j, l), x1, x2) ==
              doctest::Approx(band_value(w, BandKey::cone_band(1, j, 0), x1, x2 - l * x1 / (1 << j))).epsilon(1e-12));
      }
}

TEST_CASE("band and coefficient counts") {
  const ShearletSystem2D sys(SystemConfig{256, 3, 3, true, true, {}});
  // One coarse band, then 2^{j+1}+1 shears in cone 1 and 2^{j+1}-1 in cone 2 per scale.
  std::size_t bands = 1, coeffs = 1;
  for (int j = 0; j <= 3; ++j) {
    const std::size_t per_scale = (std::size_t{1} << (j + 1)) + 1 + (std::size_t{1} << (j + 1)) - 1;
    bands += per_scale;
    coeffs += per_scale * (std::size_t{1} << (3 * j));
  }
  CHECK(sys.bands().size() == bands);
  CHECK(sys.coefficient_count() == coeffs);
  CHECK(bands == 61);
  CHECK(coeffs == 17477);
  CHECK(sys.resolvable_radius() == 16);
  CHECK_THROWS_AS(ShearletSystem2D(SystemConfig{100, 2, 3, true, true, {}}), ParameterError);
  CHECK_THROWS_AS(ShearletSystem2D(SystemConfig{32, 3, 3, true, true, {}}), ParameterError);
}

TEST_CASE("Parseval identity on the resolvable region") {
  const ParsevalReport r = parseval_defect(small_system());
  CHECK(r.points > 0);
  CHECK(r.max() < 1e-13);
}

TEST_CASE("round trip and energy on band-limited inputs") {
  const auto& sys = small_system();
  for (unsigned long long seed = 1; seed <= 5; ++seed) {
    const GridFunction f = random_band_limited(64, sys.resolvable_radius(), seed, seed % 2 == 0);
    const BandCoefficients c = analyze_bands(f, sys);
    const GridFunction g = synthesize_bands(c, sys);
    double diff = 0;
    for (std::size_t i = 0; i < f.data.size(); ++i) diff += std::norm(f.data[i] - g.data[i]);
    CHECK(std::sqrt(diff / f.data.size() / f.norm_sq()) < 1e-13);
    CHECK(c.energy() == doctest::Approx(f.norm_sq()).epsilon(1e-13));
  }
}

TEST_CASE("synthesis is the adjoint of analysis") {
  const auto& sys = small_system();
  const GridFunction f = random_band_limited(64, 20, 9, false);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  BandCoefficients c;
  for (std::size_t b = 0; b < sys.bands().size(); ++b) {
    c.bands.emplace_back();
    for (int i = 0; i < sys.grid_rows(b) * sys.grid_cols(b); ++i) c.bands.back().emplace_back(nd(rng), nd(rng));
  }
  const BandCoefficients a = analyze_bands(f, sys);
  Complex lhs = 0;
  for (std::size_t b = 0; b < a.bands.size(); ++b)
    for (std::size_t i = 0; i < a.bands[b].size(); ++i) lhs += a.bands[b][i] * std::conj(c.bands[b][i]);
  const GridFunction g = synthesize_bands(c, sys);
  Complex rhs = 0;
  for (std::size_t i = 0; i < f.data.size(); ++i) rhs += f.data[i] * std::conj(g.data[i]);
  rhs /= static_cast<double>(f.data.size());
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs) + 1e-14);
}

TEST_CASE("single atoms have norm at most one") {
  // Coarse bands at small N may hold no lattice frequencies, so some atoms vanish.
  const auto& sys = small_system();
  double largest = 0;
  for (std::size_t b = 0; b < sys.bands().size(); ++b) {
    CoeffSeq c{{sys.coefficient_index(b, 0, 0), 1.0}};
    const double e = synthesize(c, sys).norm_sq();
    CHECK(e <= 1 + 1e-12);
    if (sys.bands()[b].scale == 2) CHECK(e > 0);
    largest = std::max(largest, e);
  }
  CHECK(largest == doctest::Approx(1));
}

TEST_CASE("coefficient sequences convert both ways") {
  const auto& sys = small_system();
  const GridFunction f = random_band_limited(64, sys.resolvable_radius(), 17);
  const BandCoefficients a = analyze_bands(f, sys);
  const CoeffSeq seq = to_coeff_seq(a, sys);
  CHECK(seq.size() == sys.coefficient_count());
  const BandCoefficients back = from_coeff_seq(seq, sys);
  for (std::size_t b = 0; b < a.bands.size(); ++b) CHECK(back.bands[b] == a.bands[b]);
  // Unit shifts of the cube wrap onto the grid: x1 moves k by (rows, 0), x2 by (shear cols, cols).
  const std::size_t band = sys.band_position(BandKey::cone_band(1, 1, 1));
  const ShearIndex q = sys.coefficient_index(band, 1, 1);
  IntVec across = q.translate, up = q.translate;
  across[0] += sys.grid_rows(band);
  up[0] += sys.grid_cols(band);
  up[1] += sys.grid_cols(band);
  CHECK(sys.grid_position(band, across) == sys.grid_position(band, q.translate));
  CHECK(sys.grid_position(band, up) == sys.grid_position(band, q.translate));
  up[1] -= 1;
  CHECK(sys.grid_position(band, up) != sys.grid_position(band, q.translate));
  CHECK_THROWS_AS(sys.band_position(BandKey::cone_band(2, 1, 2)), InvalidIndex);
}

TEST_CASE("image files round-trip") {
  GridFunction f = GridFunction::zeros(8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) f(i, j) = (i * 8 + j) / 63.0;
  const auto csv = temp_file("grid.csv"), pgm = temp_file("grid.pgm");
  write_csv_grid(csv.string(), f);
  const GridFunction g = read_grid(csv.string());
  for (std::size_t i = 0; i < f.data.size(); ++i) CHECK(g.data[i] == f.data[i]);
  write_pgm(pgm.string(), f);
  const GridFunction h = read_grid(pgm.string());
  for (std::size_t i = 0; i < f.data.size(); ++i) CHECK(std::abs(h.data[i].real() - f.data[i].real()) <= 0.5 / 255 + 1e-12);
  std::filesystem::remove(csv);
  std::filesystem::remove(pgm);
  CHECK_THROWS_AS(read_grid(temp_file("missing.pgm").string()), FormatError);
}
