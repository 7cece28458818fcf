#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "anisoframe/errors.hpp"
#include "anisoframe/overlay.hpp"
#include "anisoframe/rnla.hpp"
#include "anisoframe/seq_spaces.hpp"

using namespace anisoframe;

namespace {

std::vector<CoeffSeq> corpus(std::uint64_t seed, std::size_t n, int max_size = 8, bool coarse = false) {
  SeqOptions o;
  o.max_size = max_size;
  o.include_coarse = coarse;
  return random_sequence_corpus(seed, n, o);
}

// Numerical quadrature of int_0^inf (t^{1/p} a*(t))^mu dt/t on a log grid, a* the decreasing
// rearrangement with respect to the masses.
double lorentz_quadrature(std::vector<std::pair<double, double>> a_mass, double p, double mu) {
  std::sort(a_mass.begin(), a_mass.end(), [](auto& l, auto& r) { return l.first > r.first; });
  std::vector<double> cum;
  double c = 0;
  for (auto& [a, m] : a_mass) cum.push_back(c += m);
  auto rearranged = [&](double t) {
    for (std::size_t i = 0; i < cum.size(); ++i)
      if (t < cum[i]) return a_mass[i].first;
    return 0.0;
  };
  // Integrate in u = log t with the midpoint rule, splitting at breakpoints.
  double total = 0;
  double lo = std::log(cum.front()) - 60;
  std::vector<double> edges{lo};
  for (double t : cum) edges.push_back(std::log(t));
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const int steps = 100000;
    const double h = (edges[k + 1] - edges[k]) / steps;
    for (int s = 0; s < steps; ++s) {
      const double u = edges[k] + (s + 0.5) * h;
      const double t = std::exp(u);
      total += std::pow(std::pow(t, 1.0 / p) * rearranged(t), mu) * h;
    }
  }
  return std::pow(total, 1.0 / mu);
}

}  // namespace

TEST_CASE("canonical weight") {
  const ShearIndex q = ShearIndex::at(1, 2, {1}, {0, 0});
  // |Q| = 2^-6
  CHECK(canonical_weight(q, 0.5, 2) == doctest::Approx(std::exp2(-6 * (-0.5 + 0.5 - 0.5))));
  CHECK(canonical_weight(ShearIndex::coarse({0, 0}), 3, 1) == 1);
}

TEST_CASE("b-norm by hand") {
  const CoeffSeq c{{ShearIndex::coarse({0, 0}), Complex(3, 4)},
                   {ShearIndex::at(1, 0, {0}, {0, 0}), 1.0},
                   {ShearIndex::at(1, 0, {0}, {1, 0}), Complex(0, -1)},
                   {ShearIndex::at(1, 1, {1}, {0, 0}), 2.0}};
  CHECK(besov_norm(c, {0, 2, 1}) == doctest::Approx(5 + std::sqrt(2.0) + 2));
  CHECK(besov_norm(c, {0, 2, kInf}) == doctest::Approx(5 + 2.0));
  CHECK(besov_norm(c, {0, 2, 2}) == doctest::Approx(5 + std::sqrt(6.0)));
  CHECK_THROWS_AS(besov_norm(c, {0, 0, 1}), ParameterError);
  CHECK_THROWS_AS(besov_norm(c, {0, kInf, 1}), ParameterError);
}

TEST_CASE("b and f coincide when p = q") {
  int n = 0;
  for (const auto& c : corpus(21, 40, 10, true)) {
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
      const SpaceParams par{0.3, p, p};
      CHECK(tl_norm(c, par) == doctest::Approx(besov_norm(c, par)).epsilon(1e-9));
      ++n;
    }
  }
  CHECK(n == 160);
}

TEST_CASE("single cube f-norm and overlapping copies") {
  const ShearIndex q = ShearIndex::at(2, 1, {-1}, {3, 1});
  // int g^p over one cube is w^p |Q|.
  CHECK(overlay_integral({{q, 2.0}}, 1.5, 0.7) == doctest::Approx(std::pow(2.0, 1.5) / 8).epsilon(1e-14));
  // Two equal cubes: g = (2 w^q)^{1/q}.
  CHECK(overlay_integral({{q, 1.0}, {q, 1.0}}, 2, 1) == doctest::Approx(4.0 / 8).epsilon(1e-14));
  CHECK(overlay_integral({{q, 1.0}, {q, 3.0}}, 1, kInf) == doctest::Approx(3.0 / 8).epsilon(1e-14));
  CHECK(overlay_integral({}, 1, 1) == 0);
}

TEST_CASE("exact overlay agrees with a fine grid") {
  for (const auto& c : corpus(5, 12, 6)) {
    std::vector<WeightedCube> cubes;
    for (const auto& [q, v] : c) cubes.push_back({q, std::abs(v)});
    for (auto [p, q] : {std::pair{1.0, 2.0}, {2.0, 0.5}, {1.5, kInf}}) {
      const double exact = overlay_integral(cubes, p, q);
      const GridIntegral g = grid_integral(cubes, p, q, 4096);
      CHECK(g.value == doctest::Approx(exact).epsilon(2e-3));
    }
  }
}

TEST_CASE("f-norm of three dimensional sequences is refused by the exact method") {
  const CoeffSeq c{{ShearIndex::at(1, 0, {0, 0}, {0, 0, 0}), 1.0}};
  CHECK_THROWS_AS(tl_norm(c, {0, 1, 2}), Unsupported);
}

TEST_CASE("Lorentz norm with mu = p is a weighted l^p norm") {
  for (const auto& c : corpus(8, 30)) {
    const WeightSeq u = canonical_weights(c, 0.2, 1.5);
    for (double beta : {0.0, 0.4, 1.0})
      for (double p : {0.5, 1.0, 2.5}) {
        double sum = 0;
        for (const auto& [q, v] : c) sum += std::pow(std::abs(u.at(q) * v), p) * std::pow(cube_measure(q), beta);
        CHECK(lorentz_norm(c, u, beta, p, p) == doctest::Approx(std::pow(sum, 1.0 / p)).epsilon(1e-14));
      }
  }
}

TEST_CASE("Lorentz norm against quadrature of the rearrangement") {
  for (const auto& c : corpus(9, 6, 5)) {
    std::vector<std::pair<double, double>> am;
    for (const auto& [q, v] : c) am.emplace_back(std::abs(v), std::pow(cube_measure(q), 0.7));
    for (auto [p, mu] : {std::pair{1.0, 2.0}, {2.0, 0.5}, {0.7, 1.3}})
      CHECK(lorentz_norm(c, {}, 0.7, p, mu) == doctest::Approx(lorentz_quadrature(am, p, mu)).epsilon(1e-6));
    // mu = inf: sup of t^{1/p} a*(t), attained at the right ends.
    double cum = 0, best = 0;
    std::sort(am.begin(), am.end(), [](auto& l, auto& r) { return l.first > r.first; });
    for (auto [a, m] : am) best = std::max(best, a * std::pow(cum += m, 1.0 / 1.5));
    CHECK(lorentz_norm(c, {}, 0.7, 1.5, kInf) == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("Lorentz and b-space identification") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> s_dist(-1, 1), tau_dist(0.3, 3), beta_dist(-0.5, 1.5);
  const auto seqs = corpus(31, 25, 10, true);
  for (const auto& c : seqs) {
    const LemmaReport r = lemma_identification_check(c, s_dist(rng), tau_dist(rng), beta_dist(rng));
    CHECK(r.pass);
    CHECK(r.relative <= 1e-10);
  }
}

TEST_CASE("parameter validation") {
  const CoeffSeq c{{ShearIndex::at(1, 0, {0}, {0, 0}), 1.0}};
  CHECK_THROWS_AS(lorentz_norm(c, {}, 0, 0, 1), ParameterError);
  CHECK_THROWS_AS(lorentz_norm(c, {}, 0, 1, -1), ParameterError);
  CHECK_THROWS_AS(tl_norm(c, {0, 1, 0}), ParameterError);
  CHECK_THROWS_AS(lemma_identification_check(c, 0, kInf, 0), ParameterError);
}
