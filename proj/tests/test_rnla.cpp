#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "anisoframe/errors.hpp"
#include "anisoframe/rnla.hpp"

using namespace anisoframe;

namespace {

struct Brute {
  std::vector<double> mass;  // per subset
  std::vector<double> error;
};

// Every kept subset, error measured by the sequence norm of what is left.
Brute enumerate(const CoeffSeq& s, const ErrorSpace& err, double beta) {
  std::vector<std::pair<ShearIndex, Complex>> items(s.begin(), s.end());
  Brute b;
  const std::size_t n = items.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double m = 0;
    CoeffSeq rest;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) {
        m += items[i].first.is_coarse() ? 1.0 : std::pow(cube_measure(items[i].first), beta);
      } else {
        rest.insert(items[i]);
      }
    }
    b.mass.push_back(m);
    b.error.push_back(error_norm(rest, err));
  }
  return b;
}

double brute_sigma(const Brute& b, double t) {
  double best = kInf;
  for (std::size_t i = 0; i < b.mass.size(); ++i)
    if (b.mass[i] <= t * (1 + 1e-12)) best = std::min(best, b.error[i]);
  return best;
}

std::vector<CoeffSeq> seqs(std::uint64_t seed, std::size_t n, int max_size, bool coarse = false) {
  SeqOptions o;
  o.max_size = max_size;
  o.include_coarse = coarse;
  return random_sequence_corpus(seed, n, o);
}

}  // namespace

TEST_CASE("exact sigma equals exhaustive enumeration") {
  for (const auto& s : seqs(101, 25, 10, true)) {
    for (const auto& [err, beta] : {std::pair{ErrorSpace::besov(0, 1), 1.0},
                                    {ErrorSpace::besov(0.4, 2), 0.5},
                                    {ErrorSpace::besov(-0.2, 0.7), 1.3}}) {
      const Brute b = enumerate(s, err, beta);
      std::vector<double> budgets = b.mass;
      for (double t : {0.0, 0.01, 0.3, 1.7}) budgets.push_back(t);
      for (double t : budgets) CHECK(sigma_exact(s, err, beta, t) == brute_sigma(b, t));
    }
  }
}

TEST_CASE("exact curve agrees with pointwise exact sigma") {
  for (const auto& s : seqs(7, 10, 9)) {
    const ErrorSpace err = ErrorSpace::besov(0.1, 1.5);
    const ApproxCurve c = sigma_curve(s, err, 0.8, Oracle::exact);
    REQUIRE(c.t.front() == 0);
    CHECK(c.sigma.back() == 0);
    for (std::size_t i = 0; i < c.t.size(); ++i) {
      CHECK(c.sigma[i] == sigma_exact(s, err, 0.8, c.t[i]));
      if (i > 0) CHECK(c.sigma[i] < c.sigma[i - 1]);
    }
  }
}

TEST_CASE("greedy never beats exact") {
  double worst = 1;
  for (const auto& s : seqs(19, 30, 10)) {
    const ErrorSpace err = ErrorSpace::besov(0, 1);
    const ApproxCurve ex = sigma_curve(s, err, 1, Oracle::exact);
    const ApproxCurve gr = sigma_curve(s, err, 1, Oracle::greedy);
    for (double t : gr.t) {
      CHECK(gr.at(t) >= ex.at(t));
      if (ex.at(t) > 0) worst = std::max(worst, gr.at(t) / ex.at(t));
      const Approximant a = greedy_approximant(s, err, 1, t);
      CHECK(a.error == gr.at(t));
      CHECK(a.mass <= t * (1 + 1e-12));
    }
  }
  CHECK(worst >= 1);
}

TEST_CASE("counting measure gives classical thresholding") {
  for (const auto& s : seqs(23, 20, 12)) {
    const ErrorSpace err = ErrorSpace::besov(0.3, 1.2);
    std::vector<double> v;
    for (const auto& [q, c] : s) v.push_back(std::pow(canonical_weight(q, 0.3, 1.2) * std::abs(c), 1.2));
    std::sort(v.rbegin(), v.rend());
    for (std::size_t n = 0; n <= s.size(); ++n) {
      double tail = 0;
      for (std::size_t i = n; i < v.size(); ++i) tail += v[i];
      const double expected = std::pow(tail, 1 / 1.2);
      CHECK(sigma_exact(s, err, 0, static_cast<double>(n)) == doctest::Approx(expected).epsilon(1e-13));
      CHECK(sigma_exact(s, err, 0, n + 0.5) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("approximation norm of a hand-made curve") {
  ApproxCurve c;
  c.t = {0, 1, 3};
  c.sigma = {2, 1, 0};
  // int_0^1 2 dt + int_1^3 1 dt with xi = mu = 1.
  CHECK(approx_norm_from_curve(c, {1, 1}) == doctest::Approx(4));
  // mu = 2, xi = 1: (int_0^1 4 t dt + int_1^3 t dt)^{1/2} = sqrt(2 + 4)
  CHECK(approx_norm_from_curve(c, {1, 2}) == doctest::Approx(std::sqrt(6.0)));
  // sup of t^{1/2} sigma(t): approached from the left at t = 1.
  CHECK(approx_norm_from_curve(c, {0.5, kInf}) == doctest::Approx(2));
  CHECK(jackson_sup(c, 0.5) == doctest::Approx(2));
  CHECK(approx_norm_from_curve(c, {0.25, kInf}) == doctest::Approx(2));
  CHECK(c.at(0.5) == 2);
  CHECK(c.at(1) == 1);
  CHECK(c.at(100) == 0);
  CHECK_THROWS_AS(approx_norm_from_curve(c, {0, 1}), ParameterError);
}

TEST_CASE("errors of the exact oracle") {
  SeqOptions o;
  o.min_size = 23;
  o.max_size = 23;
  o.max_scale = 6;
  o.window = 64;
  std::mt19937_64 rng(1);
  const CoeffSeq big = random_sequence(rng, o);
  REQUIRE(big.size() == 23);
  CHECK_THROWS_AS(sigma_exact(big, ErrorSpace::besov(0, 1), 1, 1), CapacityError);
  CHECK_NOTHROW(sigma_curve(big, ErrorSpace::besov(0, 1), 1, Oracle::greedy));
  const CoeffSeq small = seqs(1, 1, 3).front();
  CHECK_THROWS_AS(sigma_exact(small, ErrorSpace::tl({0, 1, 2}), 1, 1), ParameterError);
  CHECK_THROWS_AS(sigma_exact(small, ErrorSpace::besov(0, 1), 1, -1), ParameterError);
  CHECK(parse_oracle("greedy") == Oracle::greedy);
  CHECK_THROWS_AS(parse_oracle("fast"), ParameterError);
}

TEST_CASE("f-space errors go through the greedy oracle") {
  for (const auto& s : seqs(41, 5, 6)) {
    const ErrorSpace err = ErrorSpace::tl({0, 1, 2});
    const ApproxCurve c = sigma_curve(s, err, 1, Oracle::greedy);
    CHECK(c.sigma.front() == doctest::Approx(tl_norm(s, {0, 1, 2})));
    CHECK(c.sigma.back() == 0);
  }
}

TEST_CASE("single atoms reproduce the closed forms") {
  for (double mu : {0.5, 1.0, 2.0, kInf}) {
    JacksonBernsteinParams p;
    p.mu = mu;
    const std::vector<CoeffSeq> atoms{{{ShearIndex::at(1, 2, {1}, {0, 0}), Complex(0.3, 0.1)}},
                                      {{ShearIndex::at(2, 0, {0}, {1, 1}), 5.0}}};
    const JacksonBernsteinReport r = jackson_bernstein_check(atoms, p);
    CHECK(r.alpha == doctest::Approx(1));
    CHECK(r.beta == r.alpha);
    for (double v : r.jackson_ratios) CHECK(v == doctest::Approx(single_atom_jackson(r.r, mu)).epsilon(1e-9));
    for (double v : r.bernstein_ratios) CHECK(v == doctest::Approx(single_atom_bernstein(r.r, mu)).epsilon(1e-9));
  }
}

TEST_CASE("measure exponent follows the side when p1 != q1") {
  const std::vector<CoeffSeq> c = seqs(3, 4, 4);
  JacksonBernsteinParams p;
  p.q1 = 2;
  const double alpha = 1;  // defaults give alpha = 1
  p.side = BetaSide::jackson;
  CHECK(jackson_bernstein_check(c, p).beta == doctest::Approx(alpha - 1.0 / 6));
  p.side = BetaSide::bernstein;
  CHECK(jackson_bernstein_check(c, p).beta == doctest::Approx(alpha + 1.0 / 3));
  CHECK(jackson_bernstein_check(c, p).finite());
}
