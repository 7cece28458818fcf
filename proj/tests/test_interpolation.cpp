#include <doctest.h>

#include <cmath>

#include "anisoframe/errors.hpp"
#include "anisoframe/interpolation.hpp"

using namespace anisoframe;

namespace {

CoeffSeq sample(std::uint64_t seed, int size) {
  SeqOptions o;
  o.min_size = size;
  o.max_size = size;
  std::mt19937_64 rng(seed);
  return random_sequence(rng, o);
}

const SpacePair& mixed_pair() {
  static const SpacePair pair{SpaceDesc::besov(0.2, 1, 1), SpaceDesc::lorentz(-0.3, 0.8, 0.7, 2)};
  return pair;
}

}  // namespace

TEST_CASE("K limits") {
  const CoeffSeq s = sample(1, 6);
  const KFunctional k(s, mixed_pair());
  CHECK(k(1e9) == doctest::Approx(k.norm_x()));
  CHECK(k(1e-9) == doctest::Approx(1e-9 * k.norm_y()));
}

TEST_CASE("identical spaces give min(1, t) times the norm") {
  const CoeffSeq s = sample(2, 8);
  SpaceDesc x = SpaceDesc::besov(0.4, 1.5, 1.5);
  const KFunctional k(s, {x, x});
  const double n = space_norm(s, x);
  for (double t = 1.0 / 64; t < 64; t *= 1.7) CHECK(k(t) == doctest::Approx(std::min(1.0, t) * n).epsilon(1e-14));
  // A scaled copy moves the corner.
  SpaceDesc y = x;
  y.scale = 4;
  const KFunctional ks(s, {x, y});
  for (double t = 1.0 / 64; t < 64; t *= 1.7) CHECK(ks(t) == doctest::Approx(std::min(1.0, 4 * t) * n).epsilon(1e-14));
}

TEST_CASE("K is monotone, K/t is nonincreasing, and the family is swap-symmetric") {
  for (std::uint64_t seed = 3; seed < 8; ++seed) {
    const CoeffSeq s = sample(seed, 7);
    const KFunctional k(s, mixed_pair());
    const KFunctional swapped(s, {mixed_pair().y, mixed_pair().x});
    double prev = 0, prev_ratio = kInf;
    for (double t = 1e-4; t < 1e4; t *= 1.3) {
      const double v = k(t);
      CHECK(v >= prev);
      CHECK(v / t <= prev_ratio * (1 + 1e-12));
      CHECK(v == doctest::Approx(t * swapped(1 / t)).epsilon(1e-12));
      prev = v;
      prev_ratio = v / t;
    }
  }
}

TEST_CASE("shrinking the boundary item never hurts") {
  const CoeffSeq s = sample(9, 6);
  const KFunctional plain(s, mixed_pair()), shrink(s, mixed_pair(), KOptions{true});
  for (double t = 0.01; t < 100; t *= 2.3) CHECK(shrink(t) <= plain(t) * (1 + 1e-15));
}

TEST_CASE("interpolation norm of zero and parameter checks") {
  CHECK(interp_norm({}, 0.5, 2, mixed_pair()).upper == 0);
  const CoeffSeq s = sample(4, 3);
  CHECK_THROWS_AS(interp_norm(s, 1.0, 2, mixed_pair()), ParameterError);
  CHECK_THROWS_AS(interp_norm(s, 0.5, 0, mixed_pair()), ParameterError);
}

TEST_CASE("identical-space constant") {
  CHECK(identical_space_constant(0.5, 1) == doctest::Approx(4));
  CHECK(identical_space_constant(0.25, 2) == doctest::Approx(std::sqrt(1 / 1.5 + 1 / 0.5)));
  CHECK(identical_space_constant(0.3, kInf) == 1);
}

TEST_CASE("band brackets the exact value for identical spaces") {
  const CoeffSeq s = sample(5, 8);
  const SpaceDesc x = SpaceDesc::besov(0, 1, 1);
  for (double theta : {0.2, 0.5, 0.8})
    for (double q : {0.7, 1.0, 3.0, kInf}) {
      const InterpBand b = interp_norm(s, theta, q, {x, x});
      const double exact = identical_space_constant(theta, q) * space_norm(s, x);
      CHECK(b.lower <= exact * (1 + 1e-12));
      CHECK(b.upper >= exact * (1 - 1e-12));
      CHECK(b.samples.size() == b.cells + 1);
    }
}

TEST_CASE("band narrows under grid refinement") {
  const CoeffSeq atom{{ShearIndex::at(1, 1, {0}, {0, 0}), 0.7}};
  InterpOptions coarse, fine;
  coarse.ratio_log2 = 0.5;
  fine.ratio_log2 = 0.125;
  const InterpBand a = interp_norm(atom, 0.4, 1.5, mixed_pair(), coarse);
  const InterpBand b = interp_norm(atom, 0.4, 1.5, mixed_pair(), fine);
  CHECK(b.upper - b.lower < a.upper - a.lower);
  CHECK(b.lower >= a.lower * (1 - 1e-12));
  CHECK(b.upper <= a.upper * (1 + 1e-12));
}

TEST_CASE("approximation-space descriptors evaluate") {
  const CoeffSeq s = sample(6, 5);
  const SpaceDesc a = SpaceDesc::approx(ErrorSpace::besov(0, 1), 1, 0.5, 1, Oracle::exact);
  CHECK(space_norm(s, a) == doctest::Approx(approx_space_norm(s, ErrorSpace::besov(0, 1), 1, {0.5, 1}, Oracle::exact)));
  CHECK(a.describe().find("A(xi=0.5") == 0);
  SpaceDesc bad = a;
  bad.scale = 0;
  CHECK_THROWS_AS(validate(bad), ParameterError);
}

TEST_CASE("reiteration with equal orders collapses to the identical-space constant") {
  SeqOptions o;
  o.min_size = 3;
  o.max_size = 6;
  const auto corpus = random_sequence_corpus(12, 8, o);
  ReiterationParams p;
  p.xi0 = p.xi1 = 0.5;
  p.theta = 0.5;
  const ReiterationReport r = theorem44_check(corpus, p);
  const double c1 = identical_space_constant(0.5, p.mu);
  CHECK(r.approx.ratio_min <= c1 * (1 + 1e-12));
  CHECK(r.approx.ratio_max >= c1 * (1 - 1e-12));
  CHECK(r.approx.width() < 1.2);
  const double cr = identical_space_constant(0.5, r.r);
  CHECK(r.besov.ratio_min <= cr * (1 + 1e-12));
  CHECK(r.besov.ratio_max >= cr * (1 - 1e-12));
  CHECK(r.besov.width() < 1.2);
}

TEST_CASE("reiteration bands are narrow and seed-stable") {
  SeqOptions o;
  o.min_size = 3;
  o.max_size = 8;
  const ReiterationParams p;
  const ReiterationReport a = theorem44_check(random_sequence_corpus(1, 20, o), p);
  const ReiterationReport b = theorem44_check(random_sequence_corpus(2, 20, o), p);
  CHECK(a.xi == doctest::Approx(0.55));
  CHECK(reiteration_stable(a.approx, b.approx, 10));
  CHECK(reiteration_stable(a.besov, b.besov, 10));
}
