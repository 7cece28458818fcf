// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "anisoframe/decay.hpp"
#include "anisoframe/democracy.hpp"
#include "anisoframe/frame2d.hpp"
#include "anisoframe/index_geometry.hpp"
#include "anisoframe/interpolation.hpp"
#include "anisoframe/rnla.hpp"
#include "anisoframe/seq_spaces.hpp"

using namespace anisoframe;

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;
  void need(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return b == 0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

Verdict frame_validity() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const ShearletSystem2D sys(SystemConfig{256, 3, 3, true, true, {}});
  const ParsevalReport pr = parseval_defect(sys);
  double worst_rt = 0, worst_energy = 0;
  for (unsigned long long seed = 1; seed <= 100; ++seed) {
    const GridFunction f = random_band_limited(256, sys.resolvable_radius(), seed, seed % 2 == 1);
    const BandCoefficients c = analyze_bands(f, sys);
    const GridFunction g = synthesize_bands(c, sys);
    double diff = 0;
    for (std::size_t i = 0; i < f.data.size(); ++i) diff += std::norm(f.data[i] - g.data[i]);
    const double e = f.norm_sq();
    worst_rt = std::max(worst_rt, std::sqrt(diff / static_cast<double>(f.data.size()) / e));
    worst_energy = std::max(worst_energy, rel(c.energy(), e));
  }
  const double secs = seconds_since(t0);
  v.need(pr.max() <= 1e-10, fmt("parseval defect %.2e over %zu points", pr.max(), pr.points));
  v.need(worst_rt <= 1e-8, fmt("round trip %.2e", worst_rt));
  v.need(worst_energy <= 1e-8, fmt("energy %.2e", worst_energy));
  v.need(secs <= 60, fmt("%.1f s", secs));
  return v;
}

Verdict tiling() {
  Verdict v;
  std::int64_t points = 0, violations = 0, layers = 0;
  auto run = [&](int d, int jmax) {
    const Box window{Point(d, Dyadic(-2)), Point(d, Dyadic(2))};
    std::int64_t bad = 0;
    for (int cone = 1; cone <= d; ++cone)
      for (int j = 0; j <= jmax; ++j)
        for (const auto& l : shears_at_scale(d, j)) {
          const PartitionReport r = partition_check(cone, j, l, window, {}, 0);
          points += r.points_checked;
          bad += r.violation_count;
          ++layers;
        }
    violations += bad;
    return bad;
  };
  const std::int64_t bad2 = run(2, 4), bad3 = run(3, 1);
  v.need(bad2 == 0 && bad3 == 0,
         fmt("partition d=2 j<=4, d=3 j<=1: %lld layers, %lld points, %lld violations", static_cast<long long>(layers),
             static_cast<long long>(points), static_cast<long long>(violations)));
  for (int d : {2, 3}) {
    std::string counts;
    bool ok = true;
    for (int j = 0; j <= 4; ++j) {
      const std::int64_t got = shear_count(d, j), want = (std::int64_t{1} << ((j + 1) * (d - 1))) + 1;
      ok = ok && got == want;
      counts += fmt("%s%lld/%lld", j ? "," : "", static_cast<long long>(got), static_cast<long long>(want));
    }
    v.need(ok, fmt("shear count d=%d (got/2^{(j+1)(d-1)}+1) %s", d, counts.c_str()));
  }
  return v;
}

Verdict norm_identities() {
  Verdict v;
  SeqOptions o;
  o.include_coarse = true;
  const auto seqs = random_sequence_corpus(301, 100, o);
  std::mt19937_64 rng(302);
  std::uniform_real_distribution<double> pd(0.5, 3), sd(-1, 1), td(0.3, 3), bd(-0.5, 1.5);
  double worst_bf = 0;
  for (const auto& c : seqs) {
    const SpaceParams par{sd(rng), pd(rng), 0};
    const SpaceParams pq{par.s, par.p, par.p};
    worst_bf = std::max(worst_bf, rel(tl_norm(c, pq), besov_norm(c, pq)));
  }
  v.need(worst_bf <= 1e-9, fmt("b=f at p=q: %.2e on %zu", worst_bf, seqs.size()));
  double worst_lemma = 0;
  for (int i = 0; i < 50; ++i) {
    const LemmaReport r = lemma_identification_check(seqs[i], sd(rng), td(rng), bd(rng));
    worst_lemma = std::max(worst_lemma, r.relative);
  }
  v.need(worst_lemma <= 1e-10, fmt("Lorentz/b identification: %.2e on 50", worst_lemma));
  // Weighted l^p closed form, summed independently.
  double worst_lp = 0;
  for (int i = 0; i < 100; ++i) {
    const double s = sd(rng), p = pd(rng), beta = bd(rng);
    const WeightSeq u = canonical_weights(seqs[i], s, p);
    double sum = 0;
    for (const auto& [q, c] : seqs[i]) sum += std::pow(std::abs(u.at(q) * c), p) * std::pow(cube_measure(q), beta);
    worst_lp = std::max(worst_lp, rel(lorentz_norm(seqs[i], u, beta, p, p), std::pow(sum, 1 / p)));
  }
  v.need(worst_lp <= 1e-14, fmt("Lorentz mu=p vs weighted l^p: %.2e", worst_lp));
  return v;
}

Verdict pointwise_sums() {
  Verdict v;
  const auto corpus = random_gamma_corpus(401, 200, GammaOptions{});
  std::mt19937_64 rng(402);
  for (double g : {0.2, 0.6}) {
    std::size_t samples = 0, violations = 0;
    double lo = kInf, hi = 0;
    for (const auto& gamma : corpus) {
      const Lemma31Report r = lemma31_check(gamma, g, sample_points_in(gamma, 1000, rng));
      samples += r.samples;
      violations += r.pass() ? 0 : 1;
      lo = std::min(lo, r.min_lower_ratio);
      hi = std::max(hi, r.max_upper_ratio);
    }
    v.need(violations == 0 && samples == 200 * 1000,
           fmt("gamma=%.1f: %zu points, %zu failing sets, lower ratio min %.3f, upper ratio max %.3f", g, samples,
               violations, lo, hi));
  }
  return v;
}

Verdict exact_democracy() {
  Verdict v;
  const auto corpus = random_gamma_corpus(501, 500, GammaOptions{});
  const std::vector<std::pair<SpaceParams, SpaceParams>> sets{
      {{0.1, 1.5, 1.5}, {0.5, 2, 2}}, {{0, 1, 1}, {0.5, 2, 2}}, {{0.3, 2, 2}, {-0.2, 1, 1}}};
  double worst = 0;
  for (const auto& [a, b] : sets)
    for (const auto& g : corpus) worst = std::max(worst, besov_democracy_exact(g, a, b).relative);
  v.need(worst <= 1e-10, fmt("identity max relative %.2e on 500 x 3", worst));
  const IndexSet witness{ShearIndex::at(1, 0, {0}, {0, 0}), ShearIndex::at(1, 1, {0}, {0, 0})};
  double least = kInf;
  for (const auto& [a, b] : sets) least = std::min(least, besov_democracy_exact(witness, a, b, 0.1).defect);
  v.need(least > 0, fmt("shifted exponent defect on two-scale witness %.3e", least));
  return v;
}

Verdict band_democracy() {
  Verdict v;
  const std::vector<std::pair<SpaceParams, SpaceParams>> sets{{{0, 1, 2}, {0.5, 2, 2}},
                                                              {{0.3, 2, 0.7}, {1, 1.5, 1.5}}};
  double worst = 0;
  for (const auto& [a, b] : sets)
    for (int j = 0; j <= 4; ++j)
      for (int n : {1, 2, 3, 5}) {
        const IndexSet g = block_family(2, 1, j, {1}, n);
        worst = std::max(worst, rel(tl_norm(normalized_indicator(g, b), a), block_closed_form(2, j, n, a, b)));
      }
  v.need(worst <= 1e-6, fmt("block family vs closed form %.2e", worst));
  const auto calib = random_gamma_corpus(601, 1000, GammaOptions{});
  const auto held = random_gamma_corpus(602, 1000, GammaOptions{});
  for (const auto& [a, b] : sets) {
    const DemocracyBand cb = democracy_band(calib, a, b), hb = democracy_band(held, a, b);
    v.need(band_within(hb, cb, 0.1),
           fmt("band lower [%.3f, %.3f] upper [%.3f, %.3f], held-out lower [%.3f, %.3f] upper [%.3f, %.3f]",
               cb.lower_min, cb.lower_max, cb.upper_min, cb.upper_max, hb.lower_min, hb.lower_max, hb.upper_min,
               hb.upper_max));
  }
  return v;
}

Verdict rnla_oracles() {
  Verdict v;
  SeqOptions o;
  o.max_size = 12;
  o.include_coarse = true;
  const auto corpus = random_sequence_corpus(701, 60, o);
  const std::vector<std::pair<ErrorSpace, double>> cases{
      {ErrorSpace::besov(0, 1), 1.0}, {ErrorSpace::besov(0.4, 2), 0.5}, {ErrorSpace::besov(-0.2, 0.7), 1.3}};
  std::size_t budgets = 0, mismatches = 0;
  double worst_ratio = 1;
  bool greedy_above = true;
  for (const auto& s : corpus) {
    std::vector<std::pair<ShearIndex, Complex>> items(s.begin(), s.end());
    const std::size_t n = items.size();
    for (const auto& [err, beta] : cases) {
      // Unpruned enumeration of every kept subset.
      std::vector<std::pair<double, double>> table;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double m = 0;
        CoeffSeq rest;
        for (std::size_t i = 0; i < n; ++i) {
          if ((mask >> i) & 1)
            m += items[i].first.is_coarse() ? 1.0 : std::pow(cube_measure(items[i].first), beta);
          else
            rest.insert(items[i]);
        }
        table.emplace_back(m, error_norm(rest, err));
      }
      std::vector<double> ts;
      for (const auto& [m, e] : table) ts.push_back(m);
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      for (double t : {0.01, 0.3, 1.7}) ts.push_back(t);
      const ApproxCurve greedy = sigma_curve(s, err, beta, Oracle::greedy);
      for (double t : ts) {
        double best = kInf;
        for (const auto& [m, e] : table)
          if (m <= t * (1 + 1e-12)) best = std::min(best, e);
        const double ex = sigma_exact(s, err, beta, t);
        ++budgets;
        if (ex != best) ++mismatches;
        const double gr = greedy.at(t);
        if (gr < ex) greedy_above = false;
        if (ex > 0) worst_ratio = std::max(worst_ratio, gr / ex);
      }
    }
  }
  v.need(mismatches == 0, fmt("exact vs enumeration: %zu of %zu budgets differ", mismatches, budgets));
  v.need(greedy_above, fmt("greedy >= exact, max ratio %.4f", worst_ratio));
  // Counting measure on one scale: keep the n largest coefficients in modulus.
  std::mt19937_64 rng(702);
  std::size_t checks = 0, off = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int j = static_cast<int>(rng() % 5);
    const std::int64_t bound = std::int64_t{1} << j;
    CoeffSeq s;
    const std::size_t size = 1 + rng() % 12;
    while (s.size() < size) {
      const int cone = 1 + static_cast<int>(rng() % 2);
      const std::int64_t l = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
      if (cone == 2 && std::abs(l) == bound) continue;
      const IntVec k{static_cast<std::int64_t>(rng() % 16), static_cast<std::int64_t>(rng() % 16)};
      s.emplace(ShearIndex::at(cone, j, {l}, k), Complex(std::exp(-5 * std::generate_canonical<double, 53>(rng)), 0));
    }
    const ErrorSpace err = ErrorSpace::besov(0.3, 1.2);
    std::vector<std::pair<double, ShearIndex>> ranked;
    for (const auto& [q, c] : s) ranked.emplace_back(std::abs(c), q);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; k <= s.size(); ++k) {
      CoeffSeq rest = s;
      for (std::size_t i = 0; i < k; ++i) rest.erase(ranked[i].second);
      ++checks;
      if (sigma_exact(s, err, 0, static_cast<double>(k)) != error_norm(rest, err)) ++off;
    }
  }
  v.need(off == 0, fmt("counting measure vs thresholding: %zu of %zu differ", off, checks));
  return v;
}

Verdict jackson_bernstein() {
  Verdict v;
  SeqOptions o;
  const auto calib = random_sequence_corpus(801, 300, o), held = random_sequence_corpus(802, 300, o);
  struct Set {
    double s1, p1, s2, p2, xi, mu;
  };
  for (const Set& s : {Set{0, 1, 0.5, 2, 0.5, 1}, Set{0.2, 2, 0.7, 1.5, 0.75, 2}, Set{0, 1, 0.5, 2, 0.5, kInf}}) {
    JacksonBernsteinParams p;
    p.s1 = s.s1;
    p.p1 = p.q1 = s.p1;
    p.s2 = s.s2;
    p.p2 = s.p2;
    p.xi = s.xi;
    p.mu = s.mu;
    const JacksonBernsteinReport a = jackson_bernstein_check(calib, p), b = jackson_bernstein_check(held, p);
    const bool ok = a.finite() && b.finite() && rel(b.jackson_sup, a.jackson_sup) <= 0.1 &&
                    rel(b.bernstein_sup, a.bernstein_sup) <= 0.1;
    v.need(ok, fmt("p1=%g mu=%g: jackson %.4f/%.4f bernstein %.4f/%.4f", s.p1, s.mu, a.jackson_sup, b.jackson_sup,
                   a.bernstein_sup, b.bernstein_sup));
  }
  double worst = 0;
  const std::vector<CoeffSeq> atoms{{{ShearIndex::at(1, 2, {1}, {0, 0}), Complex(0.3, 0.1)}},
                                    {{ShearIndex::at(2, 0, {0}, {1, 1}), 5.0}},
                                    {{ShearIndex::at(1, 4, {-3}, {2, 7}), 1e-3}}};
  for (double mu : {0.5, 1.0, 2.0, kInf}) {
    JacksonBernsteinParams p;
    p.mu = mu;
    const JacksonBernsteinReport r = jackson_bernstein_check(atoms, p);
    for (double x : r.jackson_ratios) worst = std::max(worst, rel(x, single_atom_jackson(r.r, mu)));
    for (double x : r.bernstein_ratios) worst = std::max(worst, rel(x, single_atom_bernstein(r.r, mu)));
  }
  v.need(worst <= 1e-9, fmt("single atoms %.2e", worst));
  return v;
}

Verdict interpolation() {
  Verdict v;
  SeqOptions o;
  o.min_size = 3;
  o.max_size = 8;
  const auto c1 = random_sequence_corpus(901, 50, o), c2 = random_sequence_corpus(902, 50, o);
  const SpaceDesc x = SpaceDesc::besov(0, 1, 1);
  bool inside = true;
  for (double theta : {0.25, 0.5, 0.75})
    for (double q : {1.0, 2.0, kInf})
      for (std::size_t i = 0; i < 5; ++i) {
        const InterpBand b = interp_norm(c1[i], theta, q, {x, x});
        const double exact = identical_space_constant(theta, q) * space_norm(c1[i], x);
        inside = inside && b.lower <= exact * (1 + 1e-12) && exact <= b.upper * (1 + 1e-12);
      }
  v.need(inside, "identical-space constant inside the grid band");
  const ReiterationParams p;
  const ReiterationReport a = theorem44_check(c1, p), b = theorem44_check(c2, p);
  v.need(reiteration_stable(a.approx, b.approx, 10),
         fmt("approximation spaces: widths %.3f, %.3f", a.approx.width(), b.approx.width()));
  v.need(reiteration_stable(a.besov, b.besov, 10),
         fmt("b-spaces: widths %.3f, %.3f", a.besov.width(), b.besov.width()));
  return v;
}

Verdict decay_demo() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const ShearletSystem2D sys(SystemConfig{256, 3, 3, true, true, {}});
  const GridFunction f = band_limit(cartoon_image(256), sys.resolvable_radius());
  std::vector<std::size_t> budgets{0};
  for (int e = 5; e <= 13; ++e) budgets.push_back(std::size_t{1} << e);
  budgets.push_back(sys.coefficient_count());
  budgets.push_back(256 * 256);
  const DecayResult r = decay_curves(sys, f, budgets);
  const double secs = seconds_since(t0);
  const double endpoint = r.frame.error[budgets.size() - 2] / r.energy;
  v.need(r.frame.monotone() && r.haar.monotone(), "both curves monotone");
  v.need(endpoint <= 1e-8, fmt("shearlet endpoint %.2e", endpoint));
  v.need(secs <= 120, fmt("%.1f s", secs));
  v.detail += fmt("; slopes shearlet %.3f Haar %.3f", r.frame.slope, r.haar.slope);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"frame validity", frame_validity},
      {"tiling exactness", tiling},
      {"norm identities", norm_identities},
      {"pointwise sum bounds", pointwise_sums},
      {"exact democracy", exact_democracy},
      {"band democracy", band_democracy},
      {"approximation oracles", rnla_oracles},
      {"Jackson and Bernstein", jackson_bernstein},
      {"interpolation", interpolation},
      {"decay demo", decay_demo},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
