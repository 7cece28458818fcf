#include "anisoframe/democracy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "anisoframe/errors.hpp"
#include "anisoframe/parallel.hpp"

namespace anisoframe {

namespace {

constexpr int kPointBits = 12;

double cube_measure_pow(const ShearIndex& q, double e) {
  return std::exp2(-static_cast<double>((q.dim() + 1) * q.scale) * e);
}

void require_cone_only(const IndexSet& gamma) {
  for (const auto& q : gamma)
    if (q.is_coarse()) throw ParameterError("index set must not contain coarse indices");
}

double critical(int d) { return static_cast<double>(d - 1) / (d + 1); }

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

IndexSet random_gamma(std::mt19937_64& rng, const GammaOptions& opt) {
  if (opt.dim < 1 || opt.max_scale < 0 || opt.window < 1 || opt.min_size < 1 || opt.max_size < opt.min_size)
    throw ParameterError("bad random index-set options");
  const int e = 2 * opt.max_scale + 2;
  const std::int64_t span = opt.window << e;
  std::uniform_int_distribution<std::int64_t> coord(0, span - 1);
  std::uniform_int_distribution<std::int64_t> jitter(-(std::int64_t{1} << (e - 1)), std::int64_t{1} << (e - 1));
  std::uniform_int_distribution<int> size_dist(opt.min_size, opt.max_size);
  std::uniform_int_distribution<int> cone_dist(1, opt.dim);
  std::uniform_int_distribution<int> scale_dist(0, opt.max_scale);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<IntVec> anchors(static_cast<std::size_t>(std::max(1, opt.anchors)), IntVec(opt.dim));
  for (auto& a : anchors)
    for (auto& c : a) c = coord(rng);
  std::uniform_int_distribution<std::size_t> pick(0, anchors.size() - 1);

  const int target = size_dist(rng);
  IndexSet gamma;
  int attempts = 0;
  while (static_cast<int>(gamma.size()) < target && attempts++ < 50 * target) {
    IntVec x(opt.dim);
    if (unit(rng) < opt.fresh_point) {
      for (auto& c : x) c = coord(rng);
    } else {
      const auto& a = anchors[pick(rng)];
      for (int c = 0; c < opt.dim; ++c) x[c] = std::clamp<std::int64_t>(a[c] + jitter(rng), 0, span - 1);
    }
    const int cone = cone_dist(rng);
    const int j = scale_dist(rng);
    std::uniform_int_distribution<std::int64_t> shear_dist(-(std::int64_t{1} << j), std::int64_t{1} << j);
    IntVec shear(opt.dim - 1);
    for (auto& l : shear) l = shear_dist(rng);
    ShearIndex idx = ShearIndex::at(cone, j, shear, IntVec(opt.dim, 0));
    const IntMatrix m = forward_map(idx);
    for (int r = 0; r < opt.dim; ++r) {
      __int128 acc = 0;
      for (int c = 0; c < opt.dim; ++c) acc += static_cast<__int128>(m(r, c)) * x[c];
      __int128 q = acc >> e;  // floor division by 2^e
      idx.translate[r] = static_cast<std::int64_t>(q);
    }
    gamma.insert(std::move(idx));
  }
  return gamma;
}

std::vector<IndexSet> random_gamma_corpus(std::uint64_t seed, std::size_t count, const GammaOptions& opt) {
  std::mt19937_64 rng(seed);
  std::vector<IndexSet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_gamma(rng, opt));
  return out;
}

std::vector<Point> sample_points_in(const IndexSet& gamma, std::size_t count, std::mt19937_64& rng) {
  std::vector<Point> out;
  if (gamma.empty()) return out;
  std::vector<Cube> cubes;
  for (const auto& q : gamma) cubes.push_back(cube_of(q));
  std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
  std::uniform_int_distribution<std::int64_t> frac(0, (std::int64_t{1} << kPointBits) - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const Cube& q = cubes[pick(rng)];
    Point x = q.origin;
    for (int c = 0; c < q.dim; ++c) {
      const Dyadic y = Dyadic::from_ratio(frac(rng), kPointBits);
      for (int r = 0; r < q.dim; ++r) x[r] += y * q.edges[c][r];
    }
    out.push_back(std::move(x));
  }
  return out;
}

IndexSet block_family(int dim, int cone, int j, const IntVec& shear, int n) {
  if (n < 1) throw ParameterError("block side must be positive");
  IndexSet out;
  IntVec k(dim, 0);
  while (true) {
    out.insert(ShearIndex::at(cone, j, shear, k));
    int pos = dim - 1;
    while (pos >= 0 && k[pos] == n - 1) k[pos--] = 0;
    if (pos < 0) break;
    ++k[pos];
  }
  return out;
}

double s_gamma(const IndexSet& gamma, double g, const Point& x) {
  double sum = 0;
  for (const auto& q : gamma)
    if (cube_of(q).contains(x)) sum += q.is_coarse() ? 1.0 : cube_measure_pow(q, g);
  return sum;
}

double lemma31_constant(int dim, double g) {
  const double e = std::abs((dim + 1) * g - (dim - 1));
  if (e == 0) throw ParameterError("gamma equals the critical exponent (d-1)/(d+1)");
  return dim * std::pow(3.0, dim - 1) / (1.0 - std::exp2(-e));
}

Lemma31Report lemma31_check(const IndexSet& gamma, double g, const std::vector<Point>& samples) {
  require_cone_only(gamma);
  Lemma31Report rep;
  rep.gamma = g;
  rep.dim = gamma.empty() ? (samples.empty() ? 2 : static_cast<int>(samples.front().size())) : gamma.begin()->dim();
  const int d = rep.dim;
  const double crit = critical(d);
  rep.regime = g > crit ? 'a' : 'b';
  rep.constant = lemma31_constant(d, g);
  rep.min_lower_ratio = kInf;
  std::vector<std::pair<const ShearIndex*, Cube>> cubes;
  for (const auto& q : gamma) cubes.emplace_back(&q, cube_of(q));
  for (const auto& x : samples) {
    double s = 0;
    int extreme = -1;
    for (const auto& [q, cube] : cubes) {
      if (!cube.contains(x)) continue;
      s += cube_measure_pow(*q, g);
      if (extreme < 0 || (rep.regime == 'a' ? q->scale < extreme : q->scale > extreme)) extreme = q->scale;
    }
    if (extreme < 0) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    const double log2p = -static_cast<double>((d + 1) * extreme);
    const double lower = std::exp2(log2p * g);
    const double upper = rep.constant * std::exp2(log2p * (g - crit));
    if (s < lower) ++rep.lower_violations;
    if (s > upper * (1 + 1e-12)) ++rep.upper_violations;
    rep.min_lower_ratio = std::min(rep.min_lower_ratio, s / lower);
    rep.max_upper_ratio = std::max(rep.max_upper_ratio, s / upper);
  }
  if (rep.samples == 0) rep.min_lower_ratio = 0;
  return rep;
}

double democracy_alpha(const SpaceParams& par1, const SpaceParams& par2) {
  return par1.p * (par2.s - 1.0 / par2.p - par1.s + 1.0 / par1.p);
}

CoeffSeq normalized_indicator(const IndexSet& gamma, const SpaceParams& par2) {
  validate(par2);
  CoeffSeq c;
  for (const auto& q : gamma) c.emplace_hint(c.end(), q, 1.0 / canonical_weight(q, par2.s, par2.p));
  return c;
}

DemocracyReport democracy_ratio(const IndexSet& gamma, const SpaceParams& par1, const SpaceParams& par2) {
  validate(par1);
  validate(par2);
  if (par1.p == par1.q) throw ParameterError("p1 = q1: use besov_democracy_exact");
  require_cone_only(gamma);
  DemocracyReport rep;
  rep.size = gamma.size();
  rep.alpha = democracy_alpha(par1, par2);
  if (gamma.empty()) return rep;
  const int d = gamma.begin()->dim();
  const double q1 = par1.q;
  const double shrink = std::isinf(q1) ? 0.0 : par1.p * critical(d) / q1;
  rep.norm = tl_norm(normalized_indicator(gamma, par2), par1);
  rep.nu_lower = measure_nu(gamma, rep.alpha + critical(d));
  rep.nu_upper = measure_nu(gamma, rep.alpha - shrink);
  if (!std::isfinite(rep.nu_upper)) throw ParameterError("infinite measure");
  rep.lower_ratio = rep.norm / std::pow(rep.nu_lower, 1.0 / par1.p);
  rep.upper_ratio = rep.norm / std::pow(rep.nu_upper, 1.0 / par1.p);
  return rep;
}

DemocracyBand democracy_band(const std::vector<IndexSet>& corpus, const SpaceParams& par1, const SpaceParams& par2,
                             std::vector<DemocracyReport>* reports) {
  std::vector<DemocracyReport> reps(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) { reps[i] = democracy_ratio(corpus[i], par1, par2); });
  DemocracyBand band;
  band.lower_min = band.upper_min = kInf;
  for (const auto& r : reps) {
    if (r.size == 0) continue;
    ++band.size;
    band.lower_min = std::min(band.lower_min, r.lower_ratio);
    band.lower_max = std::max(band.lower_max, r.lower_ratio);
    band.upper_min = std::min(band.upper_min, r.upper_ratio);
    band.upper_max = std::max(band.upper_max, r.upper_ratio);
  }
  if (reports) *reports = std::move(reps);
  return band;
}

bool band_within(const DemocracyBand& held, const DemocracyBand& calibrated, double drift) {
  return held.lower_min >= (1 - drift) * calibrated.lower_min && held.upper_max <= (1 + drift) * calibrated.upper_max;
}

BesovDemocracyReport besov_democracy_exact(const IndexSet& gamma, const SpaceParams& par1, const SpaceParams& par2,
                                           double alpha_shift) {
  validate(par1);
  validate(par2);
  if (par1.p != par1.q) throw ParameterError("exact democracy needs p1 = q1");
  require_cone_only(gamma);
  BesovDemocracyReport rep;
  rep.norm = besov_norm(normalized_indicator(gamma, par2), par1);
  // nu_alpha from exact per-scale counts.
  std::map<std::pair<int, int>, std::int64_t> counts;  // (dim, scale) -> count
  for (const auto& q : gamma) ++counts[{q.dim(), q.scale}];
  const double alpha = democracy_alpha(par1, par2) + alpha_shift;
  double nu = 0;
  for (const auto& [key, n] : counts)
    nu += static_cast<double>(n) * std::exp2(-static_cast<double>((key.first + 1) * key.second) * alpha);
  rep.nu_root = std::pow(nu, 1.0 / par1.p);
  rep.defect = std::abs(rep.norm - rep.nu_root);
  const double scale = std::max(rep.norm, rep.nu_root);
  rep.relative = scale > 0 ? rep.defect / scale : 0.0;
  return rep;
}

double block_closed_form(int dim, int j, int n, const SpaceParams& par1, const SpaceParams& par2) {
  const double log2q = -static_cast<double>(j * (dim + 1));
  const double level = par2.s - par1.s - 1.0 / par2.p;  // gamma / q1
  return std::exp2(log2q * level) * std::pow(std::pow(n, dim) * std::exp2(log2q), 1.0 / par1.p);
}

AlphaScanReport converse_alpha_scan(const SpaceParams& par1, const SpaceParams& par2, int j_min, int j_max,
                                    const std::vector<int>& n_values, const std::vector<double>& alphas) {
  validate(par1);
  validate(par2);
  if (par1.p == par1.q) throw ParameterError("converse scan needs p1 != q1");
  if (j_min < 0 || j_max <= j_min) throw ParameterError("need at least two scales");
  if (n_values.empty() || alphas.size() < 2) throw ParameterError("need block sizes and at least two alpha values");
  constexpr int d = 2;
  AlphaScanReport rep;
  rep.alpha0 = democracy_alpha(par1, par2);
  const double crit = critical(d);
  const double shrink = std::isinf(par1.q) ? 0.0 : par1.p * crit / par1.q;
  rep.proof_lo = rep.alpha0 - crit;
  rep.proof_hi = rep.alpha0 + shrink;
  rep.statement_lo = rep.alpha0 - shrink;
  rep.statement_hi = rep.alpha0 + crit;

  struct Block {
    int j, n;
    double norm;
    IndexSet gamma;
  };
  std::vector<Block> blocks;
  for (int n : n_values)
    for (int j = j_min; j <= j_max; ++j) blocks.push_back({j, n, 0, block_family(d, 1, j, {1}, n)});
  parallel_for(blocks.size(), [&](std::size_t i) {
    blocks[i].norm = tl_norm(normalized_indicator(blocks[i].gamma, par2), par1);
  });
  for (const auto& b : blocks) {
    const double cf = block_closed_form(d, b.j, b.n, par1, par2);
    rep.block_max_rel_error = std::max(rep.block_max_rel_error, std::abs(b.norm - cf) / cf);
  }

  std::vector<double> lower_slopes, upper_slopes;
  for (double a : alphas) {
    double ls = 0, us = 0;
    for (int n : n_values) {
      std::vector<double> js, ll, uu;
      for (const auto& b : blocks) {
        if (b.n != n) continue;
        js.push_back(b.j);
        ll.push_back(std::log2(b.norm) - std::log2(measure_nu(b.gamma, a + crit)) / par1.p);
        uu.push_back(std::log2(b.norm) - std::log2(measure_nu(b.gamma, a - shrink)) / par1.p);
      }
      ls += slope(js, ll);
      us += slope(js, uu);
    }
    ls /= static_cast<double>(n_values.size());
    us /= static_cast<double>(n_values.size());
    rep.rows.push_back({a, ls, us});
    lower_slopes.push_back(ls);
    upper_slopes.push_back(us);
  }
  // Slopes are affine in alpha; the window ends where they change sign.
  const double lk = slope(alphas, lower_slopes), uk = slope(alphas, upper_slopes);
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double am = mean(alphas);
  rep.window_lo = am - mean(lower_slopes) / lk;
  rep.window_hi = am - mean(upper_slopes) / uk;
  return rep;
}

}  // namespace anisoframe
