#include "anisoframe/rnla.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "anisoframe/errors.hpp"

namespace anisoframe {

namespace {

constexpr double kBudgetSlack = 1e-12;

bool within_budget(double mass, double t) { return mass <= t * (1 + kBudgetSlack); }

struct Item {
  const ShearIndex* index;
  Complex value;
  bool coarse;
  double v;  // (w |s|)^p, the item's share of the p-th power of the error
  double mass;
};

std::vector<Item> make_items(const CoeffSeq& s, const ErrorSpace& err, double beta) {
  std::vector<Item> items;
  for (const auto& [q, val] : s) {
    const double w = q.is_coarse() ? 1.0 : canonical_weight(q, err.par.s, err.par.p);
    items.push_back({&q, val, q.is_coarse(), std::pow(w * std::abs(val), err.par.p), budget_mass(q, beta)});
  }
  return items;
}

// Error after keeping the items flagged in `keep`, accumulated in index order exactly like besov_norm.
double additive_error(const std::vector<Item>& items, const std::vector<char>& keep, double p) {
  double coarse = 0, cone = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (keep[i]) continue;
    if (items[i].coarse) {
      coarse += std::pow(std::abs(items[i].value), p);
    } else {
      cone += items[i].v;
    }
  }
  return std::pow(coarse, 1.0 / p) + std::pow(cone, 1.0 / p);
}

double general_error(const std::vector<Item>& items, const std::vector<char>& keep, const ErrorSpace& err) {
  if (err.additive() && !err.triebel) return additive_error(items, keep, err.par.p);
  CoeffSeq rest;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!keep[i]) rest.emplace_hint(rest.end(), *items[i].index, items[i].value);
  return error_norm(rest, err);
}

std::vector<std::size_t> score_order(const std::vector<Item>& items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].v / items[a].mass > items[b].v / items[b].mass; });
  return order;
}

void check_exact(const CoeffSeq& s, const ErrorSpace& err) {
  if (!err.additive()) throw ParameterError("exact sigma needs an error space with p = q; use the greedy oracle");
  if (s.size() > kExactCapacity)
    throw CapacityError("exact sigma supports at most " + std::to_string(kExactCapacity) +
                        " entries; use the greedy oracle");
}

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<Item>& items, double p, double t) : items_(items), p_(p), t_(t) {
    order_ = score_order(items);
    keep_.assign(items.size(), 0);
    best_keep_ = keep_;
    best_ = additive_error(items, keep_, p);
    // Seed with the greedy prefix.
    std::vector<char> g(items.size(), 0);
    double mass = 0;
    for (auto i : order_) {
      if (!within_budget(mass + items[i].mass, t)) break;
      mass += items[i].mass;
      g[i] = 1;
    }
    consider(g);
  }

  void run() { descend(0, 0.0, 0.0, 0.0); }
  double best() const { return best_; }
  const std::vector<char>& best_keep() const { return best_keep_; }

 private:
  const std::vector<Item>& items_;
  double p_, t_;
  std::vector<std::size_t> order_;
  std::vector<char> keep_, best_keep_;
  double best_;

  void consider(const std::vector<char>& keep) {
    const double e = additive_error(items_, keep, p_);
    if (e < best_) {
      best_ = e;
      best_keep_ = keep;
    }
  }

  // Dropped p-th power mass of one group after the best fractional use of the remaining budget.
  double group_bound(std::size_t from, bool coarse, double dropped, double budget) const {
    double remaining = 0, recovered = 0;
    for (std::size_t k = from; k < order_.size(); ++k) {
      const Item& it = items_[order_[k]];
      if (it.coarse != coarse) continue;
      remaining += it.v;
      if (budget <= 0) continue;
      // order_ is by v / mass, which is the fractional-knapsack order within a group too.
      const double take = std::min(1.0, budget / it.mass);
      recovered += take * it.v;
      budget -= take * it.mass;
    }
    return std::max(0.0, dropped + remaining - recovered);
  }

  double bound(std::size_t from, double mass, double dropped_coarse, double dropped_cone) const {
    const double budget = t_ * (1 + kBudgetSlack) - mass;
    // Coarse items enter the error through |s|^p just like cone items through (w|s|)^p.
    return std::pow(group_bound(from, true, dropped_coarse, budget), 1.0 / p_) +
           std::pow(group_bound(from, false, dropped_cone, budget), 1.0 / p_);
  }

  void descend(std::size_t pos, double mass, double dropped_coarse, double dropped_cone) {
    if (pos == order_.size()) {
      consider(keep_);
      return;
    }
    if (bound(pos, mass, dropped_coarse, dropped_cone) > best_ * (1 + kBudgetSlack)) return;
    const std::size_t i = order_[pos];
    const Item& it = items_[i];
    if (within_budget(mass + it.mass, t_)) {
      keep_[i] = 1;
      descend(pos + 1, mass + it.mass, dropped_coarse, dropped_cone);
      keep_[i] = 0;
    }
    descend(pos + 1, mass, dropped_coarse + (it.coarse ? it.v : 0.0), dropped_cone + (it.coarse ? 0.0 : it.v));
  }
};

}  // namespace

Oracle parse_oracle(const std::string& name) {
  if (name == "exact") return Oracle::exact;
  if (name == "greedy") return Oracle::greedy;
  throw ParameterError("oracle must be 'exact' or 'greedy'");
}

std::string to_string(Oracle o) { return o == Oracle::exact ? "exact" : "greedy"; }

double error_norm(const CoeffSeq& c, const ErrorSpace& err) {
  return err.triebel ? tl_norm(c, err.par) : besov_norm(c, err.par);
}

double budget_mass(const ShearIndex& q, double beta) {
  return q.is_coarse() ? 1.0 : std::exp2(-static_cast<double>((q.dim() + 1) * q.scale) * beta);
}

Approximant greedy_approximant(const CoeffSeq& s, const ErrorSpace& err, double beta, double t) {
  if (!(t >= 0)) throw ParameterError("budget must be nonnegative");
  validate(err.par);
  const auto items = make_items(s, err, beta);
  std::vector<char> keep(items.size(), 0);
  Approximant out;
  for (auto i : score_order(items)) {
    if (!within_budget(out.mass + items[i].mass, t)) break;
    out.mass += items[i].mass;
    keep[i] = 1;
    out.kept.insert(*items[i].index);
  }
  out.error = general_error(items, keep, err);
  return out;
}

Approximant sigma_exact_approximant(const CoeffSeq& s, const ErrorSpace& err, double beta, double t) {
  if (!(t >= 0)) throw ParameterError("budget must be nonnegative");
  validate(err.par);
  check_exact(s, err);
  const auto items = make_items(s, err, beta);
  BranchAndBound bb(items, err.par.p, t);
  bb.run();
  Approximant out;
  out.error = bb.best();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!bb.best_keep()[i]) continue;
    out.kept.insert(*items[i].index);
    out.mass += items[i].mass;
  }
  return out;
}

double sigma_exact(const CoeffSeq& s, const ErrorSpace& err, double beta, double t) {
  return sigma_exact_approximant(s, err, beta, t).error;
}

double ApproxCurve::at(double budget) const {
  if (t.empty()) return 0;
  std::size_t i = 0;
  while (i + 1 < t.size() && within_budget(t[i + 1], budget)) ++i;
  return sigma[i];
}

ApproxCurve sigma_curve(const CoeffSeq& s, const ErrorSpace& err, double beta, Oracle method) {
  validate(err.par);
  const auto items = make_items(s, err, beta);
  ApproxCurve curve;
  curve.method = method;
  std::vector<char> keep(items.size(), 0);
  if (method == Oracle::greedy) {
    double mass = 0;
    curve.t.push_back(0);
    curve.sigma.push_back(general_error(items, keep, err));
    for (auto i : score_order(items)) {
      mass += items[i].mass;
      keep[i] = 1;
      const double e = general_error(items, keep, err);
      if (e < curve.sigma.back()) {
        curve.t.push_back(mass);
        curve.sigma.push_back(e);
      }
    }
    return curve;
  }
  check_exact(s, err);
  const std::size_t n = items.size();
  std::vector<std::pair<double, double>> points;  // (mass, error)
  points.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double mass = 0;
    for (std::size_t i = 0; i < n; ++i) {
      keep[i] = static_cast<char>((mask >> i) & 1);
      if (keep[i]) mass += items[i].mass;
    }
    points.emplace_back(mass, additive_error(items, keep, err.par.p));
  }
  std::sort(points.begin(), points.end());
  double running = kInf;
  std::size_t i = 0;
  while (i < points.size()) {
    // Merge masses equal up to the budget slack.
    const double m = points[i].first;
    double group_min = points[i].second;
    std::size_t k = i + 1;
    while (k < points.size() && within_budget(points[k].first, m)) group_min = std::min(group_min, points[k++].second);
    if (group_min < running) {
      running = group_min;
      curve.t.push_back(curve.t.empty() ? 0.0 : m);
      curve.sigma.push_back(running);
    }
    i = k;
  }
  return curve;
}

void validate(const ApproxParams& par) {
  if (!(par.xi > 0) || std::isinf(par.xi)) throw ParameterError("xi must be positive and finite");
  if (!(par.mu > 0)) throw ParameterError("mu must lie in (0, inf]");
}

double approx_norm_from_curve(const ApproxCurve& c, const ApproxParams& par) {
  validate(par);
  if (std::isinf(par.mu)) return jackson_sup(c, par.xi);
  const double e = par.xi * par.mu;
  double sum = 0;
  for (std::size_t i = 0; i + 1 < c.t.size(); ++i) {
    if (c.sigma[i] == 0) continue;
    sum += std::pow(c.sigma[i], par.mu) * (std::pow(c.t[i + 1], e) - std::pow(c.t[i], e)) / e;
  }
  if (!c.sigma.empty() && c.sigma.back() > 0) return kInf;
  return std::pow(sum, 1.0 / par.mu);
}

double approx_space_norm(const CoeffSeq& s, const ErrorSpace& err, double beta, const ApproxParams& par,
                         Oracle method) {
  validate(par);
  return approx_norm_from_curve(sigma_curve(s, err, beta, method), par);
}

double jackson_sup(const ApproxCurve& c, double xi) {
  double best = 0;
  for (std::size_t i = 0; i + 1 < c.t.size(); ++i) best = std::max(best, std::pow(c.t[i + 1], xi) * c.sigma[i]);
  if (!c.sigma.empty() && c.sigma.back() > 0) return kInf;
  return best;
}

CoeffSeq random_sequence(std::mt19937_64& rng, const SeqOptions& opt) {
  if (opt.dim < 1 || opt.max_scale < 0 || opt.window < 1 || opt.min_size < 0 || opt.max_size < opt.min_size)
    throw ParameterError("bad random sequence options");
  std::uniform_int_distribution<int> size_dist(opt.min_size, opt.max_size);
  std::uniform_int_distribution<int> cone_dist(1, opt.dim);
  std::uniform_int_distribution<int> scale_dist(0, opt.max_scale);
  std::uniform_int_distribution<std::int64_t> k_dist(0, opt.window - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int target = size_dist(rng);
  CoeffSeq out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < target && attempts++ < 100 * (target + 1)) {
    IntVec k(opt.dim);
    for (auto& v : k) v = k_dist(rng);
    ShearIndex idx;
    if (opt.include_coarse && unit(rng) < 0.15) {
      idx = ShearIndex::coarse(k);
    } else {
      const int j = scale_dist(rng);
      std::uniform_int_distribution<std::int64_t> shear_dist(-(std::int64_t{1} << j), std::int64_t{1} << j);
      IntVec shear(opt.dim - 1);
      for (auto& l : shear) l = shear_dist(rng);
      const int cone = cone_dist(rng);
      // k spans the window in the cone's coarse direction at this scale.
      idx = ShearIndex::at(cone, j, shear, k);
    }
    const double mag = std::exp(std::log(opt.min_magnitude) * unit(rng));
    const double phase = 2 * std::numbers::pi * unit(rng);
    out.emplace(std::move(idx), std::polar(mag, phase));
  }
  return out;
}

std::vector<CoeffSeq> random_sequence_corpus(std::uint64_t seed, std::size_t count, const SeqOptions& opt) {
  std::mt19937_64 rng(seed);
  std::vector<CoeffSeq> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_sequence(rng, opt));
  return out;
}

bool JacksonBernsteinReport::finite() const { return std::isfinite(jackson_sup) && std::isfinite(bernstein_sup); }

JacksonBernsteinReport jackson_bernstein_check(const std::vector<CoeffSeq>& corpus, const JacksonBernsteinParams& par) {
  if (!(par.xi > 0) || std::isinf(par.xi)) throw ParameterError("xi must be positive and finite");
  if (!(par.mu > 0)) throw ParameterError("mu must lie in (0, inf]");
  constexpr int d = 2;
  const double crit = static_cast<double>(d - 1) / (d + 1);
  JacksonBernsteinReport rep;
  rep.alpha = par.p1 * (par.s2 - 1.0 / par.p2 - par.s1 + 1.0 / par.p1);
  const bool equal = par.p1 == par.q1;
  if (equal) {
    rep.beta = rep.alpha;
  } else if (par.side == BetaSide::jackson) {
    rep.beta = rep.alpha - (std::isinf(par.q1) ? 0.0 : par.p1 * crit / par.q1);
  } else {
    rep.beta = rep.alpha + crit;
  }
  rep.r = 1.0 / (par.xi + 1.0 / par.p1);
  const ErrorSpace err = equal ? ErrorSpace::besov(par.s1, par.p1) : ErrorSpace::tl(SpaceParams{par.s1, par.p1, par.q1});
  const Oracle oracle = equal ? par.oracle : Oracle::greedy;
  const std::size_t half = corpus.size() / 2;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const CoeffSeq& s = corpus[i];
    if (s.empty()) continue;
    const WeightSeq u = canonical_weights(s, par.s2, par.p2);
    const double lor = lorentz_norm(s, u, rep.beta, rep.r, par.mu);
    const ApproxCurve curve = sigma_curve(s, err, rep.beta, oracle);
    const double jr = jackson_sup(curve, par.xi) / lor;
    double total_mass = 0;
    for (const auto& [q, v] : s) total_mass += budget_mass(q, rep.beta);
    const double br = lor / (std::pow(total_mass, par.xi) * error_norm(s, err));
    rep.jackson_ratios.push_back(jr);
    rep.bernstein_ratios.push_back(br);
    rep.jackson_sup = std::max(rep.jackson_sup, jr);
    rep.bernstein_sup = std::max(rep.bernstein_sup, br);
    auto& jh = i < half ? rep.jackson_first_half : rep.jackson_second_half;
    auto& bh = i < half ? rep.bernstein_first_half : rep.bernstein_second_half;
    jh = std::max(jh, jr);
    bh = std::max(bh, br);
  }
  return rep;
}

double single_atom_jackson(double r, double mu) { return std::isinf(mu) ? 1.0 : std::pow(mu / r, 1.0 / mu); }
double single_atom_bernstein(double r, double mu) { return std::isinf(mu) ? 1.0 : std::pow(r / mu, 1.0 / mu); }

}  // namespace anisoframe
