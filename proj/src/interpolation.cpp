#include "anisoframe/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "anisoframe/errors.hpp"
#include "anisoframe/format.hpp"
#include "anisoframe/parallel.hpp"

namespace anisoframe {

SpaceDesc SpaceDesc::besov(double s, double p, double q) {
  SpaceDesc x;
  x.kind = SpaceKind::besov;
  x.par = SpaceParams{s, p, q};
  return x;
}

SpaceDesc SpaceDesc::lorentz(double weight_exponent, double beta, double p, double mu) {
  SpaceDesc x;
  x.kind = SpaceKind::lorentz;
  x.weight_exponent = weight_exponent;
  x.beta = beta;
  x.lorentz_p = p;
  x.mu = mu;
  return x;
}

SpaceDesc SpaceDesc::approx(const ErrorSpace& err, double beta, double xi, double mu, Oracle oracle) {
  SpaceDesc x;
  x.kind = SpaceKind::approx;
  x.par = err.par;
  x.triebel = err.triebel;
  x.beta = beta;
  x.xi = xi;
  x.mu = mu;
  x.oracle = oracle;
  return x;
}

std::string SpaceDesc::describe() const {
  std::string out;
  switch (kind) {
    case SpaceKind::besov:
      out = "b(s=" + fmt17(par.s) + ",p=" + fmt17(par.p) + ",q=" + fmt17(par.q) + ")";
      break;
    case SpaceKind::lorentz:
      out = "lorentz(w=" + fmt17(weight_exponent) + ",beta=" + fmt17(beta) + ",p=" + fmt17(lorentz_p) +
            ",mu=" + fmt17(mu) + ")";
      break;
    case SpaceKind::approx:
      out = "A(xi=" + fmt17(xi) + ",mu=" + fmt17(mu) + ",beta=" + fmt17(beta) + ",err=" + (triebel ? "f" : "b") +
            "(s=" + fmt17(par.s) + ",p=" + fmt17(par.p) + ",q=" + fmt17(par.q) + "))";
      break;
  }
  if (scale != 1) out = fmt17(scale) + "*" + out;
  return out;
}

void validate(const SpaceDesc& x) {
  if (!(x.scale > 0) || std::isinf(x.scale)) throw ParameterError("space scale must be positive and finite");
  switch (x.kind) {
    case SpaceKind::besov:
      validate(x.par);
      break;
    case SpaceKind::lorentz:
      if (!(x.lorentz_p > 0) || std::isinf(x.lorentz_p)) throw ParameterError("lorentz p must lie in (0, inf)");
      if (!(x.mu > 0)) throw ParameterError("mu must lie in (0, inf]");
      break;
    case SpaceKind::approx:
      validate(x.par);
      validate(ApproxParams{x.xi, x.mu});
      break;
  }
}

double space_norm(const CoeffSeq& s, const SpaceDesc& x) {
  double v = 0;
  switch (x.kind) {
    case SpaceKind::besov:
      v = besov_norm(s, x.par);
      break;
    case SpaceKind::lorentz: {
      WeightSeq u;
      for (const auto& [q, c] : s) {
        const double log2_measure = q.is_coarse() ? 0.0 : -static_cast<double>((q.dim() + 1) * q.scale);
        u.emplace_hint(u.end(), q, std::exp2(log2_measure * x.weight_exponent));
      }
      v = lorentz_norm(s, u, x.beta, x.lorentz_p, x.mu);
      break;
    }
    case SpaceKind::approx:
      v = approx_space_norm(s, ErrorSpace{x.par, x.triebel}, x.beta, ApproxParams{x.xi, x.mu}, x.oracle);
      break;
  }
  return x.scale * v;
}

KFunctional::KFunctional(const CoeffSeq& s, const SpacePair& pair, const KOptions& opt)
    : s_(s), pair_(pair), opt_(opt) {
  validate(pair.x);
  validate(pair.y);
  const std::size_t n = s.size();
  std::vector<Complex> values;
  for (const auto& [q, v] : s) {
    keys_.push_back(q);
    values.push_back(v);
  }
  std::vector<double> single_x(n), single_y(n), log_ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CoeffSeq one{{keys_[i], values[i]}};
    single_x[i] = space_norm(one, pair.x);
    single_y[i] = space_norm(one, pair.y);
    // Negates exactly when the spaces are swapped.
    log_ratio[i] = std::log(single_x[i]) - std::log(single_y[i]);
    if (std::isnan(log_ratio[i])) log_ratio[i] = 0;
  }
  // Both tie-breaks in both directions, so the family does not depend on which space is first.
  auto add = [&](std::vector<std::size_t> order) {
    if (std::find(orders_.begin(), orders_.end(), order) == orders_.end()) orders_.push_back(std::move(order));
  };
  for (const auto* key : {&log_ratio, &single_x, &single_y})
    for (bool descending : {false, true}) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? (*key)[a] > (*key)[b] : (*key)[a] < (*key)[b];
      });
      add(order);
      add(std::vector<std::size_t>(order.rbegin(), order.rend()));
    }
  for (std::size_t o = 0; o < orders_.size(); ++o) {
    for (std::size_t len = 0; len <= n; ++len) {
      CoeffSeq g, h;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = orders_[o][k];
        (k < len ? g : h).emplace(keys_[i], values[i]);
      }
      split_.push_back({space_norm(h, pair.x), space_norm(g, pair.y), o, len});
    }
  }
  norm_x_ = space_norm(s, pair.x);
  norm_y_ = space_norm(s, pair.y);
}

double KFunctional::shrink(const Split& base, double t) const {
  const auto& order = orders_[base.order];
  const std::size_t n = order.size();
  double best = base.hx + t * base.gy;
  // Split one item at the boundary of the prefix proportionally between g and h.
  auto try_item = [&](std::size_t prefix, std::size_t item) {
    CoeffSeq g_fixed, h_fixed;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = order[k];
      if (i == item) continue;
      (k < prefix ? g_fixed : h_fixed).emplace(keys_[i], s_.at(keys_[i]));
    }
    const Complex v = s_.at(keys_[item]);
    auto cost = [&](double lambda) {
      CoeffSeq g = g_fixed, h = h_fixed;
      if (lambda > 0) g.emplace(keys_[item], lambda * v);
      if (lambda < 1) h.emplace(keys_[item], (1 - lambda) * v);
      return space_norm(h, pair_.x) + t * space_norm(g, pair_.y);
    };
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double a = 0, b = 1;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = cost(c), fd = cost(d);
    for (int it = 0; it < 40; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = cost(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = cost(d);
      }
    }
    best = std::min({best, fc, fd});
  };
  if (base.length < n) try_item(base.length, order[base.length]);
  if (base.length > 0) try_item(base.length, order[base.length - 1]);
  return best;
}

double KFunctional::operator()(double t) const {
  if (!(t > 0)) throw ParameterError("t must be positive");
  const Split* best = nullptr;
  double value = kInf;
  for (const auto& sp : split_) {
    const double v = sp.hx + t * sp.gy;
    if (v < value) {
      value = v;
      best = &sp;
    }
  }
  if (opt_.shrink && best) value = std::min(value, shrink(*best, t));
  return value;
}

double k_functional_upper(const CoeffSeq& s, double t, const SpacePair& pair, const KOptions& opt) {
  return KFunctional(s, pair, opt)(t);
}

double identical_space_constant(double theta, double q) {
  if (!(theta > 0 && theta < 1)) throw ParameterError("theta must lie in (0, 1)");
  if (!(q > 0)) throw ParameterError("q must lie in (0, inf]");
  if (std::isinf(q)) return 1.0;
  return std::pow(1.0 / ((1 - theta) * q) + 1.0 / (theta * q), 1.0 / q);
}

InterpBand interp_norm(const CoeffSeq& s, double theta, double q, const SpacePair& pair, const InterpOptions& opt) {
  if (!(theta > 0 && theta < 1)) throw ParameterError("theta must lie in (0, 1)");
  if (!(q > 0)) throw ParameterError("q must lie in (0, inf]");
  if (!(opt.ratio_log2 > 0)) throw ParameterError("grid ratio must exceed 1");
  InterpBand band;
  if (s.empty()) return band;
  const KFunctional k(s, pair, opt.k);
  const double nx = k.norm_x(), ny = k.norm_y();
  if (nx == 0 && ny == 0) return band;
  if (!(nx > 0) || !(ny > 0) || std::isinf(nx) || std::isinf(ny))
    throw ParameterError("both norms must be positive and finite");
  const double tc = nx / ny;
  const bool sup = std::isinf(q);
  std::map<long, double> cache;
  auto t_at = [&](long i) { return tc * std::exp2(static_cast<double>(i) * opt.ratio_log2); };
  auto k_at = [&](long i) {
    auto it = cache.find(i);
    if (it != cache.end()) return it->second;
    return cache[i] = k(t_at(i));
  };
  long half = 16;
  for (;;) {
    if (static_cast<std::size_t>(2 * half) > opt.max_cells)
      throw Unsupported("interpolation integral did not converge within " + std::to_string(opt.max_cells) +
                        " grid cells");
    const double t_min = t_at(-half), t_max = t_at(half);
    double lo = 0, hi = 0, tails = 0;
    if (sup) {
      for (long i = -half; i < half; ++i) {
        const double w = std::pow(t_at(i), -theta);
        lo = std::max(lo, w * k_at(i));
        hi = std::max(hi, w * k_at(i + 1));
      }
      lo = std::max(lo, std::pow(t_max, -theta) * k_at(half));
      tails = std::max(std::pow(t_min, 1 - theta) * ny, std::pow(t_max, -theta) * nx);
      hi = std::max(hi, tails);
    } else {
      const double tq = theta * q;
      const double cell = -std::expm1(-tq * opt.ratio_log2 * std::log(2.0)) / tq;
      for (long i = -half; i < half; ++i) {
        const double w = std::pow(t_at(i), -tq) * cell;
        lo += std::pow(k_at(i), q) * w;
        hi += std::pow(k_at(i + 1), q) * w;
      }
      const double low_factor = std::pow(t_min, (1 - theta) * q) / ((1 - theta) * q);
      const double high_factor = std::pow(t_max, -tq) / tq;
      lo += std::pow(k_at(-half) / t_min, q) * low_factor + std::pow(k_at(half), q) * high_factor;
      tails = std::pow(ny, q) * low_factor + std::pow(nx, q) * high_factor;
      hi += tails;
    }
    if (tails <= opt.tail_tolerance * lo) {
      band.lower = sup ? lo : std::pow(lo, 1.0 / q);
      band.upper = sup ? hi : std::pow(hi, 1.0 / q);
      band.t_min = t_min;
      band.t_max = t_max;
      band.cells = static_cast<std::size_t>(2 * half);
      for (long i = -half; i <= half; ++i) band.samples.emplace_back(t_at(i), k_at(i));
      return band;
    }
    half += 16;
  }
}

double ReiterationPart::width() const { return ratio_min > 0 ? ratio_max / ratio_min : kInf; }

namespace {

ReiterationPart run_part(const std::vector<CoeffSeq>& corpus, const SpacePair& pair, const SpaceDesc& direct,
                         double theta, double q, const InterpOptions& opt) {
  ReiterationPart part;
  part.rows.resize(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    ReiterationRow row;
    const InterpBand b = interp_norm(corpus[i], theta, q, pair, opt);
    row.band_lower = b.lower;
    row.band_upper = b.upper;
    row.direct = space_norm(corpus[i], direct);
    if (row.direct > 0) {
      row.ratio_lower = row.band_lower / row.direct;
      row.ratio_upper = row.band_upper / row.direct;
    }
    part.rows[i] = row;
  });
  part.ratio_min = kInf;
  for (const auto& row : part.rows) {
    if (row.direct == 0) continue;
    part.ratio_min = std::min(part.ratio_min, row.ratio_lower);
    part.ratio_max = std::max(part.ratio_max, row.ratio_upper);
  }
  if (std::isinf(part.ratio_min)) part.ratio_min = 0;
  return part;
}

}  // namespace

ReiterationReport theorem44_check(const std::vector<CoeffSeq>& corpus, const ReiterationParams& par) {
  if (!(par.theta > 0 && par.theta < 1)) throw ParameterError("theta must lie in (0, 1)");
  if (!(par.xi0 > 0) || !(par.xi1 > 0) || std::isinf(par.xi0) || std::isinf(par.xi1))
    throw ParameterError("xi0 and xi1 must be positive and finite");
  ReiterationReport rep;
  rep.alpha = par.p1 * (par.s2 - 1.0 / par.p2 - par.s1 + 1.0 / par.p1);
  rep.xi = (1 - par.theta) * par.xi0 + par.theta * par.xi1;
  rep.r = 1.0 / (rep.xi + 1.0 / par.p1);
  InterpOptions opt;
  opt.k.shrink = par.shrink;

  const ErrorSpace err = ErrorSpace::besov(par.s1, par.p1);
  const SpacePair approx_pair{SpaceDesc::approx(err, rep.alpha, par.xi0, par.mu, par.oracle),
                              SpaceDesc::approx(err, rep.alpha, par.xi1, par.mu, par.oracle)};
  rep.approx = run_part(corpus, approx_pair, SpaceDesc::approx(err, rep.alpha, rep.xi, par.mu, par.oracle), par.theta,
                        par.mu, opt);

  auto smoothness = [&](double xi) { return par.s1 + xi * (1 - rep.alpha); };
  const double r0 = 1.0 / (par.xi0 + 1.0 / par.p1), r1 = 1.0 / (par.xi1 + 1.0 / par.p1);
  const SpacePair besov_pair{SpaceDesc::besov(smoothness(par.xi0), r0, r0),
                             SpaceDesc::besov(smoothness(par.xi1), r1, r1)};
  rep.besov = run_part(corpus, besov_pair, SpaceDesc::besov(smoothness(rep.xi), rep.r, rep.r), par.theta, rep.r, opt);
  return rep;
}

bool reiteration_stable(const ReiterationPart& a, const ReiterationPart& b, double max_width) {
  return a.width() <= max_width && b.width() <= max_width && a.ratio_min <= b.ratio_max && b.ratio_min <= a.ratio_max;
}

}  // namespace anisoframe
