#include "anisoframe/seq_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "anisoframe/errors.hpp"
#include "anisoframe/overlay.hpp"

namespace anisoframe {

namespace {

bool same_block(const ShearIndex& a, const ShearIndex& b) {
  return a.cone == b.cone && a.scale == b.scale && a.shear == b.shear;
}

// log2 |Q|
double log2_measure(const ShearIndex& q) {
  return q.is_coarse() ? 0.0 : -static_cast<double>((q.dim() + 1) * q.scale);
}

// (1 + x)^e - 1 without cancellation.
double pow1p_minus1(double x, double e) { return std::expm1(e * std::log1p(x)); }

}  // namespace

void validate(const SpaceParams& par) {
  if (!std::isfinite(par.s)) throw ParameterError("s must be finite");
  if (!(par.p > 0) || std::isinf(par.p)) throw ParameterError("p must lie in (0, inf)");
  if (!(par.q > 0)) throw ParameterError("q must lie in (0, inf]");
}

double canonical_weight(const ShearIndex& idx, double s, double p) {
  return std::exp2(log2_measure(idx) * (-s + 1.0 / p - 0.5));
}

WeightSeq canonical_weights(const IndexSet& gamma, double s, double p) {
  WeightSeq u;
  for (const auto& q : gamma) u.emplace_hint(u.end(), q, canonical_weight(q, s, p));
  return u;
}

WeightSeq canonical_weights(const CoeffSeq& c, double s, double p) { return canonical_weights(support_of(c), s, p); }

double coarse_term(const CoeffSeq& c, double p) {
  double sum = 0;
  for (const auto& [q, v] : c) {
    if (!q.is_coarse()) break;  // coarse indices come first in the order
    sum += std::pow(std::abs(v), p);
  }
  return std::pow(sum, 1.0 / p);
}

double besov_norm(const CoeffSeq& c, const SpaceParams& par) {
  validate(par);
  if (par.q == par.p) {
    // Plain sum in index order; the approximation code relies on this exact order.
    double sum = 0;
    for (const auto& [q, v] : c)
      if (!q.is_coarse()) sum += std::pow(canonical_weight(q, par.s, par.p) * std::abs(v), par.p);
    return coarse_term(c, par.p) + std::pow(sum, 1.0 / par.p);
  }
  const bool sup = std::isinf(par.q);
  double outer = 0;
  double block = 0;
  const ShearIndex* current = nullptr;
  auto flush = [&] {
    if (!current) return;
    if (sup) {
      outer = std::max(outer, std::pow(block, 1.0 / par.p));
    } else {
      outer += std::pow(block, par.q / par.p);
    }
    block = 0;
  };
  for (const auto& [q, v] : c) {
    if (q.is_coarse()) continue;
    if (current && !same_block(*current, q)) flush();
    current = &q;
    block += std::pow(canonical_weight(q, par.s, par.p) * std::abs(v), par.p);
  }
  flush();
  const double cone = sup ? outer : std::pow(outer, 1.0 / par.q);
  return coarse_term(c, par.p) + cone;
}

TlResult tl_norm_report(const CoeffSeq& c, const SpaceParams& par, const TlOptions& opt) {
  validate(par);
  std::vector<WeightedCube> cubes;
  for (const auto& [q, v] : c) {
    if (q.is_coarse()) continue;
    if (q.dim() != 2 && opt.method == TlMethod::exact_overlay) throw Unsupported("exact overlay supports d = 2 only");
    const double w = std::exp2(log2_measure(q) * (-par.s - 0.5)) * std::abs(v);
    if (w > 0) cubes.push_back({q, w});
  }
  TlResult out;
  double integral = 0;
  if (opt.method == TlMethod::exact_overlay) {
    out.method = "exact_overlay";
    integral = overlay_integral(cubes, par.p, par.q);
  } else {
    out.method = "grid(" + std::to_string(opt.grid_m) + ")";
    const GridIntegral g = grid_integral(cubes, par.p, par.q, opt.grid_m);
    integral = g.value;
    out.cell_x = g.cell_x;
    out.cell_y = g.cell_y;
  }
  out.value = coarse_term(c, par.p) + std::pow(integral, 1.0 / par.p);
  return out;
}

double tl_norm(const CoeffSeq& c, const SpaceParams& par, const TlOptions& opt) {
  return tl_norm_report(c, par, opt).value;
}

double lorentz_norm(const CoeffSeq& c, const WeightSeq& u, double beta, double p, double mu) {
  if (!(p > 0) || std::isinf(p)) throw ParameterError("p must lie in (0, inf)");
  if (!(mu > 0)) throw ParameterError("mu must lie in (0, inf]");
  struct Entry {
    double a;
    double mass;
  };
  std::vector<Entry> entries;
  for (const auto& [q, v] : c) {
    auto it = u.find(q);
    const double w = it == u.end() ? 1.0 : it->second;
    const double a = std::abs(w * v);
    if (a > 0) entries.push_back({a, std::exp2(log2_measure(q) * beta)});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) { return l.a > r.a; });
  double cum = 0;
  if (std::isinf(mu)) {
    double best = 0;
    for (const auto& e : entries) {
      cum += e.mass;
      best = std::max(best, e.a * std::pow(cum, 1.0 / p));
    }
    return best;
  }
  const double e = mu / p;
  double sum = 0;
  for (const auto& en : entries) {
    double piece;
    if (e == 1.0) {
      piece = en.mass;
    } else if (cum == 0) {
      piece = std::pow(en.mass, e);
    } else {
      piece = std::pow(cum, e) * pow1p_minus1(en.mass / cum, e);
    }
    sum += std::pow(en.a, mu) * piece;
    cum += en.mass;
  }
  return std::pow(sum / e, 1.0 / mu);
}

LemmaReport lemma_identification_check(const CoeffSeq& c, double s, double tau, double beta, double tolerance) {
  if (!(tau > 0) || std::isinf(tau)) throw ParameterError("tau must lie in (0, inf)");
  LemmaReport rep;
  rep.gamma = s + (1 - beta) / tau;
  CoeffSeq cone;
  WeightSeq u;
  for (const auto& [q, v] : c) {
    if (q.is_coarse()) {
      ++rep.coarse_dropped;
      continue;
    }
    cone.emplace_hint(cone.end(), q, v);
    u.emplace_hint(u.end(), q, std::exp2(log2_measure(q) * (-s - 0.5)));
  }
  rep.lorentz = lorentz_norm(cone, u, beta, tau, tau);
  rep.besov = besov_norm(cone, SpaceParams{rep.gamma, tau, tau});
  rep.difference = std::abs(rep.lorentz - rep.besov);
  const double scale = std::max(rep.lorentz, rep.besov);
  rep.relative = scale > 0 ? rep.difference / scale : 0.0;
  rep.pass = rep.relative <= tolerance;
  return rep;
}

}  // namespace anisoframe
