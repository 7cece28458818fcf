#include "anisoframe/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "anisoframe/errors.hpp"

namespace anisoframe {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

constexpr i64 kMaxExtent = i64{1} << 17;  // keeps every exact comparison inside 128 bits

struct Pt {
  i64 x = 0;
  i64 y = 0;
};

struct Frac {
  i128 num = 0;
  i128 den = 1;  // > 0
  long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
};

int cmp(const Frac& a, const Frac& b) {
  const i128 l = a.num * b.den, r = b.num * a.den;
  return l < r ? -1 : (l > r ? 1 : 0);
}

int cmp(const Frac& a, i64 v) { return cmp(a, Frac{v, 1}); }

struct Edge {
  Pt a, b;  // a.x < b.x
  int cube = 0;
};

// y-coordinate of a non-vertical edge at x.
Frac y_at(const Edge& e, const Frac& x) {
  const i128 dx = e.b.x - e.a.x;
  const i128 dy = e.b.y - e.a.y;
  return Frac{e.a.y * dx * x.den + dy * (x.num - e.a.x * x.den), dx * x.den};
}

i128 orient(const Pt& p, const Pt& q, const Pt& r) {
  return static_cast<i128>(q.x - p.x) * (r.y - p.y) - static_cast<i128>(q.y - p.y) * (r.x - p.x);
}

int sgn(i128 v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }

// x-coordinate of a proper crossing of two segments, if any.
bool proper_crossing_x(const Edge& e, const Edge& f, Frac& out) {
  const int o1 = sgn(orient(e.a, e.b, f.a)), o2 = sgn(orient(e.a, e.b, f.b));
  const int o3 = sgn(orient(f.a, f.b, e.a)), o4 = sgn(orient(f.a, f.b, e.b));
  if (o1 * o2 >= 0 || o3 * o4 >= 0) return false;
  const i128 rx = e.b.x - e.a.x, ry = e.b.y - e.a.y;
  const i128 sx = f.b.x - f.a.x, sy = f.b.y - f.a.y;
  i128 den = rx * sy - ry * sx;
  i128 tnum = static_cast<i128>(f.a.x - e.a.x) * sy - static_cast<i128>(f.a.y - e.a.y) * sx;
  i128 num = e.a.x * den + tnum * rx;
  if (den < 0) {
    den = -den;
    num = -num;
  }
  out = Frac{num, den};
  return true;
}

struct Poly {
  Pt v[4];
  i64 xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  double wq = 0;  // w^q, or w for q = inf
};

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Boundary {
  Frac ya, yb;
  long double fa = 0, fb = 0;
  int cube = 0;
};

long double integrate_cluster(std::vector<Poly> polys, double p, double q) {
  // Rebase coordinates so magnitudes stay small.
  i64 ox = std::numeric_limits<i64>::max(), oy = std::numeric_limits<i64>::max();
  for (const auto& P : polys) {
    ox = std::min(ox, P.xmin);
    oy = std::min(oy, P.ymin);
  }
  for (auto& P : polys) {
    for (auto& v : P.v) {
      v.x -= ox;
      v.y -= oy;
      if (v.x > kMaxExtent || v.y > kMaxExtent)
        throw Unsupported("overlay extent too large for exact integration; use the grid method");
    }
    P.xmin -= ox;
    P.xmax -= ox;
    P.ymin -= oy;
    P.ymax -= oy;
  }

  std::vector<Edge> edges;
  for (int c = 0; c < static_cast<int>(polys.size()); ++c) {
    for (int i = 0; i < 4; ++i) {
      Pt a = polys[c].v[i], b = polys[c].v[(i + 1) % 4];
      if (a.x == b.x) continue;
      if (a.x > b.x) std::swap(a, b);
      edges.push_back({a, b, c});
    }
  }

  std::vector<Frac> events;
  for (const auto& P : polys)
    for (const auto& v : P.v) events.push_back({v.x, 1});
  std::vector<std::size_t> by_x(edges.size());
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](auto l, auto r) { return edges[l].a.x < edges[r].a.x; });
  for (std::size_t i = 0; i < by_x.size(); ++i) {
    const Edge& e = edges[by_x[i]];
    for (std::size_t k = i + 1; k < by_x.size(); ++k) {
      const Edge& f = edges[by_x[k]];
      if (f.a.x >= e.b.x) break;
      if (f.cube == e.cube) continue;
      Frac x;
      if (proper_crossing_x(e, f, x)) events.push_back(x);
    }
  }
  std::sort(events.begin(), events.end(), [](const Frac& a, const Frac& b) { return cmp(a, b) < 0; });
  events.erase(std::unique(events.begin(), events.end(), [](const Frac& a, const Frac& b) { return cmp(a, b) == 0; }),
               events.end());

  std::vector<std::vector<int>> cube_edges(polys.size());
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) cube_edges[edges[i].cube].push_back(i);

  std::vector<int> order(polys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return polys[a].xmin < polys[b].xmin; });

  const bool sup = std::isinf(q);
  long double total = 0;
  std::vector<int> active;
  std::size_t next = 0;
  std::vector<Boundary> bounds;
  std::vector<int> inside;
  for (std::size_t s = 0; s + 1 < events.size(); ++s) {
    const Frac& xa = events[s];
    const Frac& xb = events[s + 1];
    while (next < order.size() && cmp(xa, polys[order[next]].xmin) >= 0) active.push_back(order[next++]);
    std::erase_if(active, [&](int c) { return cmp(xa, polys[c].xmax) >= 0; });
    if (active.empty()) continue;

    bounds.clear();
    for (int c : active) {
      for (int ei : cube_edges[c]) {
        const Edge& e = edges[ei];
        if (cmp(xa, e.a.x) < 0 || cmp(xb, e.b.x) > 0) continue;
        Boundary b{y_at(e, xa), y_at(e, xb), 0, 0, c};
        b.fa = b.ya.value();
        b.fb = b.yb.value();
        bounds.push_back(b);
      }
    }
    std::sort(bounds.begin(), bounds.end(), [](const Boundary& l, const Boundary& r) {
      const int a = cmp(l.ya, r.ya);
      if (a != 0) return a < 0;
      const int b = cmp(l.yb, r.yb);
      if (b != 0) return b < 0;
      return l.cube < r.cube;
    });
    const long double width = xb.value() - xa.value();
    inside.clear();
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      const int c = bounds[i].cube;
      auto it = std::find(inside.begin(), inside.end(), c);
      if (it == inside.end()) {
        inside.push_back(c);
      } else {
        *it = inside.back();
        inside.pop_back();
      }
      if (inside.empty()) continue;
      const long double h = (bounds[i + 1].fa - bounds[i].fa) + (bounds[i + 1].fb - bounds[i].fb);
      if (h <= 0) continue;
      long double g = 0;
      if (sup) {
        for (int k : inside) g = std::max<long double>(g, polys[k].wq);
        g = std::pow(g, static_cast<long double>(p));
      } else {
        for (int k : inside) g += polys[k].wq;
        g = std::pow(g, static_cast<long double>(p / q));
      }
      total += g * width * h / 2;
    }
  }
  return total;
}

Poly make_poly(const WeightedCube& wc, int shift, double q) {
  if (wc.index.dim() != 2 || wc.index.is_coarse()) throw Unsupported("overlay integration needs 2-D cone cubes");
  const Cube cube = cube_of(wc.index);
  const auto corners = cube.vertices();  // binary order: 0, e0, e1, e0+e1
  const int ring[4] = {0, 1, 3, 2};
  Poly P;
  for (int i = 0; i < 4; ++i) {
    P.v[i] = Pt{corners[ring[i]][0].times_pow2(shift), corners[ring[i]][1].times_pow2(shift)};
  }
  P.xmin = P.xmax = P.v[0].x;
  P.ymin = P.ymax = P.v[0].y;
  for (const auto& v : P.v) {
    P.xmin = std::min(P.xmin, v.x);
    P.xmax = std::max(P.xmax, v.x);
    P.ymin = std::min(P.ymin, v.y);
    P.ymax = std::max(P.ymax, v.y);
  }
  P.wq = std::isinf(q) ? wc.weight : std::pow(wc.weight, q);
  return P;
}

void check_exponents(double p, double q) {
  if (!(p > 0) || std::isinf(p)) throw ParameterError("p must be finite and positive");
  if (!(q > 0)) throw ParameterError("q must be positive");
}

}  // namespace

double overlay_integral(const std::vector<WeightedCube>& cubes, double p, double q) {
  check_exponents(p, q);
  int jmax = 0;
  for (const auto& c : cubes) {
    if (c.index.dim() != 2) throw Unsupported("exact overlay supports d = 2 only");
    jmax = std::max(jmax, c.index.scale);
  }
  const int shift = 2 * jmax;
  std::vector<Poly> polys;
  for (const auto& c : cubes)
    if (c.weight > 0) polys.push_back(make_poly(c, shift, q));
  if (polys.empty()) return 0;

  // Cluster by overlap of bounding boxes; disjoint clusters integrate independently.
  Dsu dsu(polys.size());
  std::vector<int> order(polys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return polys[a].xmin < polys[b].xmin; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Poly& A = polys[order[i]];
    for (std::size_t k = i + 1; k < order.size(); ++k) {
      const Poly& B = polys[order[k]];
      if (B.xmin >= A.xmax) break;
      if (B.ymin < A.ymax && A.ymin < B.ymax) dsu.unite(order[i], order[k]);
    }
  }
  std::vector<std::vector<Poly>> clusters;
  std::vector<int> slot(polys.size(), -1);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const int r = dsu.find(static_cast<int>(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[slot[r]].push_back(polys[i]);
  }
  long double total = 0;
  for (auto& cl : clusters) total += integrate_cluster(std::move(cl), p, q);
  return static_cast<double>(std::ldexp(total, -2 * shift));
}

GridIntegral grid_integral(const std::vector<WeightedCube>& cubes, double p, double q, int m) {
  check_exponents(p, q);
  if (m < 1) throw ParameterError("grid resolution must be positive");
  struct Row {
    double f[2][2];  // forward map rows
    double k[2];
    double wq;
    double w;
  };
  std::vector<Row> rows;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& c : cubes) {
    if (c.index.dim() != 2 || c.index.is_coarse()) throw Unsupported("grid integration needs 2-D cone cubes");
    if (!(c.weight > 0)) continue;
    const Cube cube = cube_of(c.index);
    for (const auto& v : cube.vertices()) {
      x0 = std::min(x0, v[0].to_double());
      x1 = std::max(x1, v[0].to_double());
      y0 = std::min(y0, v[1].to_double());
      y1 = std::max(y1, v[1].to_double());
    }
    Row r{};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) r.f[a][b] = static_cast<double>(cube.forward(a, b));
      r.k[a] = static_cast<double>(cube.translate[a]);
    }
    r.w = c.weight;
    r.wq = std::isinf(q) ? c.weight : std::pow(c.weight, q);
    rows.push_back(r);
  }
  GridIntegral out;
  if (rows.empty()) return out;
  const double hx = (x1 - x0) / m, hy = (y1 - y0) / m;
  out.cell_x = hx;
  out.cell_y = hy;
  const bool sup = std::isinf(q);
  std::vector<double> acc(static_cast<std::size_t>(m) + 1);
  long double total = 0;
  for (int i = 0; i < m; ++i) {
    const double y = y0 + (i + 0.5) * hy;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto& r : rows) {
      double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
      bool empty = false;
      for (int a = 0; a < 2 && !empty; ++a) {
        // r.f[a][0] x + r.f[a][1] y - k in [0, 1)
        const double base = r.f[a][1] * y - r.k[a];
        const double fx = r.f[a][0];
        if (fx == 0) {
          if (base < 0 || base >= 1) empty = true;
        } else if (fx > 0) {
          lo = std::max(lo, -base / fx);
          hi = std::min(hi, (1 - base) / fx);
        } else {
          lo = std::max(lo, (1 - base) / fx);
          hi = std::min(hi, -base / fx);
        }
      }
      if (empty || !(hi > lo)) continue;
      // Columns whose centres fall in [lo, hi).
      const long c0 = std::max(0L, static_cast<long>(std::ceil((lo - x0) / hx - 0.5)));
      const long c1 = std::min(static_cast<long>(m), static_cast<long>(std::ceil((hi - x0) / hx - 0.5)));
      if (c1 <= c0) continue;
      if (sup) {
        for (long c = c0; c < c1; ++c) acc[c] = std::max(acc[c], r.wq);
      } else {
        acc[c0] += r.wq;
        acc[c1] -= r.wq;
      }
    }
    double run = 0;
    for (int c = 0; c < m; ++c) {
      double g;
      if (sup) {
        g = acc[c];
        if (g > 0) total += std::pow(g, p);
      } else {
        run += acc[c];
        g = run;
        if (g > 0) total += std::pow(g, p / q);
      }
    }
  }
  out.value = static_cast<double>(total * hx * hy);
  return out;
}

}  // namespace anisoframe
