#include "anisoframe/index_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "anisoframe/errors.hpp"

namespace anisoframe {

namespace {

constexpr int kMaxScale = 30;

template <class T>
std::strong_ordering lex(const std::vector<T>& a, const std::vector<T>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::strong_ordering operator<=>(const ShearIndex& a, const ShearIndex& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.cone <=> b.cone; c != 0) return c;
  if (auto c = a.scale <=> b.scale; c != 0) return c;
  if (auto c = lex(a.shear, b.shear); c != 0) return c;
  return lex(a.translate, b.translate);
}

ShearIndex ShearIndex::coarse(IntVec k) {
  ShearIndex idx;
  idx.translate = std::move(k);
  validate(idx);
  return idx;
}

ShearIndex ShearIndex::at(int cone, int scale, IntVec shear, IntVec k) {
  ShearIndex idx;
  idx.kind = IndexKind::cone;
  idx.cone = cone;
  idx.scale = scale;
  idx.shear = std::move(shear);
  idx.translate = std::move(k);
  validate(idx);
  return idx;
}

void validate(const ShearIndex& idx) {
  const int d = idx.dim();
  if (d < 1) throw InvalidIndex("index has empty translate");
  if (idx.is_coarse()) {
    if (idx.cone != 0 || idx.scale != 0 || !idx.shear.empty())
      throw InvalidIndex("coarse index carries cone data");
    return;
  }
  if (idx.cone < 1 || idx.cone > d) throw InvalidIndex("cone out of range 1..d");
  if (idx.scale < 0 || idx.scale > kMaxScale) throw InvalidIndex("scale out of range");
  if (static_cast<int>(idx.shear.size()) != d - 1) throw InvalidIndex("shear length must be d-1");
  const std::int64_t bound = std::int64_t{1} << idx.scale;
  for (auto l : idx.shear)
    if (l < -bound || l > bound) throw InvalidIndex("|shear| exceeds 2^j");
}

IntMatrix forward_map(const ShearIndex& idx) {
  validate(idx);
  const int d = idx.dim();
  IntMatrix m{d, std::vector<std::int64_t>(static_cast<std::size_t>(d * d), 0)};
  if (idx.is_coarse()) {
    for (int i = 0; i < d; ++i) m.a[static_cast<std::size_t>(i * d + i)] = 1;
    return m;
  }
  const int fine = idx.cone - 1;
  const int j = idx.scale;
  // M = B^{[l]} A^j: B is the identity with the shear entries on row `fine`.
  for (int c = 0; c < d; ++c) {
    const std::int64_t a = c == fine ? (std::int64_t{1} << (2 * j)) : (std::int64_t{1} << j);
    m.a[static_cast<std::size_t>(c * d + c)] = a;
  }
  int s = 0;
  for (int c = 0; c < d; ++c) {
    if (c == fine) continue;
    m.a[static_cast<std::size_t>(fine * d + c)] = idx.shear[static_cast<std::size_t>(s++)] * (std::int64_t{1} << j);
  }
  return m;
}

Cube cube_of(const ShearIndex& idx) {
  Cube q;
  q.forward = forward_map(idx);
  q.dim = idx.dim();
  q.translate = idx.translate;
  q.measure = cube_measure_exact(idx);
  const int d = q.dim;
  q.edges.assign(static_cast<std::size_t>(d), Point(static_cast<std::size_t>(d), Dyadic{}));
  if (idx.is_coarse()) {
    for (int c = 0; c < d; ++c) q.edges[c][c] = Dyadic{1};
  } else {
    // Inverse = A^{-j} B^{[-l]}: column c of B^{[-l]} scaled row-wise by A^{-j}.
    const int fine = idx.cone - 1;
    const int j = idx.scale;
    auto inv_diag = [&](int r) { return Dyadic::from_ratio(1, r == fine ? 2 * j : j); };
    int s = 0;
    for (int c = 0; c < d; ++c) {
      q.edges[c][c] = inv_diag(c);
      if (c != fine) {
        q.edges[c][fine] = Dyadic{-idx.shear[static_cast<std::size_t>(s++)]} * inv_diag(fine);
      }
    }
  }
  q.origin.assign(static_cast<std::size_t>(d), Dyadic{});
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) q.origin[r] += Dyadic{idx.translate[c]} * q.edges[c][r];
  return q;
}

bool Cube::contains(const Point& x) const {
  if (static_cast<int>(x.size()) != dim) throw ParameterError("point dimension mismatch");
  for (int r = 0; r < dim; ++r) {
    Dyadic y{-translate[static_cast<std::size_t>(r)]};
    for (int c = 0; c < dim; ++c) {
      const std::int64_t m = forward(r, c);
      if (m != 0) y += Dyadic{m} * x[c];
    }
    if (y < Dyadic{0} || y >= Dyadic{1}) return false;
  }
  return true;
}

std::vector<Point> Cube::vertices() const {
  std::vector<Point> out;
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    Point v = origin;
    for (int c = 0; c < dim; ++c)
      if (mask & (1u << c))
        for (int r = 0; r < dim; ++r) v[r] += edges[c][r];
    out.push_back(std::move(v));
  }
  return out;
}

Dyadic cube_measure_exact(const ShearIndex& idx) {
  if (idx.is_coarse()) return Dyadic{1};
  return Dyadic::from_ratio(1, (idx.dim() + 1) * idx.scale);
}

double cube_measure(const ShearIndex& idx) {
  if (idx.is_coarse()) return 1.0;
  return std::exp2(-static_cast<double>((idx.dim() + 1) * idx.scale));
}

double measure_nu(const IndexSet& gamma, double beta) {
  double total = 0.0;
  for (const auto& q : gamma) {
    if (q.is_coarse()) {
      total += 1.0;
    } else {
      total += std::exp2(-static_cast<double>((q.dim() + 1) * q.scale) * beta);
    }
  }
  return total;
}

std::vector<IntVec> shears_at_scale(int d, int j) {
  if (d < 1 || j < 0 || j > kMaxScale) throw ParameterError("bad dimension or scale");
  const std::int64_t bound = std::int64_t{1} << j;
  std::vector<IntVec> out;
  IntVec cur(static_cast<std::size_t>(d - 1), -bound);
  while (true) {
    out.push_back(cur);
    int pos = d - 2;
    while (pos >= 0 && cur[pos] == bound) cur[pos--] = -bound;
    if (pos < 0) break;
    ++cur[pos];
  }
  return out;
}

std::int64_t shear_count(int d, int j) { return static_cast<std::int64_t>(shears_at_scale(d, j).size()); }

PartitionReport partition_check(int cone, int j, const IntVec& shear, const Box& window,
                                const IndexSet& omitted, std::size_t max_listed) {
  const int d = static_cast<int>(window.lo.size());
  if (d < 1 || static_cast<int>(window.hi.size()) != d) throw ParameterError("window dimension mismatch");
  const ShearIndex layer = ShearIndex::at(cone, j, shear, IntVec(static_cast<std::size_t>(d), 0));
  const IntMatrix m = forward_map(layer);
  const int fine = cone - 1;

  // Common exponent e so that every sample point is an integer vector divided by 2^e.
  int e = 2 * j + 1;
  for (int c = 0; c < d; ++c) e = std::max({e, window.lo[c].shift(), window.hi[c].shift()});
  std::vector<std::int64_t> lo(d), hi(d), step(d);
  for (int c = 0; c < d; ++c) {
    lo[c] = window.lo[c].times_pow2(e);
    hi[c] = window.hi[c].times_pow2(e);
    step[c] = std::int64_t{1} << (e - (c == fine ? 2 * j + 1 : j + 1));
  }
  const __int128 unit = static_cast<__int128>(1) << e;

  PartitionReport rep;
  std::vector<std::int64_t> x(lo);
  std::vector<std::int64_t> base(d);
  std::vector<int> delta(d);
  for (int c = 0; c < d; ++c)
    if (lo[c] >= hi[c]) return rep;

  while (true) {
    // floor(M x) per row.
    std::vector<__int128> mx(d, 0);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) mx[r] += static_cast<__int128>(m(r, c)) * x[c];
      __int128 q = mx[r] / unit;
      if (mx[r] % unit != 0 && mx[r] < 0) --q;
      base[r] = static_cast<std::int64_t>(q);
    }
    int covered = 0;
    std::fill(delta.begin(), delta.end(), -1);
    while (true) {
      IntVec k(d);
      bool inside = true;
      for (int r = 0; r < d; ++r) {
        k[r] = base[r] + delta[r];
        const __int128 y = mx[r] - static_cast<__int128>(k[r]) * unit;
        if (y < 0 || y >= unit) inside = false;
      }
      if (inside) {
        ShearIndex idx = layer;
        idx.translate = std::move(k);
        if (!omitted.contains(idx)) ++covered;
      }
      int pos = d - 1;
      while (pos >= 0 && delta[pos] == 1) delta[pos--] = -1;
      if (pos < 0) break;
      ++delta[pos];
    }
    ++rep.points_checked;
    if (covered != 1) {
      rep.ok = false;
      ++rep.violation_count;
      if (rep.violations.size() < max_listed) {
        Point p(d);
        for (int c = 0; c < d; ++c) p[c] = Dyadic::from_ratio(x[c], e);
        rep.violations.push_back({std::move(p), covered});
      }
    }
    int pos = d - 1;
    while (pos >= 0) {
      x[pos] += step[pos];
      if (x[pos] < hi[pos]) break;
      x[pos] = lo[pos];
      --pos;
    }
    if (pos < 0) break;
  }
  return rep;
}

std::optional<ShearIndex> extreme_cube_at(const Point& x, const IndexSet& gamma, ExtremeMode mode) {
  std::optional<ShearIndex> best;
  for (const auto& q : gamma) {
    if (!cube_of(q).contains(x)) continue;
    if (!best) {
      best = q;
      continue;
    }
    // Gamma iterates in the total order, so strict comparisons keep the order-smallest on ties.
    const bool better = mode == ExtremeMode::largest ? q.scale < best->scale : q.scale > best->scale;
    if (better) best = q;
  }
  return best;
}

std::string format_index(const ShearIndex& idx) {
  std::ostringstream os;
  if (idx.is_coarse()) {
    os << 'C';
  } else {
    os << "S " << idx.cone << ' ' << idx.scale;
    for (auto l : idx.shear) os << ' ' << l;
  }
  for (auto k : idx.translate) os << ' ' << k;
  return os.str();
}

ShearIndex parse_index(const std::vector<std::int64_t>& f, bool coarse) {
  if (coarse) {
    if (f.empty()) throw FormatError("coarse index needs at least one translate");
    return ShearIndex::coarse(f);
  }
  if (f.size() < 3 || f.size() % 2 == 0) throw FormatError("cone index needs 2d+1 integers");
  const std::size_t d = (f.size() - 1) / 2;
  IntVec shear(f.begin() + 2, f.begin() + 2 + static_cast<std::ptrdiff_t>(d - 1));
  IntVec k(f.begin() + 1 + static_cast<std::ptrdiff_t>(d), f.end());
  return ShearIndex::at(static_cast<int>(f[0]), static_cast<int>(f[1]), std::move(shear), std::move(k));
}

ShearIndex parse_index_line(const std::string& line) {
  std::istringstream is(line);
  std::string tag;
  is >> tag;
  if (tag != "C" && tag != "S") throw FormatError("index line must start with C or S: " + line);
  std::vector<std::int64_t> f;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw FormatError("bad integer in index line: " + line);
    }
    if (used != tok.size()) throw FormatError("bad integer in index line: " + line);
    f.push_back(v);
  }
  try {
    return parse_index(f, tag == "C");
  } catch (const InvalidIndex& e) {
    throw FormatError(std::string("invalid index: ") + e.what());
  }
}

void write_index_set(std::ostream& os, const IndexSet& gamma) {
  for (const auto& q : gamma) os << format_index(q) << '\n';
}

IndexSet read_index_set(std::istream& is) {
  IndexSet out;
  std::string line;
  while (std::getline(is, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.insert(parse_index_line(line));
  }
  return out;
}

}  // namespace anisoframe
