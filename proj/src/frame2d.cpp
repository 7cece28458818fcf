#include "anisoframe/frame2d.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "anisoframe/errors.hpp"
#include "anisoframe/parallel.hpp"

namespace anisoframe {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Aligned FFTW buffer.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n) : n_(n), p_(fftw_alloc_complex(std::max<std::size_t>(n, 1))) {
    if (!p_) throw std::bad_alloc();
    std::fill(data(), data() + n_, Complex{});
  }
  ~FftBuffer() { fftw_free(p_); }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  Complex* data() { return reinterpret_cast<Complex*>(p_); }
  fftw_complex* raw() { return p_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* p_;
};

struct PlanPair {
  int rows = 0;
  int cols = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

PlanPair make_plans(int rows, int cols) {
  std::lock_guard lock(planner_mutex());
  FftBuffer tmp(static_cast<std::size_t>(rows) * cols);
  PlanPair p{rows, cols, nullptr, nullptr};
  p.forward = fftw_plan_dft_2d(rows, cols, tmp.raw(), tmp.raw(), FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_2d(rows, cols, tmp.raw(), tmp.raw(), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!p.forward || !p.backward) throw std::runtime_error("FFTW planning failed");
  return p;
}

void destroy_plans(PlanPair& p) {
  std::lock_guard lock(planner_mutex());
  if (p.forward) fftw_destroy_plan(p.forward);
  if (p.backward) fftw_destroy_plan(p.backward);
  p.forward = p.backward = nullptr;
}

int signed_freq(int u, int n) { return u < n / 2 ? u : u - n; }
int wrap(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

// ---------------------------------------------------------------- windows

GridFunction GridFunction::zeros(int n) {
  if (n <= 0) throw ParameterError("grid size must be positive");
  GridFunction f;
  f.n = n;
  f.data.assign(static_cast<std::size_t>(n) * n, Complex{});
  return f;
}

double GridFunction::norm_sq() const {
  double s = 0;
  for (const auto& v : data) s += std::norm(v);
  return data.empty() ? 0.0 : s / static_cast<double>(data.size());
}

Window1D::Window1D(int order) : order_(order) {
  if (order < 1) throw ParameterError("window smoothness order must be >= 1");
  // Binomial(order + k, k).
  double c = 1;
  for (int k = 0; k <= order; ++k) {
    coef_.push_back(c);
    c = c * (order + k + 1) / (k + 1);
  }
}

double Window1D::ramp(double x) const {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double y = 1 - x;
  double s = 0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) s = s * y + *it;
  return std::pow(x, order_ + 1) * s;
}

double Window1D::psi1(double w) const {
  const double a = std::abs(w);
  if (a <= kPsi1Inner || a >= kPsi1Outer) return 0;
  constexpr double half_pi = std::numbers::pi / 2;
  if (a < 0.125) return std::sin(half_pi * ramp(std::log2(16 * a)));
  if (a <= 0.25) return 1;
  return std::cos(half_pi * ramp(std::log2(4 * a)));
}

double Window1D::psi2(double w) const {
  const double a = std::abs(w);
  if (a >= kPsi2Radius) return 0;
  return std::cos(std::numbers::pi / 2 * ramp(a));
}

double Window1D::coarse(double xi1, double xi2) const {
  const double r = std::max(std::abs(xi1), std::abs(xi2));
  if (r <= kCoarseFlat) return 1;
  if (r >= kCoarseOuter) return 0;
  return std::cos(std::numbers::pi / 2 * ramp(std::log2(16 * r)));
}

Window1D build_windows(int order) { return Window1D(order); }

// ---------------------------------------------------------------- bands

bool BandKey::is_seam() const { return !coarse && std::abs(shear) == (1 << scale); }

std::string BandKey::label() const {
  if (coarse) return "coarse";
  std::ostringstream os;
  os << "cone" << cone << "/j" << scale << "/l" << shear;
  return os.str();
}

double band_value(const Window1D& w, const BandKey& b, double xi1, double xi2) {
  if (b.coarse) return w.coarse(xi1, xi2);
  const double s2 = std::ldexp(1.0, b.scale);
  const double s4 = std::ldexp(1.0, 2 * b.scale);
  auto cone1 = [&] {
    if (xi1 == 0) return 0.0;
    return w.psi1(xi1 / s4) * w.psi2(s2 * xi2 / xi1 - b.shear);
  };
  auto cone2 = [&] {
    if (xi2 == 0) return 0.0;
    return w.psi1(xi2 / s4) * w.psi2(s2 * xi1 / xi2 - b.shear);
  };
  if (b.is_seam()) return std::abs(xi2) <= std::abs(xi1) ? cone1() : cone2();
  return b.cone == 1 ? cone1() : cone2();
}

struct ShearletSystem2D::Impl {
  SystemConfig cfg;
  Window1D win;
  std::vector<BandKey> bands;
  struct BandData {
    int rows = 1;
    int cols = 1;
    double norm = 1;  // 2^{-3j/2}
    std::vector<std::uint32_t> where;  // FFT flat index
    std::vector<std::uint32_t> slot;   // aliased slot on the translate grid
    std::vector<double> value;
    std::size_t plan = 0;
  };
  std::vector<BandData> data;
  std::vector<PlanPair> plans;
  PlanPair big;
  std::size_t coefficient_count = 0;

  explicit Impl(const SystemConfig& c) : cfg(c), win(c.window_order) {}
  ~Impl() {
    for (auto& p : plans) destroy_plans(p);
    destroy_plans(big);
  }
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;
};

ShearletSystem2D::ShearletSystem2D(const SystemConfig& cfg) : impl_(std::make_shared<Impl>(cfg)) {
  auto& im = *impl_;
  const int n = cfg.n;
  if (!is_pow2(n) || n < 4) throw ParameterError("grid size must be a power of two >= 4");
  if (cfg.max_scale < 0 || cfg.max_scale > 12) throw ParameterError("max scale out of range");
  if (std::ldexp(0.5, 2 * cfg.max_scale) >= n / 2.0)
    throw ParameterError("band support exceeds the Nyquist square: need 4^jmax / 2 < N / 2");

  std::vector<BandKey> all;
  if (cfg.include_coarse) all.push_back(BandKey::coarse_band());
  if (cfg.include_cones) {
    for (int j = 0; j <= cfg.max_scale; ++j) {
      const int b = 1 << j;
      for (int l = -b; l <= b; ++l) all.push_back(BandKey::cone_band(1, j, l));
      for (int l = -b + 1; l <= b - 1; ++l) all.push_back(BandKey::cone_band(2, j, l));
    }
  }
  std::sort(all.begin(), all.end());
  for (const auto& o : cfg.omitted)
    if (!std::binary_search(all.begin(), all.end(), o)) throw InvalidIndex("omitted band not in system: " + o.label());
  for (const auto& b : all)
    if (std::find(cfg.omitted.begin(), cfg.omitted.end(), b) == cfg.omitted.end()) im.bands.push_back(b);

  im.big = make_plans(n, n);
  std::map<std::pair<int, int>, std::size_t> shape_plan;
  for (const auto& key : im.bands) {
    Impl::BandData bd;
    int radius = 0;
    if (!key.coarse) {
      const int j = key.scale;
      bd.rows = key.cone == 1 ? (1 << (2 * j)) : (1 << j);
      bd.cols = key.cone == 1 ? (1 << j) : (1 << (2 * j));
      bd.norm = std::pow(2.0, -1.5 * j);
      radius = std::min(1 << (2 * j), n / 2 - 1) / 2 + 1;
      radius = std::min(radius, n / 2 - 1);
    }
    std::vector<char> used(static_cast<std::size_t>(bd.rows) * bd.cols, 0);
    for (int m1 = -radius; m1 <= radius; ++m1) {
      for (int m2 = -radius; m2 <= radius; ++m2) {
        const double v = band_value(im.win, key, m1, m2);
        if (v == 0) continue;
        const int u1 = wrap(m1, n), u2 = wrap(m2, n);
        const auto slot = static_cast<std::uint32_t>(wrap(m1, bd.rows) * bd.cols + wrap(m2, bd.cols));
        if (used[slot]) throw std::logic_error("band support aliases on its translate grid: " + key.label());
        used[slot] = 1;
        bd.where.push_back(static_cast<std::uint32_t>(u1 * n + u2));
        bd.slot.push_back(slot);
        bd.value.push_back(v);
      }
    }
    auto shape = std::make_pair(bd.rows, bd.cols);
    auto it = shape_plan.find(shape);
    if (it == shape_plan.end()) {
      im.plans.push_back(make_plans(bd.rows, bd.cols));
      it = shape_plan.emplace(shape, im.plans.size() - 1).first;
    }
    bd.plan = it->second;
    im.coefficient_count += static_cast<std::size_t>(bd.rows) * bd.cols;
    im.data.push_back(std::move(bd));
  }
}

ShearletSystem2D::~ShearletSystem2D() = default;
ShearletSystem2D::ShearletSystem2D(const ShearletSystem2D&) = default;
ShearletSystem2D& ShearletSystem2D::operator=(const ShearletSystem2D&) = default;

int ShearletSystem2D::n() const { return impl_->cfg.n; }
int ShearletSystem2D::max_scale() const { return impl_->cfg.max_scale; }
const Window1D& ShearletSystem2D::windows() const { return impl_->win; }
const std::vector<BandKey>& ShearletSystem2D::bands() const { return impl_->bands; }
bool ShearletSystem2D::has_band(const BandKey& b) const {
  return std::binary_search(impl_->bands.begin(), impl_->bands.end(), b);
}
std::size_t ShearletSystem2D::band_position(const BandKey& b) const {
  auto it = std::lower_bound(impl_->bands.begin(), impl_->bands.end(), b);
  if (it == impl_->bands.end() || !(*it == b)) throw InvalidIndex("band not in system: " + b.label());
  return static_cast<std::size_t>(it - impl_->bands.begin());
}
double ShearletSystem2D::resolvable_radius() const { return std::ldexp(1.0, 2 * impl_->cfg.max_scale - 2); }
std::size_t ShearletSystem2D::coefficient_count() const { return impl_->coefficient_count; }
int ShearletSystem2D::grid_rows(std::size_t band) const { return impl_->data.at(band).rows; }
int ShearletSystem2D::grid_cols(std::size_t band) const { return impl_->data.at(band).cols; }

ShearIndex ShearletSystem2D::coefficient_index(std::size_t band, int a, int b) const {
  const BandKey& key = impl_->bands.at(band);
  if (key.coarse) return ShearIndex::coarse({0, 0});
  const auto& bd = impl_->data[band];
  if (key.cone == 1) {
    // x = (a / 4^j, b / 2^j) = M^{-1} k with k = (a + l b mod 4^j, b).
    return ShearIndex::at(1, key.scale, {key.shear}, {wrap(a + std::int64_t{key.shear} * b, bd.rows), b});
  }
  return ShearIndex::at(2, key.scale, {key.shear}, {a, wrap(b + std::int64_t{key.shear} * a, bd.cols)});
}

std::size_t ShearletSystem2D::grid_position(std::size_t band, const IntVec& k) const {
  const BandKey& key = impl_->bands.at(band);
  if (k.size() != 2) throw InvalidIndex("frame indices are two-dimensional");
  if (key.coarse) return 0;
  const auto& bd = impl_->data[band];
  int a = 0, b = 0;
  if (key.cone == 1) {
    a = wrap(k[0] - std::int64_t{key.shear} * k[1], bd.rows);
    b = wrap(k[1], bd.cols);
  } else {
    a = wrap(k[0], bd.rows);
    b = wrap(k[1] - std::int64_t{key.shear} * k[0], bd.cols);
  }
  return static_cast<std::size_t>(a) * bd.cols + b;
}

std::vector<double> band_spectrum(const ShearletSystem2D& sys, const BandKey& band) {
  const auto pos = sys.band_position(band);
  const auto& bd = sys.impl().data[pos];
  std::vector<double> out(static_cast<std::size_t>(sys.n()) * sys.n(), 0.0);
  for (std::size_t i = 0; i < bd.where.size(); ++i) out[bd.where[i]] = bd.value[i];
  return out;
}

std::vector<double> band_spectrum(const ShearletSystem2D& sys, int cone, int scale, int shear) {
  return band_spectrum(sys, BandKey::cone_band(cone, scale, shear));
}

ParsevalReport parseval_defect(const ShearletSystem2D& sys) { return parseval_defect(sys, sys.resolvable_radius()); }

ParsevalReport parseval_defect(const ShearletSystem2D& sys, double radius) {
  const int n = sys.n();
  const auto& im = sys.impl();
  std::vector<double> sum(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<char> seam(sum.size(), 0);
  for (std::size_t b = 0; b < im.bands.size(); ++b) {
    const auto& bd = im.data[b];
    const bool is_seam = im.bands[b].is_seam();
    for (std::size_t i = 0; i < bd.where.size(); ++i) {
      sum[bd.where[i]] += bd.value[i] * bd.value[i];
      if (is_seam) seam[bd.where[i]] = 1;
    }
  }
  ParsevalReport rep;
  rep.radius = radius;
  for (int u1 = 0; u1 < n; ++u1) {
    for (int u2 = 0; u2 < n; ++u2) {
      const int m1 = signed_freq(u1, n), m2 = signed_freq(u2, n);
      if (std::max(std::abs(m1), std::abs(m2)) > radius) continue;
      const std::size_t u = static_cast<std::size_t>(u1) * n + u2;
      const double defect = std::abs(1.0 - sum[u]);
      ++rep.points;
      if (seam[u]) {
        rep.seam = std::max(rep.seam, defect);
      } else {
        rep.interior = std::max(rep.interior, defect);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- transforms

std::vector<Complex> fft2(const std::vector<Complex>& x, int rows, int cols, bool forward) {
  if (x.size() != static_cast<std::size_t>(rows) * cols) throw ParameterError("fft2 size mismatch");
  FftBuffer buf(x.size());
  std::copy(x.begin(), x.end(), buf.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(rows, cols, buf.raw(), buf.raw(), forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return std::vector<Complex>(buf.data(), buf.data() + buf.size());
}

double BandCoefficients::energy() const {
  double s = 0;
  for (const auto& b : bands)
    for (const auto& v : b) s += std::norm(v);
  return s;
}

BandCoefficients analyze_bands(const GridFunction& f, const ShearletSystem2D& sys) {
  const int n = sys.n();
  if (f.n != n || f.data.size() != static_cast<std::size_t>(n) * n)
    throw ParameterError("grid size does not match the system");
  const auto& im = sys.impl();
  FftBuffer spec(f.data.size());
  std::copy(f.data.begin(), f.data.end(), spec.data());
  fftw_execute_dft(im.big.forward, spec.raw(), spec.raw());
  const double inv = 1.0 / (static_cast<double>(n) * n);
  const Complex* fhat = spec.data();

  BandCoefficients out;
  out.bands.resize(im.bands.size());
  parallel_for(im.bands.size(), [&](std::size_t b) {
    const auto& bd = im.data[b];
    FftBuffer small(static_cast<std::size_t>(bd.rows) * bd.cols);
    Complex* s = small.data();
    for (std::size_t i = 0; i < bd.where.size(); ++i) s[bd.slot[i]] += fhat[bd.where[i]] * (bd.value[i] * inv);
    fftw_execute_dft(im.plans[bd.plan].backward, small.raw(), small.raw());
    out.bands[b].assign(s, s + small.size());
    for (auto& v : out.bands[b]) v *= bd.norm;
  });
  return out;
}

GridFunction synthesize_bands(const BandCoefficients& c, const ShearletSystem2D& sys) {
  const int n = sys.n();
  const auto& im = sys.impl();
  if (c.bands.size() != im.bands.size()) throw ParameterError("coefficient layout does not match the system");
  std::vector<std::vector<Complex>> transformed(im.bands.size());
  parallel_for(im.bands.size(), [&](std::size_t b) {
    const auto& bd = im.data[b];
    const std::size_t size = static_cast<std::size_t>(bd.rows) * bd.cols;
    if (c.bands[b].size() != size) throw ParameterError("band coefficient array has wrong size");
    FftBuffer small(size);
    std::copy(c.bands[b].begin(), c.bands[b].end(), small.data());
    fftw_execute_dft(im.plans[bd.plan].forward, small.raw(), small.raw());
    transformed[b].assign(small.data(), small.data() + size);
  });
  FftBuffer spec(static_cast<std::size_t>(n) * n);
  Complex* acc = spec.data();
  for (std::size_t b = 0; b < im.bands.size(); ++b) {
    const auto& bd = im.data[b];
    for (std::size_t i = 0; i < bd.where.size(); ++i)
      acc[bd.where[i]] += transformed[b][bd.slot[i]] * (bd.value[i] * bd.norm);
  }
  fftw_execute_dft(im.big.backward, spec.raw(), spec.raw());
  GridFunction f = GridFunction::zeros(n);
  std::copy(acc, acc + f.data.size(), f.data.begin());
  return f;
}

CoeffSeq to_coeff_seq(const BandCoefficients& c, const ShearletSystem2D& sys) {
  CoeffSeq out;
  for (std::size_t b = 0; b < c.bands.size(); ++b) {
    const int rows = sys.grid_rows(b), cols = sys.grid_cols(b);
    for (int a = 0; a < rows; ++a)
      for (int bb = 0; bb < cols; ++bb)
        out.emplace(sys.coefficient_index(b, a, bb), c.bands[b][static_cast<std::size_t>(a) * cols + bb]);
  }
  return out;
}

BandCoefficients from_coeff_seq(const CoeffSeq& c, const ShearletSystem2D& sys) {
  BandCoefficients out;
  out.bands.resize(sys.bands().size());
  for (std::size_t b = 0; b < out.bands.size(); ++b)
    out.bands[b].assign(static_cast<std::size_t>(sys.grid_rows(b)) * sys.grid_cols(b), Complex{});
  for (const auto& [q, v] : c) {
    if (q.dim() != 2) throw InvalidIndex("frame indices are two-dimensional");
    BandKey key = q.is_coarse() ? BandKey::coarse_band() : BandKey::cone_band(q.cone, q.scale, static_cast<int>(q.shear[0]));
    const std::size_t b = sys.band_position(key);
    out.bands[b][sys.grid_position(b, q.translate)] += v;
  }
  return out;
}

CoeffSeq analyze(const GridFunction& f, const ShearletSystem2D& sys) { return to_coeff_seq(analyze_bands(f, sys), sys); }

GridFunction synthesize(const CoeffSeq& c, const ShearletSystem2D& sys) {
  return synthesize_bands(from_coeff_seq(c, sys), sys);
}

GridFunction random_band_limited(int n, double radius, unsigned long long seed, bool real_valued) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> spec(static_cast<std::size_t>(n) * n, Complex{});
  const int r = static_cast<int>(std::floor(radius));
  if (r >= n / 2) throw ParameterError("radius exceeds the Nyquist square");
  for (int m1 = -r; m1 <= r; ++m1) {
    for (int m2 = -r; m2 <= r; ++m2) {
      const Complex v{gauss(rng), gauss(rng)};
      const std::size_t u = static_cast<std::size_t>(wrap(m1, n)) * n + wrap(m2, n);
      if (!real_valued) {
        spec[u] = v;
        continue;
      }
      // Fill one half-plane and mirror it so the function is real.
      const bool lead = m1 > 0 || (m1 == 0 && m2 > 0);
      if (lead) {
        spec[u] = v;
        spec[static_cast<std::size_t>(wrap(-m1, n)) * n + wrap(-m2, n)] = std::conj(v);
      } else if (m1 == 0 && m2 == 0) {
        spec[u] = v.real();
      }
    }
  }
  GridFunction f = GridFunction::zeros(n);
  f.data = fft2(spec, n, n, false);
  return f;
}

GridFunction band_limit(const GridFunction& f, double radius) {
  const int n = f.n;
  auto spec = fft2(f.data, n, n, true);
  const double inv = 1.0 / (static_cast<double>(n) * n);
  for (int u1 = 0; u1 < n; ++u1)
    for (int u2 = 0; u2 < n; ++u2) {
      auto& v = spec[static_cast<std::size_t>(u1) * n + u2];
      if (std::max(std::abs(signed_freq(u1, n)), std::abs(signed_freq(u2, n))) > radius) {
        v = 0;
      } else {
        v *= inv;
      }
    }
  GridFunction out = GridFunction::zeros(n);
  out.data = fft2(spec, n, n, false);
  return out;
}

// ---------------------------------------------------------------- image I/O

namespace {

std::string next_pgm_token(std::istream& is) {
  std::string tok;
  while (true) {
    int ch = is.peek();
    if (ch == EOF) break;
    if (ch == '#') {
      std::string skip;
      std::getline(is, skip);
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      is.get();
      continue;
    }
    tok.push_back(static_cast<char>(is.get()));
  }
  return tok;
}

int pgm_int(std::istream& is, const char* what) {
  std::string tok = next_pgm_token(is);
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size() || v < 0) throw FormatError("");
    return v;
  } catch (const std::exception&) {
    throw FormatError(std::string("bad PGM ") + what);
  }
}

}  // namespace

GridFunction read_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  const std::string magic = next_pgm_token(is);
  if (magic != "P2" && magic != "P5") throw FormatError("not a PGM file: " + path);
  const int w = pgm_int(is, "width"), h = pgm_int(is, "height"), maxval = pgm_int(is, "maxval");
  if (w != h || w <= 0) throw FormatError("PGM image must be square");
  if (maxval <= 0 || maxval > 65535) throw FormatError("PGM maxval out of range");
  GridFunction f = GridFunction::zeros(w);
  const std::size_t count = static_cast<std::size_t>(w) * h;
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) f.data[i] = pgm_int(is, "sample") / static_cast<double>(maxval);
  } else {
    is.get();  // single whitespace after maxval
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(count * bytes);
    if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
      throw FormatError("truncated PGM data: " + path);
    for (std::size_t i = 0; i < count; ++i) {
      const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
      f.data[i] = v / static_cast<double>(maxval);
    }
  }
  return f;
}

void write_pgm(const std::string& path, const GridFunction& f, int maxval) {
  if (maxval <= 0 || maxval > 65535) throw ParameterError("PGM maxval out of range");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path);
  os << "P5\n" << f.n << ' ' << f.n << '\n' << maxval << '\n';
  for (const auto& v : f.data) {
    const long q = std::lround(std::clamp(v.real(), 0.0, 1.0) * maxval);
    if (maxval < 256) {
      os.put(static_cast<char>(q));
    } else {
      os.put(static_cast<char>(q >> 8));
      os.put(static_cast<char>(q & 0xff));
    }
  }
}

GridFunction read_csv_grid(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError("bad CSV value '" + cell + "' in " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw FormatError("empty CSV grid: " + path);
  GridFunction f = GridFunction::zeros(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw FormatError("CSV grid must be N rows of N values");
    for (int k = 0; k < n; ++k) f(i, k) = rows[i][k];
  }
  return f;
}

void write_csv_grid(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write " + path);
  char buf[40];
  for (int i = 0; i < f.n; ++i) {
    for (int k = 0; k < f.n; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", f(i, k).real());
      os << (k ? "," : "") << buf;
    }
    os << '\n';
  }
}

GridFunction read_grid(const std::string& path) {
  auto ends = [&](const char* ext) {
    const std::string e(ext);
    return path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0;
  };
  if (ends(".pgm") || ends(".PGM")) return read_pgm(path);
  if (ends(".csv") || ends(".CSV")) return read_csv_grid(path);
  throw FormatError("unknown image format (expected .pgm or .csv): " + path);
}

}  // namespace anisoframe
