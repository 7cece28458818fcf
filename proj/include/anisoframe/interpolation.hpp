#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisoframe/coeff_seq.hpp"
#include "anisoframe/rnla.hpp"
#include "anisoframe/seq_spaces.hpp"

namespace anisoframe {

enum class SpaceKind { besov, lorentz, approx };

// One sequence space of an interpolation pair. Every norm is multiplied by `scale`.
struct SpaceDesc {
  SpaceKind kind = SpaceKind::besov;
  SpaceParams par{0, 1, 1};  // besov parameters, or the error space of an approximation space
  bool triebel = false;      // approximation error measured in f instead of b
  double weight_exponent = 0;  // lorentz: u_Q = |Q|^weight_exponent
  double beta = 0;             // lorentz / approx: nu_beta
  double lorentz_p = 1;
  double mu = 1;  // lorentz / approx second index, may be kInf
  double xi = 1;  // approx
  Oracle oracle = Oracle::exact;
  double scale = 1;

  static SpaceDesc besov(double s, double p, double q);
  static SpaceDesc lorentz(double weight_exponent, double beta, double p, double mu);
  static SpaceDesc approx(const ErrorSpace& err, double beta, double xi, double mu, Oracle oracle);
  std::string describe() const;
};

void validate(const SpaceDesc& x);
double space_norm(const CoeffSeq& s, const SpaceDesc& x);

struct SpacePair {
  SpaceDesc x;
  SpaceDesc y;
};

struct KOptions {
  bool shrink = false;
};

// Candidate splittings s = h + g, g = s restricted to prefixes of several sorted orders, with
// (||h||_X, ||g||_Y) precomputed. Reversed orders are included, so the family is closed under
// complement and K(s,t;X,Y) = t K(s,1/t;Y,X) holds exactly.
class KFunctional {
 public:
  KFunctional(const CoeffSeq& s, const SpacePair& pair, const KOptions& opt = {});

  double operator()(double t) const;
  double norm_x() const { return norm_x_; }
  double norm_y() const { return norm_y_; }
  std::size_t candidates() const { return split_.size(); }

 private:
  struct Split {
    double hx;
    double gy;
    std::size_t order;
    std::size_t length;
  };
  CoeffSeq s_;
  SpacePair pair_;
  KOptions opt_;
  std::vector<ShearIndex> keys_;
  std::vector<std::vector<std::size_t>> orders_;
  std::vector<Split> split_;
  double norm_x_ = 0, norm_y_ = 0;

  double shrink(const Split& base, double t) const;
};

double k_functional_upper(const CoeffSeq& s, double t, const SpacePair& pair, const KOptions& opt = {});

struct InterpOptions {
  double ratio_log2 = 0.25;  // grid ratio 2^{1/4}
  double tail_tolerance = 1e-4;
  std::size_t max_cells = 4096;
  KOptions k;
};

struct InterpBand {
  double lower = 0;
  double upper = 0;
  double t_min = 0, t_max = 0;
  std::size_t cells = 0;
  std::vector<std::pair<double, double>> samples;  // (t, K upper bound)
};

// (int_0^inf [t^{-theta} K(s,t)]^q dt/t)^{1/q} bracketed by left and right endpoint rules on a
// geometric grid, with closed-form tail bounds.
InterpBand interp_norm(const CoeffSeq& s, double theta, double q, const SpacePair& pair, const InterpOptions& opt = {});

// (int_0^inf [t^{-theta} min(1,t)]^q dt/t)^{1/q}
double identical_space_constant(double theta, double q);

struct ReiterationParams {
  double s1 = 0, p1 = 1;
  double s2 = 0.5, p2 = 2;
  double xi0 = 0.25, xi1 = 1;
  double theta = 0.4;
  double mu = 1;
  Oracle oracle = Oracle::exact;
  bool shrink = false;
};

struct ReiterationRow {
  double band_lower = 0, band_upper = 0;
  double direct = 0;
  double ratio_lower = 0, ratio_upper = 0;
};

struct ReiterationPart {
  std::vector<ReiterationRow> rows;
  double ratio_min = 0;
  double ratio_max = 0;
  double width() const;
};

struct ReiterationReport {
  double alpha = 0;
  double xi = 0;
  double r = 0;
  ReiterationPart approx;  // (A^{xi0}_mu, A^{xi1}_mu)_{theta,mu} against A^xi_mu
  ReiterationPart besov;   // (b^{g0,r0}_{r0}, b^{g1,r1}_{r1})_{theta,r} against b^{g,r}_r
};

ReiterationReport theorem44_check(const std::vector<CoeffSeq>& corpus, const ReiterationParams& par);

// Both widths within the limit and the bands of the two runs overlap.
bool reiteration_stable(const ReiterationPart& a, const ReiterationPart& b, double max_width);

}  // namespace anisoframe
