#pragma once

#include <limits>
#include <map>
#include <string>

#include "anisoframe/coeff_seq.hpp"

namespace anisoframe {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Smoothness s, integrability p, summability q (q may be kInf).
struct SpaceParams {
  double s = 0;
  double p = 2;
  double q = 2;
};

void validate(const SpaceParams& par);

using WeightSeq = std::map<ShearIndex, double>;

// |Q|^{-s+1/p-1/2}, the norm of a unit vector in b^{s,q}_p and f^{s,q}_p.
double canonical_weight(const ShearIndex& idx, double s, double p);
WeightSeq canonical_weights(const IndexSet& gamma, double s, double p);
WeightSeq canonical_weights(const CoeffSeq& c, double s, double p);

// l^p norm of the coarse coefficients.
double coarse_term(const CoeffSeq& c, double p);

double besov_norm(const CoeffSeq& c, const SpaceParams& par);

enum class TlMethod { exact_overlay, grid };

struct TlOptions {
  TlMethod method = TlMethod::exact_overlay;
  int grid_m = 1024;
};

struct TlResult {
  double value = 0;
  std::string method;
  double cell_x = 0;  // grid method only
  double cell_y = 0;
};

TlResult tl_norm_report(const CoeffSeq& c, const SpaceParams& par, const TlOptions& opt = {});
double tl_norm(const CoeffSeq& c, const SpaceParams& par, const TlOptions& opt = {});

// Discrete Lorentz quasi-norm of a_Q = |u_Q s_Q| with respect to the measure |Q|^beta
// (coarse entries carry mass 1). Entries missing from u get weight 1.
double lorentz_norm(const CoeffSeq& c, const WeightSeq& u, double beta, double p, double mu);

struct LemmaReport {
  double gamma = 0;
  double lorentz = 0;
  double besov = 0;
  double difference = 0;
  double relative = 0;
  std::size_t coarse_dropped = 0;
  bool pass = false;
};

// Compares the Lorentz norm with weight |Q|^{-s-1/2} and the Besov norm b^{gamma,tau}_tau,
// gamma = s + (1 - beta) / tau, on the cone part of c.
LemmaReport lemma_identification_check(const CoeffSeq& c, double s, double tau, double beta,
                                       double tolerance = 1e-10);

}  // namespace anisoframe
