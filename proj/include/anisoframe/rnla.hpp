#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anisoframe/coeff_seq.hpp"
#include "anisoframe/seq_spaces.hpp"

namespace anisoframe {

enum class Oracle { greedy, exact };

Oracle parse_oracle(const std::string& name);
std::string to_string(Oracle o);

// Error space for approximation: b^{s,p}_p, or f^{s,q}_p when triebel is set (greedy only unless p = q).
struct ErrorSpace {
  SpaceParams par;
  bool triebel = false;

  static ErrorSpace besov(double s, double p) { return ErrorSpace{SpaceParams{s, p, p}, false}; }
  static ErrorSpace tl(const SpaceParams& par) { return ErrorSpace{par, true}; }
  bool additive() const { return par.p == par.q; }
};

double error_norm(const CoeffSeq& c, const ErrorSpace& err);

// |Q|^beta, 1 for coarse indices.
double budget_mass(const ShearIndex& q, double beta);

struct Approximant {
  IndexSet kept;
  double mass = 0;
  double error = 0;
};

// Prefix greedy by score (w|s|)^p / mass; stops at the first item that does not fit in t.
Approximant greedy_approximant(const CoeffSeq& s, const ErrorSpace& err, double beta, double t);

// Exact min over kept sets with mass <= t of ||s - s|_kept||; branch and bound, at most 22 entries.
Approximant sigma_exact_approximant(const CoeffSeq& s, const ErrorSpace& err, double beta, double t);
double sigma_exact(const CoeffSeq& s, const ErrorSpace& err, double beta, double t);

inline constexpr std::size_t kExactCapacity = 22;

// Step function: sigma(t) = sigma[i] on [t[i], t[i+1]), t[0] = 0, last value 0.
struct ApproxCurve {
  std::vector<double> t;
  std::vector<double> sigma;
  Oracle method = Oracle::exact;
  double at(double budget) const;
};

ApproxCurve sigma_curve(const CoeffSeq& s, const ErrorSpace& err, double beta, Oracle method);

struct ApproxParams {
  double xi = 1;
  double mu = 1;  // may be kInf
};

void validate(const ApproxParams& par);

double approx_norm_from_curve(const ApproxCurve& curve, const ApproxParams& par);
double approx_space_norm(const CoeffSeq& s, const ErrorSpace& err, double beta, const ApproxParams& par,
                         Oracle method);

// sup_t t^xi sigma(t), attained at right ends of the steps.
double jackson_sup(const ApproxCurve& curve, double xi);

// ---- random sequences

struct SeqOptions {
  int dim = 2;
  int max_scale = 4;
  std::int64_t window = 8;
  int min_size = 1;
  int max_size = 12;
  bool include_coarse = false;
  double min_magnitude = 1e-2;
};

CoeffSeq random_sequence(std::mt19937_64& rng, const SeqOptions& opt);
std::vector<CoeffSeq> random_sequence_corpus(std::uint64_t seed, std::size_t count, const SeqOptions& opt);

// ---- Jackson / Bernstein verifier

enum class BetaSide { jackson, bernstein };

struct JacksonBernsteinParams {
  double s1 = 0, p1 = 1, q1 = 1;
  double s2 = 0.5, p2 = 2;
  double xi = 0.5;
  double mu = 1;
  BetaSide side = BetaSide::jackson;
  Oracle oracle = Oracle::exact;
};

struct JacksonBernsteinReport {
  double alpha = 0;
  double beta = 0;
  double r = 0;
  double jackson_sup = 0;
  double bernstein_sup = 0;
  double jackson_first_half = 0, jackson_second_half = 0;
  double bernstein_first_half = 0, bernstein_second_half = 0;
  std::vector<double> jackson_ratios;
  std::vector<double> bernstein_ratios;
  bool finite() const;
};

JacksonBernsteinReport jackson_bernstein_check(const std::vector<CoeffSeq>& corpus, const JacksonBernsteinParams& par);

// Closed forms for s = a e_Q when beta = alpha: (mu/r)^{1/mu} and (r/mu)^{1/mu}.
double single_atom_jackson(double r, double mu);
double single_atom_bernstein(double r, double mu);

}  // namespace anisoframe
