#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anisoframe/index_geometry.hpp"
#include "anisoframe/seq_spaces.hpp"

namespace anisoframe {

// ---- random index sets

struct GammaOptions {
  int dim = 2;
  int max_scale = 4;
  std::int64_t window = 8;  // cubes are chosen to contain points of [0, window)^d
  int min_size = 1;
  int max_size = 12;
  int anchors = 3;           // cubes cluster around this many points so they overlap
  double fresh_point = 0.3;  // probability of ignoring the anchors
};

IndexSet random_gamma(std::mt19937_64& rng, const GammaOptions& opt);
std::vector<IndexSet> random_gamma_corpus(std::uint64_t seed, std::size_t count, const GammaOptions& opt);

// Random exact points, each inside a uniformly chosen member of gamma.
std::vector<Point> sample_points_in(const IndexSet& gamma, std::size_t count, std::mt19937_64& rng);

// Lattice block {Q_{j,l,k} : 0 <= k_i < n} of one cone.
IndexSet block_family(int dim, int cone, int j, const IntVec& shear, int n);

// ---- pointwise sums

double s_gamma(const IndexSet& gamma, double g, const Point& x);

// C_d * sum_{m>=0} 2^{-m |(d+1) g - (d-1)|}, with C_d = d * 3^{d-1} bounding the number of cubes of
// one scale that contain a point, divided by 2^{j(d-1)}.
double lemma31_constant(int dim, double g);

struct Lemma31Report {
  int dim = 2;
  double gamma = 0;
  char regime = 'a';  // 'a': largest containing cube, 'b': smallest
  double constant = 0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  double min_lower_ratio = 0;  // min S / |P|^g, should be >= 1
  double max_upper_ratio = 0;  // max S / (C |P|^{g-(d-1)/(d+1)}), should be <= 1
  bool pass() const { return lower_violations == 0 && upper_violations == 0; }
};

Lemma31Report lemma31_check(const IndexSet& gamma, double g, const std::vector<Point>& samples);

// ---- democracy of the canonical basis

double democracy_alpha(const SpaceParams& par1, const SpaceParams& par2);

// Sum over gamma of e_P / u_P with u the canonical weight of par2.
CoeffSeq normalized_indicator(const IndexSet& gamma, const SpaceParams& par2);

struct DemocracyReport {
  std::size_t size = 0;
  double alpha = 0;
  double norm = 0;
  double nu_lower = 0;  // nu_{alpha + (d-1)/(d+1)}
  double nu_upper = 0;  // nu_{alpha - p1 (d-1) / (q1 (d+1))}
  double lower_ratio = 0;  // norm / nu_lower^{1/p1}
  double upper_ratio = 0;  // norm / nu_upper^{1/p1}
};

DemocracyReport democracy_ratio(const IndexSet& gamma, const SpaceParams& par1, const SpaceParams& par2);

struct DemocracyBand {
  std::size_t size = 0;
  double lower_min = 0;
  double lower_max = 0;
  double upper_min = 0;
  double upper_max = 0;
};

DemocracyBand democracy_band(const std::vector<IndexSet>& corpus, const SpaceParams& par1, const SpaceParams& par2,
                             std::vector<DemocracyReport>* reports = nullptr);

// Held-out band stays inside the calibrated one, allowing relative drift.
bool band_within(const DemocracyBand& held, const DemocracyBand& calibrated, double drift);

struct BesovDemocracyReport {
  double norm = 0;
  double nu_root = 0;
  double defect = 0;
  double relative = 0;
};

// Exact equality for b^{s1,p1}_{p1}. alpha_shift perturbs the exponent (necessity witness).
BesovDemocracyReport besov_democracy_exact(const IndexSet& gamma, const SpaceParams& par1, const SpaceParams& par2,
                                           double alpha_shift = 0);

// f-norm of the block family in closed form.
double block_closed_form(int dim, int j, int n, const SpaceParams& par1, const SpaceParams& par2);

struct AlphaScanReport {
  double alpha0 = 0;
  double window_lo = 0;  // empirical
  double window_hi = 0;
  double proof_lo = 0, proof_hi = 0;          // [a0 - (d-1)/(d+1), a0 + p1 (d-1) / (q1 (d+1))]
  double statement_lo = 0, statement_hi = 0;  // corrections swapped
  double block_max_rel_error = 0;             // computed f-norm vs closed form
  struct Row {
    double alpha;
    double lower_slope;  // d log2(lower ratio) / dj
    double upper_slope;
  };
  std::vector<Row> rows;
};

AlphaScanReport converse_alpha_scan(const SpaceParams& par1, const SpaceParams& par2, int j_min, int j_max,
                                    const std::vector<int>& n_values, const std::vector<double>& alphas);

}  // namespace anisoframe
