#pragma once

#include <string>
#include <vector>

#include "bilinear/globalness.hpp"

namespace bilinear {

// Cayley graph on L(V,W) with the rank-one connection set. The eigenvalue on
// the rank-d characters is the normalized character sum over rank-one maps,
//   lambda_d = (q^{n+m-d} - q^n - q^m + 1) / ((q^n - 1)(q^m - 1)),
// which tends to q^{-d} as the dimensions grow. lambda_ref holds the
// large-dimension reference form (q^{-d} - 1/|W|) / (1 - 1/|W|) for
// comparison; the operator itself uses the exact values.
struct ShortcodeGraph {
  SpacePtr sp;
  std::size_t rank1_count = 0;
  std::vector<double> lambda;               // exact; index = rank class
  std::vector<double> lambda_ref;           // large-dimension reference form
  std::vector<std::size_t> rank1_indices;   // primal indices of the rank-1 maps
};

ShortcodeGraph make_shortcode_graph(const SpacePtr& sp);

MapFunction adjacency_apply(const ShortcodeGraph& g, const MapFunction& f);         // spectral
MapFunction adjacency_apply_direct(const ShortcodeGraph& g, const MapFunction& f);  // averaging

// Pr_{A ~ S, B rank 1}[A + B in S] = <T 1_S, 1_S> / ||1_S||_2^2.
double expansion_probability(const ShortcodeGraph& g, const MapFunction& indicator);

struct SseReport {
  int r = 0;
  double c0 = 1.0;
  double globalness = 0;      // exact level at order r+1
  double hyp_threshold = 0;   // q^{-C0 r^2}
  bool hyp_met = false;
  double stay_prob = 0;
  double bound = 0;  // q^{-r}
  bool conclusion_ok = true;  // stay_prob < bound whenever hyp_met
  std::vector<double> level_masses;      // ||1_S^{=d}||_2^2
  double spectral_identity_err = 0;      // <T1_S,1_S> vs sum lambda_d * mass_d
  double tail_sum = 0;                   // sum_{d >= r+2} lambda_d * mass_d
  bool tail_ok = true;                   // tail_sum < q^{-r}/2 ||1_S||^2
};
SseReport check_sse_theorem(SpaceContext& ctx, const ShortcodeGraph& g,
                            const MapFunction& indicator, int r, double c0 = 1.0);

struct ScanRow {
  std::string set_id;
  int order = 0;
  double globalness = 0;
  double stay_prob = 0;
  bool meets_hypothesis = false;
  bool flagged = false;  // global yet non-expanding: expected never
};
struct ScanReport {
  std::vector<ScanRow> rows;
  bool pass = true;  // no row flagged
};
// Sweeps structured and seeded random sets at q=2, flagging any
// (order C, level <= delta)-global set with stay probability >= eta.
ScanReport inverse_shortcode_scan(SpaceContext& ctx, const ShortcodeGraph& g, double eta, int order,
                                  double delta, int random_sets, uint64_t seed);

}  // namespace bilinear
