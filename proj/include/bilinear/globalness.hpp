#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bilinear/operators.hpp"

namespace bilinear {

// Per-space caches for the sweeps over restriction data. For a fixed pair
// (V1, W1) the slices {A(V,W)+T} over the T-cosets partition L(V,W), so all
// restriction norms for that pair come from one bucketed pass over the
// function values; coset ids are cached per pair.
class SpaceContext {
 public:
  explicit SpaceContext(SpacePtr sp);

  const MapSpace& space() const { return *sp_; }
  SpacePtr space_ptr() const { return sp_; }
  const Field& field() const { return sp_->field(); }

  const std::vector<Subspace>& subspaces_v(int dim) const { return subs_v_[dim]; }
  const std::vector<Subspace>& subspaces_w(int dim) const { return subs_w_[dim]; }
  // All (V1, W1) with dim(V1) + codim(W1) <= d, in deterministic order.
  std::vector<std::pair<Subspace, Subspace>> pairs_up_to(int d) const;

  struct PairTables {
    std::size_t n_cosets = 0;
    std::size_t slice_size = 0;
    std::vector<int32_t> coset_of;       // per primal index
    std::vector<std::size_t> coset_rep;  // one primal index per coset
  };
  const PairTables& tables(const Subspace& v1, const Subspace& w1);

  // Hybrid Laplacian masks cached per pair (bit per spectrum index).
  const std::vector<char>& hybrid_mask(const Subspace& v1, const Subspace& w1);

 private:
  SpacePtr sp_;
  std::vector<std::vector<Subspace>> subs_v_, subs_w_;
  std::map<std::pair<std::vector<uint64_t>, std::vector<uint64_t>>, PairTables> tables_;
  std::map<std::pair<std::vector<uint64_t>, std::vector<uint64_t>>, std::vector<char>> masks_;
};

struct GlobalnessCertificate {
  int d = 0;
  double epsilon = 0;  // threshold the certificate was checked against
  RestrictionTriple worst_triple;
  double worst_value = 0;  // exact max over all order-<=d triples
  bool pass = false;       // worst_value <= epsilon
};

// Exact max of ||f_{(V1,W1)->T}||_2^2 over restrictions of order <= d.
GlobalnessCertificate certify_restriction_global(SpaceContext& ctx, const MapFunction& f, int d,
                                                 double epsilon);
// Same with generalized influences I_{(V1,W1,T)}.
GlobalnessCertificate certify_influences(SpaceContext& ctx, const MapFunction& f, int d,
                                         double epsilon);

struct TransferReport {
  double epsilon_star = 0;     // exact restriction-globalness level at order d
  double max_influence = 0;    // max I_{V1,W1,T}[f^{=d}] over order-<=d triples
  double bound = 0;            // q^{10 d^2} * epsilon_star
  double observed_constant = 0;  // max_influence / epsilon_star
  bool pass = false;
};
TransferReport check_globalness_transfer(SpaceContext& ctx, const MapFunction& f, int d);

struct HypReport {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;               // lhs / rhs
  double observed_constant = 0;   // smallest admissible prefactor
  double observed_exponent = 0;   // log_q(lhs / base) / d^2
  bool pass = false;
};

// Theorem-style conditional hypercontractivity: ||f||_4^4 against
// q^{100 d^2} sum_{(V1,W1)} E_T I^2. Requires fourier_degree(f) <= d.
HypReport check_bilinear_hypercontractivity(SpaceContext& ctx, const MapFunction& f, int d);

struct GlobalBonamiReport {
  double eps = 0;
  HypReport trunc;       // ||f^{<=d}||_4^4 <= q^{115 d^2} eps ||f^{<=d}||_2^2
  HypReport influences;  // ||f^{<=d}||_4^4 <= q^{103 d^2} eps_sgi ||f^{<=d}||_2^2
  double trunc_influence_max = 0;  // max I[f^{<=d}] over order-<=d triples
  bool trunc_influence_pass = false;  // <= q^{12 d^2} eps
  bool pass = false;
};
// eps < 0 means: compute the exact restriction-globalness level first.
GlobalBonamiReport check_restriction_global_bonami(SpaceContext& ctx, const MapFunction& f, int d,
                                                   double eps = -1.0);

struct LevelDReport {
  double eps = 0;
  double level_mass = 0;  // ||f^{=d}||_2^2
  double bound = 0;       // q^{30 d^2} eps^{1/4} ||f||_2^2
  bool pass = false;
  std::vector<double> mass_profile;  // ||f^{=i}||_2^2 for all i
};
// f must be Boolean (0/1); eps < 0 means the exact level is computed.
LevelDReport check_level_d(SpaceContext& ctx, const MapFunction& f, int d, double eps = -1.0);

// Fixture builders shared by the CLI and the acceptance battery.
MapFunction sharpness_function(const SpacePtr& sp, int d);  // sum of rank-d characters
MapFunction rank_threshold_indicator(const SpacePtr& sp, int r);  // 1{rank(A) <= r}
MapFunction random_boolean_function(const SpacePtr& sp, double density, uint64_t seed);

}  // namespace bilinear
