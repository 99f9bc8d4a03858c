#pragma once

#include <cstdint>
#include <string>

#include "bilinear/map_space.hpp"

namespace bilinear {

// Brute-force reference paths, kept independent of the tensor-transform and
// spectral-operator code they validate.
Spectrum naive_transform(const MapFunction& f);
MapFunction naive_inverse(const Spectrum& s);

struct LemmaReport {
  std::string lemma_id;
  long instances_checked = 0;
  long failures = 0;
  double max_err = 0.0;  // 0/1 for exact GF checks
  bool pass = true;
  bool exhaustive = true;
  uint64_t seed = 0;
};

// Exhaustive when the configuration count stays under `exhaustive_cap`
// (default 1e7), otherwise seeded random sampling of `samples` configs.
struct OracleBudget {
  long exhaustive_cap = 10'000'000;
  long samples = 2000;
  uint64_t seed = 1;
};

// Tr(A . X(W1, V/V1)) = Tr(A(V,W) . X) over all (V1, W1, A, X).
LemmaReport check_trace_lemma(int q, int n, int m, const OracleBudget& budget = {});
// Equivalence of the hybrid-mask condition with its two-step factorization
// through nested (V2, W2).
LemmaReport check_equivalence_lemma(int q, int n, int m, const OracleBudget& budget = {});
// Unique triple (W2, V2, X) below a map Y with ker(Y) <= W1, Im(Y) >= V1.
LemmaReport check_unique_triple_lemma(int q, int n, int m, const OracleBudget& budget = {});
// Both directions of the derivative-interchange correspondence
// (V3 = Im(Y-X) cap V2, W3 = Ker(Y-X) + W2).
LemmaReport check_swapping_lemmas(int q, int n, int m, const OracleBudget& budget = {});
// Every decomposition Y + Z = X falls into the image/kernel obstruction or
// admits Y' <= Y, Z' <= Z with Y' + Z' = X as a rank-additive sum.
LemmaReport check_trichotomy(int q, int n, int m, const OracleBudget& budget = {});

}  // namespace bilinear
