#pragma once

#include <cstdint>
#include <vector>

#include "bilinear/common.hpp"

namespace bilinear {

// Complex functions on F_p^n under the uniform measure. Points are encoded
// base-p little-endian (digit i = coordinate i); coordinate sets are bitmasks.
struct CubeSpace {
  int p = 2, n = 0;
  std::size_t size = 1;

  CubeSpace(int p_, int n_);
  int digit(std::size_t idx, int i) const;
  std::size_t with_digit(std::size_t idx, int i, int value) const;
};

struct CubeFunction {
  CubeSpace sp;
  std::vector<cd> v;

  explicit CubeFunction(CubeSpace s) : sp(s), v(sp.size, cd{}) {}
  CubeFunction(CubeSpace s, std::vector<cd> vals) : sp(s), v(std::move(vals)) {}
};

struct CubeSpectrum {
  CubeSpace sp;
  std::vector<cd> c;

  explicit CubeSpectrum(CubeSpace s) : sp(s), c(sp.size, cd{}) {}
};

cd cube_inner(const CubeFunction& f, const CubeFunction& g);
double cube_norm2_sq(const CubeFunction& f);
double cube_norm4_pow4(const CubeFunction& f);
cd cube_mean(const CubeFunction& f);

unsigned gamma_support(const CubeSpace& sp, std::size_t gamma);  // bitmask of nonzero digits

// chi_gamma(x) = omega^{<gamma,x>}.
cd cube_character(const CubeSpace& sp, std::size_t gamma, std::size_t x);
CubeFunction cube_character_function(const CubeSpace& sp, std::size_t gamma);

CubeSpectrum cube_transform(const CubeFunction& f);
CubeFunction cube_inverse(const CubeSpectrum& s);

// f_{S->x}: S a coordinate bitmask, x digits packed little-endian over the
// set bits of S in increasing coordinate order.
CubeFunction cube_restrict(const CubeFunction& f, unsigned s_mask, std::size_t x);

CubeFunction efron_stein(const CubeFunction& f, unsigned s_mask);  // f^{=S}
CubeFunction cube_pure_degree(const CubeFunction& f, int d);       // f^{=d}
CubeFunction cube_truncate(const CubeFunction& f, int d);          // f^{<=d}
int cube_degree(const CubeFunction& f, double cutoff = 1e-9);

CubeFunction expectation_op(const CubeFunction& f, unsigned s_mask);  // E_S, resampling form
CubeFunction cube_laplacian(const CubeFunction& f, unsigned t_mask);  // L_T, spectral form

CubeFunction cube_derivative(const CubeFunction& f, unsigned s_mask, std::size_t x);  // D_{S,x}
double cube_influence(const CubeFunction& f, unsigned s_mask, std::size_t x);         // I_{S,x}
double cube_influence(const CubeFunction& f, unsigned s_mask);                        // I_S

CubeFunction noise_operator(const CubeFunction& f, double rho);          // spectral
CubeFunction noise_operator_channel(const CubeFunction& f, double rho);  // exact resampling oracle

struct CubeHypReport {
  double lhs = 0;            // ||f||_4^4
  double rhs = 0;            // (100 d)^d * sum_S E_x I_{S,x}^2
  double ratio = 0;
  bool pass = false;
  double inductive_rhs = 0;  // 2*9^d ||f||_2^4 + 2 sum_T (4d)^{|T|} ||L_T f||_4^4
  bool inductive_pass = false;
  bool bonami_pass = true;   // ||f||_4 <= 3^{d/2} ||f||_2, p = 2 only
};
CubeHypReport check_cube_hypercontractivity(const CubeFunction& f, int d);

struct CubeSseReport {
  double epsilon = 0;        // exact (d, eps)-globalness level of 1_A
  double stay_prob = 0;      // Pr[x in A, y ~ N_rho(x) : y in A]
  double bound = 0;          // rho^{d+1} + eps^{1/4} (800 d)^{d/4}
  bool pass = false;
  double lemma_influence_max_ratio = 0;  // max I_{S,x} / (2^{2|S|} eps)
  bool lemma_influence_pass = false;
  double trunc4_lhs = 0, trunc4_rhs = 0;  // ||f^{<=d}||_4^4 vs (800d)^d eps ||f^{<=d}||_2^2
  bool trunc4_pass = false;
  double level_lhs = 0, level_rhs = 0;    // ||f^{<=d}||_2^2 vs eps^{1/4}(800d)^{d/4}||f||_2^2
  bool level_pass = false;
};
CubeSseReport check_cube_sse(const CubeFunction& indicator, double rho, int d);

// Exact globalness level: max over |S| <= d, x of ||f_{S->x}||_2^2.
double cube_globalness_level(const CubeFunction& f, int d);

}  // namespace bilinear
