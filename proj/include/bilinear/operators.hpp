#pragma once

#include <cstdint>
#include <string>

#include "bilinear/map_space.hpp"

namespace bilinear {

// Spectral masks. Each Laplacian keeps the coefficients whose index map X
// satisfies the stated condition and zeroes the rest.
Spectrum laplacian_v(const Spectrum& s, const Subspace& v1);  // Im(X) >= V1
Spectrum laplacian_w(const Spectrum& s, const Subspace& w1);  // Ker(X) <= W1
// Im(X) >= V1 and X^{-1}(V1) <= W1.
Spectrum laplacian_hybrid(const Spectrum& s, const Subspace& v1, const Subspace& w1);
Spectrum laplacian_x(const Spectrum& s, const Mat& x);  // Y >= X in the rank poset

// Tagged description of one Laplacian from the four families, carrying its
// order (dim(V1) + codim(W1), or rank(X) for the poset kind).
struct LaplacianSpec {
  enum class Kind { SubspaceV, SubspaceW, Hybrid, PosetX } kind;
  Subspace v1;  // SubspaceV / Hybrid payload
  Subspace w1;  // SubspaceW / Hybrid payload
  Mat x;        // PosetX payload

  static LaplacianSpec subspace_v(Subspace v);
  static LaplacianSpec subspace_w(Subspace w);
  static LaplacianSpec hybrid(Subspace v, Subspace w);
  static LaplacianSpec poset(const Field& F, Mat x0);

  int order = 0;
};
Spectrum apply_laplacian(const Spectrum& s, const LaplacianSpec& spec);
MapFunction apply_laplacian(const MapFunction& f, const LaplacianSpec& spec);

MapFunction laplacian_v(const MapFunction& f, const Subspace& v1);
MapFunction laplacian_w(const MapFunction& f, const Subspace& w1);
MapFunction laplacian_hybrid(const MapFunction& f, const Subspace& v1, const Subspace& w1);
MapFunction laplacian_x(const MapFunction& f, const Mat& x);

// D_{V1,W1,T} f = (L_{V1,W1} f)_{(V1,W1)->T}, landing on L(V/V1, W1).
MapFunction derivative(const MapFunction& f, const Subspace& v1, const Subspace& w1, const Mat& t);
Spectrum derivative_spectrum(const Spectrum& s, const Subspace& v1, const Subspace& w1, const Mat& t);
// D_{X,T} with V1 = Im(X), W1 = Ker(X) derived from X.
MapFunction derivative_x(const MapFunction& f, const Mat& x, const Mat& t);
Spectrum derivative_x_spectrum(const Spectrum& s, const Mat& x, const Mat& t);
double influence(const MapFunction& f, const Subspace& v1, const Subspace& w1, const Mat& t);

// One-sided subspace for the section-7 operators: a dim-1 subspace of V or a
// codim-1 subspace of W.
enum class Side : uint8_t { V, W };
struct UnitSubspace {
  Side side;
  Subspace space;
};

// Averaging over A + B(V,W), B ~ L(V/V', W): spectral mask Im(X) <= V'.
Spectrum avg_coarse(const Spectrum& s, const Subspace& vprime);
MapFunction avg_coarse(const MapFunction& f, const Subspace& vprime);
MapFunction avg_coarse_direct(const MapFunction& f, const Subspace& vprime);  // oracle

// E_v: multiplier q^{-rank(X)} [v not in Im(X)]. Rejects v = 0 and dim(V)=1.
Spectrum avg_v(const Spectrum& s, const Vec& v);
MapFunction avg_v(const MapFunction& f, const Vec& v);
MapFunction avg_v_direct(const MapFunction& f, const Vec& v);  // oracle

// E_{W'} for codim-1 W': multiplier q^{-rank(X)} [Ker(X) + W' = W].
Spectrum avg_w(const Spectrum& s, const Subspace& wprime);
MapFunction avg_w(const MapFunction& f, const Subspace& wprime);
MapFunction avg_w_direct(const MapFunction& f, const Subspace& wprime);  // oracle

MapFunction comb_laplacian(const MapFunction& f, const Vec& v);  // f - E_v f

// T_{i,U} f = f - (q^i + q^{i-1}) E_U f + q^{2i-1} E_U^2 f.
MapFunction tee_operator(const MapFunction& f, int i, const UnitSubspace& u);
// L_U for the same one-sided U (mask Im(X) >= U resp. Ker(X) <= U).
MapFunction laplacian_u(const MapFunction& f, const UnitSubspace& u);
MapFunction avg_u(const MapFunction& f, const UnitSubspace& u);
// The order-one derivative shorthand D_{U,T}: D_{U,W,T} or D_{{0},U,T}.
MapFunction derivative_u(const MapFunction& f, const UnitSubspace& u, const Mat& t);
// The corresponding one-sided restriction g_{U->T}.
MapFunction restrict_u(const MapFunction& f, const UnitSubspace& u, const Mat& t);

struct CalcReport {
  std::string id;
  long instances = 0;
  double max_err = 0.0;
  bool pass = true;
  uint64_t seed = 0;
  bool exhaustive = true;
};

// Prop-style operator identities, checked coefficientwise on characters
// (exhaustive) or on seeded random instances.
CalcReport verify_derivative_composition(int q, int n, int m, bool exhaustive, long samples,
                                         uint64_t seed);
CalcReport verify_laplacian_restriction_sum(int q, int n, int m, bool exhaustive, long samples,
                                            uint64_t seed);
CalcReport verify_derivative_interchange(int q, int n, int m, bool exhaustive, long samples,
                                         uint64_t seed);

}  // namespace bilinear
