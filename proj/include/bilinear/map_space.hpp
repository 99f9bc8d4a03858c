#pragma once

#include <memory>
#include <vector>

#include "bilinear/linalg.hpp"

namespace bilinear {

// The domain L(V,W) with dim(V)=n, dim(W)=m over GF(q). A map A (an m x n
// matrix) is encoded column-major: index = sum A(r,c) q^{c*m+r}. Spectra are
// indexed over L(W,V) (n x m matrices) with the same column-major convention
// on the transposed shape.
class MapSpace : public std::enable_shared_from_this<MapSpace> {
 public:
  MapSpace(Field field, int dim_v, int dim_w);

  const Field& field() const { return field_; }
  int q() const { return field_.q(); }
  int dim_v() const { return n_; }
  int dim_w() const { return m_; }
  std::size_t size() const { return size_; }

  Mat decode_map(std::size_t idx) const;       // m x n
  std::size_t encode_map(const Mat& a) const;  // inverse of decode_map
  Mat decode_dual(std::size_t idx) const;      // n x m, spectrum side
  std::size_t encode_dual(const Mat& x) const;

  // rank of decode_dual(idx); equals rank of decode_map at the permuted
  // index, cached for spectral masks.
  int rank_of_dual(std::size_t idx) const { return rank_[idx]; }
  const std::vector<int>& rank_table() const { return rank_; }

  // spectrum index -> primal-layout index pairing the digits of X with the
  // digits of A in tau(Tr(XA)).
  std::size_t dual_to_primal(std::size_t idx) const { return perm_[idx]; }

 private:
  Field field_;
  int n_, m_;
  std::size_t size_;
  std::vector<std::size_t> perm_;
  std::vector<int> rank_;
};

using SpacePtr = std::shared_ptr<const MapSpace>;
SpacePtr make_space(int q, int dim_v, int dim_w);
SpacePtr make_space(const Field& field, int dim_v, int dim_w);

struct MapFunction {
  SpacePtr sp;
  std::vector<cd> v;

  explicit MapFunction(SpacePtr s) : sp(std::move(s)), v(sp->size(), cd{}) {}
  MapFunction(SpacePtr s, std::vector<cd> vals) : sp(std::move(s)), v(std::move(vals)) {}
};

struct Spectrum {
  SpacePtr sp;
  std::vector<cd> c;

  explicit Spectrum(SpacePtr s) : sp(std::move(s)), c(sp->size(), cd{}) {}
  Spectrum(SpacePtr s, std::vector<cd> coeffs) : sp(std::move(s)), c(std::move(coeffs)) {}
};

// <f,g> = E[f conj(g)], uniform measure.
cd inner(const MapFunction& f, const MapFunction& g);
double norm2_sq(const MapFunction& f);
double norm4_pow4(const MapFunction& f);
cd mean(const MapFunction& f);
double norm2_sq(const Spectrum& s);  // Parseval side: plain sum of |c|^2

MapFunction operator+(const MapFunction& a, const MapFunction& b);
MapFunction operator-(const MapFunction& a, const MapFunction& b);
MapFunction operator*(cd s, const MapFunction& f);
double max_abs_diff(const MapFunction& a, const MapFunction& b);
double max_abs_diff(const Spectrum& a, const Spectrum& b);

// u_X(A) = omega^{tau(Tr(XA))}.
cd character_value(const Field& F, const Mat& x, const Mat& a);
MapFunction character_function(const SpacePtr& sp, const Mat& x);

// Tensor transform: nm stages of the q-point kernel, then the digit pairing
// permutation. Matches the naive inner-product oracle to 1e-10.
Spectrum transform(const MapFunction& f);
MapFunction inverse_transform(const Spectrum& s);

// Indicator of {A : Av = w}. v = 0 demands w = 0 (else the event is empty).
MapFunction dictator(const SpacePtr& sp, const Vec& v, const Vec& w);
// Indicator of {A : A^T phi = psi}, the dual dictator in the fixed dual bases.
MapFunction dual_dictator(const SpacePtr& sp, const Vec& phi, const Vec& psi);

Spectrum pure_part(const Spectrum& s, int d);
Spectrum truncate_spectrum(const Spectrum& s, int d);
MapFunction pure_part(const MapFunction& f, int d);
MapFunction degree_truncate(const MapFunction& f, int d);
int fourier_degree(const Spectrum& s, double cutoff = 1e-9);
int fourier_degree(const MapFunction& f, double cutoff = 1e-9);
// Mass sum_{rank(X)=d} |f^(X)|^2 per degree d.
std::vector<double> rank_mass(const Spectrum& s);

MapFunction shift(const MapFunction& f, const Mat& t);   // Delta_T f (A) = f(A+T)
Spectrum shift_spectrum(const Spectrum& s, const Mat& t);  // multiplies by u_X(T)

// d-restriction data: the affine slice {A(V,W) + T : A in L(V/V1,W1)}.
struct RestrictionTriple {
  Subspace v1;
  Subspace w1;
  Mat t;

  int order() const { return v1.dim() + (w1.ambient - w1.dim()); }
};
bool slice_equal(const Field& F, const RestrictionTriple& a, const RestrictionTriple& b);

// f_{(V1,W1)->T} on L(V/V1, W1), in the canonical charts of V/V1 and W1.
MapFunction restrict_function(const MapFunction& f, const Subspace& v1, const Subspace& w1,
                              const Mat& t);
// Same object computed on the spectral side (the restriction's Fourier
// coefficients collect f^(X) u_X(T) over the fibre X(W1, V/V1) = Y).
Spectrum restrict_spectrum(const Spectrum& s, const Subspace& v1, const Subspace& w1, const Mat& t);

}  // namespace bilinear
