#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bilinear/field.hpp"

namespace bilinear {

// Dense matrix over GF(q); entries are field codes. Vectors of F_q^n are
// columns when multiplied on the right.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<uint8_t> e;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), e(static_cast<std::size_t>(r) * c, 0) {}

  uint8_t& at(int r, int c) { return e[static_cast<std::size_t>(r) * cols + c]; }
  uint8_t at(int r, int c) const { return e[static_cast<std::size_t>(r) * cols + c]; }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && e == o.e; }
  bool operator!=(const Mat& o) const { return !(*this == o); }
  bool is_zero() const;

  static Mat identity(int n);
};

using Vec = std::vector<uint8_t>;

Mat mat_add(const Field& F, const Mat& a, const Mat& b);
Mat mat_sub(const Field& F, const Mat& a, const Mat& b);
Mat mat_neg(const Field& F, const Mat& a);
Mat mat_mul(const Field& F, const Mat& a, const Mat& b);
Mat mat_transpose(const Mat& a);
Vec mat_apply(const Field& F, const Mat& a, const Vec& v);
int mat_trace_eval(const Field& F, const Mat& a);  // sum of diagonal entries

// q;rows;cols;e11,e12,... (row-major codes, base 10)
std::string mat_to_text(const Field& F, const Mat& a);
Mat mat_from_text(const Field& F, const std::string& text);

struct RrefResult {
  Mat r;
  std::vector<int> pivots;
  int rank = 0;
};
RrefResult rref(const Field& F, Mat a);
int mat_rank(const Field& F, const Mat& a);
// One solution of a*x = b, if any.
std::optional<Vec> mat_solve(const Field& F, const Mat& a, const Vec& b);

// Subspace of F_q^ambient held as a reduced-row-echelon basis; the RREF grid
// is the canonical form, so equality is grid equality.
struct Subspace {
  int ambient = 0;
  Mat basis;  // dim() rows, ambient cols, RREF

  static Subspace zero(int ambient);
  static Subspace full(int ambient);
  static Subspace from_span(const Field& F, const Mat& rows);

  int dim() const { return basis.rows; }
  int codim() const { return ambient - basis.rows; }
  bool contains(const Field& F, const Vec& v) const;
  bool contains(const Field& F, const Subspace& other) const;

  bool operator==(const Subspace& o) const { return ambient == o.ambient && basis == o.basis; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }
  bool operator<(const Subspace& o) const;  // lexicographic, for deterministic tie-breaks

  std::vector<uint64_t> row_codes(const Field& F) const;
  static Subspace from_row_codes(const Field& F, int ambient, const std::vector<uint64_t>& codes);
};

Subspace kernel_space(const Field& F, const Mat& m);  // subspace of F_q^cols
Subspace image_space(const Field& F, const Mat& m);   // subspace of F_q^rows
Subspace subspace_sum(const Field& F, const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Field& F, const Subspace& a, const Subspace& b);
Subspace annihilator(const Field& F, const Subspace& w1);
// {w in domain : m*w in target}; target lives in F_q^rows.
Subspace preimage_space(const Field& F, const Mat& m, const Subspace& target);

// All dim-dimensional subspaces of F_q^ambient, RREF-canonical, each exactly
// once. Eager; desk cap ambient <= 5.
std::vector<Subspace> enumerate_subspaces(const Field& F, int ambient, int dim);
std::vector<Subspace> enumerate_all_subspaces(const Field& F, int ambient);
// [n choose k]_q as a double (exact for desk sizes).
double gaussian_binomial(int q, int n, int k);

// Coordinate chart: to_amb maps chart coordinates to ambient vectors (columns
// are the frame vectors); from_amb is a left inverse defined on the relevant
// cosets/subspace.
struct Frame {
  Mat to_amb;
  Mat from_amb;
};

// Chart of V/V1: frame vectors are the standard basis vectors at the
// non-pivot columns of V1's RREF; from_amb reduces modulo V1.
Frame quotient_frame(const Field& F, const Subspace& v1);
// Chart of W1 itself: frame vectors are the RREF basis rows; from_amb selects
// pivot coordinates.
Frame subspace_frame(const Subspace& w1);
Frame compose_frames(const Field& F, const Frame& outer, const Frame& inner);

// Express an ambient subspace in chart coordinates (its image under
// from_amb). For a quotient chart this yields (S + V1)/V1.
Subspace subspace_in_chart(const Field& F, const Subspace& s, const Frame& chart);
// Conjugate an ambient map by charts: cod.from_amb * m * dom.to_amb.
Mat map_in_charts(const Field& F, const Mat& m, const Frame& dom, const Frame& cod);

// A in L(V/V1, W1) -> A(V,W): the ambient map with kernel containing V1 and
// image inside W1.
Mat lift_map(const Field& F, const Mat& a, const Subspace& v1, const Subspace& w1);
// A(V1, W/W1) = Q_{W1} o (A|_{V1}).
Mat restrict_corestrict_map(const Field& F, const Mat& a, const Subspace& v1, const Subspace& w1);
// X in L(W,V) -> X(W1, V/V1): domain cut to W1, codomain passed to V/V1.
Mat pushdown_map(const Field& F, const Mat& x, const Subspace& w1, const Subspace& v1);
// A(V2/V1, W2/W1): v+V1 -> Av+W1. Checks the inclusion hypotheses
// A(V1) <= W1 and A(V2) <= W2 and throws contract_error naming the failure.
Mat sandwich_map(const Field& F, const Mat& a, const Subspace& v1, const Subspace& v2,
                 const Subspace& w1, const Subspace& w2);

// rank(Y) == rank(X) + rank(Y-X).
bool poset_leq(const Field& F, const Mat& x, const Mat& y);

}  // namespace bilinear
