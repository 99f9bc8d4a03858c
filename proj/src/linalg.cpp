#include "bilinear/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace bilinear {

bool Mat::is_zero() const {
  for (uint8_t v : e)
    if (v) return false;
  return true;
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat mat_add(const Field& F, const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw contract_error("mat_add: shape mismatch");
  Mat r(a.rows, a.cols);
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = static_cast<uint8_t>(F.add(a.e[i], b.e[i]));
  return r;
}

Mat mat_sub(const Field& F, const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw contract_error("mat_sub: shape mismatch");
  Mat r(a.rows, a.cols);
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = static_cast<uint8_t>(F.sub(a.e[i], b.e[i]));
  return r;
}

Mat mat_neg(const Field& F, const Mat& a) {
  Mat r(a.rows, a.cols);
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = static_cast<uint8_t>(F.neg(a.e[i]));
  return r;
}

Mat mat_mul(const Field& F, const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw contract_error("mat_mul: inner dimensions differ");
  Mat r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      int aik = a.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < b.cols; ++j)
        r.at(i, j) = static_cast<uint8_t>(F.add(r.at(i, j), F.mul(aik, b.at(k, j))));
    }
  return r;
}

Mat mat_transpose(const Mat& a) {
  Mat r(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r.at(j, i) = a.at(i, j);
  return r;
}

Vec mat_apply(const Field& F, const Mat& a, const Vec& v) {
  if (a.cols != static_cast<int>(v.size())) throw contract_error("mat_apply: shape mismatch");
  Vec r(a.rows, 0);
  for (int i = 0; i < a.rows; ++i) {
    int acc = 0;
    for (int j = 0; j < a.cols; ++j) acc = F.add(acc, F.mul(a.at(i, j), v[j]));
    r[i] = static_cast<uint8_t>(acc);
  }
  return r;
}

int mat_trace_eval(const Field& F, const Mat& a) {
  if (a.rows != a.cols) throw contract_error("trace of non-square matrix");
  int acc = 0;
  for (int i = 0; i < a.rows; ++i) acc = F.add(acc, a.at(i, i));
  return acc;
}

std::string mat_to_text(const Field& F, const Mat& a) {
  std::ostringstream os;
  os << F.q() << ";" << a.rows << ";" << a.cols << ";";
  for (std::size_t i = 0; i < a.e.size(); ++i) {
    if (i) os << ",";
    os << static_cast<int>(a.e[i]);
  }
  return os.str();
}

Mat mat_from_text(const Field& F, const std::string& text) {
  std::stringstream ss(text);
  std::string tok;
  std::vector<std::string> parts;
  while (std::getline(ss, tok, ';')) parts.push_back(tok);
  if (parts.size() != 4) throw std::invalid_argument("bad matrix text: " + text);
  if (std::stoi(parts[0]) != F.q()) throw std::invalid_argument("matrix text has wrong q");
  Mat m(std::stoi(parts[1]), std::stoi(parts[2]));
  std::stringstream es(parts[3]);
  std::size_t i = 0;
  while (std::getline(es, tok, ',')) {
    if (i >= m.e.size()) throw std::invalid_argument("matrix text has too many entries");
    int v = std::stoi(tok);
    if (v < 0 || v >= F.q()) throw std::invalid_argument("matrix entry out of range");
    m.e[i++] = static_cast<uint8_t>(v);
  }
  if (i != m.e.size()) throw std::invalid_argument("matrix text has too few entries");
  return m;
}

RrefResult rref(const Field& F, Mat a) {
  RrefResult out;
  int r = 0;
  for (int c = 0; c < a.cols && r < a.rows; ++c) {
    int piv = -1;
    for (int i = r; i < a.rows; ++i)
      if (a.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < a.cols; ++j) std::swap(a.at(piv, j), a.at(r, j));
    int s = F.inv(a.at(r, c));
    for (int j = 0; j < a.cols; ++j) a.at(r, j) = static_cast<uint8_t>(F.mul(s, a.at(r, j)));
    for (int i = 0; i < a.rows; ++i) {
      if (i == r || !a.at(i, c)) continue;
      int f = a.at(i, c);
      for (int j = 0; j < a.cols; ++j)
        a.at(i, j) = static_cast<uint8_t>(F.sub(a.at(i, j), F.mul(f, a.at(r, j))));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.r = std::move(a);
  return out;
}

int mat_rank(const Field& F, const Mat& a) { return rref(F, a).rank; }

std::optional<Vec> mat_solve(const Field& F, const Mat& a, const Vec& b) {
  if (a.rows != static_cast<int>(b.size())) throw contract_error("mat_solve: shape mismatch");
  Mat aug(a.rows, a.cols + 1);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols) = b[i];
  }
  auto rr = rref(F, aug);
  Vec x(a.cols, 0);
  for (int r = 0; r < rr.rank; ++r) {
    if (rr.pivots[r] == a.cols) return std::nullopt;  // inconsistent row
    x[rr.pivots[r]] = rr.r.at(r, a.cols);
  }
  return x;
}

Subspace Subspace::zero(int ambient) {
  Subspace s;
  s.ambient = ambient;
  s.basis = Mat(0, ambient);
  return s;
}

Subspace Subspace::full(int ambient) {
  Subspace s;
  s.ambient = ambient;
  s.basis = Mat::identity(ambient);
  return s;
}

Subspace Subspace::from_span(const Field& F, const Mat& rows) {
  auto rr = rref(F, rows);
  Subspace s;
  s.ambient = rows.cols;
  s.basis = Mat(rr.rank, rows.cols);
  for (int i = 0; i < rr.rank; ++i)
    for (int j = 0; j < rows.cols; ++j) s.basis.at(i, j) = rr.r.at(i, j);
  return s;
}

namespace {
// Pivot column of an RREF row: its first nonzero entry.
int row_pivot(const Mat& basis, int row) {
  for (int c = 0; c < basis.cols; ++c)
    if (basis.at(row, c)) return c;
  return -1;
}
}  // namespace

bool Subspace::contains(const Field& F, const Vec& v) const {
  // Reduce by the RREF rows and check what is left.
  Vec w = v;
  for (int r = 0; r < basis.rows; ++r) {
    int piv = row_pivot(basis, r);
    int f = w[piv];
    if (f)
      for (int j = 0; j < ambient; ++j)
        w[j] = static_cast<uint8_t>(F.sub(w[j], F.mul(f, basis.at(r, j))));
  }
  for (uint8_t x : w)
    if (x) return false;
  return true;
}

bool Subspace::contains(const Field& F, const Subspace& other) const {
  if (other.ambient != ambient) throw contract_error("subspace containment: ambient mismatch");
  for (int i = 0; i < other.basis.rows; ++i) {
    Vec v(ambient);
    for (int j = 0; j < ambient; ++j) v[j] = other.basis.at(i, j);
    if (!contains(F, v)) return false;
  }
  return true;
}

bool Subspace::operator<(const Subspace& o) const {
  if (ambient != o.ambient) return ambient < o.ambient;
  if (basis.rows != o.basis.rows) return basis.rows < o.basis.rows;
  return basis.e < o.basis.e;
}

std::vector<uint64_t> Subspace::row_codes(const Field& F) const {
  std::vector<uint64_t> out;
  out.reserve(basis.rows);
  for (int i = 0; i < basis.rows; ++i) {
    uint64_t code = 0;
    for (int j = ambient - 1; j >= 0; --j) code = code * F.q() + basis.at(i, j);
    out.push_back(code);
  }
  return out;
}

Subspace Subspace::from_row_codes(const Field& F, int ambient, const std::vector<uint64_t>& codes) {
  Mat rows(static_cast<int>(codes.size()), ambient);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    uint64_t c = codes[i];
    for (int j = 0; j < ambient; ++j) {
      rows.at(static_cast<int>(i), j) = static_cast<uint8_t>(c % F.q());
      c /= F.q();
    }
  }
  return from_span(F, rows);
}

Subspace kernel_space(const Field& F, const Mat& m) {
  auto rr = rref(F, m);
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols; ++c)
    if (std::find(rr.pivots.begin(), rr.pivots.end(), c) == rr.pivots.end())
      free_cols.push_back(c);
  Mat rows(static_cast<int>(free_cols.size()), m.cols);
  for (std::size_t i = 0; i < free_cols.size(); ++i) {
    int fc = free_cols[i];
    rows.at(static_cast<int>(i), fc) = 1;
    for (int r = 0; r < rr.rank; ++r)
      rows.at(static_cast<int>(i), rr.pivots[r]) = static_cast<uint8_t>(F.neg(rr.r.at(r, fc)));
  }
  return Subspace::from_span(F, rows);
}

Subspace image_space(const Field& F, const Mat& m) {
  return Subspace::from_span(F, mat_transpose(m));
}

Subspace subspace_sum(const Field& F, const Subspace& a, const Subspace& b) {
  if (a.ambient != b.ambient) throw contract_error("subspace_sum: ambient mismatch");
  Mat rows(a.basis.rows + b.basis.rows, a.ambient);
  for (int i = 0; i < a.basis.rows; ++i)
    for (int j = 0; j < a.ambient; ++j) rows.at(i, j) = a.basis.at(i, j);
  for (int i = 0; i < b.basis.rows; ++i)
    for (int j = 0; j < a.ambient; ++j) rows.at(a.basis.rows + i, j) = b.basis.at(i, j);
  return Subspace::from_span(F, rows);
}

Subspace subspace_intersect(const Field& F, const Subspace& a, const Subspace& b) {
  if (a.ambient != b.ambient) throw contract_error("subspace_intersect: ambient mismatch");
  // Solve x*A = y*B: kernel of [A^T | -B^T] gives the coefficient pairs.
  int da = a.basis.rows, db = b.basis.rows;
  if (da == 0 || db == 0) return Subspace::zero(a.ambient);
  Mat sys(a.ambient, da + db);
  for (int j = 0; j < a.ambient; ++j) {
    for (int i = 0; i < da; ++i) sys.at(j, i) = a.basis.at(i, j);
    for (int i = 0; i < db; ++i) sys.at(j, da + i) = static_cast<uint8_t>(F.neg(b.basis.at(i, j)));
  }
  Subspace coeff = kernel_space(F, sys);
  Mat rows(coeff.dim(), a.ambient);
  for (int r = 0; r < coeff.dim(); ++r)
    for (int j = 0; j < a.ambient; ++j) {
      int acc = 0;
      for (int i = 0; i < da; ++i) acc = F.add(acc, F.mul(coeff.basis.at(r, i), a.basis.at(i, j)));
      rows.at(r, j) = static_cast<uint8_t>(acc);
    }
  return Subspace::from_span(F, rows);
}

Subspace annihilator(const Field& F, const Subspace& w1) {
  // Functionals vanishing on W1 = kernel of the basis matrix.
  if (w1.dim() == 0) return Subspace::full(w1.ambient);
  return kernel_space(F, w1.basis);
}

Subspace preimage_space(const Field& F, const Mat& m, const Subspace& target) {
  if (target.ambient != m.rows) throw contract_error("preimage_space: ambient mismatch");
  Frame q = quotient_frame(F, target);
  return kernel_space(F, mat_mul(F, q.from_amb, m));
}

std::vector<Subspace> enumerate_subspaces(const Field& F, int ambient, int dim) {
  if (dim < 0 || dim > ambient || ambient < 0 || ambient > 5)
    throw std::domain_error("enumerate_subspaces: dims out of range");
  std::vector<Subspace> out;
  // Enumerate RREF matrices directly: choose pivot columns, then fill the
  // free entries (right of the row's pivot, not in a pivot column).
  std::vector<int> pivots(dim);
  std::function<void(int, int)> choose = [&](int idx, int start) {
    if (idx == dim) {
      std::vector<std::pair<int, int>> free_pos;  // (row, col)
      for (int r = 0; r < dim; ++r)
        for (int c = pivots[r] + 1; c < ambient; ++c)
          if (std::find(pivots.begin(), pivots.end(), c) == pivots.end())
            free_pos.emplace_back(r, c);
      std::size_t count = ipow(static_cast<std::size_t>(F.q()), static_cast<unsigned>(free_pos.size()));
      for (std::size_t code = 0; code < count; ++code) {
        Subspace s;
        s.ambient = ambient;
        s.basis = Mat(dim, ambient);
        for (int r = 0; r < dim; ++r) s.basis.at(r, pivots[r]) = 1;
        std::size_t c = code;
        for (auto [r, col] : free_pos) {
          s.basis.at(r, col) = static_cast<uint8_t>(c % F.q());
          c /= F.q();
        }
        out.push_back(std::move(s));
      }
      return;
    }
    for (int c = start; c < ambient; ++c) {
      pivots[idx] = c;
      choose(idx + 1, c + 1);
    }
  };
  choose(0, 0);
  return out;
}

std::vector<Subspace> enumerate_all_subspaces(const Field& F, int ambient) {
  std::vector<Subspace> out;
  for (int d = 0; d <= ambient; ++d) {
    auto part = enumerate_subspaces(F, ambient, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

double gaussian_binomial(int q, int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double num = 1.0, den = 1.0;
  for (int i = 0; i < k; ++i) {
    num *= std::pow(static_cast<double>(q), n - i) - 1.0;
    den *= std::pow(static_cast<double>(q), i + 1) - 1.0;
  }
  return num / den;
}

Frame quotient_frame(const Field& F, const Subspace& v1) {
  int n = v1.ambient, k = v1.dim();
  auto rr = rref(F, v1.basis);
  std::vector<int> nonpivots;
  for (int c = 0; c < n; ++c)
    if (std::find(rr.pivots.begin(), rr.pivots.end(), c) == rr.pivots.end()) nonpivots.push_back(c);
  Frame f;
  f.to_amb = Mat(n, n - k);
  for (std::size_t i = 0; i < nonpivots.size(); ++i) f.to_amb.at(nonpivots[i], static_cast<int>(i)) = 1;
  // from_amb: reduce modulo V1, then read the non-pivot coordinates.
  f.from_amb = Mat(n - k, n);
  for (int c = 0; c < n; ++c) {
    Vec v(n, 0);
    v[c] = 1;
    // subtract basis rows to clear pivot coordinates
    for (int r = 0; r < k; ++r) {
      int piv = rr.pivots[r];
      int coeff = v[piv];
      if (coeff)
        for (int j = 0; j < n; ++j)
          v[j] = static_cast<uint8_t>(F.sub(v[j], F.mul(coeff, v1.basis.at(r, j))));
    }
    for (std::size_t i = 0; i < nonpivots.size(); ++i) f.from_amb.at(static_cast<int>(i), c) = v[nonpivots[i]];
  }
  return f;
}

Frame subspace_frame(const Subspace& w1) {
  int m = w1.ambient, d = w1.dim();
  Frame f;
  f.to_amb = mat_transpose(w1.basis);
  // RREF basis: the coordinate of a W1-vector along row r is its entry at
  // row r's pivot column.
  f.from_amb = Mat(d, m);
  for (int r = 0; r < d; ++r) f.from_amb.at(r, row_pivot(w1.basis, r)) = 1;
  return f;
}

Frame compose_frames(const Field& F, const Frame& outer, const Frame& inner) {
  Frame f;
  f.to_amb = mat_mul(F, outer.to_amb, inner.to_amb);
  f.from_amb = mat_mul(F, inner.from_amb, outer.from_amb);
  return f;
}

Subspace subspace_in_chart(const Field& F, const Subspace& s, const Frame& chart) {
  Mat rows = mat_transpose(mat_mul(F, chart.from_amb, mat_transpose(s.basis)));
  return Subspace::from_span(F, rows);
}

Mat map_in_charts(const Field& F, const Mat& m, const Frame& dom, const Frame& cod) {
  return mat_mul(F, cod.from_amb, mat_mul(F, m, dom.to_amb));
}

Mat lift_map(const Field& F, const Mat& a, const Subspace& v1, const Subspace& w1) {
  Frame qf = quotient_frame(F, v1);
  Frame wf = subspace_frame(w1);
  if (a.rows != w1.dim() || a.cols != v1.ambient - v1.dim())
    throw contract_error("lift_map: matrix not typed against (V/V1, W1)");
  return mat_mul(F, wf.to_amb, mat_mul(F, a, qf.from_amb));
}

Mat restrict_corestrict_map(const Field& F, const Mat& a, const Subspace& v1, const Subspace& w1) {
  if (a.cols != v1.ambient || a.rows != w1.ambient)
    throw contract_error("restrict_corestrict_map: shape mismatch");
  Frame vf = subspace_frame(v1);
  Frame wq = quotient_frame(F, w1);
  return mat_mul(F, wq.from_amb, mat_mul(F, a, vf.to_amb));
}

Mat pushdown_map(const Field& F, const Mat& x, const Subspace& w1, const Subspace& v1) {
  if (x.cols != w1.ambient || x.rows != v1.ambient)
    throw contract_error("pushdown_map: shape mismatch");
  Frame wf = subspace_frame(w1);
  Frame vq = quotient_frame(F, v1);
  return mat_mul(F, vq.from_amb, mat_mul(F, x, wf.to_amb));
}

Mat sandwich_map(const Field& F, const Mat& a, const Subspace& v1, const Subspace& v2,
                 const Subspace& w1, const Subspace& w2) {
  if (!v2.contains(F, v1)) throw contract_error("sandwich_map: V1 <= V2 fails");
  if (!w2.contains(F, w1)) throw contract_error("sandwich_map: W1 <= W2 fails");
  // Check A(V1) <= W1 and A(V2) <= W2.
  for (int i = 0; i < v1.dim(); ++i) {
    Vec v(v1.ambient);
    for (int j = 0; j < v1.ambient; ++j) v[j] = v1.basis.at(i, j);
    if (!w1.contains(F, mat_apply(F, a, v))) throw contract_error("sandwich_map: A(V1) <= W1 fails");
  }
  for (int i = 0; i < v2.dim(); ++i) {
    Vec v(v2.ambient);
    for (int j = 0; j < v2.ambient; ++j) v[j] = v2.basis.at(i, j);
    if (!w2.contains(F, mat_apply(F, a, v))) throw contract_error("sandwich_map: A(V2) <= W2 fails");
  }
  // Chart of V2/V1: V2's chart composed with the quotient by V1-in-V2-coords.
  Frame v2f = subspace_frame(v2);
  Frame dom = compose_frames(F, v2f, quotient_frame(F, subspace_in_chart(F, v1, v2f)));
  Frame w2f = subspace_frame(w2);
  Frame cod = compose_frames(F, w2f, quotient_frame(F, subspace_in_chart(F, w1, w2f)));
  return map_in_charts(F, a, dom, cod);
}

bool poset_leq(const Field& F, const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw contract_error("poset_leq: shape mismatch");
  return mat_rank(F, y) == mat_rank(F, x) + mat_rank(F, mat_sub(F, y, x));
}

}  // namespace bilinear
