#include "bilinear/map_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace bilinear {

MapSpace::MapSpace(Field field, int dim_v, int dim_w)
    : field_(std::move(field)), n_(dim_v), m_(dim_w) {
  if (n_ < 0 || m_ < 0) throw std::domain_error("negative dimension");
  size_ = ipow(static_cast<std::size_t>(field_.q()), static_cast<unsigned>(n_ * m_));
  // Digit t = c*m+r of a primal index holds A(r,c). The exponent
  // tau(Tr(XA)) = sum_{i,k} tau(X(i,k) A(k,i)) pairs A-digit i*m+k with
  // X-digit k*n+i.
  perm_.resize(size_);
  rank_.resize(size_);
  const int q = field_.q();
  for (std::size_t idx = 0; idx < size_; ++idx) {
    Mat x = decode_dual(idx);
    std::size_t primal = 0;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < m_; ++k)
        primal += static_cast<std::size_t>(x.at(i, k)) *
                  ipow(static_cast<std::size_t>(q), static_cast<unsigned>(i * m_ + k));
    perm_[idx] = primal;
    rank_[idx] = mat_rank(field_, x);
  }
}

Mat MapSpace::decode_map(std::size_t idx) const {
  Mat a(m_, n_);
  for (int c = 0; c < n_; ++c)
    for (int r = 0; r < m_; ++r) {
      a.at(r, c) = static_cast<uint8_t>(idx % field_.q());
      idx /= field_.q();
    }
  return a;
}

std::size_t MapSpace::encode_map(const Mat& a) const {
  if (a.rows != m_ || a.cols != n_) throw contract_error("encode_map: shape mismatch");
  std::size_t idx = 0;
  for (int c = n_ - 1; c >= 0; --c)
    for (int r = m_ - 1; r >= 0; --r) idx = idx * field_.q() + a.at(r, c);
  return idx;
}

Mat MapSpace::decode_dual(std::size_t idx) const {
  Mat x(n_, m_);
  for (int c = 0; c < m_; ++c)
    for (int r = 0; r < n_; ++r) {
      x.at(r, c) = static_cast<uint8_t>(idx % field_.q());
      idx /= field_.q();
    }
  return x;
}

std::size_t MapSpace::encode_dual(const Mat& x) const {
  if (x.rows != n_ || x.cols != m_) throw contract_error("encode_dual: shape mismatch");
  std::size_t idx = 0;
  for (int c = m_ - 1; c >= 0; --c)
    for (int r = n_ - 1; r >= 0; --r) idx = idx * field_.q() + x.at(r, c);
  return idx;
}

SpacePtr make_space(int q, int dim_v, int dim_w) {
  // Spaces with canonical moduli are shared: the digit permutation and rank
  // tables are the expensive part and get rebuilt often in restriction loops.
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, SpacePtr> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(q, dim_v, dim_w);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  auto sp = std::make_shared<const MapSpace>(Field::make(q), dim_v, dim_w);
  registry.emplace(key, sp);
  return sp;
}

SpacePtr make_space(const Field& field, int dim_v, int dim_w) {
  switch (field.q()) {
    case 2: case 3: case 4: case 5: case 7: case 8: case 9: case 16:
      if (field.params() == canonical_field_params(field.q()))
        return make_space(field.q(), dim_v, dim_w);
      break;
    default:
      break;
  }
  return std::make_shared<const MapSpace>(field, dim_v, dim_w);
}

cd inner(const MapFunction& f, const MapFunction& g) {
  cd acc{};
  for (std::size_t i = 0; i < f.v.size(); ++i) acc += f.v[i] * std::conj(g.v[i]);
  return acc / static_cast<double>(f.v.size());
}

double norm2_sq(const MapFunction& f) {
  double acc = 0;
  for (const cd& z : f.v) acc += std::norm(z);
  return acc / static_cast<double>(f.v.size());
}

double norm4_pow4(const MapFunction& f) {
  double acc = 0;
  for (const cd& z : f.v) {
    double m2 = std::norm(z);
    acc += m2 * m2;
  }
  return acc / static_cast<double>(f.v.size());
}

cd mean(const MapFunction& f) {
  cd acc{};
  for (const cd& z : f.v) acc += z;
  return acc / static_cast<double>(f.v.size());
}

double norm2_sq(const Spectrum& s) {
  double acc = 0;
  for (const cd& z : s.c) acc += std::norm(z);
  return acc;
}

MapFunction operator+(const MapFunction& a, const MapFunction& b) {
  MapFunction r(a.sp);
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

MapFunction operator-(const MapFunction& a, const MapFunction& b) {
  MapFunction r(a.sp);
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = a.v[i] - b.v[i];
  return r;
}

MapFunction operator*(cd s, const MapFunction& f) {
  MapFunction r(f.sp);
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = s * f.v[i];
  return r;
}

double max_abs_diff(const MapFunction& a, const MapFunction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

double max_abs_diff(const Spectrum& a, const Spectrum& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.c.size(); ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

cd character_value(const Field& F, const Mat& x, const Mat& a) {
  if (x.cols != a.rows || x.rows != a.cols) throw contract_error("character: shapes do not compose");
  int t = 0;
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) t = F.add(t, F.mul(x.at(i, k), a.at(k, i)));
  return F.root_of_unity(F.trace(t));
}

MapFunction character_function(const SpacePtr& sp, const Mat& x) {
  MapFunction f(sp);
  for (std::size_t i = 0; i < sp->size(); ++i)
    f.v[i] = character_value(sp->field(), x, sp->decode_map(i));
  return f;
}

namespace {

// One tensor stage along the digit at stride `stride`. kernel[b*q+x] is the
// weight of input digit x at output digit b.
void stage(std::vector<cd>& data, int q, std::size_t stride, const std::vector<cd>& kernel) {
  const std::size_t n = data.size();
  std::vector<cd> buf(q);
  const std::size_t block = stride * q;
  for (std::size_t base = 0; base < n; base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      std::size_t p = base + off;
      for (int x = 0; x < q; ++x) buf[x] = data[p + stride * x];
      for (int b = 0; b < q; ++b) {
        cd acc{};
        for (int x = 0; x < q; ++x) acc += kernel[b * q + x] * buf[x];
        data[p + stride * b] = acc;
      }
    }
  }
}

}  // namespace

Spectrum transform(const MapFunction& f) {
  const MapSpace& sp = *f.sp;
  const Field& F = sp.field();
  const int q = F.q();
  std::vector<cd> kernel(q * q);
  for (int b = 0; b < q; ++b)
    for (int x = 0; x < q; ++x) kernel[b * q + x] = std::conj(F.kernel(b, x)) / static_cast<double>(q);
  std::vector<cd> data = f.v;
  std::size_t stride = 1;
  for (int t = 0; t < sp.dim_v() * sp.dim_w(); ++t, stride *= q) stage(data, q, stride, kernel);
  Spectrum out(f.sp);
  for (std::size_t i = 0; i < sp.size(); ++i) out.c[i] = data[sp.dual_to_primal(i)];
  return out;
}

MapFunction inverse_transform(const Spectrum& s) {
  const MapSpace& sp = *s.sp;
  const Field& F = sp.field();
  const int q = F.q();
  std::vector<cd> kernel(q * q);
  for (int b = 0; b < q; ++b)
    for (int x = 0; x < q; ++x) kernel[b * q + x] = F.kernel(b, x);
  std::vector<cd> data(sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) data[sp.dual_to_primal(i)] = s.c[i];
  std::size_t stride = 1;
  for (int t = 0; t < sp.dim_v() * sp.dim_w(); ++t, stride *= q) stage(data, q, stride, kernel);
  return MapFunction(s.sp, std::move(data));
}

MapFunction dictator(const SpacePtr& sp, const Vec& v, const Vec& w) {
  bool v_zero = std::all_of(v.begin(), v.end(), [](uint8_t c) { return c == 0; });
  bool w_zero = std::all_of(w.begin(), w.end(), [](uint8_t c) { return c == 0; });
  if (v_zero && !w_zero) throw std::domain_error("dictator: v = 0 with w != 0 is an empty event");
  MapFunction f(sp);
  for (std::size_t i = 0; i < sp->size(); ++i)
    f.v[i] = (mat_apply(sp->field(), sp->decode_map(i), v) == w) ? 1.0 : 0.0;
  return f;
}

MapFunction dual_dictator(const SpacePtr& sp, const Vec& phi, const Vec& psi) {
  bool phi_zero = std::all_of(phi.begin(), phi.end(), [](uint8_t c) { return c == 0; });
  bool psi_zero = std::all_of(psi.begin(), psi.end(), [](uint8_t c) { return c == 0; });
  if (phi_zero && !psi_zero)
    throw std::domain_error("dual_dictator: phi = 0 with psi != 0 is an empty event");
  MapFunction f(sp);
  for (std::size_t i = 0; i < sp->size(); ++i) {
    Mat at = mat_transpose(sp->decode_map(i));
    f.v[i] = (mat_apply(sp->field(), at, phi) == psi) ? 1.0 : 0.0;
  }
  return f;
}

Spectrum pure_part(const Spectrum& s, int d) {
  Spectrum out(s.sp);
  for (std::size_t i = 0; i < s.c.size(); ++i)
    if (s.sp->rank_of_dual(i) == d) out.c[i] = s.c[i];
  return out;
}

Spectrum truncate_spectrum(const Spectrum& s, int d) {
  Spectrum out(s.sp);
  for (std::size_t i = 0; i < s.c.size(); ++i)
    if (s.sp->rank_of_dual(i) <= d) out.c[i] = s.c[i];
  return out;
}

MapFunction pure_part(const MapFunction& f, int d) {
  return inverse_transform(pure_part(transform(f), d));
}

MapFunction degree_truncate(const MapFunction& f, int d) {
  return inverse_transform(truncate_spectrum(transform(f), d));
}

int fourier_degree(const Spectrum& s, double cutoff) {
  int deg = 0;
  for (std::size_t i = 0; i < s.c.size(); ++i)
    if (std::abs(s.c[i]) > cutoff) deg = std::max(deg, s.sp->rank_of_dual(i));
  return deg;
}

int fourier_degree(const MapFunction& f, double cutoff) {
  return fourier_degree(transform(f), cutoff);
}

std::vector<double> rank_mass(const Spectrum& s) {
  int maxr = std::min(s.sp->dim_v(), s.sp->dim_w());
  std::vector<double> mass(maxr + 1, 0.0);
  for (std::size_t i = 0; i < s.c.size(); ++i) mass[s.sp->rank_of_dual(i)] += std::norm(s.c[i]);
  return mass;
}

MapFunction shift(const MapFunction& f, const Mat& t) {
  const MapSpace& sp = *f.sp;
  MapFunction out(f.sp);
  for (std::size_t i = 0; i < sp.size(); ++i)
    out.v[i] = f.v[sp.encode_map(mat_add(sp.field(), sp.decode_map(i), t))];
  return out;
}

Spectrum shift_spectrum(const Spectrum& s, const Mat& t) {
  Spectrum out(s.sp);
  for (std::size_t i = 0; i < s.c.size(); ++i)
    out.c[i] = character_value(s.sp->field(), s.sp->decode_dual(i), t) * s.c[i];
  return out;
}

bool slice_equal(const Field& F, const RestrictionTriple& a, const RestrictionTriple& b) {
  if (a.v1 != b.v1 || a.w1 != b.w1) return false;
  // Same slice iff T - T' vanishes on V1 and has image inside W1.
  Mat d = mat_sub(F, a.t, b.t);
  for (int i = 0; i < a.v1.dim(); ++i) {
    Vec v(a.v1.ambient);
    for (int j = 0; j < a.v1.ambient; ++j) v[j] = a.v1.basis.at(i, j);
    Vec dv = mat_apply(F, d, v);
    if (!std::all_of(dv.begin(), dv.end(), [](uint8_t c) { return c == 0; })) return false;
  }
  return image_space(F, d).dim() == 0 || a.w1.contains(F, image_space(F, d));
}

MapFunction restrict_function(const MapFunction& f, const Subspace& v1, const Subspace& w1,
                              const Mat& t) {
  const MapSpace& sp = *f.sp;
  const Field& F = sp.field();
  SpacePtr sub = make_space(F, v1.codim(), w1.dim());
  Frame qf = quotient_frame(F, v1);
  Frame wf = subspace_frame(w1);
  MapFunction out(sub);
  for (std::size_t i = 0; i < sub->size(); ++i) {
    Mat a = sub->decode_map(i);
    Mat ambient = mat_mul(F, wf.to_amb, mat_mul(F, a, qf.from_amb));  // A(V,W)
    out.v[i] = f.v[sp.encode_map(mat_add(F, ambient, t))];
  }
  return out;
}

Spectrum restrict_spectrum(const Spectrum& s, const Subspace& v1, const Subspace& w1, const Mat& t) {
  const MapSpace& sp = *s.sp;
  const Field& F = sp.field();
  SpacePtr sub = make_space(F, v1.codim(), w1.dim());
  Spectrum out(sub);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (s.c[i] == cd{}) continue;
    Mat x = sp.decode_dual(i);
    Mat y = pushdown_map(F, x, w1, v1);  // X(W1, V/V1)
    out.c[sub->encode_dual(y)] += s.c[i] * character_value(F, x, t);
  }
  return out;
}

}  // namespace bilinear
