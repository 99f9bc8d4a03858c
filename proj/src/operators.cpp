#include "bilinear/operators.hpp"

#include <algorithm>
#include <random>

namespace bilinear {

namespace {

bool im_contains(const Field& F, const Mat& x, const Subspace& v1) {
  return image_space(F, x).contains(F, v1);
}

bool ker_inside(const Field& F, const Mat& x, const Subspace& w1) {
  return w1.contains(F, kernel_space(F, x));
}

bool hybrid_mask(const Field& F, const Mat& x, const Subspace& v1, const Subspace& w1) {
  if (!im_contains(F, x, v1)) return false;
  return w1.contains(F, preimage_space(F, x, v1));
}

Spectrum apply_mask(const Spectrum& s, const std::function<bool(const Mat&)>& keep) {
  Spectrum out(s.sp);
  for (std::size_t i = 0; i < s.c.size(); ++i) {
    if (s.c[i] == cd{}) continue;
    if (keep(s.sp->decode_dual(i))) out.c[i] = s.c[i];
  }
  return out;
}

MapFunction via_spectrum(const MapFunction& f, const std::function<Spectrum(const Spectrum&)>& op) {
  return inverse_transform(op(transform(f)));
}

}  // namespace

Spectrum laplacian_v(const Spectrum& s, const Subspace& v1) {
  const Field& F = s.sp->field();
  return apply_mask(s, [&](const Mat& x) { return im_contains(F, x, v1); });
}

Spectrum laplacian_w(const Spectrum& s, const Subspace& w1) {
  const Field& F = s.sp->field();
  return apply_mask(s, [&](const Mat& x) { return ker_inside(F, x, w1); });
}

Spectrum laplacian_hybrid(const Spectrum& s, const Subspace& v1, const Subspace& w1) {
  const Field& F = s.sp->field();
  return apply_mask(s, [&](const Mat& x) { return hybrid_mask(F, x, v1, w1); });
}

Spectrum laplacian_x(const Spectrum& s, const Mat& x0) {
  const Field& F = s.sp->field();
  return apply_mask(s, [&](const Mat& y) { return poset_leq(F, x0, y); });
}

LaplacianSpec LaplacianSpec::subspace_v(Subspace v) {
  LaplacianSpec s{Kind::SubspaceV, std::move(v), {}, {}};
  s.order = s.v1.dim();
  return s;
}

LaplacianSpec LaplacianSpec::subspace_w(Subspace w) {
  LaplacianSpec s{Kind::SubspaceW, {}, std::move(w), {}};
  s.order = s.w1.codim();
  return s;
}

LaplacianSpec LaplacianSpec::hybrid(Subspace v, Subspace w) {
  LaplacianSpec s{Kind::Hybrid, std::move(v), std::move(w), {}};
  s.order = s.v1.dim() + s.w1.codim();
  return s;
}

LaplacianSpec LaplacianSpec::poset(const Field& F, Mat x0) {
  LaplacianSpec s{Kind::PosetX, {}, {}, std::move(x0)};
  s.order = mat_rank(F, s.x);
  return s;
}

Spectrum apply_laplacian(const Spectrum& s, const LaplacianSpec& spec) {
  switch (spec.kind) {
    case LaplacianSpec::Kind::SubspaceV: return laplacian_v(s, spec.v1);
    case LaplacianSpec::Kind::SubspaceW: return laplacian_w(s, spec.w1);
    case LaplacianSpec::Kind::Hybrid: return laplacian_hybrid(s, spec.v1, spec.w1);
    case LaplacianSpec::Kind::PosetX: return laplacian_x(s, spec.x);
  }
  throw std::logic_error("unreachable");
}

MapFunction apply_laplacian(const MapFunction& f, const LaplacianSpec& spec) {
  return via_spectrum(f, [&](const Spectrum& s) { return apply_laplacian(s, spec); });
}

MapFunction laplacian_v(const MapFunction& f, const Subspace& v1) {
  return via_spectrum(f, [&](const Spectrum& s) { return laplacian_v(s, v1); });
}
MapFunction laplacian_w(const MapFunction& f, const Subspace& w1) {
  return via_spectrum(f, [&](const Spectrum& s) { return laplacian_w(s, w1); });
}
MapFunction laplacian_hybrid(const MapFunction& f, const Subspace& v1, const Subspace& w1) {
  return via_spectrum(f, [&](const Spectrum& s) { return laplacian_hybrid(s, v1, w1); });
}
MapFunction laplacian_x(const MapFunction& f, const Mat& x) {
  return via_spectrum(f, [&](const Spectrum& s) { return laplacian_x(s, x); });
}

Spectrum derivative_spectrum(const Spectrum& s, const Subspace& v1, const Subspace& w1,
                             const Mat& t) {
  return restrict_spectrum(laplacian_hybrid(s, v1, w1), v1, w1, t);
}

MapFunction derivative(const MapFunction& f, const Subspace& v1, const Subspace& w1, const Mat& t) {
  return inverse_transform(derivative_spectrum(transform(f), v1, w1, t));
}

Spectrum derivative_x_spectrum(const Spectrum& s, const Mat& x, const Mat& t) {
  const Field& F = s.sp->field();
  Subspace v1 = image_space(F, x);
  Subspace w1 = kernel_space(F, x);
  return restrict_spectrum(laplacian_x(s, x), v1, w1, t);
}

MapFunction derivative_x(const MapFunction& f, const Mat& x, const Mat& t) {
  return inverse_transform(derivative_x_spectrum(transform(f), x, t));
}

double influence(const MapFunction& f, const Subspace& v1, const Subspace& w1, const Mat& t) {
  return norm2_sq(derivative_spectrum(transform(f), v1, w1, t));
}

Spectrum avg_coarse(const Spectrum& s, const Subspace& vprime) {
  const Field& F = s.sp->field();
  return apply_mask(s, [&](const Mat& x) { return vprime.contains(F, image_space(F, x)); });
}

MapFunction avg_coarse(const MapFunction& f, const Subspace& vprime) {
  return via_spectrum(f, [&](const Spectrum& s) { return avg_coarse(s, vprime); });
}

MapFunction avg_coarse_direct(const MapFunction& f, const Subspace& vprime) {
  const MapSpace& sp = *f.sp;
  const Field& F = sp.field();
  Subspace wfull = Subspace::full(sp.dim_w());
  SpacePtr bs = make_space(F, vprime.codim(), sp.dim_w());
  MapFunction out(f.sp);
  for (std::size_t bi = 0; bi < bs->size(); ++bi) {
    Mat bamb = lift_map(F, bs->decode_map(bi), vprime, wfull);
    for (std::size_t i = 0; i < sp.size(); ++i)
      out.v[i] += f.v[sp.encode_map(mat_add(F, sp.decode_map(i), bamb))];
  }
  double inv = 1.0 / static_cast<double>(bs->size());
  for (cd& z : out.v) z *= inv;
  return out;
}

namespace {

void check_avg_v_args(const MapSpace& sp, const Vec& v) {
  if (static_cast<int>(v.size()) != sp.dim_v()) throw contract_error("avg_v: vector has wrong length");
  if (std::all_of(v.begin(), v.end(), [](uint8_t c) { return c == 0; }))
    throw std::domain_error("avg_v: v = 0");
  if (sp.dim_v() == 1)
    throw std::domain_error("avg_v: dim(V) = 1 leaves no codimension-one averaging set");
}

}  // namespace

Spectrum avg_v(const Spectrum& s, const Vec& v) {
  const Field& F = s.sp->field();
  check_avg_v_args(*s.sp, v);
  Spectrum out(s.sp);
  for (std::size_t i = 0; i < s.c.size(); ++i) {
    if (s.c[i] == cd{}) continue;
    Mat x = s.sp->decode_dual(i);
    if (image_space(F, x).contains(F, v)) continue;
    out.c[i] = s.c[i] * std::pow(static_cast<double>(F.q()), -s.sp->rank_of_dual(i));
  }
  return out;
}

MapFunction avg_v(const MapFunction& f, const Vec& v) {
  return via_spectrum(f, [&](const Spectrum& s) { return avg_v(s, v); });
}

MapFunction avg_v_direct(const MapFunction& f, const Vec& v) {
  const MapSpace& sp = *f.sp;
  const Field& F = sp.field();
  check_avg_v_args(sp, v);
  MapFunction acc(f.sp);
  long count = 0;
  for (const Subspace& vp : enumerate_subspaces(F, sp.dim_v(), sp.dim_v() - 1)) {
    if (vp.contains(F, v)) continue;
    MapFunction part = avg_coarse_direct(f, vp);
    for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += part.v[i];
    ++count;
  }
  double inv = 1.0 / static_cast<double>(count);
  for (cd& z : acc.v) z *= inv;
  return acc;
}

Spectrum avg_w(const Spectrum& s, const Subspace& wprime) {
  const Field& F = s.sp->field();
  if (wprime.codim() != 1) throw std::domain_error("avg_w: W' must have codimension one");
  Spectrum out(s.sp);
  for (std::size_t i = 0; i < s.c.size(); ++i) {
    if (s.c[i] == cd{}) continue;
    Mat x = s.sp->decode_dual(i);
    if (subspace_sum(F, kernel_space(F, x), wprime).dim() != s.sp->dim_w()) continue;
    out.c[i] = s.c[i] * std::pow(static_cast<double>(F.q()), -s.sp->rank_of_dual(i));
  }
  return out;
}

MapFunction avg_w(const MapFunction& f, const Subspace& wprime) {
  return via_spectrum(f, [&](const Spectrum& s) { return avg_w(s, wprime); });
}

MapFunction avg_w_direct(const MapFunction& f, const Subspace& wprime) {
  // (E_phi[f*])* with phi spanning the annihilator of W'.
  const MapSpace& sp = *f.sp;
  const Field& F = sp.field();
  if (wprime.codim() != 1) throw std::domain_error("avg_w: W' must have codimension one");
  Subspace ann = annihilator(F, wprime);
  Vec phi(sp.dim_w());
  for (int j = 0; j < sp.dim_w(); ++j) phi[j] = ann.basis.at(0, j);
  SpacePtr dual_sp = make_space(F, sp.dim_w(), sp.dim_v());
  MapFunction fstar(dual_sp);
  for (std::size_t i = 0; i < dual_sp->size(); ++i)
    fstar.v[i] = f.v[sp.encode_map(mat_transpose(dual_sp->decode_map(i)))];
  MapFunction gstar = avg_v_direct(fstar, phi);
  MapFunction out(f.sp);
  for (std::size_t i = 0; i < sp.size(); ++i)
    out.v[i] = gstar.v[dual_sp->encode_map(mat_transpose(sp.decode_map(i)))];
  return out;
}

MapFunction comb_laplacian(const MapFunction& f, const Vec& v) { return f - avg_v(f, v); }

MapFunction avg_u(const MapFunction& f, const UnitSubspace& u) {
  if (u.side == Side::V) {
    if (u.space.dim() != 1) throw std::domain_error("avg_u: V-side U must be one-dimensional");
    Vec v(u.space.ambient);
    for (int j = 0; j < u.space.ambient; ++j) v[j] = u.space.basis.at(0, j);
    return avg_v(f, v);
  }
  return avg_w(f, u.space);
}

MapFunction laplacian_u(const MapFunction& f, const UnitSubspace& u) {
  if (u.side == Side::V) return laplacian_v(f, u.space);
  return laplacian_w(f, u.space);
}

MapFunction tee_operator(const MapFunction& f, int i, const UnitSubspace& u) {
  if (i < 1) throw std::domain_error("tee_operator: order must be >= 1");
  const double q = f.sp->field().q();
  MapFunction e1 = avg_u(f, u);
  MapFunction e2 = avg_u(e1, u);
  double c1 = std::pow(q, i) + std::pow(q, i - 1);
  double c2 = std::pow(q, 2 * i - 1);
  MapFunction out(f.sp);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = f.v[k] - c1 * e1.v[k] + c2 * e2.v[k];
  return out;
}

MapFunction derivative_u(const MapFunction& f, const UnitSubspace& u, const Mat& t) {
  if (u.side == Side::V) return derivative(f, u.space, Subspace::full(f.sp->dim_w()), t);
  return derivative(f, Subspace::zero(f.sp->dim_v()), u.space, t);
}

MapFunction restrict_u(const MapFunction& f, const UnitSubspace& u, const Mat& t) {
  if (u.side == Side::V) return restrict_function(f, u.space, Subspace::full(f.sp->dim_w()), t);
  return restrict_function(f, Subspace::zero(f.sp->dim_v()), u.space, t);
}

// ---------------------------------------------------------------------------
// Operator-calculus verification sweeps.

namespace {

// g'(A) = g(L*A*R), with g' living on target (same dims as g's space).
MapFunction rechart_function(const MapFunction& g, const Mat& lmat, const Mat& rmat,
                             const SpacePtr& target) {
  const Field& F = g.sp->field();
  MapFunction out(target);
  for (std::size_t i = 0; i < target->size(); ++i) {
    Mat a = target->decode_map(i);
    out.v[i] = g.v[g.sp->encode_map(mat_mul(F, lmat, mat_mul(F, a, rmat)))];
  }
  return out;
}

// Conversion of a function from iterated charts to direct charts of the same
// abstract pair (V/V1, W1): A_iter = (from_iter_W * to_direct_W) A_direct
// (from_direct_V * to_iter_V).
MapFunction to_direct_charts(const MapFunction& g, const Frame& dom_iter, const Frame& cod_iter,
                             const Frame& dom_direct, const Frame& cod_direct,
                             const SpacePtr& target) {
  const Field& F = g.sp->field();
  Mat lmat = mat_mul(F, cod_iter.from_amb, cod_direct.to_amb);
  Mat rmat = mat_mul(F, dom_direct.from_amb, dom_iter.to_amb);
  return rechart_function(g, lmat, rmat, target);
}

Spectrum delta_spectrum(const SpacePtr& sp, std::size_t idx) {
  Spectrum s(sp);
  s.c[idx] = 1.0;
  return s;
}

struct SubspaceCache {
  const Field& F;
  std::vector<std::vector<Subspace>> by_dim_v, by_dim_w;

  SubspaceCache(const Field& f, int n, int m) : F(f) {
    by_dim_v.resize(n + 1);
    for (int d = 0; d <= n; ++d) by_dim_v[d] = enumerate_subspaces(F, n, d);
    by_dim_w.resize(m + 1);
    for (int d = 0; d <= m; ++d) by_dim_w[d] = enumerate_subspaces(F, m, d);
  }

  std::vector<Subspace> all_v() const {
    std::vector<Subspace> out;
    for (const auto& part : by_dim_v) out.insert(out.end(), part.begin(), part.end());
    return out;
  }
  std::vector<Subspace> all_w() const {
    std::vector<Subspace> out;
    for (const auto& part : by_dim_w) out.insert(out.end(), part.begin(), part.end());
    return out;
  }
};

Mat random_mat(std::mt19937_64& rng, int q, int rows, int cols) {
  Mat m(rows, cols);
  std::uniform_int_distribution<int> dist(0, q - 1);
  for (auto& e : m.e) e = static_cast<uint8_t>(dist(rng));
  return m;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  std::uniform_int_distribution<std::size_t> dist(0, v.size() - 1);
  return v[dist(rng)];
}

}  // namespace

CalcReport verify_derivative_composition(int q, int n, int m, bool exhaustive, long samples,
                                         uint64_t seed) {
  CalcReport rep;
  rep.id = "derivative-composition";
  rep.exhaustive = exhaustive;
  rep.seed = seed;
  SpacePtr sp = make_space(q, n, m);
  const Field& F = sp->field();
  SubspaceCache cache(F, n, m);
  auto vs = cache.all_v();
  auto ws = cache.all_w();
  std::mt19937_64 rng(seed);

  auto run_one = [&](const Subspace& v2, const Subspace& v1, const Subspace& w1,
                     const Subspace& w2, const Mat& t, const Mat& s_sub, std::size_t y_idx) {
    // Inner derivative lands on (V/V2, W2) in these charts.
    Frame dom2 = quotient_frame(F, v2);
    Frame cod2 = subspace_frame(w2);
    Spectrum y = delta_spectrum(sp, y_idx);
    Spectrum inner_spec = derivative_spectrum(y, v2, w2, t);
    // Outer derivative with respect to V1/V2 and W1 seen inside those charts.
    Subspace v1_in = subspace_in_chart(F, v1, dom2);
    Subspace w1_in = subspace_in_chart(F, w1, cod2);
    MapFunction lhs_iter = inverse_transform(derivative_spectrum(inner_spec, v1_in, w1_in, s_sub));
    Frame dom_iter = compose_frames(F, dom2, quotient_frame(F, v1_in));
    Frame cod_iter = compose_frames(F, cod2, subspace_frame(w1_in));

    Mat s_amb = mat_mul(F, cod2.to_amb, mat_mul(F, s_sub, dom2.from_amb));  // S(V,W)
    MapFunction rhs = inverse_transform(
        derivative_spectrum(y, v1, w1, mat_add(F, t, s_amb)));

    MapFunction lhs = to_direct_charts(lhs_iter, dom_iter, cod_iter, quotient_frame(F, v1),
                                       subspace_frame(w1), rhs.sp);
    rep.max_err = std::max(rep.max_err, max_abs_diff(lhs, rhs));
    ++rep.instances;
  };

  if (exhaustive) {
    for (const Subspace& v1 : vs)
      for (const Subspace& v2 : vs) {
        if (!v1.contains(F, v2)) continue;
        for (const Subspace& w2 : ws)
          for (const Subspace& w1 : ws) {
            if (!w2.contains(F, w1)) continue;
            SpacePtr sub = make_space(F, v2.codim(), w2.dim());
            for (std::size_t ti = 0; ti < sp->size(); ++ti)
              for (std::size_t si = 0; si < sub->size(); ++si)
                for (std::size_t yi = 0; yi < sp->size(); ++yi)
                  run_one(v2, v1, w1, w2, sp->decode_map(ti), sub->decode_map(si), yi);
          }
      }
  } else {
    for (long it = 0; it < samples; ++it) {
      const Subspace& v1 = pick(rng, vs);
      std::vector<Subspace> v2c;
      for (const Subspace& s : vs)
        if (v1.contains(F, s)) v2c.push_back(s);
      const Subspace& v2 = pick(rng, v2c);
      const Subspace& w1 = pick(rng, ws);
      std::vector<Subspace> w2c;
      for (const Subspace& s : ws)
        if (s.contains(F, w1)) w2c.push_back(s);
      const Subspace& w2 = pick(rng, w2c);
      Mat t = random_mat(rng, q, m, n);
      Mat s_sub = random_mat(rng, q, w2.dim(), v2.codim());
      std::uniform_int_distribution<std::size_t> ydist(0, sp->size() - 1);
      run_one(v2, v1, w1, w2, t, s_sub, ydist(rng));
    }
  }
  rep.pass = rep.max_err < 1e-9;
  return rep;
}

CalcReport verify_laplacian_restriction_sum(int q, int n, int m, bool exhaustive, long samples,
                                            uint64_t seed) {
  CalcReport rep;
  rep.id = "laplacian-restriction-sum";
  rep.exhaustive = exhaustive;
  rep.seed = seed;
  SpacePtr sp = make_space(q, n, m);
  const Field& F = sp->field();
  SubspaceCache cache(F, n, m);
  auto vs = cache.all_v();
  auto ws = cache.all_w();
  std::mt19937_64 rng(seed);

  auto run_one = [&](const Subspace& v1, const Subspace& w1, const Mat& t, std::size_t y_idx) {
    Spectrum y = delta_spectrum(sp, y_idx);
    Spectrum ll = laplacian_v(laplacian_w(y, w1), v1);
    MapFunction lhs = inverse_transform(restrict_spectrum(ll, v1, w1, t));
    Frame dom_dir = quotient_frame(F, v1);
    Frame cod_dir = subspace_frame(w1);

    MapFunction total(lhs.sp);
    for (const Subspace& v2 : vs) {
      if (!v1.contains(F, v2)) continue;
      for (const Subspace& w2 : ws) {
        if (!w2.contains(F, w1)) continue;
        Frame dom2 = quotient_frame(F, v2);
        Frame cod2 = subspace_frame(w2);
        Subspace v1_in = subspace_in_chart(F, v1, dom2);   // V1/V2 inside V/V2
        Subspace w1_in = subspace_in_chart(F, w1, cod2);   // W1 inside W2
        // All X in L(W2, V/V2) with kernel exactly W1 and image exactly V1/V2.
        Spectrum inner = derivative_spectrum(y, v2, w2, t);
        std::size_t xcount = ipow(static_cast<std::size_t>(q),
                                  static_cast<unsigned>(v2.codim() * w2.dim()));
        for (std::size_t xi = 0; xi < xcount; ++xi) {
          Mat x(v2.codim(), w2.dim());
          std::size_t c = xi;
          for (auto& e : x.e) {
            e = static_cast<uint8_t>(c % q);
            c /= q;
          }
          if (kernel_space(F, x) != w1_in) continue;
          if (image_space(F, x) != v1_in) continue;
          MapFunction term =
              inverse_transform(derivative_x_spectrum(inner, x, Mat(w2.dim(), v2.codim())));
          Frame dom_iter = compose_frames(F, dom2, quotient_frame(F, image_space(F, x)));
          Frame cod_iter = compose_frames(F, cod2, subspace_frame(kernel_space(F, x)));
          MapFunction conv = to_direct_charts(term, dom_iter, cod_iter, dom_dir, cod_dir, lhs.sp);
          for (std::size_t i = 0; i < total.v.size(); ++i) total.v[i] += conv.v[i];
        }
      }
    }
    rep.max_err = std::max(rep.max_err, max_abs_diff(lhs, total));
    ++rep.instances;
  };

  if (exhaustive) {
    for (const Subspace& v1 : vs)
      for (const Subspace& w1 : ws)
        for (std::size_t ti = 0; ti < sp->size(); ++ti)
          for (std::size_t yi = 0; yi < sp->size(); ++yi)
            run_one(v1, w1, sp->decode_map(ti), yi);
  } else {
    std::uniform_int_distribution<std::size_t> ydist(0, sp->size() - 1);
    for (long it = 0; it < samples; ++it)
      run_one(pick(rng, vs), pick(rng, ws), random_mat(rng, q, m, n), ydist(rng));
  }
  rep.pass = rep.max_err < 1e-9;
  return rep;
}

CalcReport verify_derivative_interchange(int q, int n, int m, bool exhaustive, long samples,
                                         uint64_t seed) {
  CalcReport rep;
  rep.id = "derivative-interchange";
  rep.exhaustive = exhaustive;
  rep.seed = seed;
  SpacePtr sp = make_space(q, n, m);
  const Field& F = sp->field();
  SubspaceCache cache(F, n, m);
  auto vs = cache.all_v();
  auto ws = cache.all_w();
  std::mt19937_64 rng(seed);

  // X in L(W,V) with kernel exactly W1 and image exactly V1.
  auto maps_with = [&](const Subspace& w1, const Subspace& v1) {
    std::vector<Mat> out;
    for (std::size_t xi = 0; xi < sp->size(); ++xi) {
      Mat x = sp->decode_dual(xi);
      if (kernel_space(F, x) == w1 && image_space(F, x) == v1) out.push_back(x);
    }
    return out;
  };

  auto run_one = [&](const Subspace& v1, const Subspace& v2, const Subspace& w2,
                     const Subspace& w1, const Mat& x, const Mat& t_sub, const Mat& s_amb,
                     std::size_t y_idx) {
    Frame dom1 = quotient_frame(F, v1);
    Frame cod1 = subspace_frame(w1);
    Spectrum y = delta_spectrum(sp, y_idx);
    // LHS: D_{V2/V1, W2, T} o D_{X,S}.
    Spectrum gs = derivative_x_spectrum(y, x, s_amb);
    Subspace v2_in = subspace_in_chart(F, v2, dom1);  // V2/V1 in V/V1 charts
    Subspace w2_in = subspace_in_chart(F, w2, cod1);  // W2 in W1 charts
    MapFunction lhs_iter = inverse_transform(derivative_spectrum(gs, v2_in, w2_in, t_sub));
    Frame dom_iter = compose_frames(F, dom1, quotient_frame(F, v2_in));
    Frame cod_iter = compose_frames(F, cod1, subspace_frame(w2_in));
    Frame dom_dir = quotient_frame(F, v2);
    Frame cod_dir = subspace_frame(w2);
    SpacePtr target = make_space(F, v2.codim(), w2.dim());
    MapFunction lhs = to_direct_charts(lhs_iter, dom_iter, cod_iter, dom_dir, cod_dir, target);

    // RHS: sum over complements V3 of V1 in V2 and W3 of W1/W2 in W/W2.
    Mat t_amb = mat_mul(F, cod1.to_amb, mat_mul(F, t_sub, dom1.from_amb));  // T(V,W)
    Mat st = mat_add(F, s_amb, t_amb);
    MapFunction total(target);
    for (const Subspace& v3 : vs) {
      if (!v2.contains(F, v3)) continue;
      if (subspace_intersect(F, v3, v1).dim() != 0) continue;
      if (v3.dim() + v1.dim() != v2.dim()) continue;
      for (const Subspace& w3 : ws) {
        if (!w3.contains(F, w2)) continue;
        if (subspace_intersect(F, w3, w1) != w2) continue;
        if (subspace_sum(F, w3, w1).dim() != m) continue;
        Spectrum hs = derivative_spectrum(y, v3, w3, st);
        Mat xq = pushdown_map(F, x, w3, v3);  // X(W3, V/V3), already in charts
        MapFunction term =
            inverse_transform(derivative_x_spectrum(hs, xq, Mat(w3.dim(), v3.codim())));
        Frame dom3 = quotient_frame(F, v3);
        Frame cod3 = subspace_frame(w3);
        Frame dom_it = compose_frames(F, dom3, quotient_frame(F, image_space(F, xq)));
        Frame cod_it = compose_frames(F, cod3, subspace_frame(kernel_space(F, xq)));
        MapFunction conv = to_direct_charts(term, dom_it, cod_it, dom_dir, cod_dir, target);
        for (std::size_t i = 0; i < total.v.size(); ++i) total.v[i] += conv.v[i];
      }
    }
    rep.max_err = std::max(rep.max_err, max_abs_diff(lhs, total));
    ++rep.instances;
  };

  if (exhaustive) {
    for (const Subspace& v1 : vs)
      for (const Subspace& v2 : vs) {
        if (!v2.contains(F, v1)) continue;
        for (const Subspace& w1 : ws)
          for (const Subspace& w2 : ws) {
            if (!w1.contains(F, w2)) continue;
            auto xs = maps_with(w1, v1);
            SpacePtr sub1 = make_space(F, v1.codim(), w1.dim());
            for (const Mat& x : xs)
              for (std::size_t ti = 0; ti < sub1->size(); ++ti)
                for (std::size_t si = 0; si < sp->size(); ++si)
                  for (std::size_t yi = 0; yi < sp->size(); ++yi)
                    run_one(v1, v2, w2, w1, x, sub1->decode_map(ti), sp->decode_map(si), yi);
          }
      }
  } else {
    std::uniform_int_distribution<std::size_t> idist(0, sp->size() - 1);
    long done = 0;
    while (done < samples) {
      const Subspace& v1 = pick(rng, vs);
      std::vector<Subspace> v2c;
      for (const Subspace& s : vs)
        if (s.contains(F, v1)) v2c.push_back(s);
      const Subspace& v2 = pick(rng, v2c);
      const Subspace& w1 = pick(rng, ws);
      std::vector<Subspace> w2c;
      for (const Subspace& s : ws)
        if (w1.contains(F, s)) w2c.push_back(s);
      const Subspace& w2 = pick(rng, w2c);
      auto xs = maps_with(w1, v1);
      if (xs.empty()) continue;
      const Mat& x = pick(rng, xs);
      Mat t_sub = random_mat(rng, q, w1.dim(), v1.codim());
      Mat s_amb = random_mat(rng, q, m, n);
      run_one(v1, v2, w2, w1, x, t_sub, s_amb, idist(rng));
      ++done;
    }
  }
  rep.pass = rep.max_err < 1e-9;
  return rep;
}

}  // namespace bilinear
