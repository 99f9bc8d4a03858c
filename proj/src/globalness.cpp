#include "bilinear/globalness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bilinear {

SpaceContext::SpaceContext(SpacePtr sp) : sp_(std::move(sp)) {
  const Field& F = sp_->field();
  subs_v_.resize(sp_->dim_v() + 1);
  for (int d = 0; d <= sp_->dim_v(); ++d) subs_v_[d] = enumerate_subspaces(F, sp_->dim_v(), d);
  subs_w_.resize(sp_->dim_w() + 1);
  for (int d = 0; d <= sp_->dim_w(); ++d) subs_w_[d] = enumerate_subspaces(F, sp_->dim_w(), d);
}

std::vector<std::pair<Subspace, Subspace>> SpaceContext::pairs_up_to(int d) const {
  std::vector<std::pair<Subspace, Subspace>> out;
  int n = sp_->dim_v(), m = sp_->dim_w();
  for (int k = 0; k <= std::min(n, d); ++k)
    for (int j = 0; k + j <= d && j <= m; ++j)
      for (const Subspace& v1 : subs_v_[k])
        for (const Subspace& w1 : subs_w_[m - j]) out.emplace_back(v1, w1);
  return out;
}

const SpaceContext::PairTables& SpaceContext::tables(const Subspace& v1, const Subspace& w1) {
  const Field& F = sp_->field();
  auto key = std::make_pair(v1.row_codes(F), w1.row_codes(F));
  auto it = tables_.find(key);
  if (it != tables_.end()) return it->second;

  PairTables t;
  const int q = F.q();
  const int n = sp_->dim_v(), m = sp_->dim_w();
  const int k = v1.dim(), j = w1.codim();
  t.n_cosets = ipow(static_cast<std::size_t>(q), static_cast<unsigned>(k * m + (n - k) * j));
  t.slice_size = sp_->size() / t.n_cosets;
  t.coset_of.assign(sp_->size(), -1);
  t.coset_rep.assign(t.n_cosets, 0);

  // Coset id of B: the pair (B restricted to V1 in full W coordinates,
  // B on the section of V1 projected to W/W1), packed base q.
  Frame vq = quotient_frame(F, v1);
  Frame vf = subspace_frame(v1);
  Frame wq = quotient_frame(F, w1);
  std::vector<char> seen(t.n_cosets, 0);
  for (std::size_t i = 0; i < sp_->size(); ++i) {
    Mat b = sp_->decode_map(i);
    Mat block1 = mat_mul(F, b, vf.to_amb);                     // m x k
    Mat block2 = mat_mul(F, wq.from_amb, mat_mul(F, b, vq.to_amb));  // j x (n-k)
    std::size_t id = 0;
    for (int idx = static_cast<int>(block2.e.size()) - 1; idx >= 0; --idx)
      id = id * q + block2.e[idx];
    for (int idx = static_cast<int>(block1.e.size()) - 1; idx >= 0; --idx)
      id = id * q + block1.e[idx];
    t.coset_of[i] = static_cast<int32_t>(id);
    if (!seen[id]) {
      seen[id] = 1;
      t.coset_rep[id] = i;
    }
  }
  return tables_.emplace(std::move(key), std::move(t)).first->second;
}

const std::vector<char>& SpaceContext::hybrid_mask(const Subspace& v1, const Subspace& w1) {
  const Field& F = sp_->field();
  auto key = std::make_pair(v1.row_codes(F), w1.row_codes(F));
  auto it = masks_.find(key);
  if (it != masks_.end()) return it->second;
  std::vector<char> mask(sp_->size(), 0);
  for (std::size_t i = 0; i < sp_->size(); ++i) {
    Mat x = sp_->decode_dual(i);
    if (!image_space(F, x).contains(F, v1)) continue;
    if (!w1.contains(F, preimage_space(F, x, v1))) continue;
    mask[i] = 1;
  }
  return masks_.emplace(std::move(key), std::move(mask)).first->second;
}

namespace {

// Mean of |f|^2 over each T-coset bucket of the pair (v1, w1).
std::vector<double> bucket_norms(const std::vector<cd>& values,
                                 const SpaceContext::PairTables& t) {
  std::vector<double> acc(t.n_cosets, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) acc[t.coset_of[i]] += std::norm(values[i]);
  double inv = 1.0 / static_cast<double>(t.slice_size);
  for (double& a : acc) a *= inv;
  return acc;
}

GlobalnessCertificate certify_impl(SpaceContext& ctx, const MapFunction& f, int d, double epsilon,
                                   bool influences) {
  GlobalnessCertificate cert;
  cert.d = d;
  cert.epsilon = epsilon;
  cert.worst_value = -1.0;

  Spectrum spec = influences ? transform(f) : Spectrum(ctx.space_ptr());
  auto pairs = ctx.pairs_up_to(d);
  for (const auto& [v1, w1] : pairs) {
    const auto& t = ctx.tables(v1, w1);
    std::vector<double> norms;
    if (influences) {
      Spectrum masked(ctx.space_ptr());
      const auto& mask = ctx.hybrid_mask(v1, w1);
      for (std::size_t i = 0; i < spec.c.size(); ++i)
        if (mask[i]) masked.c[i] = spec.c[i];
      MapFunction lf = inverse_transform(masked);
      norms = bucket_norms(lf.v, t);
    } else {
      norms = bucket_norms(f.v, t);
    }
    for (std::size_t c = 0; c < norms.size(); ++c) {
      if (norms[c] > cert.worst_value + 1e-15) {
        cert.worst_value = norms[c];
        cert.worst_triple = {v1, w1, ctx.space().decode_map(t.coset_rep[c])};
      }
    }
  }
  if (cert.worst_value < 0) cert.worst_value = 0;
  cert.pass = cert.worst_value <= epsilon * (1 + 1e-12) + 1e-15;
  return cert;
}

}  // namespace

GlobalnessCertificate certify_restriction_global(SpaceContext& ctx, const MapFunction& f, int d,
                                                 double epsilon) {
  return certify_impl(ctx, f, d, epsilon, false);
}

GlobalnessCertificate certify_influences(SpaceContext& ctx, const MapFunction& f, int d,
                                         double epsilon) {
  return certify_impl(ctx, f, d, epsilon, true);
}

TransferReport check_globalness_transfer(SpaceContext& ctx, const MapFunction& f, int d) {
  TransferReport rep;
  rep.epsilon_star = certify_restriction_global(ctx, f, d, 1.0).worst_value;
  MapFunction fd = pure_part(f, d);
  rep.max_influence = certify_influences(ctx, fd, d, 1.0).worst_value;
  double q = ctx.field().q();
  rep.bound = std::pow(q, 10.0 * d * d) * rep.epsilon_star;
  rep.observed_constant = rep.epsilon_star > 0 ? rep.max_influence / rep.epsilon_star : 0.0;
  rep.pass = rep.max_influence <= rep.bound * (1 + 1e-12) + 1e-15;
  return rep;
}

namespace {

// sum over (V1,W1) of order <= d of E_T[(I_{V1,W1,T}[f])^2], computed exactly
// over coset representatives with uniform weights.
double influence_square_sum(SpaceContext& ctx, const MapFunction& f, int d) {
  Spectrum spec = transform(f);
  auto pairs = ctx.pairs_up_to(d);
  // Warm the caches on one thread; the parallel pass below only reads them.
  for (const auto& [v1, w1] : pairs) {
    ctx.tables(v1, w1);
    ctx.hybrid_mask(v1, w1);
  }
  std::vector<double> per_pair(pairs.size(), 0.0);
  auto body = [&](std::size_t pi) {
    const auto& [v1, w1] = pairs[pi];
    const auto& t = ctx.tables(v1, w1);
    const auto& mask = ctx.hybrid_mask(v1, w1);
    Spectrum masked(ctx.space_ptr());
    for (std::size_t i = 0; i < spec.c.size(); ++i)
      if (mask[i]) masked.c[i] = spec.c[i];
    MapFunction lf = inverse_transform(masked);
    std::vector<double> norms = bucket_norms(lf.v, t);
    double acc = 0;
    for (double x : norms) acc += x * x;
    per_pair[pi] = acc / static_cast<double>(t.n_cosets);
  };
  // Desk-scale sweeps are cheaper than thread spawns; callers batch above.
  if (pairs.size() * ctx.space().size() >= (1u << 21)) {
    parallel_for(pairs.size(), body);
  } else {
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) body(pi);
  }
  double total = 0;
  for (double x : per_pair) total += x;
  return total;
}

}  // namespace

HypReport check_bilinear_hypercontractivity(SpaceContext& ctx, const MapFunction& f, int d) {
  if (fourier_degree(f) > d)
    throw contract_error("check_bilinear_hypercontractivity: degree exceeds d");
  HypReport rep;
  double q = ctx.field().q();
  rep.lhs = norm4_pow4(f);
  double base = influence_square_sum(ctx, f, d);
  rep.rhs = std::pow(q, 100.0 * d * d) * base;
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : (rep.lhs > 0 ? HUGE_VAL : 0.0);
  rep.observed_constant = base > 0 ? rep.lhs / base : 0.0;
  rep.observed_exponent =
      (base > 0 && rep.lhs > 0 && d > 0) ? std::log(rep.lhs / base) / std::log(q) / (d * d) : 0.0;
  rep.pass = rep.lhs <= rep.rhs * (1 + 1e-12) + 1e-15;
  return rep;
}

GlobalBonamiReport check_restriction_global_bonami(SpaceContext& ctx, const MapFunction& f, int d,
                                                   double eps) {
  GlobalBonamiReport rep;
  double q = ctx.field().q();
  rep.eps = eps >= 0 ? eps : certify_restriction_global(ctx, f, d, 1.0).worst_value;

  MapFunction trunc = degree_truncate(f, d);
  double t2 = norm2_sq(trunc);
  double t4 = norm4_pow4(trunc);

  rep.trunc.lhs = t4;
  rep.trunc.rhs = std::pow(q, 115.0 * d * d) * rep.eps * t2;
  rep.trunc.ratio = rep.trunc.rhs > 0 ? t4 / rep.trunc.rhs : (t4 > 0 ? HUGE_VAL : 0.0);
  rep.trunc.observed_constant = (rep.eps > 0 && t2 > 0) ? t4 / (rep.eps * t2) : 0.0;
  rep.trunc.observed_exponent = (rep.trunc.observed_constant > 0 && d > 0)
                                    ? std::log(rep.trunc.observed_constant) / std::log(q) / (d * d)
                                    : 0.0;
  rep.trunc.pass = t4 <= rep.trunc.rhs * (1 + 1e-12) + 1e-15;

  double eps_sgi = certify_influences(ctx, trunc, d, 1.0).worst_value;
  rep.influences.lhs = t4;
  rep.influences.rhs = std::pow(q, 103.0 * d * d) * eps_sgi * t2;
  rep.influences.ratio =
      rep.influences.rhs > 0 ? t4 / rep.influences.rhs : (t4 > 0 ? HUGE_VAL : 0.0);
  rep.influences.observed_constant = (eps_sgi > 0 && t2 > 0) ? t4 / (eps_sgi * t2) : 0.0;
  rep.influences.pass = t4 <= rep.influences.rhs * (1 + 1e-12) + 1e-15;

  rep.trunc_influence_max = eps_sgi;
  rep.trunc_influence_pass =
      eps_sgi <= std::pow(q, 12.0 * d * d) * rep.eps * (1 + 1e-12) + 1e-15;

  rep.pass = rep.trunc.pass && rep.influences.pass && rep.trunc_influence_pass;
  return rep;
}

LevelDReport check_level_d(SpaceContext& ctx, const MapFunction& f, int d, double eps) {
  for (const cd& z : f.v)
    if (std::abs(z) > 1e-12 && std::abs(z - 1.0) > 1e-12)
      throw contract_error("check_level_d: function is not Boolean 0/1");
  LevelDReport rep;
  double q = ctx.field().q();
  rep.eps = eps >= 0 ? eps : certify_restriction_global(ctx, f, d, 1.0).worst_value;
  Spectrum spec = transform(f);
  rep.mass_profile = rank_mass(spec);
  rep.level_mass = d < static_cast<int>(rep.mass_profile.size()) ? rep.mass_profile[d] : 0.0;
  rep.bound = std::pow(q, 30.0 * d * d) * std::pow(rep.eps, 0.25) * norm2_sq(f);
  rep.pass = rep.level_mass <= rep.bound * (1 + 1e-12) + 1e-15;
  return rep;
}

MapFunction sharpness_function(const SpacePtr& sp, int d) {
  Spectrum s(sp);
  for (std::size_t i = 0; i < sp->size(); ++i)
    if (sp->rank_of_dual(i) == d) s.c[i] = 1.0;
  return inverse_transform(s);
}

MapFunction rank_threshold_indicator(const SpacePtr& sp, int r) {
  const Field& F = sp->field();
  MapFunction f(sp);
  for (std::size_t i = 0; i < sp->size(); ++i)
    f.v[i] = mat_rank(F, sp->decode_map(i)) <= r ? 1.0 : 0.0;
  return f;
}

MapFunction random_boolean_function(const SpacePtr& sp, double density, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(density);
  MapFunction f(sp);
  for (auto& z : f.v) z = bit(rng) ? 1.0 : 0.0;
  return f;
}

}  // namespace bilinear
