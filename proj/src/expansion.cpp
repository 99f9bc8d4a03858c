#include "bilinear/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bilinear {

ShortcodeGraph make_shortcode_graph(const SpacePtr& sp) {
  if (sp->dim_v() < 1 || sp->dim_w() < 1)
    throw std::domain_error("shortcode graph needs dim(V), dim(W) >= 1");
  ShortcodeGraph g;
  g.sp = sp;
  const Field& F = sp->field();
  for (std::size_t i = 0; i < sp->size(); ++i)
    if (mat_rank(F, sp->decode_map(i)) == 1) g.rank1_indices.push_back(i);
  g.rank1_count = g.rank1_indices.size();
  const double q = F.q();
  const int n = sp->dim_v(), m = sp->dim_w();
  const double qn = std::pow(q, n), qm = std::pow(q, m);
  int maxr = std::min(n, m);
  g.lambda.resize(maxr + 1);
  g.lambda_ref.resize(maxr + 1);
  for (int d = 0; d <= maxr; ++d) {
    g.lambda[d] = (std::pow(q, n + m - d) - qn - qm + 1.0) / ((qn - 1.0) * (qm - 1.0));
    g.lambda_ref[d] = (std::pow(q, -d) - 1.0 / qm) / (1.0 - 1.0 / qm);
  }
  return g;
}

MapFunction adjacency_apply(const ShortcodeGraph& g, const MapFunction& f) {
  Spectrum s = transform(f);
  for (std::size_t i = 0; i < s.c.size(); ++i) s.c[i] *= g.lambda[s.sp->rank_of_dual(i)];
  return inverse_transform(s);
}

MapFunction adjacency_apply_direct(const ShortcodeGraph& g, const MapFunction& f) {
  const MapSpace& sp = *f.sp;
  const Field& F = sp.field();
  MapFunction out(f.sp);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    Mat a = sp.decode_map(i);
    cd acc{};
    for (std::size_t bi : g.rank1_indices)
      acc += f.v[sp.encode_map(mat_add(F, a, sp.decode_map(bi)))];
    out.v[i] = acc / static_cast<double>(g.rank1_count);
  }
  return out;
}

double expansion_probability(const ShortcodeGraph& g, const MapFunction& indicator) {
  double n2 = norm2_sq(indicator);
  if (n2 == 0.0) throw std::domain_error("expansion_probability: empty set");
  return std::real(inner(adjacency_apply(g, indicator), indicator)) / n2;
}

SseReport check_sse_theorem(SpaceContext& ctx, const ShortcodeGraph& g,
                            const MapFunction& indicator, int r, double c0) {
  if (r < 1) throw std::domain_error("check_sse_theorem: r >= 1 required");
  SseReport rep;
  rep.r = r;
  rep.c0 = c0;
  const double q = ctx.field().q();

  rep.globalness = certify_restriction_global(ctx, indicator, r + 1, 1.0).worst_value;
  rep.hyp_threshold = std::pow(q, -c0 * r * r);
  rep.hyp_met = rep.globalness <= rep.hyp_threshold * (1 + 1e-12);

  rep.stay_prob = expansion_probability(g, indicator);
  rep.bound = std::pow(q, -static_cast<double>(r));
  rep.conclusion_ok = !rep.hyp_met || rep.stay_prob < rep.bound;

  Spectrum s = transform(indicator);
  rep.level_masses = rank_mass(s);
  double n2 = norm2_sq(indicator);
  double decomposed = 0;
  for (std::size_t d = 0; d < rep.level_masses.size(); ++d)
    decomposed += g.lambda[d] * rep.level_masses[d];
  rep.spectral_identity_err = std::abs(decomposed - rep.stay_prob * n2);

  rep.tail_sum = 0;
  for (std::size_t d = r + 2; d < rep.level_masses.size(); ++d)
    rep.tail_sum += g.lambda[d] * rep.level_masses[d];
  rep.tail_ok = rep.tail_sum < 0.5 * rep.bound * n2;
  return rep;
}

ScanReport inverse_shortcode_scan(SpaceContext& ctx, const ShortcodeGraph& g, double eta, int order,
                                  double delta, int random_sets, uint64_t seed) {
  if (ctx.field().q() != 2)
    throw std::domain_error("inverse_shortcode_scan: stated for q = 2 only");
  ScanReport rep;
  const SpacePtr& sp = ctx.space_ptr();

  std::vector<std::pair<std::string, MapFunction>> sets;
  int maxr = std::min(sp->dim_v(), sp->dim_w());
  for (int t = 0; t < maxr; ++t)
    sets.emplace_back("rank-threshold:" + std::to_string(t), rank_threshold_indicator(sp, t));
  {
    Vec v(sp->dim_v(), 0), w(sp->dim_w(), 0);
    v[0] = 1;
    sets.emplace_back("dictator-slab", dictator(sp, v, w));
  }
  for (int i = 0; i < random_sets; ++i) {
    double density = 1.0 / static_cast<double>(1 << std::min(4, sp->dim_v() + sp->dim_w()));
    sets.emplace_back("random:" + std::to_string(i),
                      random_boolean_function(sp, density, seed + i));
  }

  for (auto& [id, f] : sets) {
    ScanRow row;
    row.set_id = id;
    row.order = order;
    bool empty = std::all_of(f.v.begin(), f.v.end(), [](const cd& z) { return z == cd{}; });
    if (empty) continue;
    row.globalness = certify_restriction_global(ctx, f, order, 1.0).worst_value;
    row.stay_prob = expansion_probability(g, f);
    row.meets_hypothesis = row.globalness <= delta * (1 + 1e-12);
    row.flagged = row.meets_hypothesis && row.stay_prob >= eta;
    if (row.flagged) rep.pass = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace bilinear
