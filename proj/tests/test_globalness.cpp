#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bilinear/globalness.hpp"

using namespace bilinear;

namespace {

MapFunction random_function(std::mt19937_64& rng, const SpacePtr& sp) {
  std::uniform_real_distribution<double> d(-1, 1);
  MapFunction f(sp);
  for (auto& z : f.v) z = cd(d(rng), d(rng));
  return f;
}

// Definition-level oracle: enumerate every T (not just coset reps) and take
// the max restriction norm. Independent of the bucketed certificate path.
double brute_globalness(const SpacePtr& sp, const MapFunction& f, int d) {
  const Field& F = sp->field();
  double worst = 0;
  for (const auto& v1 : enumerate_all_subspaces(F, sp->dim_v()))
    for (const auto& w1 : enumerate_all_subspaces(F, sp->dim_w())) {
      if (v1.dim() + (sp->dim_w() - w1.dim()) > d) continue;
      for (std::size_t ti = 0; ti < sp->size(); ++ti)
        worst = std::max(worst, norm2_sq(restrict_function(f, v1, w1, sp->decode_map(ti))));
    }
  return worst;
}

double brute_influences(const SpacePtr& sp, const MapFunction& f, int d) {
  const Field& F = sp->field();
  double worst = 0;
  for (const auto& v1 : enumerate_all_subspaces(F, sp->dim_v()))
    for (const auto& w1 : enumerate_all_subspaces(F, sp->dim_w())) {
      if (v1.dim() + (sp->dim_w() - w1.dim()) > d) continue;
      for (std::size_t ti = 0; ti < sp->size(); ++ti)
        worst = std::max(worst, influence(f, v1, w1, sp->decode_map(ti)));
    }
  return worst;
}

}  // namespace

TEST_CASE("restriction-globalness certificates") {
  SpacePtr sp = make_space(2, 2, 2);
  SpaceContext ctx(sp);

  MapFunction ones(sp, std::vector<cd>(sp->size(), 1.0));
  auto cert = certify_restriction_global(ctx, ones, 2, 1.0);
  CHECK(cert.worst_value == doctest::Approx(1.0));
  CHECK(cert.pass);

  // dictator: the slice fixing Av = w has density 1
  Vec v{1, 0}, w{0, 1};
  auto dcert = certify_restriction_global(ctx, dictator(sp, v, w), 1, 0.99);
  CHECK(dcert.worst_value == doctest::Approx(1.0));
  CHECK_FALSE(dcert.pass);
  CHECK(dcert.worst_triple.order() <= 1);

  // normalized rank-degree-1 sum: worst value matches the brute-force oracle
  MapFunction sharp = sharpness_function(sp, 1);
  double brute = brute_globalness(sp, sharp, 2);
  auto scert = certify_restriction_global(ctx, sharp, 2, brute + 1e-9);
  CHECK(scert.worst_value == doctest::Approx(brute));
  CHECK(scert.pass);
}

TEST_CASE("certificates agree with the definition on random functions") {
  std::mt19937_64 rng(7);
  for (auto [q, n, m] : {std::tuple{2, 2, 2}, {3, 1, 2}, {2, 2, 3}}) {
    SpacePtr sp = make_space(q, n, m);
    SpaceContext ctx(sp);
    for (int it = 0; it < 5; ++it) {
      MapFunction f = random_function(rng, sp);
      for (int d = 0; d <= 2; ++d) {
        auto rcert = certify_restriction_global(ctx, f, d, 1.0);
        CHECK(rcert.worst_value == doctest::Approx(brute_globalness(sp, f, d)));
        // the reported triple attains the reported value
        CHECK(norm2_sq(restrict_function(f, rcert.worst_triple.v1, rcert.worst_triple.w1,
                                         rcert.worst_triple.t)) ==
              doctest::Approx(rcert.worst_value));
        CHECK(rcert.worst_triple.order() <= d);
        auto icert = certify_influences(ctx, f, d, 1.0);
        CHECK(icert.worst_value == doctest::Approx(brute_influences(sp, f, d)));
        CHECK(influence(f, icert.worst_triple.v1, icert.worst_triple.w1, icert.worst_triple.t) ==
              doctest::Approx(icert.worst_value));
      }
    }
  }
}

TEST_CASE("influence certificates: constants and characters") {
  SpacePtr sp = make_space(2, 2, 2);
  SpaceContext ctx(sp);

  // constant: all order >= 1 influences vanish; order 0 carries ||f||^2
  MapFunction ones(sp, std::vector<cd>(sp->size(), 1.0));
  for (const auto& [v1, w1] : ctx.pairs_up_to(2)) {
    if (v1.dim() + w1.codim() == 0) continue;
    for (std::size_t ti = 0; ti < sp->size(); ++ti)
      CHECK(influence(ones, v1, w1, sp->decode_map(ti)) < 1e-15);
  }
  CHECK(certify_influences(ctx, ones, 2, 1.0).worst_value == doctest::Approx(1.0));

  // single character: influences are 0 or 1
  std::mt19937_64 rng(11);
  for (std::size_t xi = 0; xi < sp->size(); ++xi) {
    MapFunction ux = character_function(sp, sp->decode_dual(xi));
    for (const auto& [v1, w1] : ctx.pairs_up_to(2)) {
      Mat t(2, 2);
      for (auto& e : t.e) e = static_cast<uint8_t>(rng() & 1);
      double i = influence(ux, v1, w1, t);
      CHECK((std::abs(i) < 1e-12 || std::abs(i - 1.0) < 1e-12));
    }
  }
}

TEST_CASE("globalness transfer (restriction-global implies small influences of the pure part)") {
  SpacePtr sp = make_space(2, 2, 2);
  SpaceContext ctx(sp);
  std::mt19937_64 rng(13);

  // constants: both sides vanish at order >= 1... the transfer report passes
  MapFunction ones(sp, std::vector<cd>(sp->size(), 1.0));
  auto crep = check_globalness_transfer(ctx, ones, 1);
  CHECK(crep.pass);

  // dictator at d = 1: observed constant stays below q^{10}
  Vec v{1, 0}, w{0, 0};
  auto drep = check_globalness_transfer(ctx, dictator(sp, v, w), 1);
  CHECK(drep.pass);
  CHECK(drep.observed_constant <= std::pow(2.0, 10));

  // random Boolean functions at both orders
  for (int it = 0; it < 200; ++it) {
    MapFunction f = random_boolean_function(sp, 0.5, 1000 + it);
    for (int d : {1, 2}) CHECK(check_globalness_transfer(ctx, f, d).pass);
  }
}

TEST_CASE("tee-based degree-lowering preserves restriction globalness") {
  // For (d, eps)-restriction-global f and a one-dimensional U <= V, the
  // function f' = (T_{d,U} f)_{(U,W)->T} is (d-1, 4 q^{4d} eps)-restriction
  // global and satisfies (f')^{=d-1} = D_{U,T}[f^{=d}].
  SpacePtr sp = make_space(2, 2, 2);
  const Field& F = sp->field();
  SpaceContext ctx(sp);
  std::mt19937_64 rng(17);
  const int d = 2;
  for (int it = 0; it < 10; ++it) {
    MapFunction f = random_function(rng, sp);
    double eps = certify_restriction_global(ctx, f, d, 1.0).worst_value;
    for (const auto& usub : enumerate_subspaces(F, 2, 1)) {
      UnitSubspace u{Side::V, usub};
      MapFunction tf = tee_operator(f, d, u);
      for (std::size_t ti = 0; ti < sp->size(); ++ti) {
        Mat t = sp->decode_map(ti);
        MapFunction fprime = restrict_u(tf, u, t);
        CHECK(max_abs_diff(pure_part(fprime, d - 1),
                           derivative_u(pure_part(f, d), u, t)) < 1e-9);
        // restriction-globalness of f' at order d-1 with the lemma's constant
        SpaceContext sub_ctx(fprime.sp);
        double sub_eps =
            certify_restriction_global(sub_ctx, fprime, d - 1, 1.0).worst_value;
        CHECK(sub_eps <= 4.0 * std::pow(2.0, 4 * d) * eps * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("bilinear hypercontractivity on structured fixtures") {
  SpacePtr sp = make_space(2, 2, 2);
  SpaceContext ctx(sp);

  // single character of rank d: lhs = 1, influence sum >= 1
  for (int d : {1, 2}) {
    for (std::size_t xi = 0; xi < sp->size(); ++xi) {
      if (sp->rank_of_dual(xi) != d) continue;
      MapFunction ux = character_function(sp, sp->decode_dual(xi));
      auto rep = check_bilinear_hypercontractivity(ctx, ux, d);
      CHECK(rep.lhs == doctest::Approx(1.0));
      CHECK(rep.pass);
      break;
    }
  }

  // constants pass with the order-0 term dominating
  MapFunction ones(sp, std::vector<cd>(sp->size(), 1.0));
  CHECK(check_bilinear_hypercontractivity(ctx, ones, 0).pass);

  // sharpness family: observed exponent finite, logged
  for (int d : {1, 2}) {
    MapFunction sharp = sharpness_function(sp, d);
    auto rep = check_bilinear_hypercontractivity(ctx, sharp, d);
    CHECK(rep.pass);
    CHECK(std::isfinite(rep.observed_exponent));
  }

  // degree precondition enforced
  MapFunction full = sharpness_function(sp, 2);
  CHECK_THROWS_AS(check_bilinear_hypercontractivity(ctx, full, 1), contract_error);
}

TEST_CASE("global Bonami and level-d inequalities") {
  SpacePtr sp = make_space(2, 2, 2);
  SpaceContext ctx(sp);

  // constant with eps = 1
  MapFunction ones(sp, std::vector<cd>(sp->size(), 1.0));
  auto crep = check_restriction_global_bonami(ctx, ones, 1, 1.0);
  CHECK(crep.pass);

  // random Boolean sets with their exact globalness level
  for (int it = 0; it < 40; ++it) {
    MapFunction f = random_boolean_function(sp, 0.4, 2000 + it);
    for (int d : {1, 2}) {
      auto rep = check_restriction_global_bonami(ctx, f, d);
      CHECK(rep.pass);
      auto lrep = check_level_d(ctx, f, d);
      CHECK(lrep.pass);
    }
  }

  // rank-threshold indicator: exact spectrum drives the level-d report
  MapFunction thresh = rank_threshold_indicator(sp, 1);
  auto lrep = check_level_d(ctx, thresh, 1);
  CHECK(lrep.pass);
  CHECK(lrep.mass_profile.size() == 3);
  double total = 0;
  for (double v : lrep.mass_profile) total += v;
  CHECK(total == doctest::Approx(norm2_sq(thresh)));

  // dictator: eps = 1 makes the bound trivial; mass at level 1 is reported
  Vec v{1, 0}, w{0, 0};
  auto drep = check_level_d(ctx, dictator(sp, v, w), 1);
  CHECK(drep.pass);
  CHECK(drep.eps == doctest::Approx(1.0));
  CHECK(drep.mass_profile[1] > 0);

  // empty set: all-zero function passes trivially
  MapFunction zero(sp);
  CHECK(check_level_d(ctx, zero, 1).pass);

  // non-Boolean input rejected
  MapFunction bad(sp);
  bad.v[0] = 0.5;
  CHECK_THROWS_AS(check_level_d(ctx, bad, 1), contract_error);
}

TEST_CASE("monotonicity of the exact globalness level in the order") {
  SpacePtr sp = make_space(2, 2, 2);
  SpaceContext ctx(sp);
  for (int it = 0; it < 10; ++it) {
    MapFunction f = random_boolean_function(sp, 0.5, 3000 + it);
    double prev = 0;
    for (int d = 0; d <= 2; ++d) {
      double level = certify_restriction_global(ctx, f, d, 1.0).worst_value;
      CHECK(level >= prev - 1e-12);  // larger order, more restrictions
      prev = level;
    }
  }
}

TEST_CASE("fixture builders") {
  SpacePtr sp = make_space(2, 2, 2);
  MapFunction sharp = sharpness_function(sp, 1);
  CHECK(fourier_degree(sharp) == 1);
  CHECK(norm2_sq(sharp) == doctest::Approx(9.0));  // nine rank-1 characters

  MapFunction thr = rank_threshold_indicator(sp, 0);
  CHECK(std::abs(thr.v[0] - cd(1.0)) < 1e-15);
  CHECK(norm2_sq(thr) == doctest::Approx(1.0 / 16.0));

  MapFunction rb1 = random_boolean_function(sp, 0.5, 99);
  MapFunction rb2 = random_boolean_function(sp, 0.5, 99);
  CHECK(max_abs_diff(rb1, rb2) == 0.0);  // seeded determinism
}
