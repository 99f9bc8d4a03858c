#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bilinear/map_space.hpp"
#include "bilinear/oracle.hpp"

using namespace bilinear;

namespace {

MapFunction random_function(std::mt19937_64& rng, const SpacePtr& sp) {
  std::uniform_real_distribution<double> d(-1, 1);
  MapFunction f(sp);
  for (auto& z : f.v) z = cd(d(rng), d(rng));
  return f;
}

Mat random_mat(std::mt19937_64& rng, int q, int rows, int cols) {
  Mat m(rows, cols);
  std::uniform_int_distribution<int> dist(0, q - 1);
  for (auto& e : m.e) e = static_cast<uint8_t>(dist(rng));
  return m;
}

}  // namespace

TEST_CASE("characters are multiplicative, distinct, orthonormal") {
  for (auto [q, n, m] : {std::tuple{2, 2, 2}, {3, 1, 2}, {4, 2, 1}, {2, 1, 3}}) {
    SpacePtr sp = make_space(q, n, m);
    const Field& F = sp->field();
    // multiplicativity u_X(A+B) = u_X(A) u_X(B), sampled
    std::mt19937_64 rng(5);
    for (int it = 0; it < 30; ++it) {
      Mat x = random_mat(rng, q, n, m);
      Mat a = random_mat(rng, q, m, n), b = random_mat(rng, q, m, n);
      cd lhs = character_value(F, x, mat_add(F, a, b));
      cd rhs = character_value(F, x, a) * character_value(F, x, b);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    // orthonormality <u_X, u_Y> = [X = Y], all pairs
    std::vector<MapFunction> chars;
    for (std::size_t i = 0; i < sp->size(); ++i)
      chars.push_back(character_function(sp, sp->decode_dual(i)));
    for (std::size_t i = 0; i < sp->size(); ++i)
      for (std::size_t j = 0; j < sp->size(); ++j)
        CHECK(std::abs(inner(chars[i], chars[j]) - cd(i == j ? 1.0 : 0.0)) < 1e-9);
  }
  // scalar case: u_1(1) = -1 over F_2
  SpacePtr s11 = make_space(2, 1, 1);
  Mat one(1, 1);
  one.at(0, 0) = 1;
  CHECK(std::abs(character_value(s11->field(), one, one) - cd(-1.0)) < 1e-15);
}

TEST_CASE("entrywise factorization of the character pairing") {
  SpacePtr sp = make_space(4, 2, 2);
  const Field& F = sp->field();
  std::mt19937_64 rng(7);
  for (int it = 0; it < 40; ++it) {
    Mat x = random_mat(rng, 4, 2, 2), a = random_mat(rng, 4, 2, 2);
    cd prod = 1.0;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) prod *= F.kernel(x.at(i, k), a.at(k, i));
    CHECK(std::abs(prod - character_value(F, x, a)) < 1e-12);
  }
}

TEST_CASE("fast transform equals the naive oracle") {
  std::mt19937_64 rng(13);
  for (auto [q, n, m] : {std::tuple{2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {3, 1, 2}, {4, 1, 2}}) {
    SpacePtr sp = make_space(q, n, m);
    for (int it = 0; it < 10; ++it) {
      MapFunction f = random_function(rng, sp);
      Spectrum fast = transform(f);
      CHECK(max_abs_diff(fast, naive_transform(f)) < 1e-10);
      CHECK(max_abs_diff(inverse_transform(fast), f) < 1e-10);
      // Parseval
      CHECK(std::abs(norm2_sq(f) - norm2_sq(fast)) < 1e-9 * std::max(1.0, norm2_sq(f)));
    }
  }
  // f == 1 concentrates on X = 0; a character concentrates on its index
  SpacePtr sp = make_space(2, 2, 2);
  MapFunction ones(sp);
  for (auto& z : ones.v) z = 1.0;
  Spectrum os = transform(ones);
  CHECK(std::abs(os.c[0] - cd(1.0)) < 1e-12);
  for (std::size_t i = 1; i < os.c.size(); ++i) CHECK(std::abs(os.c[i]) < 1e-12);
  for (std::size_t i = 0; i < sp->size(); ++i) {
    Spectrum cs = transform(character_function(sp, sp->decode_dual(i)));
    for (std::size_t j = 0; j < sp->size(); ++j)
      CHECK(std::abs(cs.c[j] - cd(i == j ? 1.0 : 0.0)) < 1e-10);
  }
}

TEST_CASE("dictator expansions match the closed form") {
  SpacePtr sp = make_space(2, 2, 2);
  const Field& F = sp->field();
  // all (v, w) pairs, v != 0
  for (std::size_t vc = 1; vc < 4; ++vc)
    for (std::size_t wc = 0; wc < 4; ++wc) {
      Vec v{static_cast<uint8_t>(vc & 1), static_cast<uint8_t>(vc >> 1)};
      Vec w{static_cast<uint8_t>(wc & 1), static_cast<uint8_t>(wc >> 1)};
      MapFunction f = dictator(sp, v, w);
      CHECK(std::abs(mean(f) - cd(0.25)) < 1e-15);  // mean exactly 1/|W|
      // witness B with Bv = w
      int pivot = v[0] ? 0 : 1;
      Mat b(2, 2);
      b.at(0, pivot) = w[0];
      b.at(1, pivot) = w[1];
      // closed form: (1/|S_v|) sum_{X in S_v} conj(u_X(B)) delta_X,
      // S_v = {X : Im(X) <= span(v)}, X = v psi^T
      Spectrum expect(sp);
      for (std::size_t psi = 0; psi < 4; ++psi) {
        Mat x(2, 2);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            x.at(r, c) = static_cast<uint8_t>(F.mul(v[r], (psi >> c) & 1));
        expect.c[sp->encode_dual(x)] += std::conj(character_value(F, x, b)) / 4.0;
      }
      CHECK(max_abs_diff(transform(f), expect) < 1e-10);
      CHECK(fourier_degree(f) <= 1);
      // pure degree-1 part is f - E[f]
      MapFunction centered = f - mean(f) * MapFunction(sp, std::vector<cd>(sp->size(), 1.0));
      CHECK(max_abs_diff(pure_part(f, 1), centered) < 1e-10);
    }

  // dual dictators against their closed form
  for (std::size_t pc = 1; pc < 4; ++pc)
    for (std::size_t sc = 0; sc < 4; ++sc) {
      Vec phi{static_cast<uint8_t>(pc & 1), static_cast<uint8_t>(pc >> 1)};
      Vec psi{static_cast<uint8_t>(sc & 1), static_cast<uint8_t>(sc >> 1)};
      MapFunction f = dual_dictator(sp, phi, psi);
      CHECK(std::abs(mean(f) - cd(0.25)) < 1e-15);
      int pivot = phi[0] ? 0 : 1;
      Mat b(2, 2);  // B^T phi = psi
      b.at(pivot, 0) = psi[0];
      b.at(pivot, 1) = psi[1];
      Spectrum expect(sp);
      for (std::size_t cc = 0; cc < 4; ++cc) {
        Mat x(2, 2);  // X = c phi^T
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            x.at(r, c) = static_cast<uint8_t>(F.mul((cc >> r) & 1, phi[c]));
        expect.c[sp->encode_dual(x)] += std::conj(character_value(F, x, b)) / 4.0;
      }
      CHECK(max_abs_diff(transform(f), expect) < 1e-10);
      CHECK(fourier_degree(f) <= 1);
    }

  // v = 0 handling
  Vec z{0, 0}, w1{1, 0};
  CHECK_THROWS_AS(dictator(sp, z, w1), std::domain_error);
  MapFunction trivial = dictator(sp, z, z);
  for (const cd& val : trivial.v) CHECK(std::abs(val - cd(1.0)) < 1e-15);
}

TEST_CASE("degree truncation and rank masses") {
  std::mt19937_64 rng(17);
  SpacePtr sp = make_space(2, 2, 2);
  MapFunction f = random_function(rng, sp);
  MapFunction sum(sp);
  for (int d = 0; d <= 2; ++d) {
    MapFunction part = pure_part(f, d);
    for (std::size_t i = 0; i < sp->size(); ++i) sum.v[i] += part.v[i];
  }
  CHECK(max_abs_diff(sum, f) < 1e-10);
  MapFunction ones(sp);
  for (auto& z : ones.v) z = 1.0;
  CHECK(fourier_degree(ones) == 0);
  // every rank-d indicator sum has pure degree d
  for (int d = 0; d <= 2; ++d) {
    Spectrum s(sp);
    for (std::size_t i = 0; i < sp->size(); ++i)
      if (sp->rank_of_dual(i) == d) s.c[i] = 1.0;
    MapFunction g = inverse_transform(s);
    CHECK(fourier_degree(g) == d);
    CHECK(max_abs_diff(pure_part(g, d), g) < 1e-10);
  }
  auto mass = rank_mass(transform(f));
  double total = 0;
  for (double v : mass) total += v;
  CHECK(total == doctest::Approx(norm2_sq(f)));
}

TEST_CASE("junta structure of characters") {
  // u_X(A) depends only on the values of A on a basis of Im(X): perturbation
  // sweeps with maps vanishing on Im(X) leave it unchanged.
  SpacePtr sp = make_space(2, 2, 2);
  const Field& F = sp->field();
  std::mt19937_64 rng(19);
  for (std::size_t xi = 0; xi < sp->size(); ++xi) {
    Mat x = sp->decode_dual(xi);
    Subspace im = image_space(F, x);
    for (int it = 0; it < 20; ++it) {
      Mat a = random_mat(rng, 2, 2, 2);
      // c vanishing on Im(X): lift from L(V/Im(X), W)
      Mat csub = random_mat(rng, 2, 2, 2 - im.dim());
      Mat c = lift_map(F, csub, im, Subspace::full(2));
      CHECK(std::abs(character_value(F, x, a) -
                     character_value(F, x, mat_add(F, a, c))) < 1e-12);
    }
  }
  // product of k dictators has Fourier degree <= k
  Vec e1{1, 0}, e2{0, 1}, w0{0, 0};
  MapFunction d1 = dictator(sp, e1, w0);
  MapFunction d2 = dictator(sp, e2, w0);
  MapFunction prod(sp);
  for (std::size_t i = 0; i < sp->size(); ++i) prod.v[i] = d1.v[i] * d2.v[i];
  CHECK(fourier_degree(prod) <= 2);
  CHECK(fourier_degree(d1) <= 1);
}

TEST_CASE("shift operator") {
  std::mt19937_64 rng(23);
  SpacePtr sp = make_space(2, 2, 2);
  const Field& F = sp->field();
  MapFunction f = random_function(rng, sp);
  Mat t = random_mat(rng, 2, 2, 2);
  MapFunction sf = shift(f, t);
  CHECK(norm2_sq(sf) == doctest::Approx(norm2_sq(f)));  // isometry
  CHECK(max_abs_diff(shift(f, Mat(2, 2)), f) < 1e-15);
  CHECK(max_abs_diff(shift(sf, mat_neg(F, t)), f) < 1e-12);
  // spectrum of the shift multiplies by u_X(T)
  CHECK(max_abs_diff(transform(sf), shift_spectrum(transform(f), t)) < 1e-10);
  // on characters: Delta_T u_X = u_X(T) u_X
  for (std::size_t xi = 0; xi < sp->size(); ++xi) {
    Mat x = sp->decode_dual(xi);
    MapFunction ux = character_function(sp, x);
    MapFunction lhs = shift(ux, t);
    cd factor = character_value(F, x, t);
    for (std::size_t i = 0; i < sp->size(); ++i)
      CHECK(std::abs(lhs.v[i] - factor * ux.v[i]) < 1e-12);
  }
}

TEST_CASE("restrictions of characters and functions") {
  std::mt19937_64 rng(29);
  SpacePtr sp = make_space(2, 2, 2);
  const Field& F = sp->field();
  auto all_v = enumerate_all_subspaces(F, 2);
  MapFunction f = random_function(rng, sp);
  Spectrum fs = transform(f);

  // trivial restriction
  MapFunction same = restrict_function(f, Subspace::zero(2), Subspace::full(2), Mat(2, 2));
  CHECK(max_abs_diff(same, f) < 1e-15);

  for (const auto& v1 : all_v)
    for (const auto& w1 : all_v)
      for (std::size_t ti = 0; ti < sp->size(); ++ti) {
        Mat t = sp->decode_map(ti);
        // character restriction: (u_X)_{(V1,W1)->T} = u_X(T) u_{X(W1,V/V1)}
        for (std::size_t xi = 0; xi < sp->size(); ++xi) {
          Mat x = sp->decode_dual(xi);
          MapFunction rchar = restrict_function(character_function(sp, x), v1, w1, t);
          Mat y = pushdown_map(F, x, w1, v1);
          cd factor = character_value(F, x, t);
          MapFunction expect = character_function(rchar.sp, y);
          for (std::size_t i = 0; i < rchar.v.size(); ++i)
            CHECK(std::abs(rchar.v[i] - factor * expect.v[i]) < 1e-12);
        }
        // spectral formula matches the value-space restriction
        MapFunction direct = restrict_function(f, v1, w1, t);
        CHECK(max_abs_diff(transform(direct), restrict_spectrum(fs, v1, w1, t)) < 1e-10);
      }
}

TEST_CASE("restriction slice consistency") {
  std::mt19937_64 rng(31);
  SpacePtr sp = make_space(2, 2, 2);
  const Field& F = sp->field();
  MapFunction f = random_function(rng, sp);
  Subspace v1 = Subspace::from_row_codes(F, 2, {1});
  Subspace w1 = Subspace::from_row_codes(F, 2, {3});
  Mat t = random_mat(rng, 2, 2, 2);
  RestrictionTriple base{v1, w1, t};
  CHECK(base.order() == 2);

  SpacePtr sub = make_space(F, 1, 1);
  for (std::size_t ci = 0; ci < sub->size(); ++ci) {
    Mat c = sub->decode_map(ci);
    Mat t2 = mat_add(F, t, lift_map(F, c, v1, w1));
    RestrictionTriple other{v1, w1, t2};
    CHECK(slice_equal(F, base, other));
    // same slice: the restriction is a shift of the original, equal norms
    MapFunction r1 = restrict_function(f, v1, w1, t);
    MapFunction r2 = restrict_function(f, v1, w1, t2);
    CHECK(max_abs_diff(shift(r1, c), r2) < 1e-12);
    CHECK(norm2_sq(r1) == doctest::Approx(norm2_sq(r2)));
  }
  // a T moving the slice compares unequal
  Mat shifted = t;
  shifted.at(0, 0) = static_cast<uint8_t>(1 - shifted.at(0, 0));
  CHECK_FALSE(slice_equal(F, base, RestrictionTriple{v1, w1, shifted}));
}
