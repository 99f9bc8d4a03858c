#include "bilinear/cube.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bilinear {

namespace {
int popcount(unsigned m) { return __builtin_popcount(m); }
}

CubeSpace::CubeSpace(int p_, int n_) : p(p_), n(n_) {
  if (p < 2 || n < 0) throw std::domain_error("bad cube space");
  size = ipow(static_cast<std::size_t>(p), static_cast<unsigned>(n));
}

int CubeSpace::digit(std::size_t idx, int i) const {
  for (int k = 0; k < i; ++k) idx /= p;
  return static_cast<int>(idx % p);
}

std::size_t CubeSpace::with_digit(std::size_t idx, int i, int value) const {
  std::size_t pw = ipow(static_cast<std::size_t>(p), static_cast<unsigned>(i));
  return idx + (value - digit(idx, i)) * pw;
}

cd cube_inner(const CubeFunction& f, const CubeFunction& g) {
  cd acc{};
  for (std::size_t i = 0; i < f.v.size(); ++i) acc += f.v[i] * std::conj(g.v[i]);
  return acc / static_cast<double>(f.v.size());
}

double cube_norm2_sq(const CubeFunction& f) {
  double acc = 0;
  for (const cd& z : f.v) acc += std::norm(z);
  return acc / static_cast<double>(f.v.size());
}

double cube_norm4_pow4(const CubeFunction& f) {
  double acc = 0;
  for (const cd& z : f.v) acc += std::norm(z) * std::norm(z);
  return acc / static_cast<double>(f.v.size());
}

cd cube_mean(const CubeFunction& f) {
  cd acc{};
  for (const cd& z : f.v) acc += z;
  return acc / static_cast<double>(f.v.size());
}

unsigned gamma_support(const CubeSpace& sp, std::size_t gamma) {
  unsigned mask = 0;
  for (int i = 0; i < sp.n; ++i)
    if (sp.digit(gamma, i)) mask |= 1u << i;
  return mask;
}

cd cube_character(const CubeSpace& sp, std::size_t gamma, std::size_t x) {
  int t = 0;
  for (int i = 0; i < sp.n; ++i) t = (t + sp.digit(gamma, i) * sp.digit(x, i)) % sp.p;
  return std::polar(1.0, 2.0 * std::numbers::pi * t / sp.p);
}

CubeFunction cube_character_function(const CubeSpace& sp, std::size_t gamma) {
  CubeFunction f(sp);
  for (std::size_t x = 0; x < sp.size; ++x) f.v[x] = cube_character(sp, gamma, x);
  return f;
}

namespace {

void cube_stage(std::vector<cd>& data, int p, std::size_t stride, const std::vector<cd>& kernel) {
  std::vector<cd> buf(p);
  const std::size_t block = stride * p;
  for (std::size_t base = 0; base < data.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off) {
      std::size_t at = base + off;
      for (int x = 0; x < p; ++x) buf[x] = data[at + stride * x];
      for (int b = 0; b < p; ++b) {
        cd acc{};
        for (int x = 0; x < p; ++x) acc += kernel[b * p + x] * buf[x];
        data[at + stride * b] = acc;
      }
    }
}

std::vector<cd> cube_kernel(int p, bool forward) {
  std::vector<cd> k(p * p);
  for (int b = 0; b < p; ++b)
    for (int x = 0; x < p; ++x) {
      cd w = std::polar(1.0, 2.0 * std::numbers::pi * ((b * x) % p) / p);
      k[b * p + x] = forward ? std::conj(w) / static_cast<double>(p) : w;
    }
  return k;
}

}  // namespace

CubeSpectrum cube_transform(const CubeFunction& f) {
  CubeSpectrum out(f.sp);
  std::vector<cd> data = f.v;
  auto kernel = cube_kernel(f.sp.p, true);
  std::size_t stride = 1;
  for (int i = 0; i < f.sp.n; ++i, stride *= f.sp.p) cube_stage(data, f.sp.p, stride, kernel);
  out.c = std::move(data);
  return out;
}

CubeFunction cube_inverse(const CubeSpectrum& s) {
  CubeFunction out(s.sp);
  std::vector<cd> data = s.c;
  auto kernel = cube_kernel(s.sp.p, false);
  std::size_t stride = 1;
  for (int i = 0; i < s.sp.n; ++i, stride *= s.sp.p) cube_stage(data, s.sp.p, stride, kernel);
  out.v = std::move(data);
  return out;
}

CubeFunction cube_restrict(const CubeFunction& f, unsigned s_mask, std::size_t x) {
  const CubeSpace& sp = f.sp;
  std::vector<int> fixed, free_coords;
  for (int i = 0; i < sp.n; ++i) (s_mask >> i & 1 ? fixed : free_coords).push_back(i);
  CubeSpace sub(sp.p, static_cast<int>(free_coords.size()));
  CubeFunction out(sub);
  for (std::size_t yi = 0; yi < sub.size; ++yi) {
    std::size_t idx = 0;
    std::size_t xx = x, yy = yi;
    for (int i = 0; i < sp.n; ++i) {
      int d;
      if (s_mask >> i & 1) {
        d = static_cast<int>(xx % sp.p);
        xx /= sp.p;
      } else {
        d = static_cast<int>(yy % sp.p);
        yy /= sp.p;
      }
      idx += d * ipow(static_cast<std::size_t>(sp.p), static_cast<unsigned>(i));
    }
    out.v[yi] = f.v[idx];
  }
  return out;
}

CubeFunction efron_stein(const CubeFunction& f, unsigned s_mask) {
  CubeSpectrum s = cube_transform(f);
  CubeSpectrum kept(f.sp);
  for (std::size_t g = 0; g < s.c.size(); ++g)
    if (gamma_support(f.sp, g) == s_mask) kept.c[g] = s.c[g];
  return cube_inverse(kept);
}

CubeFunction cube_pure_degree(const CubeFunction& f, int d) {
  CubeSpectrum s = cube_transform(f);
  CubeSpectrum kept(f.sp);
  for (std::size_t g = 0; g < s.c.size(); ++g)
    if (popcount(gamma_support(f.sp, g)) == d) kept.c[g] = s.c[g];
  return cube_inverse(kept);
}

CubeFunction cube_truncate(const CubeFunction& f, int d) {
  CubeSpectrum s = cube_transform(f);
  CubeSpectrum kept(f.sp);
  for (std::size_t g = 0; g < s.c.size(); ++g)
    if (popcount(gamma_support(f.sp, g)) <= d) kept.c[g] = s.c[g];
  return cube_inverse(kept);
}

int cube_degree(const CubeFunction& f, double cutoff) {
  CubeSpectrum s = cube_transform(f);
  int deg = 0;
  for (std::size_t g = 0; g < s.c.size(); ++g)
    if (std::abs(s.c[g]) > cutoff) deg = std::max(deg, popcount(gamma_support(f.sp, g)));
  return deg;
}

CubeFunction expectation_op(const CubeFunction& f, unsigned s_mask) {
  const CubeSpace& sp = f.sp;
  std::vector<int> coords;
  for (int i = 0; i < sp.n; ++i)
    if (s_mask >> i & 1) coords.push_back(i);
  CubeFunction out(sp);
  std::size_t count = ipow(static_cast<std::size_t>(sp.p), static_cast<unsigned>(coords.size()));
  for (std::size_t idx = 0; idx < sp.size; ++idx) {
    cd acc{};
    for (std::size_t a = 0; a < count; ++a) {
      std::size_t j = idx;
      std::size_t aa = a;
      for (int c : coords) {
        j = sp.with_digit(j, c, static_cast<int>(aa % sp.p));
        aa /= sp.p;
      }
      acc += f.v[j];
    }
    out.v[idx] = acc / static_cast<double>(count);
  }
  return out;
}

CubeFunction cube_laplacian(const CubeFunction& f, unsigned t_mask) {
  CubeSpectrum s = cube_transform(f);
  CubeSpectrum kept(f.sp);
  for (std::size_t g = 0; g < s.c.size(); ++g)
    if ((gamma_support(f.sp, g) & t_mask) == t_mask) kept.c[g] = s.c[g];
  return cube_inverse(kept);
}

CubeFunction cube_derivative(const CubeFunction& f, unsigned s_mask, std::size_t x) {
  return cube_restrict(cube_laplacian(f, s_mask), s_mask, x);
}

double cube_influence(const CubeFunction& f, unsigned s_mask, std::size_t x) {
  return cube_norm2_sq(cube_derivative(f, s_mask, x));
}

double cube_influence(const CubeFunction& f, unsigned s_mask) {
  return cube_norm2_sq(cube_laplacian(f, s_mask));
}

CubeFunction noise_operator(const CubeFunction& f, double rho) {
  if (rho < 0.0 || rho > 1.0) throw std::domain_error("noise_operator: rho outside [0,1]");
  CubeSpectrum s = cube_transform(f);
  for (std::size_t g = 0; g < s.c.size(); ++g)
    s.c[g] *= std::pow(rho, popcount(gamma_support(f.sp, g)));
  return cube_inverse(s);
}

CubeFunction noise_operator_channel(const CubeFunction& f, double rho) {
  if (rho < 0.0 || rho > 1.0) throw std::domain_error("noise_operator: rho outside [0,1]");
  const CubeSpace& sp = f.sp;
  // Apply the single-coordinate channel K(x,y) = rho [x=y] + (1-rho)/p
  // coordinate by coordinate; exact expectation, no sampling.
  std::vector<cd> data = f.v;
  for (int i = 0; i < sp.n; ++i) {
    std::vector<cd> next(data.size());
    std::size_t pw = ipow(static_cast<std::size_t>(sp.p), static_cast<unsigned>(i));
    for (std::size_t idx = 0; idx < data.size(); ++idx) {
      cd avg{};
      int d0 = sp.digit(idx, i);
      for (int d = 0; d < sp.p; ++d) avg += data[idx + (d - d0) * pw];
      avg /= static_cast<double>(sp.p);
      next[idx] = rho * data[idx] + (1.0 - rho) * avg;
    }
    data = std::move(next);
  }
  return CubeFunction(sp, std::move(data));
}

CubeHypReport check_cube_hypercontractivity(const CubeFunction& f, int d) {
  if (cube_degree(f) > d) throw contract_error("check_cube_hypercontractivity: degree exceeds d");
  const CubeSpace& sp = f.sp;
  CubeHypReport rep;
  rep.lhs = cube_norm4_pow4(f);

  double infl_sum = 0;
  for (unsigned s = 0; s < (1u << sp.n); ++s) {
    std::size_t count = ipow(static_cast<std::size_t>(sp.p), static_cast<unsigned>(popcount(s)));
    CubeFunction ls = cube_laplacian(f, s);
    double acc = 0;
    for (std::size_t x = 0; x < count; ++x) {
      double i_sx = cube_norm2_sq(cube_restrict(ls, s, x));
      acc += i_sx * i_sx;
    }
    infl_sum += acc / static_cast<double>(count);
  }
  rep.rhs = std::pow(100.0 * d, d) * infl_sum;
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : (rep.lhs > 0 ? HUGE_VAL : 0.0);
  rep.pass = rep.lhs <= rep.rhs * (1 + 1e-12) + 1e-12;

  double n2 = cube_norm2_sq(f);
  double lap_sum = 0;
  for (unsigned t = 1; t < (1u << sp.n); ++t)
    lap_sum += std::pow(4.0 * d, popcount(t)) * cube_norm4_pow4(cube_laplacian(f, t));
  rep.inductive_rhs = 2.0 * std::pow(9.0, d) * n2 * n2 + 2.0 * lap_sum;
  rep.inductive_pass = rep.lhs <= rep.inductive_rhs * (1 + 1e-12) + 1e-12;

  if (sp.p == 2) {
    double lhs4 = std::pow(rep.lhs, 0.25);
    double rhs4 = std::pow(3.0, d / 2.0) * std::sqrt(n2);
    rep.bonami_pass = lhs4 <= rhs4 * (1 + 1e-12) + 1e-12;
  }
  return rep;
}

double cube_globalness_level(const CubeFunction& f, int d) {
  const CubeSpace& sp = f.sp;
  double worst = 0;
  for (unsigned s = 0; s < (1u << sp.n); ++s) {
    if (popcount(s) > d) continue;
    std::size_t count = ipow(static_cast<std::size_t>(sp.p), static_cast<unsigned>(popcount(s)));
    for (std::size_t x = 0; x < count; ++x)
      worst = std::max(worst, cube_norm2_sq(cube_restrict(f, s, x)));
  }
  return worst;
}

CubeSseReport check_cube_sse(const CubeFunction& indicator, double rho, int d) {
  const CubeSpace& sp = indicator.sp;
  bool empty = true;
  for (const cd& z : indicator.v)
    if (z != cd{}) empty = false;
  if (empty) throw std::domain_error("check_cube_sse: empty set");

  CubeSseReport rep;
  rep.epsilon = cube_globalness_level(indicator, d);

  double n2 = cube_norm2_sq(indicator);
  rep.stay_prob = std::real(cube_inner(noise_operator(indicator, rho), indicator)) / n2;
  rep.bound = std::pow(rho, d + 1) + std::pow(rep.epsilon, 0.25) * std::pow(800.0 * d, d / 4.0);
  rep.pass = rep.stay_prob <= rep.bound * (1 + 1e-12) + 1e-12;

  // Lemma-style influence bound: I_{S,x} <= 2^{2|S|} eps for |S| <= d.
  rep.lemma_influence_max_ratio = 0;
  for (unsigned s = 0; s < (1u << sp.n); ++s) {
    if (popcount(s) > d) continue;
    std::size_t count = ipow(static_cast<std::size_t>(sp.p), static_cast<unsigned>(popcount(s)));
    CubeFunction ls = cube_laplacian(indicator, s);
    for (std::size_t x = 0; x < count; ++x) {
      double i_sx = cube_norm2_sq(cube_restrict(ls, s, x));
      double cap = std::pow(2.0, 2 * popcount(s)) * rep.epsilon;
      if (cap > 0) rep.lemma_influence_max_ratio = std::max(rep.lemma_influence_max_ratio, i_sx / cap);
    }
  }
  rep.lemma_influence_pass = rep.lemma_influence_max_ratio <= 1 + 1e-9;

  CubeFunction trunc = cube_truncate(indicator, d);
  rep.trunc4_lhs = cube_norm4_pow4(trunc);
  rep.trunc4_rhs = std::pow(800.0 * d, d) * rep.epsilon * cube_norm2_sq(trunc);
  rep.trunc4_pass = rep.trunc4_lhs <= rep.trunc4_rhs * (1 + 1e-12) + 1e-12;

  rep.level_lhs = cube_norm2_sq(trunc);
  rep.level_rhs = std::pow(rep.epsilon, 0.25) * std::pow(800.0 * d, d / 4.0) * n2;
  rep.level_pass = rep.level_lhs <= rep.level_rhs * (1 + 1e-12) + 1e-12;
  return rep;
}

}  // namespace bilinear
