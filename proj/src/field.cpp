#include "bilinear/field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bilinear {

namespace {

int mod(int a, int p) { return ((a % p) + p) % p; }

// Polynomials over F_p as little-endian coefficient vectors.
std::vector<int> poly_trim(std::vector<int> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = mod(r[i + j] + a[i] * b[j], p);
  return poly_trim(r);
}

std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
  a = poly_trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  int lead_inv = 0;
  for (int t = 1; t < p; ++t)
    if (mod(m[dm] * t, p) == 1) lead_inv = t;
  while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
    int da = static_cast<int>(a.size()) - 1;
    int c = mod(a[da] * lead_inv, p);
    for (int i = 0; i <= dm; ++i) a[da - dm + i] = mod(a[da - dm + i] - c * m[i], p);
    a = poly_trim(a);
  }
  return a;
}

}  // namespace

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool is_irreducible(int p, const std::vector<int>& poly) {
  auto f = poly_trim(poly);
  int deg = static_cast<int>(f.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  // Enumerate monic divisor candidates of degree 1..deg/2.
  for (int dd = 1; 2 * dd <= deg; ++dd) {
    std::size_t count = ipow(static_cast<std::size_t>(p), static_cast<unsigned>(dd));
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<int> g(dd + 1, 0);
      std::size_t c = code;
      for (int i = 0; i < dd; ++i) {
        g[i] = static_cast<int>(c % p);
        c /= p;
      }
      g[dd] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

int FieldParams::q() const {
  int r = 1;
  for (int i = 0; i < s; ++i) r *= p;
  return r;
}

std::string FieldParams::to_string() const {
  std::ostringstream os;
  os << "q=" << q() << ",modulus=";
  for (std::size_t i = 0; i < modulus.size(); ++i) {
    if (i) os << ",";
    os << modulus[i];
  }
  return os.str();
}

FieldParams FieldParams::parse(const std::string& text) {
  auto fail = [&]() -> FieldParams {
    throw std::invalid_argument("bad field params: " + text);
  };
  auto mpos = text.find(",modulus=");
  if (text.rfind("q=", 0) != 0 || mpos == std::string::npos) return fail();
  int q = std::stoi(text.substr(2, mpos - 2));
  std::vector<int> coeffs;
  std::stringstream ss(text.substr(mpos + 9));
  std::string tok;
  while (std::getline(ss, tok, ',')) coeffs.push_back(std::stoi(tok));
  if (coeffs.empty()) return fail();
  FieldParams fp;
  fp.s = static_cast<int>(coeffs.size()) - 1;
  fp.modulus = coeffs;
  // Recover p from q = p^s.
  for (int p = 2; p <= q; ++p) {
    if (!is_prime(p)) continue;
    int v = 1;
    for (int i = 0; i < fp.s; ++i) v *= p;
    if (v == q) {
      fp.p = p;
      return fp;
    }
  }
  return fail();
}

FieldParams canonical_field_params(int q) {
  switch (q) {
    case 2: return {2, 1, {0, 1}};
    case 3: return {3, 1, {0, 1}};
    case 4: return {2, 2, {1, 1, 1}};
    case 5: return {5, 1, {0, 1}};
    case 7: return {7, 1, {0, 1}};
    case 8: return {2, 3, {1, 1, 0, 1}};
    case 9: return {3, 2, {2, 2, 1}};
    case 16: return {2, 4, {1, 1, 0, 0, 1}};
    default:
      throw std::domain_error("no canonical modulus shipped for q=" + std::to_string(q));
  }
}

Field::Field(FieldParams params, int max_q) : params_(std::move(params)) {
  if (!is_prime(params_.p)) throw std::domain_error("field characteristic is not prime");
  if (params_.s < 1) throw std::domain_error("extension degree must be positive");
  if (static_cast<int>(params_.modulus.size()) != params_.s + 1)
    throw std::domain_error("modulus degree does not match extension degree");
  q_ = params_.q();
  if (q_ < 2 || q_ > max_q) throw std::domain_error("field order outside configured cap");
  for (int& c : params_.modulus) c = mod(c, params_.p);
  if (params_.modulus[params_.s] == 0)
    throw std::domain_error("modulus is not of stated degree");
  if (!is_irreducible(params_.p, params_.modulus))
    throw std::domain_error("modulus is reducible over F_p");

  const int p = params_.p, s = params_.s;
  add_.assign(q_ * q_, 0);
  mul_.assign(q_ * q_, 0);
  neg_.assign(q_, 0);
  inv_.assign(q_, 0);
  trace_.assign(q_, 0);

  auto decode = [&](int code) {
    std::vector<int> c(s);
    for (int i = 0; i < s; ++i) {
      c[i] = code % p;
      code /= p;
    }
    return c;
  };
  auto encode = [&](const std::vector<int>& c) {
    int code = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) code = code * p + mod(c[i], p);
    return code;
  };
  auto encode_poly = [&](std::vector<int> poly) {
    poly = poly_mod(std::move(poly), params_.modulus, p);
    poly.resize(s, 0);
    return encode(poly);
  };

  for (int a = 0; a < q_; ++a) {
    auto ca = decode(a);
    std::vector<int> na(s);
    for (int i = 0; i < s; ++i) na[i] = mod(-ca[i], p);
    neg_[a] = encode(na);
    for (int b = 0; b < q_; ++b) {
      auto cb = decode(b);
      std::vector<int> sum(s);
      for (int i = 0; i < s; ++i) sum[i] = mod(ca[i] + cb[i], p);
      add_[a * q_ + b] = encode(sum);
      mul_[a * q_ + b] = encode_poly(poly_mul(ca, cb, p));
    }
  }
  for (int a = 1; a < q_; ++a)
    for (int b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) inv_[a] = b;

  for (int a = 0; a < q_; ++a) {
    int acc = 0, pw = a;
    for (int i = 0; i < s; ++i) {
      acc = add_[acc * q_ + pw];
      int next = pw;
      for (int j = 1; j < p; ++j) next = mul_[next * q_ + pw];  // pw^p
      pw = next;
    }
    // The trace lands in the prime subfield, whose codes are 0..p-1.
    if (acc >= p) throw std::logic_error("trace left the prime subfield");
    trace_[a] = acc;
  }

  roots_.resize(p);
  for (int t = 0; t < p; ++t)
    roots_[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / p);
}

int Field::inv(int a) const {
  if (a == 0) throw std::domain_error("gf_inv(0)");
  return inv_[a];
}

std::vector<int> Field::coeffs_of(int code) const {
  std::vector<int> c(params_.s);
  for (int i = 0; i < params_.s; ++i) {
    c[i] = code % params_.p;
    code /= params_.p;
  }
  return c;
}

int Field::code_of(const std::vector<int>& coeffs) const {
  int code = 0;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    code = code * params_.p + (((coeffs[i] % params_.p) + params_.p) % params_.p);
  return code;
}

}  // namespace bilinear
