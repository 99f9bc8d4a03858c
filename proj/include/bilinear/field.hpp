#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bilinear/common.hpp"

namespace bilinear {

// Parameters of GF(p^s): characteristic, extension degree and the monic
// irreducible modulus polynomial over F_p (little-endian coefficient list of
// length s+1). Elements are codes in [0,q): the base-p packing of the
// polynomial-basis coefficient vector.
struct FieldParams {
  int p = 2;
  int s = 1;
  std::vector<int> modulus;  // length s+1, monic

  int q() const;

  bool operator==(const FieldParams& o) const {
    return p == o.p && s == o.s && modulus == o.modulus;
  }

  // "q=<int>,modulus=<comma-separated coeffs>"
  std::string to_string() const;
  static FieldParams parse(const std::string& text);
};

// Fixed moduli shipped for the supported desk-scale orders. Degree-1 fields
// use the modulus t; extensions use Conway-style polynomials so that codes
// are reproducible across runs.
FieldParams canonical_field_params(int q);

class Field {
 public:
  explicit Field(FieldParams params, int max_q = 16);
  static Field make(int q) { return Field(canonical_field_params(q)); }

  int p() const { return params_.p; }
  int s() const { return params_.s; }
  int q() const { return q_; }
  const FieldParams& params() const { return params_; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
  int neg(int a) const { return neg_[a]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int inv(int a) const;

  // tau(x) = x + x^p + ... + x^{p^{s-1}}, reduced into F_p = {0,...,p-1}.
  int trace(int x) const { return trace_[x]; }

  // omega^{tau(a*x)} with omega = exp(2*pi*i/p).
  cd kernel(int a, int x) const { return roots_[trace_[mul_[a * q_ + x]]]; }
  cd root_of_unity(int t) const { return roots_[((t % params_.p) + params_.p) % params_.p]; }

  std::vector<int> coeffs_of(int code) const;
  int code_of(const std::vector<int>& coeffs) const;

 private:
  FieldParams params_;
  int q_ = 0;
  std::vector<int> add_, mul_, neg_, inv_, trace_;
  std::vector<cd> roots_;  // p-th roots of unity
};

bool is_prime(int p);
// Trial division against every lower-degree monic polynomial.
bool is_irreducible(int p, const std::vector<int>& poly);

}  // namespace bilinear
