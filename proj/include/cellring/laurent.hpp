#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cellring {

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact element of Z[v, v^-1] with v = q^(1/2).  All exponents project-wide
// are in v-units, so every exponent appearing in the paper is an integer
// (q^k is represented as v^(2k)).  Terms are kept sorted by exponent with no
// zero coefficients stored.
class LaurentPoly {
 public:
  using Term = std::pair<int32_t, mpz_class>;

  LaurentPoly() = default;
  explicit LaurentPoly(long c) {
    if (c != 0) terms_.emplace_back(0, c);
  }
  LaurentPoly(mpz_class c, int32_t vexp) {
    if (c != 0) terms_.emplace_back(vexp, std::move(c));
  }

  static LaurentPoly v_power(int32_t e) { return LaurentPoly(mpz_class(1), e); }
  static LaurentPoly q_power(int32_t e) { return v_power(2 * e); }
  // xi = v + v^-1, the ubiquitous q^(1/2) + q^(-1/2)
  static LaurentPoly xi() {
    LaurentPoly p;
    p.terms_.emplace_back(-1, 1);
    p.terms_.emplace_back(1, 1);
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  size_t n_terms() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  int32_t degree() const {
    if (terms_.empty()) throw domain_error("degree of zero polynomial");
    return terms_.back().first;
  }
  int32_t valuation() const {
    if (terms_.empty()) throw domain_error("valuation of zero polynomial");
    return terms_.front().first;
  }
  const mpz_class& leading_coeff() const {
    if (terms_.empty()) throw domain_error("leading coefficient of zero polynomial");
    return terms_.back().second;
  }

  // Coefficient of v^vexp; zero when absent.
  const mpz_class& coeff_v(int32_t vexp) const;

  bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    r += o;
    return r;
  }
  LaurentPoly operator-(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    r -= o;
    return r;
  }
  LaurentPoly operator-() const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly& operator*=(const LaurentPoly& o) {
    *this = *this * o;
    return *this;
  }

  // this += c * v^shift * o
  void add_scaled(const LaurentPoly& o, const mpz_class& c, int32_t shift = 0);
  void shift(int32_t vexp);  // multiply by v^vexp in place
  void negate();

  // bar involution v -> v^-1
  LaurentPoly bar() const;

  bool all_coeffs_nonnegative() const;

  // Rendering in q-powers ("1+q^2", "q^(1/2)", "2*q^(-3/2)"), descending.
  std::string str() const;
  static LaurentPoly parse(const std::string& s);

  size_t hash() const;

 private:
  std::vector<Term> terms_;
  void normalize();
};

}  // namespace cellring
