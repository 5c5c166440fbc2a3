#include "cellring/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cellring {

namespace {
const mpz_class kZero = 0;
}

const mpz_class& LaurentPoly::coeff_v(int32_t vexp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), vexp,
                             [](const Term& t, int32_t e) { return t.first < e; });
  if (it == terms_.end() || it->first != vexp) return kZero;
  return it->second;
}

void LaurentPoly::normalize() {
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const Term& t) { return t.second == 0; }),
               terms_.end());
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  add_scaled(o, 1, 0);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  add_scaled(o, -1, 0);
  return *this;
}

void LaurentPoly::add_scaled(const LaurentPoly& o, const mpz_class& c, int32_t shift) {
  if (c == 0 || o.terms_.empty()) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first + shift)) {
      merged.push_back(std::move(*a));
      ++a;
    } else if (a == terms_.end() || a->first > b->first + shift) {
      merged.emplace_back(b->first + shift, b->second * c);
      ++b;
    } else {
      mpz_class s = a->second + b->second * c;
      if (s != 0) merged.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

void LaurentPoly::shift(int32_t vexp) {
  for (auto& t : terms_) t.first += vexp;
}

void LaurentPoly::negate() {
  for (auto& t : terms_) t.second = -t.second;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  r.negate();
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  if (terms_.empty() || o.terms_.empty()) return r;
  // schoolbook on sparse supports; supports here are tiny
  for (const Term& t : o.terms_) r.add_scaled(*this, t.second, t.first);
  return r;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly r;
  r.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    r.terms_.emplace_back(-it->first, it->second);
  return r;
}

bool LaurentPoly::all_coeffs_nonnegative() const {
  for (const Term& t : terms_)
    if (t.second < 0) return false;
  return true;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    mpz_class c = it->second;
    if (!first) {
      os << (c < 0 ? "-" : "+");
      if (c < 0) c = -c;
    } else if (c < 0) {
      os << "-";
      c = -c;
    }
    first = false;
    int32_t e = it->first;
    if (e == 0) {
      os << c.get_str();
    } else {
      if (c != 1) os << c.get_str() << "*";
      if (e == 2) {
        os << "q";
      } else if (e % 2 == 0) {
        os << "q^" << e / 2;
      } else {
        os << "q^(" << e << "/2)";
      }
    }
  }
  return os.str();
}

namespace {

// Parses one term of the grammar "c", "c*q^e", "q^e", "v^e" with e an
// integer, "(n/2)" or "n/2"; q-exponents are doubled into v-units.
struct Parser {
  const std::string& s;
  size_t i = 0;
  explicit Parser(const std::string& str) : s(str) {}

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  long parse_int() {
    skip_ws();
    size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i || (i - start == 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      throw input_error("bad integer in polynomial literal: " + s);
    return std::stol(s.substr(start, i - start));
  }
  mpz_class parse_bigint() {
    skip_ws();
    size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return mpz_class(s.substr(start, i - start));
  }
};

}  // namespace

LaurentPoly LaurentPoly::parse(const std::string& str) {
  Parser p(str);
  LaurentPoly result;
  if (p.done()) throw input_error("empty polynomial literal");
  while (!p.done()) {
    int sign = 1;
    char c = p.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1 : 1;
      ++p.i;
    } else if (!result.is_zero() || p.i > 0) {
      // leading term needs no sign; later terms must carry one, but be lenient
    }
    p.skip_ws();
    mpz_class coeff = 1;
    bool have_coeff = false;
    if (p.i < p.s.size() && (std::isdigit(static_cast<unsigned char>(p.s[p.i])))) {
      coeff = p.parse_bigint();
      have_coeff = true;
    }
    p.skip_ws();
    if (p.i < p.s.size() && p.s[p.i] == '*') {
      ++p.i;
      p.skip_ws();
    }
    int32_t vexp = 0;
    if (p.i < p.s.size() && (p.s[p.i] == 'q' || p.s[p.i] == 'v')) {
      bool is_q = p.s[p.i] == 'q';
      ++p.i;
      long num = is_q ? 2 : 1;  // default exponent 1
      if (p.peek() == '^') {
        ++p.i;
        bool paren = false;
        if (p.peek() == '(') {
          paren = true;
          ++p.i;
        }
        long n = p.parse_int();
        long den = 1;
        if (p.peek() == '/') {
          ++p.i;
          den = p.parse_int();
        }
        if (paren) {
          if (p.peek() != ')') throw input_error("unbalanced parenthesis in: " + str);
          ++p.i;
        }
        if (den != 1 && den != 2) throw input_error("only half-integer exponents supported: " + str);
        num = is_q ? (den == 1 ? 2 * n : n) : (den == 1 ? n : 0);
        if (!is_q && den == 2) throw input_error("v-exponents must be integers: " + str);
      }
      vexp = static_cast<int32_t>(num);
    } else if (!have_coeff) {
      throw input_error("expected coefficient or q/v power in: " + str);
    }
    if (sign < 0) coeff = -coeff;
    result += LaurentPoly(coeff, vexp);
  }
  return result;
}

size_t LaurentPoly::hash() const {
  size_t h = 0x9e3779b97f4a7c15ULL;
  for (const Term& t : terms_) {
    h ^= static_cast<size_t>(t.first) + 0x9e3779b9 + (h << 6) + (h >> 2);
    // fold the low limb and sign; enough for dispersion
    size_t limb = t.second.get_mpz_t()->_mp_size == 0
                      ? 0
                      : static_cast<size_t>(mpz_getlimbn(t.second.get_mpz_t(), 0));
    size_t sgn = t.second < 0 ? 0x5851f42d4c957f2dULL : 0;
    h ^= (limb ^ sgn) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace cellring
