#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "cellring/group.hpp"
#include "cellring/laurent.hpp"

namespace cellring {

enum class Basis { T, Ttilde, C };

using SupportMap = std::unordered_map<ElemId, LaurentPoly>;

// Finite-support element of the Hecke algebra H tagged with its basis.
struct HeckeElement {
  Basis basis = Basis::C;
  SupportMap support;

  void add(ElemId w, const LaurentPoly& p) {
    if (p.is_zero()) return;
    auto [it, fresh] = support.emplace(w, p);
    if (!fresh) {
      it->second += p;
      if (it->second.is_zero()) support.erase(it);
    }
  }
  bool is_zero() const { return support.empty(); }
  const LaurentPoly& coeff(ElemId w) const {
    static const LaurentPoly zero;
    auto it = support.find(w);
    return it == support.end() ? zero : it->second;
  }
  // support sorted canonically (length, omega, NF); for stable output
  std::vector<ElemId> sorted_support(Weyl& W) const;
};

// Kazhdan-Lusztig machinery over one Weyl registry.  P_{y,w} are stored in
// v-units (even exponents, i.e. honest polynomials in q).  Pure recursion
// with a hash-consed polynomial pool; safe for concurrent readers, inserts
// serialized.
class Hecke {
 public:
  explicit Hecke(Weyl& W) : W_(W) {}

  Weyl& weyl() { return W_; }

  // P_{y,w}; zero polynomial when y is not below w.  P_{tau y, tau w} = P_{y,w}.
  const LaurentPoly& kl_poly(ElemId y, ElemId w);
  // coefficient of q^((l(w)-l(y)-1)/2) in P_{y,w}; 0 when y is not under w
  long mu(ElemId y, ElemId w);
  // symmetrized: mu(y,w) if y<w, mu(w,y) if w<y, 0 otherwise
  long mu_tilde(ElemId y, ElemId w);
  // all z < w with mu(z,w) != 0
  const std::vector<std::pair<ElemId, long>>& mu_column(ElemId w);

  HeckeElement c_to_t(ElemId w);
  HeckeElement c_to_ttilde(ElemId w);
  HeckeElement t_to_c(const HeckeElement& h);  // accepts T or Ttilde input

  // C_s * h (left=true) or h * C_s in the C basis; s may be kTau.
  HeckeElement cs_mult(int s, const HeckeElement& h, bool left = true);

  // Exact structure-constant tables.  c_mult peels the ShortLex-first left
  // descent of x; both are guarded by the configured resource bounds.
  SupportMap c_mult(ElemId x, ElemId y);
  SupportMap ttilde_mult(ElemId x, ElemId y);

  // KL cache persistence ("NF(y) | NF(w) | e0:c0,..." with q-exponents).
  size_t load_cache(const std::string& path);
  size_t save_cache(const std::string& path);

  size_t kl_pairs() const;

  // resource guards
  size_t max_support = 200000;
  unsigned cmult_max_combined_length = 32;

 private:
  using PolyId = uint32_t;
  PolyId intern_poly(LaurentPoly p);
  const LaurentPoly& pool_at(PolyId id) const;
  PolyId kl_poly_id(ElemId y, ElemId w);

  Weyl& W_;

  mutable std::mutex pool_mu_;
  std::deque<LaurentPoly> pool_;
  std::unordered_map<size_t, std::vector<PolyId>> pool_index_;

  mutable std::mutex kl_mu_;
  std::unordered_map<uint64_t, PolyId> kl_memo_;

  std::mutex mucol_mu_;
  std::unordered_map<ElemId, std::shared_ptr<std::vector<std::pair<ElemId, long>>>> mu_cols_;
};

}  // namespace cellring
