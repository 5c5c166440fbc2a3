#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cellring/hecke.hpp"

namespace cellring {

struct avalue_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Position of an element inside a left or right {s,t}-string: the m-1
// elements sw, tsw, stsw, ... over the string base w (sw>w, tw>w).
struct StringPosition {
  int s, t;                     // generator pair, s < t
  int m;                        // bond order, 3 or 4
  bool left;                    // side
  std::vector<ElemId> members;  // the m-1 string members in order
  int index;                    // 1-based position of the queried element
};

struct AValueWitness {
  std::string kind;  // "product" or "parabolic"
  std::string x_nf;  // product: left factor; parabolic: longest-element NF
  std::string y_nf;  // product: right factor; parabolic: cofactor NF
  std::string note;  // parabolic side / star-tau transport path
  int degree = 0;    // witnessed v-degree (product) or l(w_I) (parabolic)
};

struct AValueCertificate {
  ElemId element = kNoElem;
  int lower_bound = 0;
  std::optional<int> claimed_value;
  std::string source;  // "paper-cell-c" | "certified-lower-bound"
  std::vector<AValueWitness> witnesses;
};

// Descent-set machinery above hecke-kl: strings and star operations, the
// 1.3(b)/(c) mu-invariance transport, distinguished involutions, a-value
// lower-bound certificates and gamma extraction.
class Cells {
 public:
  explicit Cells(Hecke& H) : H_(H), W_(H.weyl()) {}

  Hecke& hecke() { return H_; }
  Weyl& weyl() { return W_; }

  static int bond_order(int s, int t);

  // nullopt when w has both or neither of {s,t} as descents
  std::optional<StringPosition> left_string(ElemId w, int s, int t);
  std::optional<StringPosition> right_string(ElemId w, int s, int t);
  std::optional<ElemId> left_star(ElemId w, int s, int t);
  std::optional<ElemId> right_star(ElemId w, int s, int t);

  // full a_ij identity set of 1.3(b) (m=3) / 1.3(c) (m=4) for the two left
  // strings through x and y
  bool mu_star_invariance_check(int s, int t, ElemId x, ElemId y);

  // mu-tilde computed by 1.3(b)/(c) star transport down to short elements,
  // with the exact KL recursion as the base case
  long mu_tilde_resolved(ElemId a, ElemId b);

  int delta(ElemId w);  // degree in q of P_{e,w}
  bool is_distinguished(ElemId w, int a_value);

  // best certified lower bound for a(z); never an upper bound.  target > 0
  // stops the search as soon as the bound reaches it.
  AValueCertificate a_lower_bound(ElemId z, unsigned search_radius, int target = 0);
  // cached fast path: is a(z) >= threshold certifiable?
  bool certify_a_at_least(ElemId z, int threshold, unsigned search_radius = 10);
  std::optional<AValueCertificate> certificate_for(ElemId z) const;

  // coefficient of v^(a_z) in the h-table entry at z; throws
  // avalue_violation when the entry degree exceeds a_z
  static mpz_class gamma_from_table(const SupportMap& h, ElemId z, int a_z, Weyl& W);

  using GammaFn = std::function<mpz_class(ElemId, ElemId, ElemId)>;

  // 1.5 identities (a)-(f): pair (s,t) of order 4, preconditions
  // l(ststw)=l(w)+4 and l(ststv)=l(v)+4; primed versions act on the right
  // with u,v.  Throws domain_error when the length preconditions fail.
  bool gamma_identity_15(char variant, bool primed, int s, int t, ElemId w, ElemId u, ElemId v,
                         const GammaFn& gamma);

  unsigned mu_exact_max_length = 26;   // exact-KL base-case threshold
  unsigned mu_hard_max_length = 30;    // beyond this a stuck transport throws

 private:
  Hecke& H_;
  Weyl& W_;

  std::mutex mu_;
  std::unordered_map<ElemId, AValueCertificate> cert_cache_;

  bool string_position(ElemId w, int s, int t, bool left_side, StringPosition& out);
  long mu_tilde_impl(ElemId a, ElemId b, int depth);
};

}  // namespace cellring
