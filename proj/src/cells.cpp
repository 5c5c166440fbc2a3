#include "cellring/cells.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace cellring {

int Cells::bond_order(int s, int t) {
  if (s > t) std::swap(s, t);
  if (s == 0 && t == 2) return 3;
  if (s == 1 && t == 2) return 3;
  if (s == 2 && t == 3) return 4;
  return 2;
}

bool Cells::string_position(ElemId w, int s, int t, bool left_side, StringPosition& out) {
  if (s > t) std::swap(s, t);
  int m = bond_order(s, t);
  if (m < 3) return false;
  ElemId x = left_side ? w : W_.inverse(w);

  uint8_t d = W_.left_descent_mask(x);
  bool bs = (d >> s) & 1, bt = (d >> t) & 1;
  if (bs == bt) return false;  // both or neither: not in a string

  // strip the alternating {s,t}-prefix down to the coset base
  std::vector<int> seq;
  ElemId u = x;
  for (;;) {
    uint8_t du = W_.left_descent_mask(u);
    bool us = (du >> s) & 1, ut = (du >> t) & 1;
    if (!us && !ut) break;
    assert(us != ut);  // proper suffix of an alternating word
    int c = us ? s : t;
    seq.push_back(c);
    u = W_.mult_gen_left(c, u);
  }
  int r = static_cast<int>(seq.size());
  assert(r >= 1 && r <= m - 1);

  out.s = s;
  out.t = t;
  out.m = m;
  out.left = left_side;
  out.index = r;
  out.members.clear();
  int first = seq.back();  // letter adjacent to the base
  int other = first == s ? t : s;
  ElemId cur = u;
  for (int i = 1; i <= m - 1; ++i) {
    cur = W_.mult_gen_left((i & 1) ? first : other, cur);
    out.members.push_back(left_side ? cur : W_.inverse(cur));
  }
  assert(out.members[r - 1] == w);
  return true;
}

std::optional<StringPosition> Cells::left_string(ElemId w, int s, int t) {
  StringPosition sp;
  if (!string_position(w, s, t, true, sp)) return std::nullopt;
  return sp;
}

std::optional<StringPosition> Cells::right_string(ElemId w, int s, int t) {
  StringPosition sp;
  if (!string_position(w, s, t, false, sp)) return std::nullopt;
  return sp;
}

std::optional<ElemId> Cells::left_star(ElemId w, int s, int t) {
  StringPosition sp;
  if (!string_position(w, s, t, true, sp)) return std::nullopt;
  return sp.members[sp.m - sp.index - 1];
}

std::optional<ElemId> Cells::right_star(ElemId w, int s, int t) {
  StringPosition sp;
  if (!string_position(w, s, t, false, sp)) return std::nullopt;
  return sp.members[sp.m - sp.index - 1];
}

namespace {

// {s,t} cap descent-mask as a two-bit code
uint8_t pair_code(uint8_t mask, int s, int t) {
  return static_cast<uint8_t>(((mask >> s) & 1) | (((mask >> t) & 1) << 1));
}

}  // namespace

bool Cells::mu_star_invariance_check(int s, int t, ElemId x, ElemId y) {
  if (s > t) std::swap(s, t);
  auto spx = left_string(x, s, t);
  auto spy = left_string(y, s, t);
  if (!spx || !spy) throw domain_error("mu_star_invariance_check: not in left strings");
  int m = spx->m;
  auto a = [&](int i, int j) -> long {
    ElemId xi = spx->members[i - 1], yj = spy->members[j - 1];
    if (pair_code(W_.left_descent_mask(xi), s, t) != pair_code(W_.left_descent_mask(yj), s, t))
      return 0;
    return H_.mu_tilde(xi, yj);
  };
  if (m == 3) return a(1, 1) == a(2, 2) && a(1, 2) == a(2, 1);
  return a(1, 1) == a(3, 3) && a(1, 3) == a(3, 1) && a(2, 2) == a(1, 1) + a(1, 3) &&
         a(1, 2) == a(2, 1) && a(2, 1) == a(2, 3) && a(2, 3) == a(3, 2);
}

long Cells::mu_tilde_resolved(ElemId a, ElemId b) { return mu_tilde_impl(a, b, 0); }

long Cells::mu_tilde_impl(ElemId a, ElemId b, int) {
  std::unordered_set<uint64_t> visited;
  for (;;) {
    if (W_.omega(a) != W_.omega(b)) return 0;
    unsigned la = W_.length(a), lb = W_.length(b);
    if (la == lb) return 0;
    if (la > lb) {
      std::swap(a, b);
      std::swap(la, lb);
    }
    unsigned gap = lb - la;
    if ((gap & 1) == 0) return 0;
    if (gap == 1) return W_.bruhat_leq(a, b) ? 1 : 0;
    // nonzero mu with gap > 1 forces descent-set containment
    if (W_.left_descent_mask(b) & ~W_.left_descent_mask(a)) return 0;
    if (W_.right_descent_mask(b) & ~W_.right_descent_mask(a)) return 0;
    if (lb <= mu_exact_max_length) return H_.mu_tilde(a, b);

    visited.insert((static_cast<uint64_t>(a) << 32) | b);
    bool moved = false;
    std::optional<std::pair<ElemId, ElemId>> neutral;
    static const int pairs[3][2] = {{0, 2}, {1, 2}, {2, 3}};
    for (int side = 0; side < 2 && !moved; ++side) {
      bool left_side = side == 0;
      for (const auto& pr : pairs) {
        StringPosition sa, sb;
        if (!string_position(a, pr[0], pr[1], left_side, sa)) continue;
        if (!string_position(b, pr[0], pr[1], left_side, sb)) continue;
        int m = sa.m, i = sa.index, j = sb.index;
        if (m == 4 && i == 2 && j == 2) continue;  // star fixed point
        int delta = (m - 2 * i) + (m - 2 * j);
        if (delta > 0) continue;
        ElemId a2 = sa.members[m - i - 1];
        ElemId b2 = sb.members[m - j - 1];
        // the transported a_ij slot vanishes unless the descent condition
        // holds for the starred pair (1.3(b),(c))
        uint8_t ma2 = left_side ? W_.left_descent_mask(a2) : W_.right_descent_mask(a2);
        uint8_t mb2 = left_side ? W_.left_descent_mask(b2) : W_.right_descent_mask(b2);
        if (pair_code(ma2, pr[0], pr[1]) != pair_code(mb2, pr[0], pr[1])) return 0;
        if (delta < 0) {
          a = a2;
          b = b2;
          moved = true;
          break;
        }
        uint64_t key = (static_cast<uint64_t>(std::min(a2, b2)) << 32) | std::max(a2, b2);
        if (!neutral && !visited.count(key)) neutral = std::make_pair(a2, b2);
      }
    }
    if (moved) continue;
    if (neutral) {
      a = neutral->first;
      b = neutral->second;
      continue;
    }
    if (lb <= mu_hard_max_length) return H_.mu_tilde(a, b);
    throw resource_error("mu-tilde star transport stuck at " + W_.nf_string(a) + " | " +
                         W_.nf_string(b));
  }
}

int Cells::delta(ElemId w) {
  if (W_.omega(w)) throw domain_error("delta is defined on the identity component");
  const LaurentPoly& p = H_.kl_poly(W_.identity(), w);
  return p.degree() / 2;
}

bool Cells::is_distinguished(ElemId w, int a_value) {
  if (W_.omega(w)) return false;
  if (!W_.is_involution(w)) return false;
  return static_cast<int>(W_.length(w)) - a_value - 2 * delta(w) == 0;
}

mpz_class Cells::gamma_from_table(const SupportMap& h, ElemId z, int a_z, Weyl& W) {
  auto it = h.find(z);
  if (it == h.end()) return 0;
  if (!it->second.is_zero() && it->second.degree() > a_z)
    throw avalue_violation("h-table degree " + std::to_string(it->second.degree()) + " at " +
                           W.nf_string(z) + " exceeds certified a-value " + std::to_string(a_z));
  return it->second.coeff_v(a_z);
}

namespace {

struct Parabolic {
  std::string label;
  std::vector<int> gens;
  int wlen;
};

const std::vector<Parabolic>& parabolic_table() {
  // finite standard parabolics; the two B3 subsystems and the 0-2-1 chain
  // are the ones that certify a >= 5
  static const std::vector<Parabolic> tbl = {
      {"023", {0, 2, 3}, 9}, {"123", {1, 2, 3}, 9}, {"012", {0, 1, 2}, 6},
      {"23", {2, 3}, 4},     {"02", {0, 2}, 3},     {"12", {1, 2}, 3},
      {"013", {0, 1, 3}, 3},
  };
  return tbl;
}

}  // namespace

AValueCertificate Cells::a_lower_bound(ElemId z, unsigned search_radius, int target) {
  {
    std::lock_guard lk(mu_);
    auto it = cert_cache_.find(z);
    if (it != cert_cache_.end() && (target == 0 || it->second.lower_bound >= target))
      return it->second;
  }
  AValueCertificate cert;
  cert.element = z;
  cert.source = "certified-lower-bound";
  cert.lower_bound = 0;
  cert.witnesses.push_back({"product", "e", W_.nf_string(z), "h_{e,z,z} = 1", 0});

  struct WI {
    ElemId id;
    int len;
    std::string label;
  };
  static std::mutex wi_mu;
  static std::unordered_map<Weyl*, std::vector<WI>> wi_cache;
  std::vector<WI> wis;
  {
    std::lock_guard lk(wi_mu);
    auto& slot = wi_cache[&W_];
    if (slot.empty()) {
      for (const auto& p : parabolic_table()) {
        ElemId x = W_.identity();
        for (;;) {  // greedy ascent to the longest element of W_I
          bool grew = false;
          for (int s : p.gens) {
            ElemId sx = W_.mult_gen_left(s, x);
            if (W_.length(sx) > W_.length(x)) {
              x = sx;
              grew = true;
            }
          }
          if (!grew) break;
        }
        assert(static_cast<int>(W_.length(x)) == p.wlen);
        slot.push_back({x, p.wlen, p.label});
      }
    }
    wis = slot;
  }

  auto mask_of = [](const std::string& label) {
    uint8_t m = 0;
    for (char c : label) m |= uint8_t(1) << (c - '0');
    return m;
  };
  auto try_parabolics = [&](ElemId x, const std::string& path) {
    unsigned lx = W_.length(x);
    for (const auto& wi : wis) {
      if (static_cast<unsigned>(wi.len) > lx) continue;
      if (wi.len <= cert.lower_bound) continue;
      uint8_t im = mask_of(wi.label);
      // a left w_I factor forces I inside L(x), same on the right
      if ((W_.left_descent_mask(x) & im) == im) {
        ElemId lw = W_.mult(wi.id, x);
        if (W_.length(lw) == lx - static_cast<unsigned>(wi.len)) {
          cert.lower_bound = wi.len;
          cert.witnesses.push_back({"parabolic", W_.nf_string(wi.id), W_.nf_string(lw),
                                    "left factor" + (path.empty() ? "" : " after " + path),
                                    wi.len});
          continue;
        }
      }
      if ((W_.right_descent_mask(x) & im) == im) {
        ElemId rw = W_.mult(x, wi.id);
        if (W_.length(rw) == lx - static_cast<unsigned>(wi.len)) {
          cert.lower_bound = wi.len;
          cert.witnesses.push_back({"parabolic", W_.nf_string(wi.id), W_.nf_string(rw),
                                    "right factor" + (path.empty() ? "" : " after " + path),
                                    wi.len});
        }
      }
    }
  };

  // BFS over star/tau moves (a-preserving) and descent strips (a can only
  // drop, so any bound found below transfers to z)
  struct Node {
    ElemId x;
    std::string path;
    unsigned depth;
  };
  std::deque<Node> queue{{z, "", 0}};
  std::unordered_set<ElemId> seen{z};
  size_t expanded = 0;
  const size_t node_cap = 80 * (search_radius + 2);

  while (!queue.empty() && expanded < node_cap) {
    Node n = queue.front();
    queue.pop_front();
    ++expanded;
    try_parabolics(n.x, n.path);
    if (target > 0 && cert.lower_bound >= target) break;
    if (n.depth >= search_radius) continue;
    static const int pairs[3][2] = {{0, 2}, {1, 2}, {2, 3}};
    auto push = [&](std::optional<ElemId> nx, const std::string& mv) {
      if (!nx) return;
      if (seen.insert(*nx).second)
        queue.push_back({*nx, n.path.empty() ? mv : n.path + ";" + mv, n.depth + 1});
    };
    // strips first: they expose parabolic prefixes fastest
    uint8_t ld = W_.left_descent_mask(n.x), rd = W_.right_descent_mask(n.x);
    for (int s = 0; s < 4; ++s) {
      if ((ld >> s) & 1) push(W_.mult_gen_left(s, n.x), "stripL" + std::to_string(s));
      if ((rd >> s) & 1) push(W_.mult_gen_right(n.x, s), "stripR" + std::to_string(s));
    }
    for (const auto& pr : pairs) {
      std::string ps = std::to_string(pr[0]) + std::to_string(pr[1]);
      push(left_star(n.x, pr[0], pr[1]), "L*" + ps);
      push(right_star(n.x, pr[0], pr[1]), "R*" + ps);
    }
    push(W_.mult_gen_left(kTau, n.x), "tauL");
    push(W_.mult_gen_right(n.x, kTau), "tauR");
  }

  // recomputable product witnesses: h_{w_I,z,z} has v-degree l(w_I) when
  // I lies inside L(z); only recorded when c_mult can actually verify it
  for (const auto& wi : wis) {
    bool inside = true;
    for (char c : wi.label)
      if (!((W_.left_descent_mask(z) >> (c - '0')) & 1)) inside = false;
    if (!inside) continue;
    if (static_cast<unsigned>(wi.len) + W_.length(z) > H_.cmult_max_combined_length) continue;
    SupportMap h = H_.c_mult(wi.id, z);
    auto it = h.find(z);
    if (it != h.end() && !it->second.is_zero()) {
      int deg = it->second.degree();
      if (deg > cert.lower_bound) cert.lower_bound = deg;
      cert.witnesses.push_back({"product", W_.nf_string(wi.id), W_.nf_string(z), "", deg});
    }
  }

  std::lock_guard lk(mu_);
  auto [it, fresh] = cert_cache_.emplace(z, cert);
  if (!fresh && it->second.lower_bound < cert.lower_bound) it->second = cert;
  return it->second;
}

bool Cells::certify_a_at_least(ElemId z, int threshold, unsigned search_radius) {
  {
    std::lock_guard lk(mu_);
    auto it = cert_cache_.find(z);
    if (it != cert_cache_.end() && it->second.lower_bound >= threshold) return true;
  }
  AValueCertificate c = a_lower_bound(z, search_radius, threshold);
  return c.lower_bound >= threshold;
}

std::optional<AValueCertificate> Cells::certificate_for(ElemId z) const {
  std::lock_guard lk(const_cast<std::mutex&>(mu_));
  auto it = cert_cache_.find(z);
  if (it == cert_cache_.end()) return std::nullopt;
  return it->second;
}

bool Cells::gamma_identity_15(char variant, bool primed, int s, int t, ElemId w, ElemId u,
                              ElemId v, const GammaFn& gamma) {
  if (bond_order(s, t) != 4) throw domain_error("1.5 identities need an order-4 pair");
  auto lmul = [&](std::initializer_list<int> gens, ElemId x) {
    // lmul({t,s}, x) = t.(s.x); each step must ascend
    std::vector<int> g(gens);
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
      ElemId nx = W_.mult_gen_left(*it, x);
      if (W_.length(nx) <= W_.length(x)) throw domain_error("1.5 length precondition violated");
      x = nx;
    }
    return x;
  };
  auto rmul = [&](ElemId x, std::initializer_list<int> gens) {
    for (int gi : gens) {
      ElemId nx = W_.mult_gen_right(x, gi);
      if (W_.length(nx) <= W_.length(x)) throw domain_error("1.5 length precondition violated");
      x = nx;
    }
    return x;
  };
  if (!primed) {
    (void)lmul({s, t, s, t}, w);
    (void)lmul({s, t, s, t}, v);
    switch (variant) {
      case 'a':
        return gamma(lmul({t, s}, w), u, lmul({t}, v)) ==
               gamma(lmul({s}, w), u, lmul({s, t}, v));
      case 'b':
        return gamma(lmul({t, s}, w), u, lmul({t, s}, v)) ==
               gamma(lmul({s}, w), u, lmul({s}, v)) +
                   gamma(lmul({s}, w), u, lmul({s, t, s}, v));
      case 'c':
        return gamma(lmul({t, s}, w), u, lmul({t, s, t}, v)) ==
               gamma(lmul({s}, w), u, lmul({s, t}, v));
      case 'd':
        return gamma(lmul({t, s, t}, w), u, lmul({t}, v)) +
                   gamma(lmul({t}, w), u, lmul({t}, v)) ==
               gamma(lmul({s, t}, w), u, lmul({s, t}, v));
      case 'e':
        return gamma(lmul({t, s, t}, w), u, lmul({t, s}, v)) ==
               gamma(lmul({s, t}, w), u, lmul({s, t, s}, v));
      case 'f':
        return gamma(lmul({t, s, t}, w), u, lmul({t, s, t}, v)) +
                   gamma(lmul({t}, w), u, lmul({t, s, t}, v)) ==
               gamma(lmul({s, t}, w), u, lmul({s, t}, v));
      default:
        throw input_error("unknown 1.5 variant");
    }
  }
  (void)rmul(u, {s, t, s, t});
  (void)rmul(v, {s, t, s, t});
  switch (variant) {
    case 'a':
      return gamma(w, rmul(u, {t}), rmul(v, {s, t})) == gamma(w, rmul(u, {t, s}), rmul(v, {s}));
    case 'b':
      return gamma(w, rmul(u, {s, t}), rmul(v, {s, t})) ==
             gamma(w, rmul(u, {s}), rmul(v, {s})) + gamma(w, rmul(u, {s, t, s}), rmul(v, {s}));
    case 'c':
      return gamma(w, rmul(u, {t, s, t}), rmul(v, {s, t})) ==
             gamma(w, rmul(u, {t, s}), rmul(v, {s}));
    case 'd':
      return gamma(w, rmul(u, {t}), rmul(v, {t, s, t})) + gamma(w, rmul(u, {t}), rmul(v, {t})) ==
             gamma(w, rmul(u, {t, s}), rmul(v, {t, s}));
    case 'e':
      return gamma(w, rmul(u, {s, t}), rmul(v, {t, s, t})) ==
             gamma(w, rmul(u, {s, t, s}), rmul(v, {t, s}));
    case 'f':
      return gamma(w, rmul(u, {t, s, t}), rmul(v, {t, s, t})) +
                 gamma(w, rmul(u, {t, s, t}), rmul(v, {t})) ==
             gamma(w, rmul(u, {t, s}), rmul(v, {t, s}));
    default:
      throw input_error("unknown 1.5 variant");
  }
}

}  // namespace cellring
