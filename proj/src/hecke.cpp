#include "cellring/hecke.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace cellring {

std::vector<ElemId> HeckeElement::sorted_support(Weyl& W) const {
  std::vector<ElemId> ids;
  ids.reserve(support.size());
  for (const auto& [w, p] : support) ids.push_back(w);
  std::sort(ids.begin(), ids.end(), [&W](ElemId a, ElemId b) { return W.canonical_less(a, b); });
  return ids;
}

Hecke::PolyId Hecke::intern_poly(LaurentPoly p) {
  size_t h = p.hash();
  std::lock_guard lk(pool_mu_);
  auto& bucket = pool_index_[h];
  for (PolyId id : bucket)
    if (pool_[id] == p) return id;
  PolyId id = static_cast<PolyId>(pool_.size());
  pool_.push_back(std::move(p));
  bucket.push_back(id);
  return id;
}

const LaurentPoly& Hecke::pool_at(PolyId id) const {
  std::lock_guard lk(pool_mu_);
  return pool_[id];
}

size_t Hecke::kl_pairs() const {
  std::lock_guard lk(kl_mu_);
  return kl_memo_.size();
}

const LaurentPoly& Hecke::kl_poly(ElemId y, ElemId w) { return pool_at(kl_poly_id(y, w)); }

Hecke::PolyId Hecke::kl_poly_id(ElemId y, ElemId w) {
  Weyl& W = W_;
  // P_{tau y, tau w} = P_{y, w}: strip the omega bit
  if (W.omega(y) != W.omega(w)) return intern_poly(LaurentPoly());
  if (W.omega(w)) {
    y = W.mult_gen_left(kTau, y);
    w = W.mult_gen_left(kTau, w);
  }
  if (y == w) return intern_poly(LaurentPoly(1));
  if (W.length(y) >= W.length(w)) return intern_poly(LaurentPoly());
  if (!W.bruhat_leq(y, w)) return intern_poly(LaurentPoly());

  // extremal reduction: P_{y,w} = P_{sy,w} when s in L(w), sy > y (and the
  // mirrored right-hand version)
  for (;;) {
    uint8_t raise = W.left_descent_mask(w) & ~W.left_descent_mask(y);
    if (raise) {
      y = W.mult_gen_left(__builtin_ctz(raise), y);
      if (y == w) return intern_poly(LaurentPoly(1));
      continue;
    }
    raise = W.right_descent_mask(w) & ~W.right_descent_mask(y);
    if (raise) {
      y = W.mult_gen_right(y, __builtin_ctz(raise));
      if (y == w) return intern_poly(LaurentPoly(1));
      continue;
    }
    break;
  }

  uint64_t key = (static_cast<uint64_t>(y) << 32) | w;
  {
    std::lock_guard lk(kl_mu_);
    auto it = kl_memo_.find(key);
    if (it != kl_memo_.end()) return it->second;
  }

  // recursion on w = s w', with s in L(w) and (post-reduction) s in L(y)
  int s = __builtin_ctz(W.left_descent_mask(w));
  ElemId wp = W.mult_gen_left(s, w);
  ElemId sy = W.mult_gen_left(s, y);

  LaurentPoly P = kl_poly(sy, wp);
  P.add_scaled(kl_poly(y, wp), 1, 2);  // + q * P_{y,w'}
  for (const auto& [z, m] : mu_column(wp)) {
    if (!((W.left_descent_mask(z) >> s) & 1)) continue;
    const LaurentPoly& Pyz = kl_poly(y, z);
    if (Pyz.is_zero()) continue;
    P.add_scaled(Pyz, -m, static_cast<int32_t>(W.length(w) - W.length(z)));
  }

  // theorem guards: degree bound, nonnegative coefficients, constant term 1
  unsigned gap = W.length(w) - W.length(y);
  if (!P.is_zero() && P.degree() > static_cast<int32_t>(gap) - 1)
    throw domain_error("KL degree bound violated at " + W.nf_string(y) + " | " + W.nf_string(w));
  if (!P.all_coeffs_nonnegative())
    throw domain_error("KL positivity violated at " + W.nf_string(y) + " | " + W.nf_string(w));
  if (P.is_zero() || P.coeff_v(0) != 1)
    throw domain_error("KL constant term not 1 at " + W.nf_string(y) + " | " + W.nf_string(w));

  PolyId id = intern_poly(std::move(P));
  std::lock_guard lk(kl_mu_);
  kl_memo_.emplace(key, id);
  return id;
}

long Hecke::mu(ElemId y, ElemId w) {
  Weyl& W = W_;
  if (W.omega(y) != W.omega(w)) return 0;
  unsigned ly = W.length(y), lw = W.length(w);
  if (ly >= lw) return 0;
  if (((lw - ly) & 1) == 0) return 0;  // even gap cannot reach the threshold
  const LaurentPoly& P = kl_poly(y, w);
  if (P.is_zero()) return 0;
  const mpz_class& c = P.coeff_v(static_cast<int32_t>(lw - ly) - 1);
  if (!c.fits_slong_p()) throw resource_error("mu coefficient out of range");
  return c.get_si();
}

long Hecke::mu_tilde(ElemId y, ElemId w) {
  unsigned ly = W_.length(y), lw = W_.length(w);
  if (ly < lw) return mu(y, w);
  if (lw < ly) return mu(w, y);
  return 0;
}

const std::vector<std::pair<ElemId, long>>& Hecke::mu_column(ElemId w) {
  {
    std::lock_guard lk(mucol_mu_);
    auto it = mu_cols_.find(w);
    if (it != mu_cols_.end()) return *it->second;
  }
  auto col = std::make_shared<std::vector<std::pair<ElemId, long>>>();
  const std::vector<ElemId>& iv = W_.interval(w);
  unsigned lw = W_.length(w);
  for (ElemId z : iv) {
    unsigned lz = W_.length(z);
    if (lz >= lw || ((lw - lz) & 1) == 0) continue;
    long m = mu(z, w);
    if (m != 0) col->emplace_back(z, m);
  }
  std::sort(col->begin(), col->end());
  std::lock_guard lk(mucol_mu_);
  return *mu_cols_.emplace(w, std::move(col)).first->second;
}

HeckeElement Hecke::c_to_ttilde(ElemId w) {
  HeckeElement r;
  r.basis = Basis::Ttilde;
  int32_t lw = static_cast<int32_t>(W_.length(w));
  for (ElemId y : W_.interval(w)) {
    LaurentPoly p = kl_poly(y, w);
    if (p.is_zero()) continue;
    p.shift(static_cast<int32_t>(W_.length(y)) - lw);
    r.add(y, p);
  }
  return r;
}

HeckeElement Hecke::c_to_t(ElemId w) {
  HeckeElement r;
  r.basis = Basis::T;
  int32_t lw = static_cast<int32_t>(W_.length(w));
  for (ElemId y : W_.interval(w)) {
    LaurentPoly p = kl_poly(y, w);
    if (p.is_zero()) continue;
    p.shift(-lw);
    r.add(y, p);
  }
  return r;
}

HeckeElement Hecke::t_to_c(const HeckeElement& h) {
  HeckeElement work;
  work.basis = Basis::Ttilde;
  if (h.basis == Basis::T) {
    for (const auto& [w, p] : h.support) {
      LaurentPoly q = p;
      q.shift(static_cast<int32_t>(W_.length(w)));  // T_w = v^(l(w)) T~_w
      work.add(w, q);
    }
  } else if (h.basis == Basis::Ttilde) {
    work.support = h.support;
  } else {
    return h;  // already C
  }
  HeckeElement out;
  out.basis = Basis::C;
  while (!work.support.empty()) {
    ElemId top = kNoElem;
    for (const auto& [w, p] : work.support)
      if (top == kNoElem || W_.canonical_less(top, w)) top = w;
    LaurentPoly g = work.support[top];
    out.add(top, g);
    HeckeElement cw = c_to_ttilde(top);
    for (const auto& [y, p] : cw.support) {
      LaurentPoly t = p * g;
      t.negate();
      work.add(y, t);
    }
    assert(work.support.find(top) == work.support.end());
  }
  return out;
}

HeckeElement Hecke::cs_mult(int s, const HeckeElement& h, bool left) {
  if (h.basis != Basis::C) throw domain_error("cs_mult expects a C-basis element");
  HeckeElement r;
  r.basis = Basis::C;
  if (s == kTau) {
    for (const auto& [w, p] : h.support)
      r.add(left ? W_.mult_gen_left(kTau, w) : W_.mult_gen_right(w, kTau), p);
    return r;
  }
  LaurentPoly xi = LaurentPoly::xi();
  for (const auto& [w, p] : h.support) {
    uint8_t desc = left ? W_.left_descent_mask(w) : W_.right_descent_mask(w);
    if ((desc >> s) & 1) {
      r.add(w, p * xi);
      continue;
    }
    ElemId sw = left ? W_.mult_gen_left(s, w) : W_.mult_gen_right(w, s);
    r.add(sw, p);
    for (const auto& [z, m] : mu_column(w)) {
      uint8_t zdesc = left ? W_.left_descent_mask(z) : W_.right_descent_mask(z);
      if (!((zdesc >> s) & 1)) continue;
      LaurentPoly t;
      t.add_scaled(p, m, 0);
      r.add(z, t);
    }
    if (r.support.size() > max_support) throw resource_error("cs_mult support exceeds bound");
  }
  return r;
}

SupportMap Hecke::c_mult(ElemId x, ElemId y) {
  if (W_.length(x) + W_.length(y) > cmult_max_combined_length)
    throw resource_error("c_mult pair combined length " +
                         std::to_string(W_.length(x) + W_.length(y)) +
                         " exceeds configured bound " +
                         std::to_string(cmult_max_combined_length));
  std::unordered_map<ElemId, std::shared_ptr<HeckeElement>> memo;
  // peel recursion: C_x = C_s C_{x'} - sum mu(z,x') C_z over z < x', sz < z
  std::function<std::shared_ptr<HeckeElement>(ElemId)> f =
      [&](ElemId cur) -> std::shared_ptr<HeckeElement> {
    auto it = memo.find(cur);
    if (it != memo.end()) return it->second;
    std::shared_ptr<HeckeElement> res;
    if (cur == W_.identity()) {
      res = std::make_shared<HeckeElement>();
      res->basis = Basis::C;
      res->add(y, LaurentPoly(1));
    } else if (W_.omega(cur)) {
      auto base = f(W_.mult_gen_left(kTau, cur));
      res = std::make_shared<HeckeElement>();
      res->basis = Basis::C;
      for (const auto& [w, p] : base->support) res->add(W_.mult_gen_left(kTau, w), p);
    } else {
      int s = __builtin_ctz(W_.left_descent_mask(cur));
      ElemId xp = W_.mult_gen_left(s, cur);
      auto base = f(xp);
      res = std::make_shared<HeckeElement>(cs_mult(s, *base, /*left=*/true));
      for (const auto& [z, m] : mu_column(xp)) {
        if (!((W_.left_descent_mask(z) >> s) & 1)) continue;
        auto fz = f(z);
        for (const auto& [w, p] : fz->support) {
          LaurentPoly t;
          t.add_scaled(p, -m, 0);
          res->add(w, t);
        }
      }
      if (res->support.size() > max_support) throw resource_error("c_mult support exceeds bound");
    }
    memo.emplace(cur, res);
    return res;
  };
  return f(x)->support;
}

SupportMap Hecke::ttilde_mult(ElemId x, ElemId y) {
  Word wx = W_.shortlex_nf(x);
  SupportMap cur;
  cur.emplace(y, LaurentPoly(1));
  LaurentPoly vdiff = LaurentPoly(1, 1);
  vdiff += LaurentPoly(-1, -1);  // v - v^-1
  for (auto it = wx.rbegin(); it != wx.rend(); ++it) {
    int s = *it;
    SupportMap next;
    next.reserve(cur.size() * 2);
    auto addto = [&next](ElemId w, LaurentPoly p) {
      if (p.is_zero()) return;
      auto pos = next.find(w);
      if (pos == next.end()) {
        next.emplace(w, std::move(p));
      } else {
        pos->second += p;
        if (pos->second.is_zero()) next.erase(pos);
      }
    };
    if (s == kTau) {
      for (auto& [w, p] : cur) addto(W_.mult_gen_left(kTau, w), std::move(p));
    } else {
      for (auto& [w, p] : cur) {
        ElemId sw = W_.mult_gen_left(s, w);
        if (W_.length(sw) > W_.length(w)) {
          addto(sw, std::move(p));
        } else {
          addto(sw, p);
          addto(w, p * vdiff);
        }
      }
    }
    if (next.size() > max_support) throw resource_error("ttilde_mult support exceeds bound");
    cur = std::move(next);
  }
  return cur;
}

size_t Hecke::load_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) return 0;
  std::string line;
  if (!std::getline(in, line)) return 0;
  if (line != "cellring-klcache 1") {
    std::cerr << "klcache: unrecognized header in " << path << ", ignoring file\n";
    return 0;
  }
  size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string ynf, wnf, terms;
    if (!std::getline(ls, ynf, '|') || !std::getline(ls, wnf, '|') || !std::getline(ls, terms)) {
      std::cerr << "klcache: discarding corrupt line: " << line << "\n";
      continue;
    }
    try {
      ElemId y = W_.from_literal(ynf);
      ElemId w = W_.from_literal(wnf);
      LaurentPoly p;
      std::istringstream ts(terms);
      std::string tok;
      bool ok = true;
      while (std::getline(ts, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) {
          ok = false;
          break;
        }
        long qe = std::stol(tok.substr(0, colon));
        mpz_class c(tok.substr(colon + 1));
        p += LaurentPoly(c, static_cast<int32_t>(2 * qe));
      }
      if (!ok || p.is_zero() || p.coeff_v(0) != 1 || !p.all_coeffs_nonnegative() ||
          !W_.bruhat_leq(y, w)) {
        std::cerr << "klcache: discarding corrupt line: " << line << "\n";
        continue;
      }
      uint64_t key = (static_cast<uint64_t>(y) << 32) | w;
      PolyId id = intern_poly(std::move(p));
      std::lock_guard lk(kl_mu_);
      kl_memo_.emplace(key, id);
      ++n;
    } catch (const std::exception& e) {
      std::cerr << "klcache: discarding corrupt line (" << e.what() << ")\n";
    }
  }
  return n;
}

size_t Hecke::save_cache(const std::string& path) {
  std::vector<std::pair<uint64_t, PolyId>> entries;
  {
    std::lock_guard lk(kl_mu_);
    entries.assign(kl_memo_.begin(), kl_memo_.end());
  }
  std::sort(entries.begin(), entries.end(), [this](const auto& a, const auto& b) {
    ElemId ya = static_cast<ElemId>(a.first >> 32), wa = static_cast<ElemId>(a.first);
    ElemId yb = static_cast<ElemId>(b.first >> 32), wb = static_cast<ElemId>(b.first);
    if (wa != wb) return W_.canonical_less(wa, wb);
    if (ya != yb) return W_.canonical_less(ya, yb);
    return false;
  });
  std::ofstream out(path);
  if (!out) return 0;
  out << "cellring-klcache 1\n";
  size_t n = 0;
  for (const auto& [key, pid] : entries) {
    ElemId y = static_cast<ElemId>(key >> 32);
    ElemId w = static_cast<ElemId>(key);
    const LaurentPoly& p = pool_at(pid);
    if (p.is_zero()) continue;
    out << W_.nf_string(y) << "|" << W_.nf_string(w) << "|";
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
      if (!first) out << ",";
      first = false;
      out << e / 2 << ":" << c.get_str();
    }
    out << "\n";
    ++n;
  }
  return n;
}

}  // namespace cellring
