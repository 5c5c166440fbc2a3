#include "cellring/group.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cellring {

namespace {

// Generalized Cartan pairings a[i][j] for the B~3 presentation: orders
// m(0,2)=m(1,2)=3, m(2,3)=4, all other pairs commute.  The asymmetric 2-3
// bond is oriented (a23,a32)=(-1,-2); only the Coxeter matrix is pinned by
// tests, the orientation is a realization choice.
constexpr int kCartan[4][4] = {
    {2, 0, -1, 0},
    {0, 2, -1, 0},
    {-1, -1, 2, -1},
    {0, 0, -2, 2},
};

uint64_t fold_mpz(uint64_t h, const mpz_class& z) {
  const auto* p = z.get_mpz_t();
  int sz = p->_mp_size;
  h ^= static_cast<uint64_t>(sz) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  int n = sz < 0 ? -sz : sz;
  for (int i = 0; i < n; ++i)
    h ^= static_cast<uint64_t>(mpz_getlimbn(p, i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

Mat4 Mat4::identity() {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.m[i * 4 + j] = (i == j) ? 1 : 0;
  return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
  Mat4 r;
  mpz_class acc, tmp;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      acc = 0;
      for (int k = 0; k < 4; ++k) {
        tmp = m[i * 4 + k] * o.m[k * 4 + j];
        acc += tmp;
      }
      r.m[i * 4 + j] = acc;
    }
  }
  return r;
}

void Mat4::swap01() {
  for (int j = 0; j < 4; ++j) std::swap(m[0 * 4 + j], m[1 * 4 + j]);
  for (int i = 0; i < 4; ++i) std::swap(m[i * 4 + 0], m[i * 4 + 1]);
}

size_t Mat4::hash() const {
  uint64_t h = 0x243f6a8885a308d3ULL;
  for (const auto& z : m) h = fold_mpz(h, z);
  return h;
}

Word parse_word(const std::string& literal) {
  Word w;
  for (char c : literal) {
    if (c == ' ' || c == '\t' || c == ',') continue;
    if (c == 'e' && literal.size() == 1) break;  // identity literal
    if (c >= '0' && c <= '3') {
      w.push_back(static_cast<uint8_t>(c - '0'));
    } else if (c == 'T' || c == 't') {
      w.push_back(kTau);
    } else {
      throw input_error(std::string("unknown generator token '") + c + "' in word literal");
    }
  }
  return w;
}

std::string word_str(const Word& w, bool spaced) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (spaced && i) s += ' ';
    s += w[i] == kTau ? 'T' : static_cast<char>('0' + w[i]);
  }
  if (s.empty()) s = "e";
  return s;
}

Weyl::Weyl() {
  for (int i = 0; i < 4; ++i) {
    Mat4 g = Mat4::identity();
    for (int j = 0; j < 4; ++j) g.m[i * 4 + j] = (i == j ? -1 : -kCartan[i][j]);
    gen_mats_[i] = g;
  }
  e_ = intern(0, Mat4::identity());
  tau_ = intern(1, Mat4::identity());
  for (int i = 0; i < 4; ++i) gens_[i] = intern(0, gen_mats_[i]);
}

size_t Weyl::size() const {
  std::shared_lock lk(mu_);
  return elems_.size();
}

uint8_t Weyl::descent_mask_from_columns(const Mat4& m) {
  // s is a descent iff the image of alpha_s is a negative root, i.e. the
  // column has all entries <= 0 (root coordinates have uniform sign).
  uint8_t mask = 0;
  for (int s = 0; s < 4; ++s) {
    bool neg = true;
    for (int r = 0; r < 4 && neg; ++r)
      if (m.m[r * 4 + s] > 0) neg = false;
    if (neg) mask |= uint8_t(1) << s;
  }
  return mask;
}

unsigned Weyl::compute_length(const Mat4& core, const Mat4& core_inv) const {
  Mat4 u = core;
  Mat4 uinv = core_inv;
  unsigned len = 0;
  for (;;) {
    uint8_t ld = descent_mask_from_columns(uinv);
    if (ld == 0) break;  // only the identity has empty descent set
    int s = __builtin_ctz(ld);
    u = gen_mats_[s] * u;
    uinv = uinv * gen_mats_[s];
    ++len;
  }
  return len;
}

ElemId Weyl::intern(uint8_t omega, Mat4 core) {
  uint64_t h = core.hash() ^ (omega ? 0xd1b54a32d192ed03ULL : 0);
  {
    std::shared_lock lk(mu_);
    auto it = index_.find(h);
    if (it != index_.end())
      for (ElemId id : it->second)
        if (elems_[id].omega == omega && elems_[id].core == core) return id;
  }
  // Compute derived data outside the exclusive section.
  // Integer inverse: generator matrices are involutions, so invert by
  // stripping descents (product of the stripped generators in order).
  Mat4 inv = Mat4::identity();
  {
    // Strip right descents, readable off u's own columns: u_k = u_{k-1} s_k
    // ends at e, so u = s_n ... s_1 and u^-1 = s_1 ... s_n.
    Mat4 u = core;
    for (;;) {
      uint8_t rd = descent_mask_from_columns(u);
      if (rd == 0) break;
      int s = __builtin_ctz(rd);
      u = u * gen_mats_[s];
      inv = inv * gen_mats_[s];
    }
  }
  uint8_t ldesc = descent_mask_from_columns(inv);
  uint8_t rdesc = descent_mask_from_columns(core);
  uint16_t len = static_cast<uint16_t>(compute_length(core, inv));

  std::unique_lock lk(mu_);
  auto& bucket = index_[h];
  for (ElemId id : bucket)
    if (elems_[id].omega == omega && elems_[id].core == core) return id;
  ElemId id = static_cast<ElemId>(elems_.size());
  Element& slot = elems_.emplace_back();
  slot.omega = omega;
  slot.ldesc_core = ldesc;
  slot.rdesc_core = rdesc;
  slot.length = len;
  slot.core = std::move(core);
  slot.core_inv = std::move(inv);
  bucket.push_back(id);
  return id;
}

bool Weyl::omega(ElemId a) const {
  std::shared_lock lk(mu_);
  return elems_[a].omega != 0;
}

unsigned Weyl::length(ElemId a) const {
  std::shared_lock lk(mu_);
  return elems_[a].length;
}

uint8_t Weyl::left_descent_mask(ElemId a) const {
  std::shared_lock lk(mu_);
  const Element& x = elems_[a];
  uint8_t m = x.ldesc_core;
  if (x.omega) {  // L(tau*u) is L(u) with s0 <-> s1 relabelled
    uint8_t sw = static_cast<uint8_t>(m & ~3u);
    if (m & 1) sw |= 2;
    if (m & 2) sw |= 1;
    return sw;
  }
  return m;
}

uint8_t Weyl::right_descent_mask(ElemId a) const {
  std::shared_lock lk(mu_);
  return elems_[a].rdesc_core;
}

ElemId Weyl::mult(ElemId a, ElemId b) {
  Mat4 ca, cb;
  uint8_t oa, ob;
  {
    std::shared_lock lk(mu_);
    ca = elems_[a].core;
    oa = elems_[a].omega;
    cb = elems_[b].core;
    ob = elems_[b].omega;
  }
  if (ob) ca.swap01();  // (tau^p u)(tau^q v) = tau^(p^q) (tau^q u tau^q) v
  Mat4 prod = ca * cb;
  return intern(oa ^ ob, std::move(prod));
}

ElemId Weyl::mult_gen_left(int s, ElemId a) {
  if (s == kTau) {
    std::shared_lock lk(mu_);
    Mat4 c = elems_[a].core;
    uint8_t o = elems_[a].omega;
    lk.unlock();
    return intern(o ^ 1, std::move(c));
  }
  {
    std::shared_lock lk(mu_);
    ElemId cached = elems_[a].left_nb[s].load(std::memory_order_acquire);
    if (cached != kNoElem) return cached;
  }
  Mat4 c;
  uint8_t o;
  {
    std::shared_lock lk(mu_);
    c = elems_[a].core;
    o = elems_[a].omega;
  }
  int s_eff = s;
  if (o && s <= 1) s_eff = 1 - s;  // commute s past tau
  Mat4 prod = gen_mats_[s_eff] * c;
  ElemId r = intern(o, std::move(prod));
  std::shared_lock lk(mu_);
  elems_[a].left_nb[s].store(r, std::memory_order_release);
  return r;
}

ElemId Weyl::mult_gen_right(ElemId a, int s) {
  if (s == kTau) {
    {
      std::shared_lock lk(mu_);
      ElemId cached = elems_[a].tau_right.load(std::memory_order_acquire);
      if (cached != kNoElem) return cached;
    }
    Mat4 c;
    uint8_t o;
    {
      std::shared_lock lk(mu_);
      c = elems_[a].core;
      o = elems_[a].omega;
    }
    c.swap01();  // (tau^p u) tau = tau^(p^1) (tau u tau)
    ElemId r = intern(o ^ 1, std::move(c));
    std::shared_lock lk(mu_);
    elems_[a].tau_right.store(r, std::memory_order_release);
    return r;
  }
  {
    std::shared_lock lk(mu_);
    ElemId cached = elems_[a].right_nb[s].load(std::memory_order_acquire);
    if (cached != kNoElem) return cached;
  }
  Mat4 c;
  uint8_t o;
  {
    std::shared_lock lk(mu_);
    c = elems_[a].core;
    o = elems_[a].omega;
  }
  Mat4 prod = c * gen_mats_[s];
  ElemId r = intern(o, std::move(prod));
  std::shared_lock lk(mu_);
  elems_[a].right_nb[s].store(r, std::memory_order_release);
  return r;
}

ElemId Weyl::inverse(ElemId a) {
  {
    std::shared_lock lk(mu_);
    ElemId cached = elems_[a].inv.load(std::memory_order_acquire);
    if (cached != kNoElem) return cached;
  }
  Mat4 ci;
  uint8_t o;
  {
    std::shared_lock lk(mu_);
    ci = elems_[a].core_inv;
    o = elems_[a].omega;
  }
  if (o) ci.swap01();  // (tau u)^-1 = tau (tau u^-1 tau)
  ElemId r = intern(o, std::move(ci));
  std::shared_lock lk(mu_);
  elems_[a].inv.store(r, std::memory_order_release);
  return r;
}

bool Weyl::is_involution(ElemId a) { return inverse(a) == a; }

ElemId Weyl::from_word(const Word& w) {
  ElemId a = e_;
  for (uint8_t t : w) {
    if (t > 3 && t != kTau) throw input_error("bad token in word");
    a = mult_gen_right(a, t);
  }
  return a;
}

Word Weyl::shortlex_nf(ElemId a) {
  {
    std::lock_guard lk(nf_mu_);
    auto it = nf_memo_.find(a);
    if (it != nf_memo_.end()) return it->second;
  }
  Word w;
  ElemId x = a;
  if (omega(x)) {
    w.push_back(kTau);
    x = mult_gen_left(kTau, x);
  }
  while (x != e_) {
    uint8_t ld = left_descent_mask(x);
    int s = __builtin_ctz(ld);
    w.push_back(static_cast<uint8_t>(s));
    x = mult_gen_left(s, x);
  }
  std::lock_guard lk(nf_mu_);
  nf_memo_.emplace(a, w);
  return w;
}

std::string Weyl::nf_string(ElemId a) { return word_str(shortlex_nf(a)); }

bool Weyl::bruhat_leq(ElemId y, ElemId w) {
  if (y == w) return true;
  if (omega(y) != omega(w)) return false;
  unsigned ly = length(y), lw = length(w);
  if (ly > lw) return false;
  if (ly == lw) return false;  // equal handled above
  uint64_t key = (static_cast<uint64_t>(y) << 32) | w;
  {
    std::lock_guard lk(bruhat_mu_);
    auto it = bruhat_memo_.find(key);
    if (it != bruhat_memo_.end()) return it->second;
  }
  uint8_t ld = left_descent_mask(w);
  int s = __builtin_ctz(ld);
  ElemId sw = mult_gen_left(s, w);
  ElemId sy = mult_gen_left(s, y);
  bool res;
  if (length(sy) < length(y))
    res = bruhat_leq(sy, sw);
  else
    res = bruhat_leq(y, sw);
  std::lock_guard lk(bruhat_mu_);
  bruhat_memo_.emplace(key, res);
  return res;
}

std::vector<ElemId> Weyl::ball(unsigned radius) {
  if (radius > max_ball_radius_)
    throw resource_error("ball radius " + std::to_string(radius) + " exceeds configured maximum " +
                         std::to_string(max_ball_radius_));
  std::vector<ElemId> cores{e_};
  std::vector<ElemId> frontier{e_};
  for (unsigned n = 0; n < radius; ++n) {
    std::vector<ElemId> next;
    for (ElemId w : frontier) {
      uint8_t ld = left_descent_mask(w);
      for (int s = 0; s < 4; ++s) {
        if (ld & (uint8_t(1) << s)) continue;
        ElemId sw = mult_gen_left(s, w);
        next.push_back(sw);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cores.insert(cores.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::vector<ElemId> all;
  all.reserve(cores.size() * 2);
  for (ElemId c : cores) {
    all.push_back(c);
    all.push_back(mult_gen_left(kTau, c));
  }
  std::sort(all.begin(), all.end(), [this](ElemId a, ElemId b) { return canonical_less(a, b); });
  return all;
}

const std::vector<ElemId>& Weyl::interval(ElemId w) {
  {
    std::lock_guard lk(interval_mu_);
    auto it = interval_memo_.find(w);
    if (it != interval_memo_.end()) return it->second;
  }
  // Peel left descents to the length-zero base, then rebuild:
  // [e, s w'] = [e, w'] u s.[e, w'].
  std::vector<int> strip;
  ElemId x = w;
  while (length(x) > 0) {
    int s = __builtin_ctz(left_descent_mask(x));
    strip.push_back(s);
    x = mult_gen_left(s, x);
  }
  std::vector<ElemId> cur{x};
  for (auto it = strip.rbegin(); it != strip.rend(); ++it) {
    std::vector<ElemId> next = cur;
    next.reserve(cur.size() * 2);
    for (ElemId z : cur) next.push_back(mult_gen_left(*it, z));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  std::lock_guard lk(interval_mu_);
  return interval_memo_.emplace(w, std::move(cur)).first->second;
}

bool Weyl::canonical_less(ElemId a, ElemId b) {
  if (a == b) return false;
  unsigned la = length(a), lb = length(b);
  if (la != lb) return la < lb;
  bool oa = omega(a), ob = omega(b);
  if (oa != ob) return !oa;
  Word wa = shortlex_nf(a), wb = shortlex_nf(b);
  return wa < wb;
}

}  // namespace cellring
