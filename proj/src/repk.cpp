#include "cellring/repk.hpp"

#include <algorithm>
#include <sstream>

namespace cellring {

void RepElement::add(const IrrF& r, long mult) {
  if (mult == 0) return;
  long& slot = combo[r];
  slot += mult;
  if (slot == 0) combo.erase(r);
}

void RepF0Element::add(int a, int m, long c) {
  if (c == 0) return;
  long& slot = combo[{a, m}];
  slot += c;
  if (slot == 0) combo.erase({a, m});
}

RepF0Element RepF0Element::operator+(const RepF0Element& o) const {
  RepF0Element r = *this;
  for (const auto& [am, c] : o.combo) r.add(am.first, am.second, c);
  return r;
}

RepF0Element RepF0Element::operator*(const RepF0Element& o) const {
  RepF0Element r;
  for (const auto& [am1, c1] : combo)
    for (const auto& [am2, c2] : o.combo) {
      int m1 = am1.second, m2 = am2.second;
      for (int i = 0; i <= std::min(m1, m2); ++i)
        r.add(am1.first + am2.first, m1 + m2 - 2 * i, c1 * c2);
    }
  return r;
}

RepF0Element RepF0Element::eta_dual() const {
  RepF0Element r;
  for (const auto& [am, c] : combo) r.add(-am.first, am.second, c);
  return r;
}

namespace {

std::string vpart(int m) { return "V(" + std::to_string(m) + ")"; }

std::string f0part(int a, int m) {
  std::string s;
  if (a != 0) s = "eta^" + std::to_string(a);
  if (m != 0 || a == 0) {
    if (!s.empty()) s += "*";
    s += vpart(m);
  }
  return s;
}

void append_term(std::ostringstream& os, bool& first, long c, const std::string& base) {
  if (!first) os << (c < 0 ? " - " : " + ");
  else if (c < 0) os << "-";
  first = false;
  long ab = c < 0 ? -c : c;
  if (ab != 1) os << ab << "*";
  os << base;
}

}  // namespace

std::string RepF0Element::str() const {
  if (combo.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [am, c] : combo) append_term(os, first, c, f0part(am.first, am.second));
  return os.str();
}

std::string RepElement::str() const {
  if (combo.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, c] : combo) {
    std::string base;
    switch (r.kind) {
      case 0: base = r.m == 0 ? "1" : vpart(r.m); break;
      case 1: base = r.m == 0 ? "eps" : "eps*" + vpart(r.m); break;
      default:
        base = "U(" + std::to_string(r.j) + ")";
        if (r.m != 0) base += "*" + vpart(r.m);
    }
    append_term(os, first, c, base);
  }
  return os.str();
}

RepElement tensor_f(const RepElement& a, const RepElement& b) {
  RepElement r;
  for (const auto& [x, cx] : a.combo)
    for (const auto& [y, cy] : b.combo) {
      long c = cx * cy;
      // O2 factor first
      std::vector<std::pair<uint8_t, int>> o2;  // (kind, j)
      if (x.kind == 0) {
        o2.emplace_back(y.kind, y.j);
      } else if (y.kind == 0) {
        o2.emplace_back(x.kind, x.j);
      } else if (x.kind == 1 && y.kind == 1) {
        o2.emplace_back(0, 0);
      } else if (x.kind == 1) {
        o2.emplace_back(2, y.j);
      } else if (y.kind == 1) {
        o2.emplace_back(2, x.j);
      } else if (x.j != y.j) {
        o2.emplace_back(2, x.j + y.j);
        o2.emplace_back(2, std::abs(x.j - y.j));
      } else {
        o2.emplace_back(2, 2 * x.j);
        o2.emplace_back(0, 0);
        o2.emplace_back(1, 0);
      }
      for (int i = 0; i <= std::min(x.m, y.m); ++i) {
        int m = x.m + y.m - 2 * i;
        for (const auto& [kind, j] : o2) r.add({kind, kind == 2 ? j : 0, m}, c);
      }
    }
  return r;
}

RepF0Element restrict_f(const RepElement& a) {
  RepF0Element r;
  for (const auto& [x, c] : a.combo) {
    if (x.kind == 2) {
      r.add(x.j, x.m, c);
      r.add(-x.j, x.m, c);
    } else {
      r.add(0, x.m, c);
    }
  }
  return r;
}

RepElement induce_f0(const RepF0Element& p) {
  RepElement r;
  for (const auto& [am, c] : p.combo) {
    auto [a, m] = am;
    if (a < 0) {
      auto it = p.combo.find({-a, m});
      if (it == p.combo.end() || it->second != c)
        throw domain_error("induce_f0: not g-symmetric at " + f0part(a, m));
      continue;  // counted at the positive weight
    }
    if (a > 0) {
      auto it = p.combo.find({-a, m});
      if (it == p.combo.end() || it->second != c)
        throw domain_error("induce_f0: not g-symmetric at " + f0part(a, m));
      r.add({2, a, m}, c);
    } else {
      r.add({0, 0, m}, c);
      r.add({1, 0, m}, c);
    }
  }
  return r;
}

RepElement dual_f(const RepElement& a) { return a; }

KMat KMat::identity() {
  KMat k;
  k.e[0][0].add(0, 0, 1);
  k.e[1][1].add(0, 0, 1);
  return k;
}

KMat KMat::operator*(const KMat& o) const {
  KMat r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.e[i][j] = e[i][0] * o.e[0][j] + e[i][1] * o.e[1][j];
  return r;
}

std::string KMat::str() const {
  return "[[" + e[0][0].str() + ", " + e[0][1].str() + "], [" + e[1][0].str() + ", " +
         e[1][1].str() + "]]";
}

KMat kbundle_matrix(const KBundle& b) {
  KMat k;
  if (!b.anti) {
    k.e[0][0].add(b.a, b.m, 1);
    k.e[1][1].add(-b.a, b.m, 1);
  } else {
    k.e[0][1].add(b.a, b.m, 1);
    k.e[1][0].add(-b.a, b.m, 1);
  }
  return k;
}

std::vector<std::pair<KBundle, long>> kmat_decompose(const KMat& M) {
  if (M.e[1][1] != M.e[0][0].eta_dual() || M.e[1][0] != M.e[0][1].eta_dual())
    throw domain_error("kmat_decompose: matrix is not equivariant");
  std::vector<std::pair<KBundle, long>> out;
  for (const auto& [am, c] : M.e[0][0].combo) out.push_back({{false, am.first, am.second}, c});
  for (const auto& [am, c] : M.e[0][1].combo) out.push_back({{true, am.first, am.second}, c});
  return out;
}

std::string BundleLabel::str() const {
  switch (shape) {
    case scalar: {
      RepElement r;
      r.add(irr, 1);
      return r.str();
    }
    case diag: return "diag(" + f0part(a, m) + ")";
    case anti: return "anti(" + f0part(a, m) + ")";
    case col: return "col(" + f0part(a, m) + ")";
    case row: return "row(" + f0part(a, m) + ")";
  }
  return "?";
}

BundleLabel dual_label(const BundleLabel& l) {
  BundleLabel r = l;
  switch (l.shape) {
    case BundleLabel::scalar: break;                      // Irr F is self-dual
    case BundleLabel::diag: r.a = -l.a; break;            // transpose then entry-dual
    case BundleLabel::anti: break;                        // fixed
    case BundleLabel::col: r.shape = BundleLabel::row; r.a = -l.a; break;
    case BundleLabel::row: r.shape = BundleLabel::col; r.a = -l.a; break;
  }
  return r;
}

bool shapes_composable(BundleLabel::Shape x, BundleLabel::Shape y) {
  using S = BundleLabel::Shape;
  switch (x) {
    case S::scalar: return y == S::scalar || y == S::row;
    case S::col: return y == S::scalar || y == S::row;
    case S::row: return y == S::col || y == S::diag || y == S::anti;
    case S::diag:
    case S::anti: return y == S::col || y == S::diag || y == S::anti;
  }
  return false;
}

namespace {

BundleLabel::Shape elt_shape(const BundleElt& e) {
  BundleLabel::Shape s = e.begin()->first.shape;
  for (const auto& [l, c] : e) {
    BundleLabel::Shape ls = l.shape;
    // diag and anti live in the same 2x2 block
    auto norm = [](BundleLabel::Shape x) {
      return x == BundleLabel::anti ? BundleLabel::diag : x;
    };
    if (norm(ls) != norm(s)) throw domain_error("bundle element of mixed shape");
  }
  return s;
}

RepElement scalar_part(const BundleElt& e) {
  RepElement r;
  for (const auto& [l, c] : e) r.add(l.irr, c);
  return r;
}

KMat kmat_part(const BundleElt& e) {
  KMat k;
  for (const auto& [l, c] : e) {
    KMat b = kbundle_matrix({l.shape == BundleLabel::anti, l.a, l.m});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (const auto& [am, cc] : b.e[i][j].combo)
          k.e[i][j].add(am.first, am.second, cc * c);
  }
  return k;
}

RepF0Element vec_part(const BundleElt& e) {  // top entry of col / first of row
  RepF0Element v;
  for (const auto& [l, c] : e) v.add(l.a, l.m, c);
  return v;
}

BundleElt from_kmat(const KMat& M) {
  BundleElt out;
  for (const auto& [b, c] : kmat_decompose(M)) {
    if (c < 0) throw domain_error("negative multiplicity in bundle product");
    BundleLabel l;
    l.shape = b.anti ? BundleLabel::anti : BundleLabel::diag;
    l.a = b.a;
    l.m = b.m;
    out[l] += c;
  }
  return out;
}

BundleElt from_vec(const RepF0Element& v, BundleLabel::Shape shape) {
  BundleElt out;
  for (const auto& [am, c] : v.combo) {
    if (c < 0) throw domain_error("negative multiplicity in bundle product");
    BundleLabel l;
    l.shape = shape;
    l.a = am.first;
    l.m = am.second;
    out[l] += c;
  }
  return out;
}

BundleElt from_scalar(const RepElement& r) {
  BundleElt out;
  for (const auto& [irr, c] : r.combo) {
    if (c < 0) throw domain_error("negative multiplicity in bundle product");
    BundleLabel l;
    l.shape = BundleLabel::scalar;
    l.irr = irr;
    out[l] += c;
  }
  return out;
}

}  // namespace

BundleElt bundle_product(const BundleElt& x, const BundleElt& y) {
  if (x.empty() || y.empty()) return {};
  using S = BundleLabel::Shape;
  S sx = elt_shape(x), sy = elt_shape(y);
  auto is2x2 = [](S s) { return s == S::diag || s == S::anti; };
  if (!shapes_composable(sx == S::anti ? S::diag : sx, sy == S::anti ? S::diag : sy))
    throw domain_error("bundle shapes do not compose");

  if (sx == S::scalar && sy == S::scalar) return from_scalar(tensor_f(scalar_part(x), scalar_part(y)));
  if (sx == S::col && sy == S::scalar)
    return from_vec(vec_part(x) * restrict_f(scalar_part(y)), S::col);
  if (sx == S::scalar && sy == S::row)
    return from_vec(restrict_f(scalar_part(x)) * vec_part(y), S::row);
  if (sx == S::row && sy == S::col)
    return from_scalar(induce_f0(vec_part(x) * vec_part(y)));
  if (sx == S::col && sy == S::row) {
    RepF0Element top = vec_part(x);
    RepF0Element first = vec_part(y);
    KMat M;
    M.e[0][0] = top * first;
    M.e[0][1] = top * first.eta_dual();
    M.e[1][0] = top.eta_dual() * first;
    M.e[1][1] = top.eta_dual() * first.eta_dual();
    return from_kmat(M);
  }
  if (is2x2(sx) && is2x2(sy)) return from_kmat(kmat_part(x) * kmat_part(y));
  if (is2x2(sx) && sy == S::col) {
    KMat M = kmat_part(x);
    RepF0Element top = vec_part(y);
    RepF0Element res = M.e[0][0] * top + M.e[0][1] * top.eta_dual();
    // bottom entry is forced by equivariance; verify it
    RepF0Element bot = M.e[1][0] * top + M.e[1][1] * top.eta_dual();
    if (bot != res.eta_dual()) throw domain_error("column product not equivariant");
    return from_vec(res, S::col);
  }
  if (sx == S::row && is2x2(sy)) {
    RepF0Element first = vec_part(x);
    KMat M = kmat_part(y);
    RepF0Element res = first * M.e[0][0] + first.eta_dual() * M.e[1][0];
    RepF0Element second = first * M.e[0][1] + first.eta_dual() * M.e[1][1];
    if (second != res.eta_dual()) throw domain_error("row product not equivariant");
    return from_vec(res, S::row);
  }
  throw domain_error("unhandled bundle shape combination");
}

std::string bundle_elt_str(const BundleElt& e) {
  if (e.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [l, c] : e) append_term(os, first, c, l.str());
  return os.str();
}

}  // namespace cellring
