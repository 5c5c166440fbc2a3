#include "cellring/families.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cellring {

namespace {

const std::array<CellLabelInfo, kNumCellLabels> kLabels = {{
    {"G23", "2323", 0b1100, 1},
    {"G03", "23230", 0b1001, 1},
    {"G13", "23231", 0b1010, 1},
    {"G02", "232302", 0b0101, 3},
    {"G013", "232301", 0b1011, 2},
    {"G12", "232312", 0b0110, 3},
    {"G01", "2323021", 0b0011, 3},
    {"G2", "2323012", 0b0100, 2},
    {"G01p", "2323120", 0b0011, 3},
    {"G12p", "23230212", 0b0110, 3},
    {"G3", "23230123", 0b1000, 2},
    {"G02p", "23231202", 0b0101, 3},
    {"G13p", "232302123", 0b1010, 3},
    {"G03p", "232312023", 0b1001, 3},
    {"G2p", "2323021232", 0b0100, 3},
    {"G2pp", "2323120232", 0b0100, 3},
    {"G0", "23230212320", 0b0001, 3},
    {"G1", "23231202321", 0b0010, 3},
}};

enum Label : int {
  G23, G03, G13, G02, G013, G12, G01, G2, G01p, G12p, G3, G02p, G13p, G03p,
  G2p, G2pp, G0, G1,
};

// right-star / tau paths from the base row of each Y-class along the join
// diagram; the same strings act as left operations for columns
const char* kTransportPath[kNumCellLabels] = {
    /*G23*/ "*",
    /*G03*/ "",
    /*G13*/ "*#",
    /*G02*/ "",
    /*G013*/ "",
    /*G12*/ "T",
    /*G01*/ "#",
    /*G2*/ "*",
    /*G01p*/ "T*",
    /*G12p*/ "#*",
    /*G3*/ "S",
    /*G02p*/ "T*#",
    /*G13p*/ "#*S#",
    /*G03p*/ "T*#S*",
    /*G2p*/ "#*S",
    /*G2pp*/ "T*#S",
    /*G0*/ "#*S*",
    /*G1*/ "T*#S#",
};

int base_row_of_class(int y_class) {
  switch (y_class) {
    case 1: return G03;
    case 2: return G013;
    default: return G02;
  }
}

struct FamilyInfo {
  const char* name;
  int base_row, base_col;
  int min_i, min_k;  // min_i < 0: no i parameter; min_k < 0: no k parameter
};

const FamilyInfo& family_info(Family f) {
  static const std::unordered_map<int, FamilyInfo> tbl = {
      {(int)Family::d02, {"d02", G02, G02, -1, -1}},
      {(int)Family::x, {"x", G02, G02, -1, 0}},
      {(int)Family::y, {"y", G02, G02, -1, 1}},
      {(int)Family::ydot, {"ydot", G02, G02, -1, 1}},
      {(int)Family::z, {"z", G02, G02, 1, 1}},
      {(int)Family::s2x, {"s2x", G02, G03, -1, 1}},
      {(int)Family::s3x, {"s3x", G02, G03, -1, 0}},
      {(int)Family::s2y, {"s2y", G02, G03, -1, 1}},
      {(int)Family::s2z, {"s2z", G02, G03, 1, 1}},
      {(int)Family::s3z, {"s3z", G02, G03, 1, 1}},
      {(int)Family::xhat, {"xhat", G03, G03, -1, 0}},
      {(int)Family::xhatp, {"xhat'", G03, G03, -1, 1}},
      {(int)Family::xtilde, {"xtilde", G03, G03, -1, 0}},
      {(int)Family::xtildep, {"xtilde'", G03, G03, -1, 1}},
      {(int)Family::yhat, {"yhat", G03, G03, -1, 1}},
      {(int)Family::yhatp, {"yhat'", G03, G03, -1, 1}},
      {(int)Family::zhat, {"zhat", G03, G03, 1, 1}},
      {(int)Family::zhat_sl, {"*zhat", G03, G03, 1, 1}},
      {(int)Family::zhat_sr, {"zhat*", G03, G03, 1, 1}},
      {(int)Family::zhat_slr, {"*zhat*", G03, G03, 1, 1}},
      {(int)Family::xcheck, {"xcheck", G013, G013, -1, 0}},
      {(int)Family::xcheckp, {"xcheck'", G013, G013, -1, 1}},
      {(int)Family::xbreve, {"xbreve", G013, G013, -1, 0}},
      {(int)Family::xbrevep, {"xbreve'", G013, G013, -1, 1}},
      {(int)Family::ycheck, {"ycheck", G013, G013, -1, 1}},
      {(int)Family::ycheckp, {"ycheck'", G013, G013, -1, 1}},
      {(int)Family::zcheck, {"zcheck", G013, G013, 1, 1}},
      {(int)Family::zcheck_sl, {"*zcheck", G013, G013, 1, 1}},
      {(int)Family::zcheck_sr, {"zcheck*", G013, G013, 1, 1}},
      {(int)Family::zcheck_slr, {"*zcheck*", G013, G013, 1, 1}},
  };
  return tbl.at((int)f);
}

BundleLabel scalar_label(uint8_t kind, int j, int m) {
  BundleLabel l;
  l.shape = BundleLabel::scalar;
  l.irr = {kind, j, m};
  return l;
}

BundleLabel mat_label(BundleLabel::Shape sh, int a, int m) {
  BundleLabel l;
  l.shape = sh;
  l.a = a;
  l.m = m;
  return l;
}

BundleLabel base_label(Family f, int i, int k) {
  using S = BundleLabel;
  switch (f) {
    case Family::d02: return scalar_label(0, 0, 0);
    case Family::x: return k == 0 ? scalar_label(1, 0, 0) : scalar_label(2, k, 0);
    case Family::y: return scalar_label(0, 0, k);
    case Family::ydot: return scalar_label(1, 0, k);
    case Family::z: return scalar_label(2, i, k);
    case Family::s2x: return mat_label(S::col, -k, 0);
    case Family::s3x: return mat_label(S::col, k, 0);
    case Family::s2y: return mat_label(S::col, 0, k);
    case Family::s2z: return mat_label(S::col, -i, k);
    case Family::s3z: return mat_label(S::col, i, k);
    case Family::xhat: return mat_label(S::diag, -k, 0);
    case Family::xhatp: return mat_label(S::anti, -k, 0);
    case Family::xtilde: return mat_label(S::anti, k, 0);
    case Family::xtildep: return mat_label(S::diag, k, 0);
    case Family::yhat: return mat_label(S::diag, 0, k);
    case Family::yhatp: return mat_label(S::anti, 0, k);
    case Family::zhat: return mat_label(S::diag, -i, k);
    case Family::zhat_sl: return mat_label(S::anti, i, k);
    case Family::zhat_sr: return mat_label(S::anti, -i, k);
    case Family::zhat_slr: return mat_label(S::diag, i, k);
    case Family::xcheck: return mat_label(S::diag, -k, 0);
    case Family::xcheckp: return mat_label(S::anti, -k, 0);
    case Family::xbreve: return mat_label(S::anti, k, 0);
    case Family::xbrevep: return mat_label(S::diag, k, 0);
    case Family::ycheck: return mat_label(S::diag, 0, k);
    case Family::ycheckp: return mat_label(S::anti, 0, k);
    case Family::zcheck: return mat_label(S::diag, -i, k);
    case Family::zcheck_sl: return mat_label(S::anti, i, k);
    case Family::zcheck_sr: return mat_label(S::anti, -i, k);
    case Family::zcheck_slr: return mat_label(S::diag, i, k);
  }
  throw input_error("unknown family");
}

std::string rep_word(const std::string& base, const std::string& block, int n) {
  std::string s = base;
  for (int i = 0; i < n; ++i) s += block;
  return s;
}

// the nested-star reading: true = tags nearest the element apply first
bool g_nearest_first = true;

}  // namespace

const std::array<CellLabelInfo, kNumCellLabels>& cell_labels() { return kLabels; }

int cell_label_index(const std::string& name) {
  for (int i = 0; i < kNumCellLabels; ++i)
    if (name == kLabels[i].name) return i;
  throw input_error("unknown cell label " + name);
}

const char* family_name(Family f) { return family_info(f).name; }

std::string CellElement::str() const {
  std::ostringstream os;
  os << family_name(family);
  if (family_info(family).min_i >= 0)
    os << "[" << i << "," << k << "]";
  else if (family_info(family).min_k >= 0)
    os << "[" << k << "]";
  if (inverse) os << "~";
  if (phi_image) os << " (phi)";
  if (!path.empty()) os << " @" << kLabels[row].name << "," << kLabels[col].name;
  return os.str();
}

Atlas::Atlas(Cells& cells, unsigned coverage_length)
    : C_(cells), W_(cells.weyl()), coverage_(coverage_length) {
  build();
}

ElemId Atlas::apply_op(ElemId w, char op, bool left) const {
  std::optional<ElemId> r;
  switch (op) {
    case '*': r = left ? C_.left_star(w, 0, 2) : C_.right_star(w, 0, 2); break;
    case '#': r = left ? C_.left_star(w, 1, 2) : C_.right_star(w, 1, 2); break;
    case 'S': r = left ? C_.left_star(w, 2, 3) : C_.right_star(w, 2, 3); break;
    case 'T': return left ? W_.mult_gen_left(kTau, w) : W_.mult_gen_right(w, kTau);
    default: throw input_error("bad transport op");
  }
  if (!r)
    throw domain_error(std::string("transport op ") + op + " undefined at " + W_.nf_string(w));
  return *r;
}

namespace {
// left-superscript star sequences; tags listed outermost-first in the paper
ElemId lstar_seq(Cells& C, const std::string& tags, ElemId w) {
  std::string order = tags;
  if (g_nearest_first) std::reverse(order.begin(), order.end());
  for (char c : order) {
    std::optional<ElemId> r;
    switch (c) {
      case '*': r = C.left_star(w, 0, 2); break;
      case '#': r = C.left_star(w, 1, 2); break;
      case 'S': r = C.left_star(w, 2, 3); break;
      default: throw input_error("bad star tag");
    }
    if (!r) throw domain_error("left star sequence undefined");
    w = *r;
  }
  return w;
}

ElemId rstar_seq(Cells& C, ElemId w, const std::string& tags) {
  std::string order = tags;
  if (!g_nearest_first) std::reverse(order.begin(), order.end());
  for (char c : order) {
    std::optional<ElemId> r;
    switch (c) {
      case '*': r = C.right_star(w, 0, 2); break;
      case '#': r = C.right_star(w, 1, 2); break;
      case 'S': r = C.right_star(w, 2, 3); break;
      default: throw input_error("bad star tag");
    }
    if (!r) throw domain_error("right star sequence undefined");
    w = *r;
  }
  return w;
}
}  // namespace

ElemId Atlas::build_family(Family f, int i, int k) const {
  const FamilyInfo& fi = family_info(f);
  if ((fi.min_i >= 0 && i < fi.min_i) || (fi.min_k >= 0 && k < fi.min_k) ||
      (fi.min_i < 0 && i != 0))
    throw input_error(std::string("family ") + fi.name + " parameters out of range");
  auto word = [&](const std::string& s) { return W_.from_literal(s); };
  switch (f) {
    case Family::d02: return word("20323202");
    case Family::x:
      return k == 0 ? word("202320") : word(rep_word("2032", "3212T", k));
    case Family::y: return word(rep_word("20323202", "12321T", k));
    case Family::ydot: return word(rep_word("202320", "12321T", k));
    case Family::z: {
      if (i == 1) return word(rep_word("20323212T", "12321T", k));
      ElemId prev = build_family(Family::z, i - 1, k);
      ElemId t = W_.mult_gen_left(3, prev);
      t = lstar_seq(C_, "#*", t);
      t = W_.mult_gen_left(2, t);
      return W_.mult_gen_left(kTau, t);
    }
    case Family::s2x: return W_.mult_gen_left(2, build_family(Family::x, 0, k));
    case Family::s3x: return W_.mult_gen_left(3, build_family(Family::x, 0, k));
    case Family::s2y: return W_.mult_gen_left(2, build_family(Family::y, 0, k));
    case Family::s2z: return W_.mult_gen_left(2, build_family(Family::z, i, k));
    case Family::s3z: return W_.mult_gen_left(3, build_family(Family::z, i, k));
    case Family::xhat:
      return k == 0 ? word("023230") : word(rep_word("0323", "2123T", k));
    case Family::xhatp: return word(rep_word("03", "2321T", k));
    case Family::xtilde:
      return k == 0 ? word("02323023") : word(rep_word("320323", "2123T", k));
    case Family::xtildep: return word(rep_word("3203", "2321T", k));
    case Family::yhat: return word(rep_word("023230", "12321T", k));
    case Family::yhatp: return word(rep_word("02323023", "12321T", k));
    case Family::zhat: {
      if (i == 1) return word(rep_word("03232123T", "12321T", k));
      ElemId prev = build_family(Family::zhat, i - 1, k);
      return W_.mult_gen_left(kTau, lstar_seq(C_, "#*S", prev));
    }
    case Family::zhat_sl: return lstar_seq(C_, "S", build_family(Family::zhat, i, k));
    case Family::zhat_sr: return rstar_seq(C_, build_family(Family::zhat, i, k), "S");
    case Family::zhat_slr:
      return rstar_seq(C_, lstar_seq(C_, "S", build_family(Family::zhat, i, k)), "S");
    case Family::xcheck: {
      ElemId t = lstar_seq(C_, "#*", build_family(Family::xhat, 0, k));
      return W_.mult_gen_right(W_.mult_gen_left(0, t), 1);
    }
    case Family::xcheckp: {
      ElemId t = lstar_seq(C_, "#*", build_family(Family::xhatp, 0, k));
      t = W_.mult_gen_left(0, t);
      return W_.mult_gen_right(rstar_seq(C_, t, "*#"), 0);
    }
    case Family::xbreve: {
      ElemId t = build_family(Family::xtilde, 0, k);
      return W_.mult_gen_left(1, W_.mult_gen_right(t, 1));
    }
    case Family::xbrevep: {
      ElemId t = rstar_seq(C_, build_family(Family::xtildep, 0, k), "*#");
      return W_.mult_gen_left(1, W_.mult_gen_right(t, 0));
    }
    case Family::ycheck: {
      ElemId t = lstar_seq(C_, "#*", build_family(Family::yhat, 0, k));
      t = W_.mult_gen_left(0, t);
      return W_.mult_gen_right(rstar_seq(C_, t, "*#"), 0);
    }
    case Family::ycheckp: {
      ElemId t = rstar_seq(C_, build_family(Family::yhatp, 0, k), "*#");
      return W_.mult_gen_left(1, W_.mult_gen_right(t, 0));
    }
    case Family::zcheck: {
      ElemId t = lstar_seq(C_, "#*", build_family(Family::zhat, i, k));
      return W_.mult_gen_right(W_.mult_gen_left(0, t), 1);
    }
    // the starred z-variants of the Gamma_013 block are the phi-images of
    // the starred zhat-variants ({2,3}-stars move the Gamma_013 column, so
    // they cannot be literal stars of zcheck)
    case Family::zcheck_sl: {
      ElemId pre = build_family(Family::zhat_sl, i, k);
      return phi_raw(W_.inverse(phi_raw(W_.inverse(pre))));
    }
    case Family::zcheck_sr: {
      ElemId pre = build_family(Family::zhat_sr, i, k);
      return phi_raw(W_.inverse(phi_raw(W_.inverse(pre))));
    }
    case Family::zcheck_slr: {
      ElemId pre = build_family(Family::zhat_slr, i, k);
      return phi_raw(W_.inverse(phi_raw(W_.inverse(pre))));
    }
  }
  throw input_error("unknown family");
}

ElemId Atlas::phi_raw(ElemId w, bool* used_else) const {
  ElemId s1w = W_.mult_gen_left(1, w);
  if (W_.length(s1w) <= W_.length(w)) throw domain_error("phi: s1 is a descent of the input");
  bool else_branch = C_.certify_a_at_least(s1w, 5, 6);
  if (used_else) *used_else = else_branch;
  if (!else_branch) return s1w;
  return W_.mult_gen_left(0, lstar_seq(C_, "#*", w));
}

void Atlas::insert(const CellElement& ce) {
  auto [it, fresh] = index_.emplace(ce.element, ce);
  if (!fresh)
    throw domain_error("atlas collision: " + ce.str() + " vs " + it->second.str() + " at " +
                       W_.nf_string(ce.element));
  blocks_[ce.row][ce.col].elems.push_back(ce.element);
  // every atlas element must carry the descent sets its block demands
  if (W_.right_descent_mask(ce.element) != kLabels[ce.row].rset ||
      W_.left_descent_mask(ce.element) != kLabels[ce.col].rset)
    throw domain_error("descent-set mismatch for " + ce.str() + " = " +
                       W_.nf_string(ce.element));
}

void Atlas::build() {
  // resolve the nested-star reading with the z_{2,1} probe: the accepted
  // reading must give a tau-fixed involution of the right length living in
  // the Gamma_02 block
  auto probe = [&]() -> bool {
    try {
      ElemId z21 = build_family(Family::z, 2, 1);
      if (W_.length(z21) != 15) return false;
      if (W_.right_descent_mask(z21) != kLabels[G02].rset) return false;
      if (W_.left_descent_mask(z21) != kLabels[G02].rset) return false;
      if (W_.inverse(z21) != z21) return false;
      auto st = C_.left_star(z21, 2, 3);
      return st && *st == z21;
    } catch (const std::exception&) {
      return false;
    }
  };
  g_nearest_first = true;
  if (!probe()) {
    g_nearest_first = false;
    if (!probe())
      throw domain_error("neither nested-star reading validates z_{2,1}");
    convention_note_ = "nested stars read outermost-first";
  } else {
    convention_note_ = "nested stars read nearest-first";
  }

  auto emit_base = [&](int row, int col, const std::vector<Family>& fams, bool inverse,
                       bool phi_image) {
    for (Family f : fams) {
      const FamilyInfo& fi = family_info(f);
      auto emit = [&](int i, int k) -> bool {
        ElemId base = build_family(f, i, k);
        ElemId elem = base;
        std::string path;
        if (phi_image) {
          bool used_else = false;
          elem = phi_raw(base, &used_else);
          path = used_else ? "phi:else" : "phi:s1";
        }
        if (inverse) elem = W_.inverse(elem);
        if (W_.length(elem) > coverage_) return false;
        CellElement ce;
        ce.element = elem;
        ce.family = f;
        ce.i = i;
        ce.k = k;
        ce.inverse = inverse;
        ce.phi_image = phi_image;
        ce.row = row;
        ce.col = col;
        ce.base = elem;
        ce.path = path;
        ce.label = base_label(f, i, k);
        if (inverse) ce.label = dual_label(ce.label);
        insert(ce);
        return true;
      };
      if (fi.min_i >= 0) {
        for (int i = fi.min_i;; ++i) {
          if (W_.length(build_family(f, i, fi.min_k)) > coverage_) break;
          bool any = false;
          for (int k = fi.min_k;; ++k) {
            if (!emit(i, k)) break;
            any = true;
          }
          if (!any) break;
        }
      } else if (fi.min_k >= 0) {
        for (int k = fi.min_k;; ++k)
          if (!emit(0, k)) break;
      } else {
        emit(0, 0);
      }
    }
  };

  const std::vector<Family> fams33 = {Family::d02, Family::x, Family::y, Family::ydot,
                                      Family::z};
  const std::vector<Family> fams36 = {Family::s2x, Family::s3x, Family::s2y, Family::s2z,
                                      Family::s3z};
  const std::vector<Family> fams34 = {Family::xhat,  Family::xhatp,   Family::xtilde,
                                      Family::xtildep, Family::yhat,  Family::yhatp,
                                      Family::zhat,  Family::zhat_sl, Family::zhat_sr,
                                      Family::zhat_slr};
  const std::vector<Family> fams35 = {Family::xcheck,  Family::xcheckp,   Family::xbreve,
                                      Family::xbrevep, Family::ycheck,    Family::ycheckp,
                                      Family::zcheck,  Family::zcheck_sl, Family::zcheck_sr,
                                      Family::zcheck_slr};

  emit_base(G02, G02, fams33, false, false);
  emit_base(G02, G03, fams36, false, false);
  emit_base(G03, G02, fams36, true, false);
  emit_base(G03, G03, fams34, false, false);
  emit_base(G013, G013, fams35, false, false);
  emit_base(G02, G013, fams36, false, true);
  emit_base(G013, G02, fams36, true, true);
  emit_base(G03, G013, fams34, false, true);
  emit_base(G013, G03, fams34, true, true);

  // star bookkeeping of 3.3/3.4 on the base blocks
  auto expect = [&](ElemId a, ElemId b, const char* what) {
    if (a != b) throw domain_error(std::string("star bookkeeping failed: ") + what);
  };
  {
    ElemId d = build_family(Family::d02, 0, 0);
    ElemId x0 = build_family(Family::x, 0, 0);
    expect(*C_.right_star(d, 2, 3), x0, "x0 = d02^S");
    expect(*C_.left_star(d, 2, 3), x0, "x0 = ^S d02");
    for (int k = 1; k <= 3; ++k) {
      ElemId xk = build_family(Family::x, 0, k);
      expect(*C_.left_star(xk, 2, 3), xk, "^S x_k = x_k");
      ElemId yk = build_family(Family::y, 0, k);
      ElemId ydk = build_family(Family::ydot, 0, k);
      expect(*C_.left_star(yk, 2, 3), ydk, "ydot_k = ^S y_k");
      expect(*C_.right_star(yk, 2, 3), ydk, "ydot_k = y_k^S");
      ElemId zk = build_family(Family::z, 1, k);
      expect(*C_.left_star(zk, 2, 3), zk, "^S z = z");
      expect(W_.inverse(yk), yk, "y_k involution");
      expect(W_.inverse(xk), xk, "x_k involution");
    }
    // the closed check-family forms must agree with the phi-transport
    auto comp_phi = [&](ElemId w) { return phi_raw(W_.inverse(phi_raw(W_.inverse(w)))); };
    expect(comp_phi(build_family(Family::xhat, 0, 0)), build_family(Family::xcheck, 0, 0),
           "xcheck_0 = varphi(xhat_0)");
    expect(comp_phi(build_family(Family::xhat, 0, 1)), build_family(Family::xcheck, 0, 1),
           "xcheck_1 = varphi(xhat_1)");
    expect(comp_phi(build_family(Family::yhat, 0, 1)), build_family(Family::ycheck, 0, 1),
           "ycheck_1 = varphi(yhat_1)");
    expect(comp_phi(build_family(Family::zhat, 1, 1)), build_family(Family::zcheck, 1, 1),
           "zcheck_11 = varphi(zhat_11)");
    ElemId xh0 = build_family(Family::xhat, 0, 0);
    expect(W_.mult(W_.mult(W_.gen(2), d), W_.gen(2)), xh0, "xhat_0 = s2 d02 s2");
    for (int k = 1; k <= 2; ++k) {
      ElemId xh = build_family(Family::xhat, 0, k);
      ElemId xk = build_family(Family::x, 0, k);
      expect(W_.mult(W_.mult(W_.gen(2), xk), W_.gen(3)), xh, "xhat_k = s2 x_k s3");
      expect(*C_.right_star(xh, 2, 3), build_family(Family::xhatp, 0, k), "xhat'_k");
      expect(*C_.left_star(xh, 2, 3), build_family(Family::xtilde, 0, k), "xtilde_k");
      expect(*C_.right_star(*C_.left_star(xh, 2, 3), 2, 3),
             build_family(Family::xtildep, 0, k), "xtilde'_k");
      ElemId yh = build_family(Family::yhat, 0, k);
      expect(*C_.left_star(yh, 2, 3), build_family(Family::yhatp, 0, k), "yhat'_k left");
      expect(*C_.right_star(yh, 2, 3), build_family(Family::yhatp, 0, k), "yhat'_k right");
    }
  }

  // transport to the remaining blocks
  for (int r = 0; r < kNumCellLabels; ++r) {
    int br = base_row_of_class(kLabels[r].y_class);
    for (int c = 0; c < kNumCellLabels; ++c) {
      int bc = base_row_of_class(kLabels[c].y_class);
      if (r == br && c == bc) continue;  // base block already present
      const Block& src = blocks_[br][bc];
      std::string rpath(kTransportPath[r]);
      std::string cpath(kTransportPath[c]);
      for (ElemId e : src.elems) {
        const CellElement& bce = index_.at(e);
        ElemId w = e;
        for (char op : rpath) w = apply_op(w, op, /*left=*/false);
        for (char op : cpath) w = apply_op(w, op, /*left=*/true);
        CellElement ce = bce;
        ce.element = w;
        ce.row = r;
        ce.col = c;
        ce.base = e;
        std::string path;
        for (char op : rpath) path += std::string("R") + op;
        for (char op : cpath) path += std::string("L") + op;
        ce.path = path;
        insert(ce);
      }
    }
  }

  // every representative from the cell listing must be recognized in its row
  for (int r = 0; r < kNumCellLabels; ++r) {
    ElemId rep = W_.from_literal(kLabels[r].rep);
    auto it = index_.find(rep);
    if (it == index_.end())
      throw domain_error(std::string("representative of ") + kLabels[r].name +
                         " not in the atlas");
    if (it->second.row != r)
      throw domain_error(std::string("representative of ") + kLabels[r].name +
                         " recognized in row " + kLabels[it->second.row].name);
  }
}

std::optional<CellElement> Atlas::recognize(ElemId w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CellElement Atlas::make(Family f, int i, int k) const {
  ElemId e = build_family(f, i, k);
  auto it = index_.find(e);
  if (it != index_.end()) return it->second;
  const FamilyInfo& fi = family_info(f);
  CellElement ce;
  ce.element = e;
  ce.family = f;
  ce.i = i;
  ce.k = k;
  ce.row = fi.base_row;
  ce.col = fi.base_col;
  ce.base = e;
  ce.label = base_label(f, i, k);
  return ce;
}

CellElement Atlas::make_literal(const std::string& lit) const {
  std::string s = lit;
  bool star_l = false, star_r = false, inv = false;
  if (!s.empty() && s.front() == '*') {
    star_l = true;
    s.erase(s.begin());
  }
  if (!s.empty() && s.back() == '~') {
    inv = true;
    s.pop_back();
  }
  if (!s.empty() && s.back() == '*') {
    star_r = true;
    s.pop_back();
  }
  auto lb = s.find('[');
  std::string name = s.substr(0, lb);
  int i = 0, k = 0;
  bool two = false;
  if (lb != std::string::npos) {
    auto rb = s.find(']', lb);
    if (rb == std::string::npos) throw input_error("missing ] in family literal " + lit);
    std::string inside = s.substr(lb + 1, rb - lb - 1);
    auto comma = inside.find(',');
    if (comma == std::string::npos) {
      k = std::stoi(inside);
    } else {
      i = std::stoi(inside.substr(0, comma));
      k = std::stoi(inside.substr(comma + 1));
      two = true;
    }
  }
  static const std::unordered_map<std::string, Family> names = {
      {"d02", Family::d02},       {"x", Family::x},
      {"y", Family::y},           {"ydot", Family::ydot},
      {"z", Family::z},           {"s2x", Family::s2x},
      {"s3x", Family::s3x},       {"s2y", Family::s2y},
      {"s2z", Family::s2z},       {"s3z", Family::s3z},
      {"xhat", Family::xhat},     {"xhat'", Family::xhatp},
      {"xtilde", Family::xtilde}, {"xtilde'", Family::xtildep},
      {"yhat", Family::yhat},     {"yhat'", Family::yhatp},
      {"zhat", Family::zhat},     {"xcheck", Family::xcheck},
      {"xcheck'", Family::xcheckp}, {"xbreve", Family::xbreve},
      {"xbreve'", Family::xbrevep}, {"ycheck", Family::ycheck},
      {"ycheck'", Family::ycheckp}, {"zcheck", Family::zcheck},
  };
  auto it = names.find(name);
  if (it == names.end()) throw input_error("unknown family name in literal " + lit);
  Family f = it->second;
  if (star_l || star_r) {
    if (f == Family::zhat)
      f = star_l ? (star_r ? Family::zhat_slr : Family::zhat_sl)
                 : Family::zhat_sr;
    else if (f == Family::zcheck)
      f = star_l ? (star_r ? Family::zcheck_slr : Family::zcheck_sl)
                 : Family::zcheck_sr;
    else
      throw input_error("star variants exist only for zhat/zcheck literals: " + lit);
  }
  const FamilyInfo& fi = family_info(f);
  if (two != (fi.min_i >= 0)) throw input_error("wrong index arity in literal " + lit);
  CellElement ce = make(f, i, k);
  if (inv) {
    ElemId w = W_.inverse(ce.element);
    auto found = index_.find(w);
    if (found != index_.end()) return found->second;
    CellElement r = ce;
    r.element = w;
    r.inverse = !ce.inverse;
    std::swap(r.row, r.col);
    r.label = dual_label(ce.label);
    return r;
  }
  return ce;
}

std::vector<CellElement> Atlas::enumerate(int row, int col, int max_index) const {
  std::vector<CellElement> out;
  for (ElemId e : blocks_[row][col].elems) {
    const CellElement& ce = index_.at(e);
    if (ce.k > max_index || ce.i > max_index) continue;
    out.push_back(ce);
  }
  std::sort(out.begin(), out.end(), [this](const CellElement& a, const CellElement& b) {
    return W_.canonical_less(a.element, b.element);
  });
  return out;
}

const std::vector<ElemId>& Atlas::block_elements(int row, int col) const {
  return blocks_[row][col].elems;
}

std::vector<ElemId> Atlas::row_elements(int row) const {
  std::vector<ElemId> out;
  for (int c = 0; c < kNumCellLabels; ++c)
    out.insert(out.end(), blocks_[row][c].elems.begin(), blocks_[row][c].elems.end());
  return out;
}

ElemId Atlas::phi(ElemId w) const {
  auto ce = recognize(w);
  if (!ce || ce->col != G03) throw domain_error("phi: input not in a Gamma_03 column");
  ElemId s1w = W_.mult_gen_left(1, w);
  if (auto r = recognize(s1w); r && r->col == G013) return s1w;
  // the else branch needs s1w certified outside the cell
  if (!C_.certify_a_at_least(s1w, 5, 8) && W_.length(s1w) <= coverage_ && contains(s1w))
    throw domain_error("phi: undecidable branch at " + W_.nf_string(w));
  ElemId alt = W_.mult_gen_left(0, lstar_seq(C_, "#*", w));
  auto r = recognize(alt);
  if (!r || r->col != G013) throw domain_error("phi: undecidable branch at " + W_.nf_string(w));
  return alt;
}

ElemId Atlas::psi(ElemId z) const {
  auto ce = recognize(z);
  if (!ce || ce->col != G013) throw domain_error("psi: input not in a Gamma_013 column");
  ElemId s1z = W_.mult_gen_left(1, z);
  if (auto r = recognize(s1z); r && r->col == G03) return s1z;
  ElemId alt = lstar_seq(C_, "*#", W_.mult_gen_left(0, z));
  auto r = recognize(alt);
  if (!r || r->col != G03) throw domain_error("psi: undecidable branch at " + W_.nf_string(z));
  return alt;
}

ElemId Atlas::phi_prime(ElemId w) const {
  auto ce = recognize(w);
  if (!ce || ce->row != G03) throw domain_error("phi': input not in a Gamma_03 row");
  return W_.inverse(phi(W_.inverse(w)));
}

ElemId Atlas::varphi(ElemId w) const {
  auto ce = recognize(w);
  if (!ce || ce->row != G03 || ce->col != G03)
    throw domain_error("varphi: input not in the Gamma_03 block");
  ElemId a = phi(phi_prime(w));
  ElemId b = phi_prime(phi(w));
  if (a != b) throw domain_error("varphi: phi o phi' != phi' o phi at " + W_.nf_string(w));
  return a;
}

CellElement Atlas::join_transport(const CellElement& x, int row, int col) const {
  ElemId w = x.element;
  // undo the element's own position (ops are involutions except tau, which
  // is too), then apply the target paths
  std::string rsrc = kTransportPath[x.row];
  std::string csrc = kTransportPath[x.col];
  for (auto it = csrc.rbegin(); it != csrc.rend(); ++it) w = apply_op(w, *it, true);
  for (auto it = rsrc.rbegin(); it != rsrc.rend(); ++it) w = apply_op(w, *it, false);
  // w is now in the base block of x's class pair; sanity: must match base
  if (kLabels[row].y_class != kLabels[x.row].y_class ||
      kLabels[col].y_class != kLabels[x.col].y_class)
    throw domain_error("join_transport: no path between different Y-classes");
  for (char op : std::string(kTransportPath[row])) w = apply_op(w, op, false);
  for (char op : std::string(kTransportPath[col])) w = apply_op(w, op, true);
  auto it = index_.find(w);
  if (it != index_.end()) return it->second;
  CellElement ce = x;
  ce.element = w;
  ce.row = row;
  ce.col = col;
  return ce;
}

}  // namespace cellring
