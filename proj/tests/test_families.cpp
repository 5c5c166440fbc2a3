#include "doctest.h"

#include <set>

#include "cellring/families.hpp"

using namespace cellring;

namespace {

struct Ctx {
  Weyl W;
  Hecke H{W};
  Cells C{H};
  Atlas A{C, 40};
};

Ctx& ctx() {
  static Ctx c;
  return c;
}

}  // namespace

TEST_CASE("base family examples") {
  auto& X = ctx();
  CellElement d = X.A.make(Family::d02, 0, 0);
  CHECK(X.W.length(d.element) == 8);
  CHECK(X.W.is_involution(d.element));
  CHECK(X.W.mult(d.element, d.element) == X.W.identity());

  // y_0 closed form gives d_02 back
  ElemId y0 = X.W.from_literal("20323202");
  CHECK(d.element == y0);

  CellElement y1 = X.A.make(Family::y, 0, 1);
  CHECK(X.W.length(y1.element) == 13);
  CellElement x1 = X.A.make(Family::x, 0, 1);
  CHECK(X.W.length(x1.element) == 8);

  // zhat_{1,1} = s2 z_{1,1} s3 = xhat_1 (12321T)
  CellElement zh = X.A.make(Family::zhat, 1, 1);
  CellElement z11 = X.A.make(Family::z, 1, 1);
  CHECK(zh.element ==
        X.W.mult(X.W.mult(X.W.gen(2), z11.element), X.W.gen(3)));
  CHECK_THROWS_AS(X.A.make(Family::z, 0, 1), input_error);
}

TEST_CASE("recognize round trips") {
  auto& X = ctx();
  CHECK(X.A.recognize(X.A.make(Family::x, 0, 2).element)->family == Family::x);
  CHECK(X.A.recognize(X.A.make(Family::x, 0, 2).element)->k == 2);
  // s2 s0 s2 is not in the cell
  CHECK_FALSE(X.A.recognize(X.W.from_literal("202")).has_value());
  // recognize(d02 * (12321T)) = y_1
  ElemId w = X.W.mult(X.W.from_literal("20323202"), X.W.from_literal("12321T"));
  auto r = X.A.recognize(w);
  REQUIRE(r.has_value());
  CHECK(r->family == Family::y);
  CHECK(r->k == 1);
}

TEST_CASE("block enumerations") {
  auto& X = ctx();
  int g02 = cell_label_index("G02");
  int g03 = cell_label_index("G03");
  auto b33 = X.A.enumerate(g02, g02, 1);
  // {d02, x0, x1, y1, ydot1, z11}
  CHECK(b33.size() == 6);
  std::set<ElemId> distinct;
  for (const auto& ce : b33) CHECK(distinct.insert(ce.element).second);

  auto b34 = X.A.enumerate(g03, g03, 0);
  // k = 0 members: xhat_0 and xtilde_0 only
  CHECK(b34.size() == 2);

  for (const auto& ce : X.A.enumerate(g02, g03, 2)) {
    CHECK(X.W.right_descent_mask(ce.element) == 0b0101);
    CHECK(X.W.left_descent_mask(ce.element) == 0b1001);
  }
}

TEST_CASE("star bookkeeping through the cells layer") {
  auto& X = ctx();
  ElemId d02 = X.A.make(Family::d02, 0, 0).element;
  ElemId x0 = X.A.make(Family::x, 0, 0).element;
  CHECK(*X.C.right_star(d02, 2, 3) == x0);
  // right_string(x_0, {s2,s3}) places x_0 as the star image of d_02
  auto sp = X.C.right_string(x0, 2, 3);
  REQUIRE(sp.has_value());
  CHECK(sp->members[sp->m - sp->index - 1] == d02);
}

TEST_CASE("left string of s2 over the identity") {
  auto& X = ctx();
  auto sp = X.C.left_string(X.W.gen(2), 2, 3);
  REQUIRE(sp.has_value());
  CHECK(sp->m == 4);
  CHECK(sp->index == 1);
  REQUIRE(sp->members.size() == 3);
  CHECK(sp->members[0] == X.W.gen(2));
  CHECK(sp->members[1] == X.W.from_literal("32"));
  CHECK(sp->members[2] == X.W.from_literal("232"));
  // the longest element of the parabolic is in no string
  CHECK_FALSE(X.C.left_string(X.W.from_literal("2323"), 2, 3).has_value());
}

TEST_CASE("phi and psi") {
  auto& X = ctx();
  int g03 = cell_label_index("G03");
  for (const auto& ce : X.A.enumerate(g03, g03, 2)) {
    ElemId img = X.A.phi(ce.element);
    auto r = X.A.recognize(img);
    REQUIRE(r.has_value());
    CHECK(r->col == cell_label_index("G013"));
    CHECK(r->row == g03);
    CHECK(X.A.psi(img) == ce.element);
  }
  std::set<ElemId> images;
  for (const auto& ce : X.A.enumerate(g03, g03, 2))
    CHECK(images.insert(X.A.phi(ce.element)).second);
  // varphi(xhat_0) = xcheck_0
  ElemId xh0 = X.A.make(Family::xhat, 0, 0).element;
  ElemId xc0 = X.A.make(Family::xcheck, 0, 0).element;
  CHECK(X.A.varphi(xh0) == xc0);
}

TEST_CASE("join transport") {
  auto& X = ctx();
  int g02 = cell_label_index("G02"), g01 = cell_label_index("G01");
  CellElement d = *X.A.recognize(X.A.make(Family::d02, 0, 0).element);
  CellElement t = X.A.join_transport(d, g01, g01);
  CHECK(t.row == g01);
  CHECK(t.col == g01);
  CHECK(X.W.right_descent_mask(t.element) == cell_labels()[g01].rset);
  CellElement back = X.A.join_transport(t, g02, g02);
  CHECK(back.element == d.element);
  CHECK_THROWS_AS(X.A.join_transport(d, cell_label_index("G03"), g02), domain_error);
}

TEST_CASE("family literals") {
  auto& X = ctx();
  CHECK(X.A.make_literal("y[2]").element == X.A.make(Family::y, 0, 2).element);
  CHECK(X.A.make_literal("zhat[1,2]").element == X.A.make(Family::zhat, 1, 2).element);
  CHECK(X.A.make_literal("s2x[3]").element == X.A.make(Family::s2x, 0, 3).element);
  CHECK(X.A.make_literal("xcheck'[1]").element == X.A.make(Family::xcheckp, 0, 1).element);
  CHECK(X.A.make_literal("*zhat[1,2]*").element == X.A.make(Family::zhat_slr, 1, 2).element);
  CellElement inv = X.A.make_literal("s2x[1]~");
  CHECK(inv.element == X.W.inverse(X.A.make(Family::s2x, 0, 1).element));
  CHECK_THROWS_AS(X.A.make_literal("foo[1]"), input_error);
  CHECK_THROWS_AS(X.A.make_literal("*x[1]"), input_error);
}

TEST_CASE("distinguished involutions") {
  auto& X = ctx();
  ElemId d02 = X.A.make(Family::d02, 0, 0).element;
  ElemId xh0 = X.A.make(Family::xhat, 0, 0).element;
  CHECK(X.C.is_distinguished(X.W.identity(), 0));
  CHECK(X.C.is_distinguished(d02, 4));
  CHECK(X.C.is_distinguished(xh0, 4));
  CHECK(X.C.delta(d02) == 2);
  CHECK_FALSE(X.C.is_distinguished(X.A.make(Family::x, 0, 0).element, 4));
}

TEST_CASE("a-value certificates") {
  auto& X = ctx();
  AValueCertificate c0 = X.C.a_lower_bound(X.W.identity(), 2);
  CHECK(c0.lower_bound >= 0);
  AValueCertificate c1 = X.C.a_lower_bound(X.W.from_literal("2323"), 6);
  CHECK(c1.lower_bound >= 4);
  // longest element of the {1,2,3} parabolic by greedy ascent
  ElemId w123 = X.W.identity();
  for (bool grew = true; grew;) {
    grew = false;
    for (int s : {1, 2, 3}) {
      ElemId nx = X.W.mult_gen_left(s, w123);
      if (X.W.length(nx) > X.W.length(w123)) {
        w123 = nx;
        grew = true;
      }
    }
  }
  CHECK(X.W.length(w123) == 9);
  AValueCertificate c2 = X.C.a_lower_bound(w123, 12);
  CHECK(c2.lower_bound >= 9);
  // an element with the parabolic factor in the middle is still certified
  ElemId mid = X.W.mult(X.W.mult(X.W.gen(0), w123), X.W.gen(0));
  AValueCertificate c3 = X.C.a_lower_bound(mid, 12);
  CHECK(c3.lower_bound >= 5);
}
