#include "doctest.h"

#include <cstdio>
#include <random>

#include "cellring/hecke.hpp"

using namespace cellring;

namespace {

struct Ctx {
  Weyl W;
  Hecke H{W};
};

Ctx& ctx() {
  static Ctx c;
  return c;
}

LaurentPoly one_plus_q2() { return LaurentPoly(1) + LaurentPoly::q_power(2); }

}  // namespace

TEST_CASE("kl polynomials at d_02") {
  auto& [W, H] = ctx();
  ElemId d02 = W.from_literal("20323202");
  CHECK(H.kl_poly(d02, d02) == LaurentPoly(1));
  CHECK(H.kl_poly(W.identity(), d02) == one_plus_q2());
  CHECK(H.kl_poly(W.from_literal("202"), d02) == one_plus_q2());
  // tau-twisted pair
  ElemId td = W.mult_gen_left(kTau, d02);
  CHECK(H.kl_poly(W.tau(), td) == one_plus_q2());
  CHECK(H.kl_poly(W.identity(), td).is_zero());
}

TEST_CASE("mu values") {
  auto& [W, H] = ctx();
  CHECK(H.mu(W.identity(), W.gen(2)) == 1);
  ElemId d02 = W.from_literal("20323202");
  CHECK(H.mu(W.from_literal("202"), d02) == 1);
  for (ElemId y : W.ball(6))
    for (ElemId w : W.ball(4)) CHECK(H.mu_tilde(y, w) == H.mu_tilde(w, y));
}

TEST_CASE("basis conversions") {
  auto& [W, H] = ctx();
  HeckeElement ce = H.c_to_t(W.identity());
  CHECK(ce.support.size() == 1);
  CHECK(ce.coeff(W.identity()) == LaurentPoly(1));

  HeckeElement cs2 = H.c_to_t(W.gen(2));
  CHECK(cs2.support.size() == 2);
  CHECK(cs2.coeff(W.identity()) == LaurentPoly(1, -1));
  CHECK(cs2.coeff(W.gen(2)) == LaurentPoly(1, -1));

  ElemId d02 = W.from_literal("20323202");
  HeckeElement cd = H.c_to_t(d02);
  LaurentPoly expect = one_plus_q2();
  expect.shift(-8);
  CHECK(cd.coeff(W.identity()) == expect);

  for (ElemId w : W.ball(6)) {
    HeckeElement back = H.t_to_c(H.c_to_t(w));
    CHECK(back.support.size() == 1);
    CHECK(back.coeff(w) == LaurentPoly(1));
    HeckeElement back2 = H.t_to_c(H.c_to_ttilde(w));
    CHECK(back2.coeff(w) == LaurentPoly(1));
  }
}

TEST_CASE("cs_mult branches") {
  auto& [W, H] = ctx();
  HeckeElement cs2;
  cs2.basis = Basis::C;
  cs2.add(W.gen(2), LaurentPoly(1));

  HeckeElement sq = H.cs_mult(2, cs2, true);
  CHECK(sq.support.size() == 1);
  CHECK(sq.coeff(W.gen(2)) == LaurentPoly::xi());

  HeckeElement s32 = H.cs_mult(3, cs2, true);
  CHECK(s32.support.size() == 1);
  CHECK(s32.coeff(W.from_literal("32")) == LaurentPoly(1));

  HeckeElement t = H.cs_mult(kTau, cs2, true);
  CHECK(t.coeff(W.from_literal("T2")) == LaurentPoly(1));
}

TEST_CASE("ttilde generator relation") {
  auto& [W, H] = ctx();
  SupportMap f = H.ttilde_mult(W.gen(2), W.gen(2));
  CHECK(f.size() == 2);
  CHECK(f.at(W.identity()) == LaurentPoly(1));
  LaurentPoly vdiff = LaurentPoly(1, 1) + LaurentPoly(-1, -1);
  CHECK(f.at(W.gen(2)) == vdiff);
  SupportMap g = H.ttilde_mult(W.identity(), W.from_literal("23"));
  CHECK(g.size() == 1);
  CHECK(g.at(W.from_literal("23")) == LaurentPoly(1));
}

TEST_CASE("c_mult trivial cases") {
  auto& [W, H] = ctx();
  ElemId w = W.from_literal("2302");
  SupportMap t = H.c_mult(W.identity(), w);
  CHECK(t.size() == 1);
  CHECK(t.at(w) == LaurentPoly(1));

  SupportMap ss = H.c_mult(W.gen(2), W.gen(2));
  CHECK(ss.size() == 1);
  CHECK(ss.at(W.gen(2)) == LaurentPoly::xi());
}

TEST_CASE("c_mult agrees with the T-basis oracle") {
  auto& [W, H] = ctx();
  auto check_pair = [&](ElemId x, ElemId y) {
    SupportMap direct = H.c_mult(x, y);
    HeckeElement tx = H.c_to_ttilde(x);
    HeckeElement ty = H.c_to_ttilde(y);
    HeckeElement acc;
    acc.basis = Basis::Ttilde;
    for (const auto& [u, p] : tx.support)
      for (const auto& [v, q] : ty.support) {
        SupportMap uv = H.ttilde_mult(u, v);
        for (const auto& [z, r] : uv) acc.add(z, p * q * r);
      }
    HeckeElement back = H.t_to_c(acc);
    CHECK(back.support.size() == direct.size());
    for (const auto& [z, p] : direct) CHECK(back.coeff(z) == p);
  };
  std::mt19937_64 rng(3);
  std::vector<ElemId> b4 = W.ball(4);
  std::vector<ElemId> b6 = W.ball(6);
  for (int i = 0; i < 40; ++i)
    check_pair(b4[rng() % b4.size()], b4[rng() % b4.size()]);
  for (int i = 0; i < 20; ++i)
    check_pair(b6[rng() % b6.size()], b6[rng() % b6.size()]);
}

TEST_CASE("kl positivity sweep") {
  auto& [W, H] = ctx();
  // theorem guards run inside kl_poly; the sweep exercises them broadly
  for (ElemId w : W.ball(10))
    if (!W.omega(w) && W.length(w) >= 6)
      for (ElemId y : W.interval(w)) (void)H.kl_poly(y, w);
}

TEST_CASE("cache round trip and corruption handling") {
  auto& [W, H] = ctx();
  ElemId d02 = W.from_literal("20323202");
  (void)H.kl_poly(W.identity(), d02);
  std::string path = "klcache_test.txt";
  size_t saved = H.save_cache(path);
  CHECK(saved > 0);

  Weyl W2;
  Hecke H2(W2);
  size_t loaded = H2.load_cache(path);
  CHECK(loaded == saved);
  CHECK(H2.kl_poly(W2.identity(), W2.from_literal("20323202")) == one_plus_q2());

  {
    std::FILE* f = std::fopen(path.c_str(), "a");
    std::fputs("garbage line without pipes\n", f);
    std::fputs("0|20323202|0:notanumber,2:1\n", f);
    std::fclose(f);
  }
  Weyl W3;
  Hecke H3(W3);
  size_t loaded3 = H3.load_cache(path);
  CHECK(loaded3 == saved);
  std::remove(path.c_str());
}

TEST_CASE("resource guards") {
  auto& [W, H] = ctx();
  unsigned save = H.cmult_max_combined_length;
  H.cmult_max_combined_length = 4;
  CHECK_THROWS_AS((void)H.c_mult(W.from_literal("2323"), W.from_literal("2323")), resource_error);
  H.cmult_max_combined_length = save;
}
