#pragma once

#include <gmpxx.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "cellring/laurent.hpp"

namespace cellring {

// Generator tokens.  0..3 are the simple reflections s0..s3 of the affine
// Weyl group W' (type B~3, 2--3 bond of order 4), 4 is the length-zero
// element tau with tau s0 tau = s1, tau s2 tau = s2, tau s3 tau = s3.
inline constexpr int kTau = 4;
inline constexpr int kNumGens = 4;

using Word = std::vector<uint8_t>;  // tokens over {0,1,2,3,kTau}

Word parse_word(const std::string& literal);     // "23230", "T 2 0 3 2", "0 0 2"
std::string word_str(const Word& w, bool spaced = false);

// 4x4 matrix over Z acting on the root lattice Z{a0,a1,a2,a3}, row-major.
struct Mat4 {
  std::array<mpz_class, 16> m;
  static Mat4 identity();
  Mat4 operator*(const Mat4& o) const;
  bool operator==(const Mat4& o) const { return m == o.m; }
  void swap01();  // conjugate by the a0 <-> a1 permutation (the tau action)
  size_t hash() const;
};

using ElemId = uint32_t;
inline constexpr ElemId kNoElem = 0xffffffffu;

// Registry of canonical group elements.  An element is the pair
// (omega bit, core matrix of the W'-part); equality is equality of pairs.
// Elements are interned once and referenced by ElemId everywhere; lengths,
// descent sets and generator neighbours are cached per element.  All data
// is immutable after interning, so concurrent readers are safe; interning
// itself takes an exclusive lock.
class Weyl {
 public:
  Weyl();

  ElemId identity() const { return e_; }
  ElemId tau() const { return tau_; }
  ElemId gen(int s) const { return gens_[s]; }

  size_t size() const;  // number of interned elements

  bool omega(ElemId a) const;
  unsigned length(ElemId a) const;
  uint8_t left_descent_mask(ElemId a) const;   // bit s set iff s in L(a)
  uint8_t right_descent_mask(ElemId a) const;  // bit s set iff s in R(a)
  bool is_involution(ElemId a);

  ElemId mult(ElemId a, ElemId b);
  ElemId mult_gen_left(int s, ElemId a);   // s*a, s in {0..3, kTau}
  ElemId mult_gen_right(ElemId a, int s);  // a*s
  ElemId inverse(ElemId a);

  ElemId from_word(const Word& w);
  ElemId from_literal(const std::string& s) { return from_word(parse_word(s)); }
  Word shortlex_nf(ElemId a);  // leading kTau token iff omega set
  std::string nf_string(ElemId a);

  // Bruhat order; elements with different omega bits are incomparable.
  bool bruhat_leq(ElemId y, ElemId w);

  // All elements of length <= radius (both omega values), sorted by
  // (length, omega, ShortLex word).  Guarded by max_ball_radius.
  std::vector<ElemId> ball(unsigned radius);

  unsigned max_ball_radius() const { return max_ball_radius_; }
  void set_max_ball_radius(unsigned r) { max_ball_radius_ = r; }

  // Bruhat interval [e, w] within the same omega component, unsorted.
  const std::vector<ElemId>& interval(ElemId w);

  // Canonical comparison key (length, omega, NF) for deterministic output.
  bool canonical_less(ElemId a, ElemId b);

 private:
  struct Element {
    Mat4 core;
    Mat4 core_inv;
    uint16_t length;
    uint8_t omega;
    uint8_t ldesc_core;  // descents of the W'-part
    uint8_t rdesc_core;
    std::array<std::atomic<ElemId>, kNumGens> left_nb;
    std::array<std::atomic<ElemId>, kNumGens> right_nb;
    std::atomic<ElemId> tau_right{kNoElem};
    std::atomic<ElemId> inv{kNoElem};
    Element() {
      for (auto& x : left_nb) x.store(kNoElem, std::memory_order_relaxed);
      for (auto& x : right_nb) x.store(kNoElem, std::memory_order_relaxed);
    }
  };

  struct CoreKey {
    uint8_t omega;
    const Mat4* mat;
  };

  ElemId intern(uint8_t omega, Mat4 core);
  const Element& el(ElemId a) const { return elems_[a]; }
  static uint8_t descent_mask_from_columns(const Mat4& m);
  unsigned compute_length(const Mat4& core, const Mat4& core_inv) const;

  mutable std::shared_mutex mu_;
  std::deque<Element> elems_;
  std::unordered_map<uint64_t, std::vector<ElemId>> index_;  // hash -> candidates

  std::mutex bruhat_mu_;
  std::unordered_map<uint64_t, bool> bruhat_memo_;

  std::mutex interval_mu_;
  std::unordered_map<ElemId, std::vector<ElemId>> interval_memo_;

  std::mutex nf_mu_;
  std::unordered_map<ElemId, Word> nf_memo_;

  ElemId e_, tau_;
  std::array<ElemId, kNumGens> gens_;
  std::array<Mat4, kNumGens> gen_mats_;
  unsigned max_ball_radius_ = 26;
};

}  // namespace cellring
