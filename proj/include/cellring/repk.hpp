#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cellring/laurent.hpp"

namespace cellring {

// Irreducible rational representation of F = SL2 x O2:
// kind 0 = triv (x) V(m), kind 1 = eps (x) V(m), kind 2 = U(j) (x) V(m), j >= 1.
struct IrrF {
  uint8_t kind = 0;
  int j = 0;  // O2 highest weight, meaningful for kind 2 only
  int m = 0;  // SL2 highest weight
  auto operator<=>(const IrrF&) const = default;
};

// Nonnegative integer combination of Irr F.
struct RepElement {
  std::map<IrrF, long> combo;
  void add(const IrrF& r, long mult);
  bool operator==(const RepElement&) const = default;
  std::string str() const;
};

// Z-combination of eta^a (x) V(m), the representation ring of
// F0 = SL2 x C*.
struct RepF0Element {
  std::map<std::pair<int, int>, long> combo;  // (a, m) -> coefficient
  void add(int a, int m, long c);
  bool is_zero() const { return combo.empty(); }
  bool operator==(const RepF0Element&) const = default;
  RepF0Element operator+(const RepF0Element& o) const;
  RepF0Element operator*(const RepF0Element& o) const;  // eta-add + Clebsch-Gordan
  RepF0Element eta_dual() const;                        // eta^a -> eta^-a
  std::string str() const;
};

RepElement tensor_f(const RepElement& a, const RepElement& b);
RepF0Element restrict_f(const RepElement& a);
// inverse of restriction along induction; requires g-symmetry, errors otherwise
RepElement induce_f0(const RepF0Element& p);
RepElement dual_f(const RepElement& a);  // every Irr F is self-dual

// 2x2 matrix over R_F0 modelling K_F(Z x Z) for a free two-point Z/2-orbit.
struct KMat {
  RepF0Element e[2][2];
  static KMat identity();
  KMat operator*(const KMat& o) const;
  bool operator==(const KMat&) const = default;
  std::string str() const;
};

// Irreducible equivariant bundle label on Z x Z: diagonal or antidiagonal
// support with base entry eta^a (x) V(m) read at (1,1) resp. (1,2).
struct KBundle {
  bool anti = false;
  int a = 0;
  int m = 0;
  auto operator<=>(const KBundle&) const = default;
};
KMat kbundle_matrix(const KBundle& b);
// decomposition into irreducible labels; domain error off the equivariant locus
std::vector<std::pair<KBundle, long>> kmat_decompose(const KMat& M);

// One label of the block-typed bundle model:
//   scalar: honest Irr F (Y3 x Y3 blocks)
//   diag/anti: 2x2 blocks (Y1/Y2 pairs), base entry eta^a (x) V(m)
//   col: 2x1 blocks (Y3 row, Y1/Y2 column), top entry eta^a (x) V(m)
//   row: 1x2 blocks, first entry eta^a (x) V(m)
struct BundleLabel {
  enum Shape : uint8_t { scalar, diag, anti, col, row } shape = scalar;
  IrrF irr;      // scalar shape
  int a = 0;     // other shapes
  int m = 0;
  auto operator<=>(const BundleLabel&) const = default;
  std::string str() const;
};

BundleLabel dual_label(const BundleLabel& l);  // Theorem 3.2(b) on labels

using BundleElt = std::map<BundleLabel, long>;

bool shapes_composable(BundleLabel::Shape x, BundleLabel::Shape y);
// convolution product of two pure-shape bundle elements; throws domain_error
// on incompatible shapes or negative multiplicities in the result
BundleElt bundle_product(const BundleElt& x, const BundleElt& y);

std::string bundle_elt_str(const BundleElt& e);

}  // namespace cellring
