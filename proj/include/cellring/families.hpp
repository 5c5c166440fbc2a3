#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cellring/cells.hpp"
#include "cellring/repk.hpp"

namespace cellring {

// Parameterized element families of the a=4 two-sided cell, one tag per
// closed form.  The first two groups are the base blocks; primed / starred
// variants carry their own tags.
enum class Family : uint8_t {
  d02, x, y, ydot, z,                              // Gamma_02 cap Gamma_02^-1
  s2x, s3x, s2y, s2z, s3z,                         // Gamma_02 cap Gamma_03^-1
  xhat, xhatp, xtilde, xtildep, yhat, yhatp,       // Gamma_03 cap Gamma_03^-1
  zhat, zhat_sl, zhat_sr, zhat_slr,
  xcheck, xcheckp, xbreve, xbrevep, ycheck, ycheckp,  // Gamma_013 block
  zcheck, zcheck_sl, zcheck_sr, zcheck_slr,
};

const char* family_name(Family f);

// A group element recognized as a (possibly transported) member of a named
// family.  `base` is the corresponding element of the base block the
// transport path starts from; the pi label is inherited along transport.
struct CellElement {
  ElemId element = kNoElem;
  Family family = Family::d02;
  int i = 0;  // first index (z-type families), otherwise 0
  int k = 0;  // second index
  bool inverse = false;  // member of a transposed block
  bool phi_image = false;  // member of a phi-transported block (3.7/3.8)
  int row = -1;  // left-cell label index 0..17
  int col = -1;  // right-cell label index (cell of the inverse)
  ElemId base = kNoElem;
  std::string path;  // transport ops from the base block, ""=base
  BundleLabel label;
  std::string str() const;
};

struct CellLabelInfo {
  const char* name;   // "G02", "G13p", ...
  const char* rep;    // representative word from the cell listing
  uint8_t rset;       // descent bitmask the label's subscripts encode
  int y_class;        // 1, 2 or 3
};

inline constexpr int kNumCellLabels = 18;
const std::array<CellLabelInfo, kNumCellLabels>& cell_labels();
int cell_label_index(const std::string& name);

// The full 18x18 grid of intersections Gamma_row cap Gamma_col^-1 up to a
// length coverage bound, built from the base-block closed forms and
// star/tau transport.  Read-only after construction.
class Atlas {
 public:
  Atlas(Cells& cells, unsigned coverage_length);

  Cells& cells() const { return C_; }
  Weyl& weyl() const { return W_; }
  unsigned coverage_length() const { return coverage_; }

  std::optional<CellElement> recognize(ElemId w) const;
  bool contains(ElemId w) const { return index_.count(w) > 0; }

  // base-block constructor; throws input_error for out-of-range params
  CellElement make(Family f, int i, int k) const;
  // "y[2]", "zhat[1,2]", "s2x[3]", "xcheck'[1]", "*zhat[1,2]*", "s2x[3]~"
  CellElement make_literal(const std::string& lit) const;

  std::vector<CellElement> enumerate(int row, int col, int max_index) const;
  const std::vector<ElemId>& block_elements(int row, int col) const;
  // all atlas elements in the given row (any column)
  std::vector<ElemId> row_elements(int row) const;

  BundleLabel pi(const CellElement& ce) const { return ce.label; }

  // 3.5 maps; inputs are checked against the atlas columns
  ElemId phi(ElemId w) const;        // column Gamma_03 -> Gamma_013
  ElemId psi(ElemId z) const;        // column Gamma_013 -> Gamma_03
  ElemId phi_prime(ElemId w) const;  // row version
  ElemId varphi(ElemId w) const;     // phi o phi' = phi' o phi

  // transport along the join diagram to another (row, col)
  CellElement join_transport(const CellElement& x, int row, int col) const;

  // star-convention resolution chosen during construction (diagnostics)
  const std::string& convention_note() const { return convention_note_; }

 private:
  struct Block {
    std::vector<ElemId> elems;
  };

  Cells& C_;
  Weyl& W_;
  unsigned coverage_;
  std::unordered_map<ElemId, CellElement> index_;
  std::array<std::array<Block, kNumCellLabels>, kNumCellLabels> blocks_;
  std::string convention_note_;

  void build();
  void insert(const CellElement& ce);
  ElemId apply_op(ElemId w, char op, bool left) const;
  ElemId build_family(Family f, int i, int k) const;  // base closed forms
  // branch decision for phi during construction
  ElemId phi_raw(ElemId w, bool* used_else = nullptr) const;
};

}  // namespace cellring
