// riafold -- user structure constraints on the two strands.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "riafold/common.hpp"

namespace riafold {

// Per-position symbols after parsing: '.' free, 'x' unpaired, '-' never in an
// exterior pair, '^' never in an interior pair, '*' must pair. Bracket
// positions are resolved into the forced-pair lists and read '.' here.
struct ConstraintSet {
  std::string r_sym;
  std::string s_sym;
  std::vector<std::pair<int, int>> forced_r;    // 1-based (i, j), i < j, within R
  std::vector<std::pair<int, int>> forced_s;    // within S
  std::vector<std::pair<int, int>> forced_ext;  // (R position, S position)

  static ConstraintSet none(int n, int m_len);
};

// Parses one constraint line per strand. '(' / ')' force an interior pair
// within the strand; the k-th '[' of the R line forces an exterior pair with
// the k-th ']' of the S line. The unicode minus is accepted for '-'.
// Throws ConstraintError on illegal symbols, unbalanced brackets, or a
// '['/']' count mismatch.
ConstraintSet parse_constraints(const std::string& r_line, const std::string& s_line);

}  // namespace riafold
