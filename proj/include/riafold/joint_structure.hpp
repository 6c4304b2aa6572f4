// riafold -- joint interaction structures: validity, loops, notation.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "riafold/common.hpp"
#include "riafold/compat.hpp"

namespace riafold {

// A joint structure: interior arcs on each strand plus exterior arcs between
// them. All positions are 1-based; interior arcs are stored with i < j.
struct JointStructure {
  int n = 0;      // length of R
  int m_len = 0;  // length of S
  std::vector<std::pair<int, int>> arcs_r;
  std::vector<std::pair<int, int>> arcs_s;
  std::vector<std::pair<int, int>> ext;  // (R position, S position)

  void normalize();  // sorts arc lists and orients interior arcs i < j
  bool operator==(const JointStructure& o) const {
    return n == o.n && m_len == o.m_len && arcs_r == o.arcs_r && arcs_s == o.arcs_s &&
           ext == o.ext;
  }
};

enum class LoopKind { Hairpin, Stack, Interior, Bulge, Multi, Hybrid, Kissing, External };

// One face of the structure. For per-strand loops (closed by an interior arc)
// `strand` is 0 (R) or 1 (S) and the unpaired lists hold the loop positions
// that are not branch endpoints -- exterior-arc endpoints included, since the
// closing strand sees them as unpaired. For Hybrid loops, hybrid_arcs holds
// the exterior arcs in order and the unpaired lists the single-stranded
// positions between consecutive arcs.
struct Loop {
  LoopKind kind = LoopKind::External;
  int strand = -1;  // 0 = R, 1 = S, -1 = Hybrid/External
  std::pair<int, int> closing{0, 0};
  std::vector<std::pair<int, int>> branches;     // interior child arcs
  std::vector<int> unpaired_r;
  std::vector<int> unpaired_s;
  std::vector<std::pair<int, int>> hybrid_arcs;  // Hybrid loops only
  bool joint = false;  // the loop itself holds an exterior-arc endpoint (Kissing)
};

// Per-flag validity, each failed flag pointing at a first offending arc.
// For an unsatisfied must-pair position p the mask flag records (p, 0) on R
// or (0, p) on S.
struct ValidityReport {
  bool is_secondary = true;
  bool ext_noncrossing = true;
  bool zigzag_free = true;
  bool canonical_c1 = true;
  bool canonical_c2 = true;
  bool mask_compatible = true;
  std::pair<int, int> bad_secondary{0, 0};
  std::pair<int, int> bad_ext{0, 0};
  std::pair<int, int> bad_zigzag{0, 0};
  std::pair<int, int> bad_c1{0, 0};
  std::pair<int, int> bad_c2{0, 0};
  std::pair<int, int> bad_mask{0, 0};

  bool all() const {
    return is_secondary && ext_noncrossing && zigzag_free && canonical_c1 && canonical_c2 &&
           mask_compatible;
  }
  bool structural() const { return is_secondary && ext_noncrossing && zigzag_free; }
};

// A maximal exterior helix: boundary positions on both strands plus its arcs.
struct HybridSignature {
  int i = 0, j = 0;  // first/last R position
  int h = 0, l = 0;  // first/last S position
  std::vector<std::pair<int, int>> arcs;
};

ValidityReport validate(const JointStructure& js, const CompatibilityMasks& masks);

// Maximal exterior helices in strand order. Requires a structurally valid
// input (endpoint-disjoint arcs, noncrossing exterior arcs).
std::vector<HybridSignature> maximal_hybrids(const JointStructure& js);

// Splits a structurally valid joint structure into its loops: one per
// interior arc, one per maximal hybrid, one external loop. Throws
// InvalidStructure when arcs overlap or exterior arcs cross.
std::vector<Loop> decompose_loops(const JointStructure& js);

// Two-line bracket notation. R line: '.' unpaired, '()' interior, '[' an
// exterior endpoint; S line uses ']' for exterior endpoints, k-th '[' pairing
// with k-th ']'.
std::pair<std::string, std::string> to_notation(const JointStructure& js);
JointStructure from_notation(const std::string& r_line, const std::string& s_line);

}  // namespace riafold
