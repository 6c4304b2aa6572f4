// riafold -- covariance pair scoring and compatibility masks.
#pragma once

#include "riafold/common.hpp"
#include "riafold/constraints.hpp"
#include "riafold/msa.hpp"
#include "riafold/params.hpp"

namespace riafold {

enum class Side { R, S, Ext };

struct PairScore {
  double c = 0;  // covariance term
  double q = 0;  // inconsistency fraction
  double b = 0;  // combined score c - phi1*q
};

// Boolean pairing masks, 1-based. interior_r[i][j] (i<j) allows an interior R
// arc, interior_s likewise on S, exterior[i][h] allows the exterior arc R_i:S_h.
// r_must_pair / s_must_pair mark positions every structure must pair somewhere.
struct CompatibilityMasks {
  int n = 0;
  int m_len = 0;
  VVB interior_r;  // (n+1) x (n+1); entries with i<j meaningful
  VVB interior_s;  // (m_len+1) x (m_len+1)
  VVB exterior;    // (n+1) x (m_len+1)
  VB r_must_pair;  // (n+1)
  VB s_must_pair;  // (m_len+1)

  static CompatibilityMasks none(int n, int m_len);  // all entries false
  // Everything allowed subject to the interior span rule; no must-pair marks.
  static CompatibilityMasks all(int n, int m_len, int min_hairpin = 0);
};

// Covariance score of pairing column i with column j (both from R, both from
// S, or R column i with S column h for Side::Ext). 1-based; BoundsError
// outside the alignment.
PairScore pair_score(const PairedAlignment& pa, Side side, int i, int j, const FoldParams& p);

// Mask from scores alone: b >= threshold per side, plus the interior
// min_hairpin span rule. No constraints applied, must-pair vectors empty.
CompatibilityMasks score_masks(const PairedAlignment& pa, const FoldParams& p);

// Applies a ConstraintSet to an existing mask in place: symbol clearing,
// forced-pair contradiction checks, forced-pair isolation, must-pair marks.
// min_hairpin is needed to validate forced interior pairs. Throws
// ConstraintError on length mismatch or contradictions.
void apply_constraints(CompatibilityMasks& masks, const ConstraintSet& cs, int min_hairpin);

// score_masks followed by apply_constraints.
CompatibilityMasks build_masks(const PairedAlignment& pa, const FoldParams& p,
                               const ConstraintSet& cs);

}  // namespace riafold
