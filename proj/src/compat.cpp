// riafold -- covariance pair scoring and compatibility masks.
#include "riafold/compat.hpp"

#include <algorithm>
#include <string>

namespace riafold {

namespace {

int pt_from_codes(int a, int b) {
  if (a == BASE_A && b == BASE_U) return PT_AU;
  if (a == BASE_U && b == BASE_A) return PT_UA;
  if (a == BASE_G && b == BASE_C) return PT_GC;
  if (a == BASE_C && b == BASE_G) return PT_CG;
  if (a == BASE_G && b == BASE_U) return PT_GU;
  if (a == BASE_U && b == BASE_G) return PT_UG;
  return -1;
}

void clear_r_interior(CompatibilityMasks& masks, int i) {
  for (int k = 1; k <= masks.n; ++k) {
    masks.interior_r[static_cast<size_t>(i)][static_cast<size_t>(k)] = 0;
    masks.interior_r[static_cast<size_t>(k)][static_cast<size_t>(i)] = 0;
  }
}

void clear_s_interior(CompatibilityMasks& masks, int h) {
  for (int k = 1; k <= masks.m_len; ++k) {
    masks.interior_s[static_cast<size_t>(h)][static_cast<size_t>(k)] = 0;
    masks.interior_s[static_cast<size_t>(k)][static_cast<size_t>(h)] = 0;
  }
}

void clear_r_exterior(CompatibilityMasks& masks, int i) {
  for (int h = 1; h <= masks.m_len; ++h)
    masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)] = 0;
}

void clear_s_exterior(CompatibilityMasks& masks, int h) {
  for (int i = 1; i <= masks.n; ++i)
    masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)] = 0;
}

}  // namespace

CompatibilityMasks CompatibilityMasks::none(int n, int m_len) {
  CompatibilityMasks masks;
  masks.n = n;
  masks.m_len = m_len;
  masks.interior_r.assign(static_cast<size_t>(n) + 1, VB(static_cast<size_t>(n) + 1, 0));
  masks.interior_s.assign(static_cast<size_t>(m_len) + 1, VB(static_cast<size_t>(m_len) + 1, 0));
  masks.exterior.assign(static_cast<size_t>(n) + 1, VB(static_cast<size_t>(m_len) + 1, 0));
  masks.r_must_pair.assign(static_cast<size_t>(n) + 1, 0);
  masks.s_must_pair.assign(static_cast<size_t>(m_len) + 1, 0);
  return masks;
}

CompatibilityMasks CompatibilityMasks::all(int n, int m_len, int min_hairpin) {
  CompatibilityMasks masks = none(n, m_len);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (j - i > min_hairpin) masks.interior_r[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
  for (int i = 1; i <= m_len; ++i)
    for (int j = i + 1; j <= m_len; ++j)
      if (j - i > min_hairpin) masks.interior_s[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
  for (int i = 1; i <= n; ++i)
    for (int h = 1; h <= m_len; ++h)
      masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)] = 1;
  return masks;
}

PairScore pair_score(const PairedAlignment& pa, Side side, int i, int j, const FoldParams& p) {
  const int n = pa.n(), m_len = pa.m_len();
  const auto& xs = (side == Side::S) ? pa.smatrix : pa.rmatrix;
  const auto& ys = (side == Side::R) ? pa.rmatrix : pa.smatrix;
  const int xmax = (side == Side::S) ? m_len : n;
  const int ymax = (side == Side::R) ? n : m_len;
  if (i < 1 || i > xmax || j < 1 || j > ymax)
    throw BoundsError("pair_score: column (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") outside the alignment");
  if (side != Side::Ext && i == j)
    throw BoundsError("pair_score: a column cannot pair with itself");
  if (pa.m == 0) throw BoundsError("pair_score: alignment has no rows");

  // Joint frequencies over the 16 non-gap pair types.
  double f[4][4] = {};
  double consistent = 0;  // admissible-pair rows plus gap-gap rows
  for (int h = 0; h < pa.m; ++h) {
    int a = base_code(xs[static_cast<size_t>(h)][static_cast<size_t>(i - 1)]);
    int b = base_code(ys[static_cast<size_t>(h)][static_cast<size_t>(j - 1)]);
    if (a == BASE_GAP && b == BASE_GAP) {
      consistent += 1;
      continue;
    }
    if (a == BASE_GAP || b == BASE_GAP) continue;
    f[a][b] += 1;
    if (pt_from_codes(a, b) >= 0) consistent += 1;
  }
  const double inv_m = 1.0 / pa.m;
  for (auto& row : f)
    for (double& v : row) v *= inv_m;

  PairScore sc;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (f[a][b] == 0 || pt_from_codes(a, b) < 0) continue;
      for (int a2 = 0; a2 < 4; ++a2)
        for (int b2 = 0; b2 < 4; ++b2) {
          if (f[a2][b2] == 0 || pt_from_codes(a2, b2) < 0) continue;
          int d = (a != a2 ? 1 : 0) + (b != b2 ? 1 : 0);
          sc.c += f[a][b] * d * f[a2][b2];
        }
    }
  sc.q = 1.0 - inv_m * consistent;
  sc.b = sc.c - p.phi1 * sc.q;
  return sc;
}

CompatibilityMasks score_masks(const PairedAlignment& pa, const FoldParams& p) {
  CompatibilityMasks masks = CompatibilityMasks::none(pa.n(), pa.m_len());
  for (int i = 1; i <= masks.n; ++i)
    for (int j = i + 1; j <= masks.n; ++j) {
      if (j - i <= p.min_hairpin) continue;
      if (pair_score(pa, Side::R, i, j, p).b >= p.bstar_r)
        masks.interior_r[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
    }
  for (int i = 1; i <= masks.m_len; ++i)
    for (int j = i + 1; j <= masks.m_len; ++j) {
      if (j - i <= p.min_hairpin) continue;
      if (pair_score(pa, Side::S, i, j, p).b >= p.bstar_s)
        masks.interior_s[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
    }
  for (int i = 1; i <= masks.n; ++i)
    for (int h = 1; h <= masks.m_len; ++h)
      if (pair_score(pa, Side::Ext, i, h, p).b >= p.bstar_ext)
        masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)] = 1;
  return masks;
}

void apply_constraints(CompatibilityMasks& masks, const ConstraintSet& cs, int min_hairpin) {
  if (static_cast<int>(cs.r_sym.size()) != masks.n ||
      static_cast<int>(cs.s_sym.size()) != masks.m_len)
    throw ConstraintError("constraint lines have lengths " + std::to_string(cs.r_sym.size()) +
                          "/" + std::to_string(cs.s_sym.size()) + ", alignment has " +
                          std::to_string(masks.n) + "/" + std::to_string(masks.m_len));

  // Symbol clearing.
  for (int i = 1; i <= masks.n; ++i) {
    char c = cs.r_sym[static_cast<size_t>(i - 1)];
    if (c == 'x') { clear_r_interior(masks, i); clear_r_exterior(masks, i); }
    else if (c == '-') clear_r_exterior(masks, i);
    else if (c == '^') clear_r_interior(masks, i);
  }
  for (int h = 1; h <= masks.m_len; ++h) {
    char c = cs.s_sym[static_cast<size_t>(h - 1)];
    if (c == 'x') { clear_s_interior(masks, h); clear_s_exterior(masks, h); }
    else if (c == '-') clear_s_exterior(masks, h);
    else if (c == '^') clear_s_interior(masks, h);
  }

  // No position may belong to two forced pairs.
  VI r_uses(static_cast<size_t>(masks.n) + 1, 0), s_uses(static_cast<size_t>(masks.m_len) + 1, 0);
  auto use_r = [&](int i) {
    if (i < 1 || i > masks.n)
      throw ConstraintError("forced pair endpoint R" + std::to_string(i) + " out of range");
    if (++r_uses[static_cast<size_t>(i)] > 1)
      throw ConstraintError("position R" + std::to_string(i) + " appears in two forced pairs");
  };
  auto use_s = [&](int h) {
    if (h < 1 || h > masks.m_len)
      throw ConstraintError("forced pair endpoint S" + std::to_string(h) + " out of range");
    if (++s_uses[static_cast<size_t>(h)] > 1)
      throw ConstraintError("position S" + std::to_string(h) + " appears in two forced pairs");
  };
  for (auto [i, j] : cs.forced_r) { use_r(i); use_r(j); }
  for (auto [i, j] : cs.forced_s) { use_s(i); use_s(j); }
  for (auto [i, h] : cs.forced_ext) { use_r(i); use_s(h); }

  // Contradiction checks against the symbol-cleared, pre-forcing mask.
  auto check_interior = [&](const std::vector<std::pair<int, int>>& pairs, const std::string& sym,
                            const VVB& mask, const char* strand) {
    for (auto [i, j] : pairs) {
      char ci = sym[static_cast<size_t>(i - 1)], cj = sym[static_cast<size_t>(j - 1)];
      std::string tag = std::string(strand) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (ci == 'x' || cj == 'x')
        throw ConstraintError("forced pair " + tag + " has an endpoint constrained unpaired");
      if (ci == '^' || cj == '^')
        throw ConstraintError("forced pair " + tag + " has an endpoint excluded from interior pairing");
      if (j - i <= min_hairpin)
        throw ConstraintError("forced pair " + tag + " violates the minimal hairpin span");
      if (!mask[static_cast<size_t>(i)][static_cast<size_t>(j)])
        throw ConstraintError("forced pair " + tag + " fails its own score threshold");
    }
    for (size_t a = 0; a < pairs.size(); ++a)
      for (size_t b = a + 1; b < pairs.size(); ++b) {
        auto [i, j] = pairs[a];
        auto [k, l] = pairs[b];
        if (i > k) { std::swap(i, k); std::swap(j, l); }
        if (k < j && j < l)
          throw ConstraintError(std::string("forced interior pairs cross on ") + strand);
      }
  };
  check_interior(cs.forced_r, cs.r_sym, masks.interior_r, "R");
  check_interior(cs.forced_s, cs.s_sym, masks.interior_s, "S");
  {
    auto ext = cs.forced_ext;
    for (auto [i, h] : ext) {
      std::string tag = "Ext(" + std::to_string(i) + "," + std::to_string(h) + ")";
      char ci = cs.r_sym[static_cast<size_t>(i - 1)], ch = cs.s_sym[static_cast<size_t>(h - 1)];
      if (ci == 'x' || ch == 'x')
        throw ConstraintError("forced pair " + tag + " has an endpoint constrained unpaired");
      if (ci == '-' || ch == '-')
        throw ConstraintError("forced pair " + tag + " has an endpoint excluded from exterior pairing");
      if (!masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)])
        throw ConstraintError("forced pair " + tag + " fails its own score threshold");
    }
    std::sort(ext.begin(), ext.end());
    for (size_t k = 1; k < ext.size(); ++k)
      if (ext[k].second <= ext[k - 1].second)
        throw ConstraintError("forced exterior pairs cross");
  }

  // Forced pairs: keep the forced entry, drop every alternative of both endpoints.
  for (auto [i, j] : cs.forced_r) {
    clear_r_interior(masks, i); clear_r_exterior(masks, i);
    clear_r_interior(masks, j); clear_r_exterior(masks, j);
    masks.interior_r[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
  }
  for (auto [i, j] : cs.forced_s) {
    clear_s_interior(masks, i); clear_s_exterior(masks, i);
    clear_s_interior(masks, j); clear_s_exterior(masks, j);
    masks.interior_s[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
  }
  for (auto [i, h] : cs.forced_ext) {
    clear_r_interior(masks, i); clear_r_exterior(masks, i);
    clear_s_interior(masks, h); clear_s_exterior(masks, h);
    masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)] = 1;
  }

  // Must-pair positions: '*' symbols and every forced-pair endpoint.
  for (int i = 1; i <= masks.n; ++i)
    if (cs.r_sym[static_cast<size_t>(i - 1)] == '*') masks.r_must_pair[static_cast<size_t>(i)] = 1;
  for (int h = 1; h <= masks.m_len; ++h)
    if (cs.s_sym[static_cast<size_t>(h - 1)] == '*') masks.s_must_pair[static_cast<size_t>(h)] = 1;
  for (auto [i, j] : cs.forced_r) {
    masks.r_must_pair[static_cast<size_t>(i)] = 1;
    masks.r_must_pair[static_cast<size_t>(j)] = 1;
  }
  for (auto [i, j] : cs.forced_s) {
    masks.s_must_pair[static_cast<size_t>(i)] = 1;
    masks.s_must_pair[static_cast<size_t>(j)] = 1;
  }
  for (auto [i, h] : cs.forced_ext) {
    masks.r_must_pair[static_cast<size_t>(i)] = 1;
    masks.s_must_pair[static_cast<size_t>(h)] = 1;
  }
}

CompatibilityMasks build_masks(const PairedAlignment& pa, const FoldParams& p,
                               const ConstraintSet& cs) {
  CompatibilityMasks masks = score_masks(pa, p);
  apply_constraints(masks, cs, p.min_hairpin);
  return masks;
}

}  // namespace riafold
