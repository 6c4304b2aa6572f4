// riafold -- joint structure validity, loop decomposition, notation.
#include "riafold/joint_structure.hpp"

#include <algorithm>
#include <set>

namespace riafold {

namespace {

// Per-position occupancy: 0 free, 1 interior endpoint, 2 exterior endpoint.
struct Occupancy {
  VI r, s;
  bool clash = false;
  std::pair<int, int> first_clash{0, 0};
};

Occupancy occupancy_of(const JointStructure& js) {
  Occupancy occ;
  occ.r.assign(static_cast<size_t>(js.n) + 1, 0);
  occ.s.assign(static_cast<size_t>(js.m_len) + 1, 0);
  auto mark = [&occ](VI& vec, int p, int role, std::pair<int, int> arc) {
    if (vec[static_cast<size_t>(p)] != 0) {
      if (!occ.clash) { occ.clash = true; occ.first_clash = arc; }
      return;
    }
    vec[static_cast<size_t>(p)] = role;
  };
  auto sorted_r = js.arcs_r;
  auto sorted_s = js.arcs_s;
  auto sorted_e = js.ext;
  std::sort(sorted_r.begin(), sorted_r.end());
  std::sort(sorted_s.begin(), sorted_s.end());
  std::sort(sorted_e.begin(), sorted_e.end());
  for (auto a : sorted_r) { mark(occ.r, a.first, 1, a); mark(occ.r, a.second, 1, a); }
  for (auto a : sorted_s) { mark(occ.s, a.first, 1, a); mark(occ.s, a.second, 1, a); }
  for (auto a : sorted_e) { mark(occ.r, a.first, 2, a); mark(occ.s, a.second, 2, a); }
  return occ;
}

bool in_bounds(const JointStructure& js) {
  for (auto a : js.arcs_r)
    if (a.first < 1 || a.second > js.n || a.first >= a.second) return false;
  for (auto a : js.arcs_s)
    if (a.first < 1 || a.second > js.m_len || a.first >= a.second) return false;
  for (auto a : js.ext)
    if (a.first < 1 || a.first > js.n || a.second < 1 || a.second > js.m_len) return false;
  return true;
}

// First arc that crosses an earlier one, or (0,0).
std::pair<int, int> first_crossing(std::vector<std::pair<int, int>> arcs) {
  std::sort(arcs.begin(), arcs.end(),
            [](auto a, auto b) { return a.first != b.first ? a.first < b.first : a.second > b.second; });
  std::vector<int> open;
  for (auto a : arcs) {
    while (!open.empty() && open.back() < a.first) open.pop_back();
    if (!open.empty() && a.second > open.back()) return a;
    open.push_back(a.second);
  }
  return {0, 0};
}

// Exterior-arc indices (in R-sorted order) with an endpoint strictly inside (lo, hi).
std::vector<int> es_set(const std::vector<std::pair<int, int>>& ext_sorted, bool r_side, int lo,
                        int hi) {
  std::vector<int> out;
  for (size_t k = 0; k < ext_sorted.size(); ++k) {
    int p = r_side ? ext_sorted[k].first : ext_sorted[k].second;
    if (lo < p && p < hi) out.push_back(static_cast<int>(k));
  }
  return out;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] == b[y]) return true;
    (a[x] < b[y]) ? ++x : ++y;
  }
  return false;
}

// Groups sorted exterior arcs into maximal runs with single-stranded gaps on
// both strands. occ must cover every arc of the structure.
std::vector<HybridSignature> group_hybrids(const std::vector<std::pair<int, int>>& ext_sorted,
                                           const Occupancy& occ) {
  std::vector<HybridSignature> out;
  for (size_t k = 0; k < ext_sorted.size();) {
    HybridSignature sig;
    sig.arcs.push_back(ext_sorted[k]);
    size_t t = k + 1;
    for (; t < ext_sorted.size(); ++t) {
      bool free_gap = true;
      for (int p = ext_sorted[t - 1].first + 1; p < ext_sorted[t].first && free_gap; ++p)
        if (occ.r[static_cast<size_t>(p)] != 0) free_gap = false;
      for (int p = ext_sorted[t - 1].second + 1; p < ext_sorted[t].second && free_gap; ++p)
        if (occ.s[static_cast<size_t>(p)] != 0) free_gap = false;
      if (!free_gap) break;
      sig.arcs.push_back(ext_sorted[t]);
    }
    sig.i = sig.arcs.front().first;
    sig.j = sig.arcs.back().first;
    sig.h = sig.arcs.front().second;
    sig.l = sig.arcs.back().second;
    out.push_back(std::move(sig));
    k = t;
  }
  return out;
}

}  // namespace

void JointStructure::normalize() {
  for (auto& a : arcs_r)
    if (a.first > a.second) std::swap(a.first, a.second);
  for (auto& a : arcs_s)
    if (a.first > a.second) std::swap(a.first, a.second);
  std::sort(arcs_r.begin(), arcs_r.end());
  std::sort(arcs_s.begin(), arcs_s.end());
  std::sort(ext.begin(), ext.end());
}

ValidityReport validate(const JointStructure& js, const CompatibilityMasks& masks) {
  if (masks.n != js.n || masks.m_len != js.m_len)
    throw BoundsError("validate: mask dimensions do not match the structure");
  ValidityReport rep;

  // Well-formed per-strand secondary structures with disjoint endpoints.
  for (auto a : js.arcs_r)
    if (a.first < 1 || a.second > js.n || a.first >= a.second) {
      rep.is_secondary = false;
      rep.bad_secondary = a;
      break;
    }
  if (rep.is_secondary)
    for (auto a : js.arcs_s)
      if (a.first < 1 || a.second > js.m_len || a.first >= a.second) {
        rep.is_secondary = false;
        rep.bad_secondary = a;
        break;
      }
  if (rep.is_secondary)
    for (auto a : js.ext)
      if (a.first < 1 || a.first > js.n || a.second < 1 || a.second > js.m_len) {
        rep.is_secondary = false;
        rep.bad_secondary = a;
        break;
      }
  if (!rep.is_secondary) return rep;

  Occupancy occ = occupancy_of(js);
  if (occ.clash) {
    rep.is_secondary = false;
    rep.bad_secondary = occ.first_clash;
    return rep;
  }
  if (auto bad = first_crossing(js.arcs_r); bad != std::pair<int, int>{0, 0}) {
    rep.is_secondary = false;
    rep.bad_secondary = bad;
  }
  if (rep.is_secondary)
    if (auto bad = first_crossing(js.arcs_s); bad != std::pair<int, int>{0, 0}) {
      rep.is_secondary = false;
      rep.bad_secondary = bad;
    }
  if (!rep.is_secondary) return rep;

  // Exterior arcs must be order-consistent on both strands.
  auto ext_sorted = js.ext;
  std::sort(ext_sorted.begin(), ext_sorted.end());
  for (size_t k = 1; k < ext_sorted.size(); ++k)
    if (ext_sorted[k].second <= ext_sorted[k - 1].second) {
      rep.ext_noncrossing = false;
      rep.bad_ext = ext_sorted[k];
      break;
    }
  if (!rep.ext_noncrossing) return rep;

  // Zig-zag freedom: covered exterior-endpoint sets of interior arcs on
  // opposite strands must be nested or disjoint.
  {
    auto arcs_r = js.arcs_r;
    auto arcs_s = js.arcs_s;
    std::sort(arcs_r.begin(), arcs_r.end());
    std::sort(arcs_s.begin(), arcs_s.end());
    std::vector<std::vector<int>> es_r, es_s;
    es_r.reserve(arcs_r.size());
    es_s.reserve(arcs_s.size());
    for (auto a : arcs_r) es_r.push_back(es_set(ext_sorted, true, a.first, a.second));
    for (auto a : arcs_s) es_s.push_back(es_set(ext_sorted, false, a.first, a.second));
    for (size_t x = 0; x < arcs_r.size() && rep.zigzag_free; ++x) {
      if (es_r[x].empty()) continue;
      for (size_t y = 0; y < arcs_s.size(); ++y) {
        if (es_s[y].empty()) continue;
        if (!intersects(es_r[x], es_s[y])) continue;
        if (subset_of(es_r[x], es_s[y]) || subset_of(es_s[y], es_r[x])) continue;
        rep.zigzag_free = false;
        rep.bad_zigzag = arcs_r[x];
        break;
      }
    }
  }

  // Canonicity (1): every interior arc sits in a helix of length >= 2.
  {
    std::set<std::pair<int, int>> in_r(js.arcs_r.begin(), js.arcs_r.end());
    std::set<std::pair<int, int>> in_s(js.arcs_s.begin(), js.arcs_s.end());
    auto lonely = [](const std::set<std::pair<int, int>>& arcs, std::pair<int, int> a) {
      return !arcs.count({a.first + 1, a.second - 1}) && !arcs.count({a.first - 1, a.second + 1});
    };
    for (auto a : in_r)
      if (lonely(in_r, a)) {
        rep.canonical_c1 = false;
        rep.bad_c1 = a;
        break;
      }
    if (rep.canonical_c1)
      for (auto a : in_s)
        if (lonely(in_s, a)) {
          rep.canonical_c1 = false;
          rep.bad_c1 = a;
          break;
        }
  }

  // Canonicity (2): every maximal hybrid carries at least two arcs.
  for (const auto& sig : group_hybrids(ext_sorted, occ))
    if (sig.arcs.size() < 2) {
      rep.canonical_c2 = false;
      rep.bad_c2 = sig.arcs.front();
      break;
    }

  // Mask compatibility and must-pair coverage.
  for (auto a : js.arcs_r)
    if (!masks.interior_r[static_cast<size_t>(a.first)][static_cast<size_t>(a.second)]) {
      rep.mask_compatible = false;
      rep.bad_mask = a;
      break;
    }
  if (rep.mask_compatible)
    for (auto a : js.arcs_s)
      if (!masks.interior_s[static_cast<size_t>(a.first)][static_cast<size_t>(a.second)]) {
        rep.mask_compatible = false;
        rep.bad_mask = a;
        break;
      }
  if (rep.mask_compatible)
    for (auto a : js.ext)
      if (!masks.exterior[static_cast<size_t>(a.first)][static_cast<size_t>(a.second)]) {
        rep.mask_compatible = false;
        rep.bad_mask = a;
        break;
      }
  if (rep.mask_compatible)
    for (int p = 1; p <= js.n && rep.mask_compatible; ++p)
      if (masks.r_must_pair[static_cast<size_t>(p)] && occ.r[static_cast<size_t>(p)] == 0) {
        rep.mask_compatible = false;
        rep.bad_mask = {p, 0};
      }
  if (rep.mask_compatible)
    for (int p = 1; p <= js.m_len && rep.mask_compatible; ++p)
      if (masks.s_must_pair[static_cast<size_t>(p)] && occ.s[static_cast<size_t>(p)] == 0) {
        rep.mask_compatible = false;
        rep.bad_mask = {0, p};
      }
  return rep;
}

std::vector<HybridSignature> maximal_hybrids(const JointStructure& js) {
  auto ext_sorted = js.ext;
  std::sort(ext_sorted.begin(), ext_sorted.end());
  return group_hybrids(ext_sorted, occupancy_of(js));
}

namespace {

// Loops of one strand's interior arcs. Positions outside every child span
// count as loop positions; occ_this marks exterior-arc endpoints (value 2).
void strand_loops(const std::vector<std::pair<int, int>>& arcs_in, int strand, int len,
                  const VI& occ_this, std::vector<Loop>& out,
                  std::vector<std::pair<int, int>>& top_level) {
  auto arcs = arcs_in;
  std::sort(arcs.begin(), arcs.end(),
            [](auto a, auto b) { return a.first != b.first ? a.first < b.first : a.second > b.second; });
  std::vector<int> parent(arcs.size(), -1);
  std::vector<std::vector<int>> children(arcs.size());
  std::vector<int> open;
  for (size_t k = 0; k < arcs.size(); ++k) {
    while (!open.empty() && arcs[static_cast<size_t>(open.back())].second < arcs[k].first)
      open.pop_back();
    parent[k] = open.empty() ? -1 : open.back();
    if (parent[k] >= 0) children[static_cast<size_t>(parent[k])].push_back(static_cast<int>(k));
    else top_level.push_back(arcs[k]);
    open.push_back(static_cast<int>(k));
  }
  (void)len;
  for (size_t k = 0; k < arcs.size(); ++k) {
    auto [i, j] = arcs[k];
    Loop loop;
    loop.strand = strand;
    loop.closing = arcs[k];
    for (int c : children[k]) loop.branches.push_back(arcs[static_cast<size_t>(c)]);
    std::vector<int>& ups = (strand == 0) ? loop.unpaired_r : loop.unpaired_s;
    bool exposure = false;
    {
      size_t c = 0;
      for (int p = i + 1; p < j; ++p) {
        while (c < loop.branches.size() && loop.branches[c].second < p) ++c;
        if (c < loop.branches.size() && loop.branches[c].first <= p && p <= loop.branches[c].second)
          continue;
        ups.push_back(p);
        if (occ_this[static_cast<size_t>(p)] == 2) exposure = true;
      }
    }
    // Only the loop's own unpaired positions decide its kind: exterior arcs
    // buried under a child helix belong to that child's loop, so they must
    // not change how this one is priced.
    loop.joint = exposure;
    const size_t kk = loop.branches.size();
    const size_t u = ups.size();
    if (exposure) {
      loop.kind = LoopKind::Kissing;
    } else if (kk == 1 && u == 0) {
      loop.kind = LoopKind::Stack;
    } else if (kk == 0) {
      loop.kind = LoopKind::Hairpin;
    } else if (kk == 1) {
      int u1 = loop.branches[0].first - i - 1;
      int u2 = j - loop.branches[0].second - 1;
      loop.kind = (u1 > 0 && u2 > 0) ? LoopKind::Interior : LoopKind::Bulge;
    } else {
      loop.kind = LoopKind::Multi;
    }
    out.push_back(std::move(loop));
  }
}

}  // namespace

std::vector<Loop> decompose_loops(const JointStructure& js) {
  if (!in_bounds(js)) throw InvalidStructure("arc endpoints out of bounds");
  Occupancy occ = occupancy_of(js);
  if (occ.clash)
    throw InvalidStructure("position (" + std::to_string(occ.first_clash.first) + "," +
                           std::to_string(occ.first_clash.second) + ") pairs twice");
  if (first_crossing(js.arcs_r) != std::pair<int, int>{0, 0} ||
      first_crossing(js.arcs_s) != std::pair<int, int>{0, 0})
    throw InvalidStructure("interior arcs cross");
  auto ext_sorted = js.ext;
  std::sort(ext_sorted.begin(), ext_sorted.end());
  for (size_t k = 1; k < ext_sorted.size(); ++k)
    if (ext_sorted[k].second <= ext_sorted[k - 1].second)
      throw InvalidStructure("exterior arcs cross");

  std::vector<Loop> out;
  std::vector<std::pair<int, int>> top_r, top_s;
  strand_loops(js.arcs_r, 0, js.n, occ.r, out, top_r);
  strand_loops(js.arcs_s, 1, js.m_len, occ.s, out, top_s);

  for (const auto& sig : group_hybrids(ext_sorted, occ)) {
    Loop loop;
    loop.kind = LoopKind::Hybrid;
    loop.strand = -1;
    loop.closing = {sig.i, sig.h};
    loop.hybrid_arcs = sig.arcs;
    for (size_t k = 1; k < sig.arcs.size(); ++k) {
      for (int p = sig.arcs[k - 1].first + 1; p < sig.arcs[k].first; ++p)
        loop.unpaired_r.push_back(p);
      for (int p = sig.arcs[k - 1].second + 1; p < sig.arcs[k].second; ++p)
        loop.unpaired_s.push_back(p);
    }
    out.push_back(std::move(loop));
  }

  Loop external;
  external.kind = LoopKind::External;
  external.branches = top_r;
  external.branches.insert(external.branches.end(), top_s.begin(), top_s.end());
  {
    size_t c = 0;
    for (int p = 1; p <= js.n; ++p) {
      while (c < top_r.size() && top_r[c].second < p) ++c;
      if (c < top_r.size() && top_r[c].first <= p && p <= top_r[c].second) continue;
      external.unpaired_r.push_back(p);
    }
    c = 0;
    for (int p = 1; p <= js.m_len; ++p) {
      while (c < top_s.size() && top_s[c].second < p) ++c;
      if (c < top_s.size() && top_s[c].first <= p && p <= top_s[c].second) continue;
      external.unpaired_s.push_back(p);
    }
  }
  out.push_back(std::move(external));
  return out;
}

std::pair<std::string, std::string> to_notation(const JointStructure& js) {
  Occupancy occ = occupancy_of(js);
  if (!in_bounds(js) || occ.clash) throw InvalidStructure("to_notation: arcs overlap or leave bounds");
  std::string r(static_cast<size_t>(js.n), '.');
  std::string s(static_cast<size_t>(js.m_len), '.');
  for (auto a : js.arcs_r) {
    r[static_cast<size_t>(a.first - 1)] = '(';
    r[static_cast<size_t>(a.second - 1)] = ')';
  }
  for (auto a : js.arcs_s) {
    s[static_cast<size_t>(a.first - 1)] = '(';
    s[static_cast<size_t>(a.second - 1)] = ')';
  }
  for (auto a : js.ext) {
    r[static_cast<size_t>(a.first - 1)] = '[';
    s[static_cast<size_t>(a.second - 1)] = ']';
  }
  return {r, s};
}

JointStructure from_notation(const std::string& r_line, const std::string& s_line) {
  JointStructure js;
  js.n = static_cast<int>(r_line.size());
  js.m_len = static_cast<int>(s_line.size());
  std::vector<int> r_marks, s_marks;
  auto parse_line = [](const std::string& line, char ext_sym, char other_ext,
                       std::vector<std::pair<int, int>>& arcs, std::vector<int>& marks,
                       const char* which) {
    std::vector<int> open;
    for (size_t k = 0; k < line.size(); ++k) {
      char c = line[k];
      int pos = static_cast<int>(k) + 1;
      if (c == '.') continue;
      if (c == '(') { open.push_back(pos); continue; }
      if (c == ')') {
        if (open.empty())
          throw NotationError(std::string(which) + " line: unbalanced ')' at position " +
                              std::to_string(pos));
        arcs.emplace_back(open.back(), pos);
        open.pop_back();
        continue;
      }
      if (c == ext_sym) { marks.push_back(pos); continue; }
      if (c == other_ext)
        throw NotationError(std::string(which) + " line: '" + std::string(1, c) +
                            "' belongs on the other strand");
      throw NotationError(std::string(which) + " line: illegal symbol '" + std::string(1, c) +
                          "' at position " + std::to_string(pos));
    }
    if (!open.empty())
      throw NotationError(std::string(which) + " line: unbalanced '(' at position " +
                          std::to_string(open.back()));
  };
  parse_line(r_line, '[', ']', js.arcs_r, r_marks, "R");
  parse_line(s_line, ']', '[', js.arcs_s, s_marks, "S");
  if (r_marks.size() != s_marks.size())
    throw NotationError("notation: " + std::to_string(r_marks.size()) + " '[' in R vs " +
                        std::to_string(s_marks.size()) + " ']' in S");
  for (size_t k = 0; k < r_marks.size(); ++k) js.ext.emplace_back(r_marks[k], s_marks[k]);
  js.normalize();
  return js;
}

}  // namespace riafold
