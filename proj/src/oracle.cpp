// riafold -- brute-force enumeration oracle.
#include "riafold/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>

namespace riafold {

namespace {

using Arcs = std::vector<std::pair<int, int>>;

// All noncrossing interior-arc sets over positions [lo, hi] of one strand,
// restricted to usable positions and the strand mask. Memoized per interval.
struct FillGen {
  const VVB* mask = nullptr;
  uint32_t usable = 0;
  int len = 0;
  std::map<std::pair<int, int>, std::shared_ptr<std::vector<Arcs>>> memo;

  const std::vector<Arcs>& fills(int lo, int hi) {
    auto key = std::make_pair(lo, hi);
    if (auto it = memo.find(key); it != memo.end()) return *it->second;
    auto out = std::make_shared<std::vector<Arcs>>();
    if (lo > hi) {
      out->push_back({});
    } else if (!(usable >> (lo - 1) & 1u)) {
      *out = fills(lo + 1, hi);
    } else {
      *out = fills(lo + 1, hi);  // lo unpaired
      for (int q = lo + 1; q <= hi; ++q) {
        if (!(usable >> (q - 1) & 1u)) continue;
        if (!(*mask)[static_cast<size_t>(lo)][static_cast<size_t>(q)]) continue;
        const auto& inner = fills(lo + 1, q - 1);
        const auto& after = fills(q + 1, hi);
        for (const Arcs& a : inner)
          for (const Arcs& b : after) {
            Arcs cur;
            cur.reserve(a.size() + b.size() + 1);
            cur.emplace_back(lo, q);
            cur.insert(cur.end(), a.begin(), a.end());
            cur.insert(cur.end(), b.begin(), b.end());
            out->push_back(std::move(cur));
          }
      }
    }
    memo.emplace(key, out);
    return *out;
  }
};

bool helix_canonical(const Arcs& arcs) {
  if (arcs.empty()) return true;
  std::set<std::pair<int, int>> in(arcs.begin(), arcs.end());
  for (auto a : arcs)
    if (!in.count({a.first + 1, a.second - 1}) && !in.count({a.first - 1, a.second + 1}))
      return false;
  return true;
}

// Canonical (c1) fills of one strand over a usable-position set, with each
// fill's paired-position bitmask. Cached by the usable set.
struct StrandFills {
  std::vector<Arcs> fills;
  std::vector<uint32_t> paired;
};

struct StrandCache {
  const VVB* mask = nullptr;
  int len = 0;
  std::map<uint32_t, std::shared_ptr<StrandFills>> by_usable;

  const StrandFills& get(uint32_t usable) {
    if (auto it = by_usable.find(usable); it != by_usable.end()) return *it->second;
    FillGen gen;
    gen.mask = mask;
    gen.usable = usable;
    gen.len = len;
    auto out = std::make_shared<StrandFills>();
    for (const Arcs& arcs : gen.fills(1, len)) {
      if (!helix_canonical(arcs)) continue;
      uint32_t bits = 0;
      for (auto a : arcs) {
        bits |= 1u << (a.first - 1);
        bits |= 1u << (a.second - 1);
      }
      Arcs sorted = arcs;
      std::sort(sorted.begin(), sorted.end());
      out->fills.push_back(std::move(sorted));
      out->paired.push_back(bits);
    }
    by_usable.emplace(usable, out);
    return *out;
  }
};

}  // namespace

std::vector<JointStructure> enumerate(const CompatibilityMasks& masks,
                                      const OracleLimits& limits) {
  const int N = masks.n, M = masks.m_len;
  if (N > limits.max_n || M > limits.max_m)
    throw TooLarge("enumerate: instance exceeds the size cap (" + std::to_string(limits.max_n) +
                   ", " + std::to_string(limits.max_m) + ")");
  if (N > 30 || M > 30) throw TooLarge("enumerate: strand longer than 30 positions");

  std::vector<std::pair<int, int>> ext_allowed;
  for (int i = 1; i <= N; ++i)
    for (int h = 1; h <= M; ++h)
      if (masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)])
        ext_allowed.emplace_back(i, h);

  StrandCache cache_r, cache_s;
  cache_r.mask = &masks.interior_r;
  cache_r.len = N;
  cache_s.mask = &masks.interior_s;
  cache_s.len = M;

  uint32_t must_r = 0, must_s = 0;
  for (int i = 1; i <= N; ++i)
    if (masks.r_must_pair[static_cast<size_t>(i)]) must_r |= 1u << (i - 1);
  for (int h = 1; h <= M; ++h)
    if (masks.s_must_pair[static_cast<size_t>(h)]) must_s |= 1u << (h - 1);
  const uint32_t all_r = (N >= 32) ? ~0u : ((1u << N) - 1);
  const uint32_t all_s = (M >= 32) ? ~0u : ((1u << M) - 1);

  std::vector<JointStructure> out;
  long long candidates = 0;
  std::vector<std::pair<int, int>> matching;

  // Visits every order-consistent exterior matching once (arcs added left to
  // right on both strands), combining it with all per-strand canonical fills.
  auto emit_matching = [&](uint32_t ext_r, uint32_t ext_s) {
    const StrandFills& fr = cache_r.get(all_r & ~ext_r);
    const StrandFills& fs = cache_s.get(all_s & ~ext_s);
    const uint32_t need_r = must_r & ~ext_r;
    const uint32_t need_s = must_s & ~ext_s;
    for (size_t x = 0; x < fr.fills.size(); ++x) {
      if ((need_r & ~fr.paired[x]) != 0) continue;
      for (size_t y = 0; y < fs.fills.size(); ++y) {
        if ((need_s & ~fs.paired[y]) != 0) continue;
        if (++candidates > limits.max_candidates)
          throw TooLarge("enumerate: candidate budget exceeded");
        JointStructure js;
        js.n = N;
        js.m_len = M;
        js.arcs_r = fr.fills[x];
        js.arcs_s = fs.fills[y];
        js.ext = matching;
        if (validate(js, masks).all()) out.push_back(std::move(js));
      }
    }
  };

  std::function<void(size_t, int, uint32_t, uint32_t)> rec = [&](size_t from, int min_s,
                                                                 uint32_t ext_r, uint32_t ext_s) {
    emit_matching(ext_r, ext_s);
    for (size_t k = from; k < ext_allowed.size(); ++k) {
      auto [i, h] = ext_allowed[k];
      if (h < min_s) continue;
      matching.push_back(ext_allowed[k]);
      rec(k + 1, h + 1, ext_r | (1u << (i - 1)), ext_s | (1u << (h - 1)));
      matching.pop_back();
    }
  };
  rec(0, 1, 0, 0);
  return out;
}

std::vector<JointStructure> naive_enumerate(const CompatibilityMasks& masks) {
  const int N = masks.n, M = masks.m_len;
  if (N > 6 || M > 6) throw TooLarge("naive_enumerate: supports N, M <= 6 only");

  // kind 0: interior R, 1: interior S, 2: exterior.
  struct Cand { int kind; int a, b; };
  std::vector<Cand> cands;
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j)
      if (masks.interior_r[static_cast<size_t>(i)][static_cast<size_t>(j)])
        cands.push_back({0, i, j});
  for (int i = 1; i <= M; ++i)
    for (int j = i + 1; j <= M; ++j)
      if (masks.interior_s[static_cast<size_t>(i)][static_cast<size_t>(j)])
        cands.push_back({1, i, j});
  for (int i = 1; i <= N; ++i)
    for (int h = 1; h <= M; ++h)
      if (masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)])
        cands.push_back({2, i, h});

  std::vector<JointStructure> out;
  std::vector<Cand> chosen;
  std::function<void(size_t)> rec = [&](size_t from) {
    JointStructure js;
    js.n = N;
    js.m_len = M;
    for (const Cand& c : chosen) {
      if (c.kind == 0) js.arcs_r.emplace_back(c.a, c.b);
      else if (c.kind == 1) js.arcs_s.emplace_back(c.a, c.b);
      else js.ext.emplace_back(c.a, c.b);
    }
    js.normalize();
    if (validate(js, masks).all()) out.push_back(std::move(js));
    for (size_t k = from; k < cands.size(); ++k) {
      chosen.push_back(cands[k]);
      rec(k + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return out;
}

ExactEnsemble brute_force(const CompatibilityMasks& masks, const PairedAlignment& pa,
                          const EnergyModel& em, const OracleLimits& limits) {
  if (pa.n() != masks.n || pa.m_len() != masks.m_len)
    throw BoundsError("brute_force: alignment and mask dimensions differ");
  ExactEnsemble ens;
  const int N = masks.n, M = masks.m_len;
  ens.p_interior_r.assign(static_cast<size_t>(N) + 1, VD(static_cast<size_t>(N) + 1, 0.0));
  ens.p_interior_s.assign(static_cast<size_t>(M) + 1, VD(static_cast<size_t>(M) + 1, 0.0));
  ens.p_ext.assign(static_cast<size_t>(N) + 1, VD(static_cast<size_t>(M) + 1, 0.0));

  for (JointStructure& js : enumerate(masks, limits)) {
    WeightedStructure ws;
    ws.energy = structure_energy(js, pa, em);
    ws.weight = std::exp(-ws.energy / em.rt);
    ens.z += ws.weight;
    ens.count += 1;
    for (auto a : js.arcs_r)
      ens.p_interior_r[static_cast<size_t>(a.first)][static_cast<size_t>(a.second)] += ws.weight;
    for (auto a : js.arcs_s)
      ens.p_interior_s[static_cast<size_t>(a.first)][static_cast<size_t>(a.second)] += ws.weight;
    for (auto a : js.ext)
      ens.p_ext[static_cast<size_t>(a.first)][static_cast<size_t>(a.second)] += ws.weight;
    for (const auto& sig : maximal_hybrids(js)) {
      ens.hybrid_probs[sig.arcs] += ws.weight;
      ens.hybrid_boundary_probs[{sig.i, sig.j, sig.h, sig.l}] += ws.weight;
    }
    ws.structure = std::move(js);
    ens.structures.push_back(std::move(ws));
  }

  if (ens.z > 0) {
    for (auto& row : ens.p_interior_r)
      for (double& v : row) v /= ens.z;
    for (auto& row : ens.p_interior_s)
      for (double& v : row) v /= ens.z;
    for (auto& row : ens.p_ext)
      for (double& v : row) v /= ens.z;
    for (auto& [k, v] : ens.hybrid_probs) v /= ens.z;
    for (auto& [k, v] : ens.hybrid_boundary_probs) v /= ens.z;
  }
  return ens;
}

double region_probability(const ExactEnsemble& ens, int strand, int a, int b) {
  if (ens.z <= 0) return 0.0;
  double mass = 0;
  for (const WeightedStructure& ws : ens.structures) {
    bool hit = false;
    for (const auto& sig : maximal_hybrids(ws.structure)) {
      int lo = (strand == 0) ? sig.i : sig.h;
      int hi = (strand == 0) ? sig.j : sig.l;
      if (lo <= b && a <= hi) { hit = true; break; }
    }
    if (hit) mass += ws.weight;
  }
  return mass / ens.z;
}

}  // namespace riafold
