// riafold -- inside/outside partition-function engine over joint structures.
//
// Table families (every parse of a canonical joint structure visits each cell
// group at most once, and every structure has exactly one parse):
//
//   Per strand (2-index, R shown; S mirrored):
//     P    arc (i,j) paired, its stacking requirement granted by the parent;
//          subtree = everything weakly below the arc on this strand.
//     H    helix start: (i,j) paired AND stacked on (i+1,j-1).
//     M0A  multiloop-context segment with >= 1 branch.
//     M0   multiloop-context segment (possibly branch-free).
//     M2   multiloop-context segment with >= 2 branches.
//     XA   exterior-context segment with >= 1 branch.
//     X    exterior-context segment.
//
//   Joint (4-index; R extent [a,b] x S extent [c,d], all extents tight):
//     FH   exterior-arc ladder, >= 1 arc, first arc (a,c), last arc (b,d).
//     EH   maximal hybrid: ladder with >= 2 arcs, initiation charged.
//     RC/PBRC + slot   R-covered unit: R arc (a,b) covering joint content
//          whose S extent is [c,d]. RC = helix start, PBRC = stacking granted
//          by parent. The slot (X, L0, L1) is the S-side context outside the
//          unit: exterior, or enclosing S loop with 0 / >= 1 exterior arcs
//          exposed on S by this unit.
//     SC/PBSC + slot   S-covered unit, mirrored (slot = R-side context).
//     CHO/CHE + state  unit chains (>= 2 units interleaved on both strands);
//          CHO = last unit covered, CHE = last unit a hybrid. The state is a
//          pair (sR, sS), each X / L0 / L1: per-side context plus whether the
//          chain has exposed an exterior arc on that side so far.
//     TE1/TE2/TE3 + state  chain-or-single prefix extended by the gap segment
//          on R up to column b: TE1 = prefix ends in a hybrid, R gap contains
//          an arc; TE2 = prefix ends in a hybrid, R gap arc-free; TE3 =
//          prefix ends in a covered unit, R gap unrestricted.
//     GE/GO + state    prefix extended by the S gap as well, ready for the
//          next unit: GE = prefix ends in a hybrid (two adjacent hybrids must
//          have an arc in at least one gap segment, or they would merge into
//          one maximal hybrid), GO = prefix ends in a covered unit.
//     TOP  the full ensemble.
//
// The same production enumerators drive the inside fill, the outside sweep
// (pair/hybrid probabilities), and the stochastic traceback (sampling), so
// the three stay consistent by construction. Productions are emitted in a
// fixed order; the sampler's cumulative scan relies on that order.
//
// Numeric rescaling multiplies the running weight by 1/scale for every
// backbone position consumed, so z(scale) = z(1) / scale^(N+M).
#include "riafold/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "riafold/energy.hpp"

namespace riafold {

namespace {

// Family ids. Slotted families occupy consecutive ids.
enum Fam : int {
  F_P_R = 0,
  F_H_R,
  F_M0A_R,
  F_M0_R,
  F_M2_R,
  F_XA_R,
  F_X_R,
  F_P_S,
  F_H_S,
  F_M0A_S,
  F_M0_S,
  F_M2_S,
  F_XA_S,
  F_X_S,
  F_FH,
  F_EH,
  F_PBRC,             // +3 slots
  F_RC = F_PBRC + 3,  // +3
  F_PBSC = F_RC + 3,  // +3
  F_SC = F_PBSC + 3,  // +3
  F_CHO = F_SC + 3,   // +9 states
  F_CHE = F_CHO + 9,  // +9
  F_TE1 = F_CHE + 9,  // +9
  F_TE2 = F_TE1 + 9,  // +9
  F_TE3 = F_TE2 + 9,  // +9
  F_GE = F_TE3 + 9,   // +9
  F_GO = F_GE + 9,    // +9
  F_TOP = F_GO + 9,
  F_COUNT
};

// Side states for chains: 0 = exterior context, 1 = loop context with no
// exterior arc exposed on this side yet, 2 = loop context with >= 1 exposed.
inline bool ctx_loop(int s) { return s != 0; }

struct FR {
  int fam = -1;
  int a = 0, b = 0, c = 0, d = 0;
};

constexpr double kInv53 = 0x1.0p-53;

}  // namespace

struct InsideTables::Impl {
  int N = 0, M = 0, m = 0;
  double rt_val = 0, scale_val = 1, rho = 1;
  double wmb = 1, wmu = 1, wmc = 1, wkp = 1, whyi = 1;
  CompatibilityMasks masks;

  // Precomputed weights.
  VD whp;                         // hairpin by unpaired count (positions not included)
  VD wint, wbul;                  // interior/bulge positional by total gap
  VD powRho, powMuRho, powMu;     // by run length
  VD termR, termS;                // avg stack terminal, outer x inner triangle cells
  VD hstep;                       // hybrid face steps, (arc) x (next arc)
  std::vector<int> mpR, mpS;      // prefix counts of must-pair positions

  // Triangle layout.
  std::vector<size_t> rowR, rowS;
  size_t TRIR = 0, TRIS = 0;

  std::array<VD, F_COUNT> tin;
  std::array<VD, F_COUNT> tout;
  bool outside_done = false;

  // ----- layout helpers -----
  size_t triR(int i, int j) const { return rowR[static_cast<size_t>(i)] + static_cast<size_t>(j - i); }
  size_t triS(int h, int l) const { return rowS[static_cast<size_t>(h)] + static_cast<size_t>(l - h); }
  size_t id4(int a, int b, int c, int d) const { return triR(a, b) * TRIS + triS(c, d); }
  size_t id2R(int a, int b) const {
    return static_cast<size_t>(a) * static_cast<size_t>(N + 2) + static_cast<size_t>(b);
  }
  size_t id2S(int a, int b) const {
    return static_cast<size_t>(a) * static_cast<size_t>(M + 2) + static_cast<size_t>(b);
  }
  size_t off(int fam, int a, int b, int c, int d) const {
    if (fam <= F_X_R) return id2R(a, b);
    if (fam <= F_X_S) return id2S(a, b);
    if (fam == F_TOP) return 0;
    return id4(a, b, c, d);
  }
  size_t off(const FR& f) const { return off(f.fam, f.a, f.b, f.c, f.d); }
  double inv(const FR& f) const { return tin[static_cast<size_t>(f.fam)][off(f)]; }
  double inv(int fam, int a, int b, int c, int d) const {
    return tin[static_cast<size_t>(fam)][off(fam, a, b, c, d)];
  }

  // ----- per-strand view -----
  struct SView {
    int L = 0;
    int famP = 0, famH = 0, famM0A = 0, famM0 = 0, famM2 = 0, famXA = 0, famX = 0;
    const VVB* mask = nullptr;
    const std::vector<int>* mp = nullptr;
    const VD* term = nullptr;
    const std::vector<size_t>* row = nullptr;
    size_t TRI = 0;
  };
  SView svR, svS;

  bool mpFree(const SView& sv, int a, int b) const {
    if (a > b) return true;
    return (*sv.mp)[static_cast<size_t>(b)] == (*sv.mp)[static_cast<size_t>(a - 1)];
  }
  // Unpaired run in exterior context: backbone scaling only.
  double runX(const SView& sv, int a, int b) const {
    if (a > b) return 1.0;
    if (!mpFree(sv, a, b)) return 0.0;
    return powRho[static_cast<size_t>(b - a + 1)];
  }
  // Unpaired run inside a loop: per-position charge included.
  double runL(const SView& sv, int a, int b) const {
    if (a > b) return 1.0;
    if (!mpFree(sv, a, b)) return 0.0;
    return powMuRho[static_cast<size_t>(b - a + 1)];
  }
  double sterm(const SView& sv, int i, int j, int a, int b) const {
    size_t o = (*sv.row)[static_cast<size_t>(i)] + static_cast<size_t>(j - i);
    size_t in = (*sv.row)[static_cast<size_t>(a)] + static_cast<size_t>(b - a);
    return (*sv.term)[o * sv.TRI + in];
  }
  bool maskAt(const SView& sv, int i, int j) const {
    return (*sv.mask)[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0;
  }
  double hstepAt(int i, int h, int p, int w) const {
    size_t a = static_cast<size_t>(i - 1) * static_cast<size_t>(M) + static_cast<size_t>(h - 1);
    size_t b = static_cast<size_t>(p - 1) * static_cast<size_t>(M) + static_cast<size_t>(w - 1);
    return hstep[a * static_cast<size_t>(N) * static_cast<size_t>(M) + b];
  }
  bool extAt(int i, int h) const {
    return masks.exterior[static_cast<size_t>(i)][static_cast<size_t>(h)] != 0;
  }

  double closeW(int e) const { return e ? wkp : wmc; }

  // ======================= production enumerators =======================
  // Visitor signature: vis(double w, const FR* factors, int nfactors).
  // The cell's inside value is the sum over productions of w times the
  // product of factor inside values.

  // P: arc (i,j), stacking granted from outside, strand-only content.
  template <class V>
  void prodsP(const SView& sv, int i, int j, V&& vis) const {
    if (j - i < 1 || !maskAt(sv, i, j)) return;
    const double base = rho * rho;
    // 1. helix continues: (i+1,j-1) paired as well (a stack face).
    if (j - i >= 3) {
      FR f[1] = {{sv.famP, i + 1, j - 1, 0, 0}};
      vis(base * sterm(sv, i, j, i + 1, j - 1), f, 1);
    }
    // 2. hairpin.
    if (mpFree(sv, i + 1, j - 1)) {
      int u = j - i - 1;
      vis(base * whp[static_cast<size_t>(u)] * powRho[static_cast<size_t>(u)], nullptr, 0);
    }
    // 3. interior / bulge: single inner helix (a,b), gaps unpaired.
    for (int a = i + 1; a <= j - 2; ++a) {
      if (a > i + 1 && !mpFree(sv, i + 1, a - 1)) break;
      int u1 = a - i - 1;
      for (int b = j - 1; b >= a + 3; --b) {
        int u2 = j - b - 1;
        if (u1 == 0 && u2 == 0) continue;  // that is the stack face above
        if (u2 > 0 && !mpFree(sv, b + 1, j - 1)) break;
        int g = u1 + u2;
        double posw = (u1 > 0 && u2 > 0) ? wint[static_cast<size_t>(g)] : wbul[static_cast<size_t>(g)];
        FR f[1] = {{sv.famH, a, b, 0, 0}};
        vis(base * posw * powRho[static_cast<size_t>(g)] * sterm(sv, i, j, a, b), f, 1);
      }
    }
    // 4. multiloop: >= 2 inner helices.
    if (j - i >= 2) {
      FR f[1] = {{sv.famM2, i + 1, j - 1, 0, 0}};
      vis(base * wmc, f, 1);
    }
  }

  // H: helix start -- (i,j) paired and stacked on (i+1,j-1).
  template <class V>
  void prodsH(const SView& sv, int i, int j, V&& vis) const {
    if (j - i < 3 || !maskAt(sv, i, j)) return;
    FR f[1] = {{sv.famP, i + 1, j - 1, 0, 0}};
    vis(rho * rho * sterm(sv, i, j, i + 1, j - 1), f, 1);
  }

  // M0A: loop-context segment with >= 1 branch; split at the first branch.
  template <class V>
  void prodsM0A(const SView& sv, int i, int j, V&& vis) const {
    for (int a = i; a <= j - 3; ++a) {
      double run = runL(sv, i, a - 1);
      if (run == 0.0) break;
      for (int b = a + 3; b <= j; ++b) {
        FR f[2] = {{sv.famH, a, b, 0, 0}, {sv.famM0, b + 1, j, 0, 0}};
        vis(run * wmb, f, 2);
      }
    }
  }

  // M0: loop-context segment. Empty segments count 1.
  template <class V>
  void prodsM0(const SView& sv, int i, int j, V&& vis) const {
    if (i > j) {
      vis(1.0, nullptr, 0);
      return;
    }
    double run = runL(sv, i, j);
    if (run != 0.0) vis(run, nullptr, 0);
    FR f[1] = {{sv.famM0A, i, j, 0, 0}};
    vis(1.0, f, 1);
  }

  // M2: loop-context segment with >= 2 branches.
  template <class V>
  void prodsM2(const SView& sv, int i, int j, V&& vis) const {
    for (int a = i; a <= j - 7; ++a) {
      double run = runL(sv, i, a - 1);
      if (run == 0.0) break;
      for (int b = a + 3; b <= j - 4; ++b) {
        FR f[2] = {{sv.famH, a, b, 0, 0}, {sv.famM0A, b + 1, j, 0, 0}};
        vis(run * wmb, f, 2);
      }
    }
  }

  // XA: exterior-context segment with >= 1 branch.
  template <class V>
  void prodsXA(const SView& sv, int i, int j, V&& vis) const {
    for (int a = i; a <= j - 3; ++a) {
      double run = runX(sv, i, a - 1);
      if (run == 0.0) break;
      for (int b = a + 3; b <= j; ++b) {
        FR f[2] = {{sv.famH, a, b, 0, 0}, {sv.famX, b + 1, j, 0, 0}};
        vis(run, f, 2);
      }
    }
  }

  // X: exterior-context segment. Empty segments count 1.
  template <class V>
  void prodsX(const SView& sv, int i, int j, V&& vis) const {
    if (i > j) {
      vis(1.0, nullptr, 0);
      return;
    }
    double run = runX(sv, i, j);
    if (run != 0.0) vis(run, nullptr, 0);
    FR f[1] = {{sv.famXA, i, j, 0, 0}};
    vis(1.0, f, 1);
  }

  // FH: exterior-arc ladder, first arc (i,h), last arc (j,l).
  template <class V>
  void prodsFH(int i, int j, int h, int l, V&& vis) const {
    if (!extAt(i, h)) return;
    const double base = rho * rho;
    if (i == j && h == l) {
      vis(base, nullptr, 0);
      return;
    }
    if (i >= j || h >= l) return;
    for (int p = i + 1; p <= j; ++p) {
      for (int w = h + 1; w <= l; ++w) {
        double s = hstepAt(i, h, p, w);
        if (s == 0.0) continue;
        FR f[1] = {{F_FH, p, j, w, l}};
        vis(base * s, f, 1);
      }
    }
  }

  // EH: maximal hybrid (>= 2 arcs), initiation charged here.
  template <class V>
  void prodsEH(int i, int j, int h, int l, V&& vis) const {
    if (i >= j || h >= l || !extAt(i, h)) return;
    const double base = whyi * rho * rho;
    for (int p = i + 1; p <= j; ++p) {
      for (int w = h + 1; w <= l; ++w) {
        double s = hstepAt(i, h, p, w);
        if (s == 0.0) continue;
        FR f[1] = {{F_FH, p, j, w, l}};
        vis(base * s, f, 1);
      }
    }
  }

  // RC: R-covered unit as helix start.
  template <class V>
  void prodsRC(int slot, int x, int y, int u, int v, V&& vis) const {
    if (y - x < 3 || !maskAt(svR, x, y)) return;
    FR f[1] = {{F_PBRC + slot, x + 1, y - 1, u, v}};
    vis(rho * rho * sterm(svR, x, y, x + 1, y - 1), f, 1);
  }

  // PBRC: R-covered unit, stacking granted by the parent. slot = S context.
  template <class V>
  void prodsPBRC(int slot, int x, int y, int u, int v, V&& vis) const {
    if (y - x < 1 || !maskAt(svR, x, y)) return;
    const double base = rho * rho;
    // 1. helix continues downward.
    if (y - x >= 3) {
      FR f[1] = {{F_PBRC + slot, x + 1, y - 1, u, v}};
      vis(base * sterm(svR, x, y, x + 1, y - 1), f, 1);
    }
    const int lo = x + 1, hi = y - 1;
    if (lo > hi) return;
    // 2. close over a chain of >= 2 units (multiloop or kissing loop by the
    //    chain's R-side exposure), flanked by loop-context segments.
    for (int eR = 0; eR <= 1; ++eR) {
      int st = (1 + eR) * 3 + slot;
      double w = closeW(eR) * base;
      for (int a = lo; a <= hi; ++a) {
        for (int b = a; b <= hi; ++b) {
          FR fo[3] = {{svR.famM0, lo, a - 1, 0, 0}, {F_CHO + st, a, b, u, v}, {svR.famM0, b + 1, hi, 0, 0}};
          if (inv(fo[1]) != 0.0) vis(w, fo, 3);
          FR fe[3] = {{svR.famM0, lo, a - 1, 0, 0}, {F_CHE + st, a, b, u, v}, {svR.famM0, b + 1, hi, 0, 0}};
          if (inv(fe[1]) != 0.0) vis(w, fe, 3);
        }
      }
    }
    // 3. close over a single R-covered sub-unit in a multiloop (needs >= 1
    //    additional branch among the flanks; split: left flank has a branch,
    //    or left is a pure run and the right flank has one).
    {
      double w0 = wmc * wmb * base;
      for (int a = lo; a <= hi; ++a) {
        for (int b = a + 3; b <= hi; ++b) {
          FR sub{F_RC + slot, a, b, u, v};
          if (inv(sub) == 0.0) continue;
          if (a - 1 >= lo + 3) {
            FR f[3] = {{svR.famM0A, lo, a - 1, 0, 0}, sub, {svR.famM0, b + 1, hi, 0, 0}};
            vis(w0, f, 3);
          }
          if (b + 1 <= hi - 3) {
            double run = runL(svR, lo, a - 1);
            if (run != 0.0) {
              FR f[2] = {sub, {svR.famM0A, b + 1, hi, 0, 0}};
              vis(w0 * run, f, 2);
            }
          }
        }
      }
    }
    // 4. close over a single R-covered sub-unit with unpaired flanks: an
    //    interior or bulge face (the full-span case is the stack above).
    for (int a = lo; a <= hi; ++a) {
      if (a > lo && !mpFree(svR, lo, a - 1)) break;
      int u1 = a - lo;
      for (int b = hi; b >= a + 3; --b) {
        int u2 = hi - b;
        if (u1 == 0 && u2 == 0) continue;
        if (u2 > 0 && !mpFree(svR, b + 1, hi)) break;
        int g = u1 + u2;
        double posw = (u1 > 0 && u2 > 0) ? wint[static_cast<size_t>(g)] : wbul[static_cast<size_t>(g)];
        FR f[1] = {{F_RC + slot, a, b, u, v}};
        vis(base * posw * powRho[static_cast<size_t>(g)] * sterm(svR, x, y, a, b), f, 1);
      }
    }
    // 5. close over a single S-covered sub-unit (its exposed R-side elements
    //    number >= 2, so the loop is multi or kissing by the sub's R bit).
    for (int e = 0; e <= 1; ++e) {
      double w = closeW(e) * (slot == 0 ? 1.0 : wmb) * base;
      for (int a = lo; a <= hi; ++a) {
        for (int b = a; b <= hi; ++b) {
          FR sub{F_SC + 1 + e, a, b, u, v};
          if (inv(sub) == 0.0) continue;
          FR f[3] = {{svR.famM0, lo, a - 1, 0, 0}, sub, {svR.famM0, b + 1, hi, 0, 0}};
          vis(w, f, 3);
        }
      }
    }
    // 6. close over a single hybrid: a kissing loop. The hybrid's R span is
    //    charged as loop positions; its S span likewise when the S context is
    //    a loop (slot L1 -- a hybrid always exposes arcs on both sides).
    if (slot != 1) {
      double w = wkp * base * (slot == 2 ? powMu[static_cast<size_t>(v - u + 1)] : 1.0);
      for (int a = lo; a <= hi; ++a) {
        for (int b = a; b <= hi; ++b) {
          FR sub{F_EH, a, b, u, v};
          if (inv(sub) == 0.0) continue;
          FR f[3] = {{svR.famM0, lo, a - 1, 0, 0}, sub, {svR.famM0, b + 1, hi, 0, 0}};
          vis(w * powMu[static_cast<size_t>(b - a + 1)], f, 3);
        }
      }
    }
  }

  // SC: S-covered unit as helix start.
  template <class V>
  void prodsSC(int slot, int x, int y, int u, int v, V&& vis) const {
    if (v - u < 3 || !maskAt(svS, u, v)) return;
    FR f[1] = {{F_PBSC + slot, x, y, u + 1, v - 1}};
    vis(rho * rho * sterm(svS, u, v, u + 1, v - 1), f, 1);
  }

  // PBSC: S-covered unit, stacking granted. slot = R context. Mirror of
  // PBRC except that a single R-covered sub-unit is not allowed here:
  // R-covered units always parse outside S-covered ones.
  template <class V>
  void prodsPBSC(int slot, int x, int y, int u, int v, V&& vis) const {
    if (v - u < 1 || !maskAt(svS, u, v)) return;
    const double base = rho * rho;
    if (v - u >= 3) {
      FR f[1] = {{F_PBSC + slot, x, y, u + 1, v - 1}};
      vis(base * sterm(svS, u, v, u + 1, v - 1), f, 1);
    }
    const int lo = u + 1, hi = v - 1;
    if (lo > hi) return;
    // 2. chains of >= 2 units.
    for (int eS = 0; eS <= 1; ++eS) {
      int st = slot * 3 + (1 + eS);
      double w = closeW(eS) * base;
      for (int c = lo; c <= hi; ++c) {
        for (int d = c; d <= hi; ++d) {
          FR fo[3] = {{svS.famM0, lo, c - 1, 0, 0}, {F_CHO + st, x, y, c, d}, {svS.famM0, d + 1, hi, 0, 0}};
          if (inv(fo[1]) != 0.0) vis(w, fo, 3);
          FR fe[3] = {{svS.famM0, lo, c - 1, 0, 0}, {F_CHE + st, x, y, c, d}, {svS.famM0, d + 1, hi, 0, 0}};
          if (inv(fe[1]) != 0.0) vis(w, fe, 3);
        }
      }
    }
    // 3. single S-covered sub-unit in a multiloop (>= 1 flank branch).
    {
      double w0 = wmc * wmb * base;
      for (int c = lo; c <= hi; ++c) {
        for (int d = c + 3; d <= hi; ++d) {
          FR sub{F_SC + slot, x, y, c, d};
          if (inv(sub) == 0.0) continue;
          if (c - 1 >= lo + 3) {
            FR f[3] = {{svS.famM0A, lo, c - 1, 0, 0}, sub, {svS.famM0, d + 1, hi, 0, 0}};
            vis(w0, f, 3);
          }
          if (d + 1 <= hi - 3) {
            double run = runL(svS, lo, c - 1);
            if (run != 0.0) {
              FR f[2] = {sub, {svS.famM0A, d + 1, hi, 0, 0}};
              vis(w0 * run, f, 2);
            }
          }
        }
      }
    }
    // 4. single S-covered sub-unit with unpaired flanks: interior/bulge face.
    for (int c = lo; c <= hi; ++c) {
      if (c > lo && !mpFree(svS, lo, c - 1)) break;
      int u1 = c - lo;
      for (int d = hi; d >= c + 3; --d) {
        int u2 = hi - d;
        if (u1 == 0 && u2 == 0) continue;
        if (u2 > 0 && !mpFree(svS, d + 1, hi)) break;
        int g = u1 + u2;
        double posw = (u1 > 0 && u2 > 0) ? wint[static_cast<size_t>(g)] : wbul[static_cast<size_t>(g)];
        FR f[1] = {{F_SC + slot, x, y, c, d}};
        vis(base * posw * powRho[static_cast<size_t>(g)] * sterm(svS, u, v, c, d), f, 1);
      }
    }
    // 5. single hybrid: kissing loop on S; R span charged by R context.
    if (slot != 1) {
      double w = wkp * base * (slot == 2 ? powMu[static_cast<size_t>(y - x + 1)] : 1.0);
      for (int c = lo; c <= hi; ++c) {
        for (int d = c; d <= hi; ++d) {
          FR sub{F_EH, x, y, c, d};
          if (inv(sub) == 0.0) continue;
          FR f[3] = {{svS.famM0, lo, c - 1, 0, 0}, sub, {svS.famM0, d + 1, hi, 0, 0}};
          vis(w * powMu[static_cast<size_t>(d - c + 1)], f, 3);
        }
      }
    }
  }

  // Source-state lists for appending a unit whose exposure bit on one side is
  // `beta`, reaching target side-state t. Empty means impossible.
  static void appendSources(int t, int beta, int* out, int& nout) {
    nout = 0;
    if (t == 0) {
      if (true) out[nout++] = 0;  // exterior context: exposure untracked
      return;
    }
    if (t == 1) {
      if (beta == 0) out[nout++] = 1;
      return;
    }
    // t == 2: exposed on this side.
    if (beta == 1) {
      out[nout++] = 1;
      out[nout++] = 2;
    } else {
      out[nout++] = 2;
    }
  }

  // CHE: chain of >= 2 units, last unit a hybrid starting at (a,c).
  template <class V>
  void prodsCHE(int st, int i, int j, int h, int l, V&& vis) const {
    int tR = st / 3, tS = st % 3;
    int srcR[2], nR = 0, srcS[2], nS = 0;
    appendSources(tR, 1, srcR, nR);
    appendSources(tS, 1, srcS, nS);
    if (nR == 0 || nS == 0) return;
    for (int a = i + 1; a <= j; ++a) {
      for (int c = h + 1; c <= l; ++c) {
        FR unit{F_EH, a, j, c, l};
        if (inv(unit) == 0.0) continue;
        double w = (tR == 2 ? powMu[static_cast<size_t>(j - a + 1)] : 1.0) *
                   (tS == 2 ? powMu[static_cast<size_t>(l - c + 1)] : 1.0);
        for (int p = 0; p < nR; ++p) {
          for (int q = 0; q < nS; ++q) {
            FR f[2] = {{F_GE + srcR[p] * 3 + srcS[q], i, a - 1, h, c - 1}, unit};
            if (inv(f[0]) == 0.0) continue;
            vis(w, f, 2);
          }
        }
      }
    }
  }

  // CHO: chain of >= 2 units, last unit covered.
  template <class V>
  void prodsCHO(int st, int i, int j, int h, int l, V&& vis) const {
    int tR = st / 3, tS = st % 3;
    // (A) last unit R-covered: R bit 0, S bit = unit slot's exposure.
    {
      int srcR[2], nR = 0;
      appendSources(tR, 0, srcR, nR);
      // (slot, srcS) options by tS.
      int slot[3], srcS[3], nOpt = 0;
      if (tS == 0) {
        slot[nOpt] = 0;
        srcS[nOpt++] = 0;
      } else if (tS == 1) {
        slot[nOpt] = 1;
        srcS[nOpt++] = 1;
      } else {
        slot[nOpt] = 2;
        srcS[nOpt++] = 1;
        slot[nOpt] = 2;
        srcS[nOpt++] = 2;
        slot[nOpt] = 1;
        srcS[nOpt++] = 2;
      }
      if (nR > 0) {
        double w = ctx_loop(tR) ? wmb : 1.0;
        for (int a = i + 1; a <= j; ++a) {
          for (int c = h + 1; c <= l; ++c) {
            for (int o = 0; o < nOpt; ++o) {
              FR unit{F_RC + slot[o], a, j, c, l};
              if (inv(unit) == 0.0) continue;
              for (int p = 0; p < nR; ++p) {
                FR f[2] = {{F_GO + srcR[p] * 3 + srcS[o], i, a - 1, h, c - 1}, unit};
                if (inv(f[0]) == 0.0) continue;
                vis(w, f, 2);
              }
            }
          }
        }
      }
    }
    // (B) last unit S-covered: S bit 0, R bit = unit slot's exposure.
    {
      int srcS[2], nS = 0;
      appendSources(tS, 0, srcS, nS);
      int slot[3], srcR[3], nOpt = 0;
      if (tR == 0) {
        slot[nOpt] = 0;
        srcR[nOpt++] = 0;
      } else if (tR == 1) {
        slot[nOpt] = 1;
        srcR[nOpt++] = 1;
      } else {
        slot[nOpt] = 2;
        srcR[nOpt++] = 1;
        slot[nOpt] = 2;
        srcR[nOpt++] = 2;
        slot[nOpt] = 1;
        srcR[nOpt++] = 2;
      }
      if (nS > 0) {
        double w = ctx_loop(tS) ? wmb : 1.0;
        for (int a = i + 1; a <= j; ++a) {
          for (int c = h + 1; c <= l; ++c) {
            for (int o = 0; o < nOpt; ++o) {
              FR unit{F_SC + slot[o], a, j, c, l};
              if (inv(unit) == 0.0) continue;
              for (int q = 0; q < nS; ++q) {
                FR f[2] = {{F_GO + srcR[o] * 3 + srcS[q], i, a - 1, h, c - 1}, unit};
                if (inv(f[0]) == 0.0) continue;
                vis(w, f, 2);
              }
            }
          }
        }
      }
    }
  }

  // Single-unit prefix charges (a chain of one unit so far). The single-unit
  // state equals the unit's own bits, so some states admit no single.
  // TE1: prefix ends in a hybrid; R gap (x+1..b) contains an arc.
  template <class V>
  void prodsTE1(int st, int i, int b, int h, int u, V&& vis) const {
    int tR = st / 3, tS = st % 3;
    int famGapA = ctx_loop(tR) ? svR.famM0A : svR.famXA;
    bool single = (tR != 1 && tS != 1);
    for (int x = i; x <= b - 1; ++x) {
      FR gap{famGapA, x + 1, b, 0, 0};
      if (inv(gap) == 0.0) continue;
      FR f1[2] = {{F_CHE + st, i, x, h, u}, gap};
      if (inv(f1[0]) != 0.0) vis(1.0, f1, 2);
      if (single) {
        FR f2[2] = {{F_EH, i, x, h, u}, gap};
        if (inv(f2[0]) != 0.0) {
          double w = (tR == 2 ? powMu[static_cast<size_t>(x - i + 1)] : 1.0) *
                     (tS == 2 ? powMu[static_cast<size_t>(u - h + 1)] : 1.0);
          vis(w, f2, 2);
        }
      }
    }
  }

  // TE2: prefix ends in a hybrid; R gap is arc-free (possibly empty).
  template <class V>
  void prodsTE2(int st, int i, int b, int h, int u, V&& vis) const {
    int tR = st / 3, tS = st % 3;
    bool single = (tR != 1 && tS != 1);
    for (int x = i; x <= b; ++x) {
      double wgap = ctx_loop(tR) ? runL(svR, x + 1, b) : runX(svR, x + 1, b);
      if (wgap == 0.0) continue;
      FR f1[1] = {{F_CHE + st, i, x, h, u}};
      if (inv(f1[0]) != 0.0) vis(wgap, f1, 1);
      if (single) {
        FR f2[1] = {{F_EH, i, x, h, u}};
        if (inv(f2[0]) != 0.0) {
          double w = (tR == 2 ? powMu[static_cast<size_t>(x - i + 1)] : 1.0) *
                     (tS == 2 ? powMu[static_cast<size_t>(u - h + 1)] : 1.0);
          vis(wgap * w, f2, 1);
        }
      }
    }
  }

  // TE3: prefix ends in a covered unit; R gap unrestricted.
  template <class V>
  void prodsTE3(int st, int i, int b, int h, int u, V&& vis) const {
    int tR = st / 3, tS = st % 3;
    int famGapAll = ctx_loop(tR) ? svR.famM0 : svR.famX;
    for (int x = i; x <= b; ++x) {
      FR gap{famGapAll, x + 1, b, 0, 0};
      if (inv(gap) == 0.0) continue;
      FR f1[2] = {{F_CHO + st, i, x, h, u}, gap};
      if (inv(f1[0]) != 0.0) vis(1.0, f1, 2);
      // single R-covered unit: R bit 0 (so tR != 2), S slot = tS.
      if (tR != 2) {
        FR f2[2] = {{F_RC + tS, i, x, h, u}, gap};
        if (inv(f2[0]) != 0.0) vis(ctx_loop(tR) ? wmb : 1.0, f2, 2);
      }
      // single S-covered unit: S bit 0 (so tS != 2), R slot = tR.
      if (tS != 2) {
        FR f3[2] = {{F_SC + tR, i, x, h, u}, gap};
        if (inv(f3[0]) != 0.0) vis(ctx_loop(tS) ? wmb : 1.0, f3, 2);
      }
    }
  }

  // GE: prefix ending in a hybrid, both gaps appended. Two adjacent hybrids
  // must keep an arc in at least one gap segment (else they would merge into
  // one maximal hybrid), hence the arc requirement on one strand gap.
  template <class V>
  void prodsGE(int st, int i, int b, int h, int f, V&& vis) const {
    int tS = st % 3;
    int famSAll = ctx_loop(tS) ? svS.famM0 : svS.famX;
    int famSArc = ctx_loop(tS) ? svS.famM0A : svS.famXA;
    for (int u = h; u <= f; ++u) {
      FR gAll{famSAll, u + 1, f, 0, 0};
      double ga = inv(gAll);
      if (ga != 0.0) {
        FR f1[2] = {{F_TE1 + st, i, b, h, u}, gAll};
        if (inv(f1[0]) != 0.0) vis(1.0, f1, 2);
      }
      if (u < f) {
        FR gArc{famSArc, u + 1, f, 0, 0};
        if (inv(gArc) != 0.0) {
          FR f2[2] = {{F_TE2 + st, i, b, h, u}, gArc};
          if (inv(f2[0]) != 0.0) vis(1.0, f2, 2);
        }
      }
      if (ga != 0.0) {
        FR f3[2] = {{F_TE3 + st, i, b, h, u}, gAll};
        if (inv(f3[0]) != 0.0) vis(1.0, f3, 2);
      }
    }
  }

  // GO: prefix ending in a covered unit, both gaps appended, no guard.
  template <class V>
  void prodsGO(int st, int i, int b, int h, int f, V&& vis) const {
    int tS = st % 3;
    int famSAll = ctx_loop(tS) ? svS.famM0 : svS.famX;
    for (int u = h; u <= f; ++u) {
      FR gAll{famSAll, u + 1, f, 0, 0};
      if (inv(gAll) == 0.0) continue;
      FR f1[2] = {{F_TE1 + st, i, b, h, u}, gAll};
      if (inv(f1[0]) != 0.0) vis(1.0, f1, 2);
      FR f2[2] = {{F_TE2 + st, i, b, h, u}, gAll};
      if (inv(f2[0]) != 0.0) vis(1.0, f2, 2);
      FR f3[2] = {{F_TE3 + st, i, b, h, u}, gAll};
      if (inv(f3[0]) != 0.0) vis(1.0, f3, 2);
    }
  }

  // TOP: strand-only structures, plus one joint block (a chain or a single
  // unit, both-side contexts exterior) with strand-only flanks.
  template <class V>
  void prodsTOP(V&& vis) const {
    {
      FR f[2] = {{svR.famX, 1, N, 0, 0}, {svS.famX, 1, M, 0, 0}};
      vis(1.0, f, 2);
    }
    static const int blocks[5] = {F_CHO + 0, F_CHE + 0, F_RC + 0, F_SC + 0, F_EH};
    for (int x = 1; x <= N; ++x) {
      for (int y = x; y <= N; ++y) {
        for (int u = 1; u <= M; ++u) {
          for (int v = u; v <= M; ++v) {
            for (int bk = 0; bk < 5; ++bk) {
              FR blk{blocks[bk], x, y, u, v};
              if (inv(blk) == 0.0) continue;
              FR f[5] = {blk,
                         {svR.famX, 1, x - 1, 0, 0},
                         {svS.famX, 1, u - 1, 0, 0},
                         {svR.famX, y + 1, N, 0, 0},
                         {svS.famX, v + 1, M, 0, 0}};
              vis(1.0, f, 5);
            }
          }
        }
      }
    }
  }

  // Dispatcher. The enumeration order within each cell is fixed; the sampler
  // depends on it.
  template <class V>
  void prods(int fam, int a, int b, int c, int d, V&& vis) const {
    if (fam < F_P_S) {
      const SView& sv = svR;
      switch (fam) {
        case F_P_R: prodsP(sv, a, b, vis); return;
        case F_H_R: prodsH(sv, a, b, vis); return;
        case F_M0A_R: prodsM0A(sv, a, b, vis); return;
        case F_M0_R: prodsM0(sv, a, b, vis); return;
        case F_M2_R: prodsM2(sv, a, b, vis); return;
        case F_XA_R: prodsXA(sv, a, b, vis); return;
        default: prodsX(sv, a, b, vis); return;
      }
    }
    if (fam < F_FH) {
      const SView& sv = svS;
      switch (fam) {
        case F_P_S: prodsP(sv, a, b, vis); return;
        case F_H_S: prodsH(sv, a, b, vis); return;
        case F_M0A_S: prodsM0A(sv, a, b, vis); return;
        case F_M0_S: prodsM0(sv, a, b, vis); return;
        case F_M2_S: prodsM2(sv, a, b, vis); return;
        case F_XA_S: prodsXA(sv, a, b, vis); return;
        default: prodsX(sv, a, b, vis); return;
      }
    }
    if (fam == F_FH) return prodsFH(a, b, c, d, vis);
    if (fam == F_EH) return prodsEH(a, b, c, d, vis);
    if (fam < F_RC) return prodsPBRC(fam - F_PBRC, a, b, c, d, vis);
    if (fam < F_PBSC) return prodsRC(fam - F_RC, a, b, c, d, vis);
    if (fam < F_SC) return prodsPBSC(fam - F_PBSC, a, b, c, d, vis);
    if (fam < F_CHO) return prodsSC(fam - F_SC, a, b, c, d, vis);
    if (fam < F_CHE) return prodsCHO(fam - F_CHO, a, b, c, d, vis);
    if (fam < F_TE1) return prodsCHE(fam - F_CHE, a, b, c, d, vis);
    if (fam < F_TE2) return prodsTE1(fam - F_TE1, a, b, c, d, vis);
    if (fam < F_TE3) return prodsTE2(fam - F_TE2, a, b, c, d, vis);
    if (fam < F_GE) return prodsTE3(fam - F_TE3, a, b, c, d, vis);
    if (fam < F_GO) return prodsGE(fam - F_GE, a, b, c, d, vis);
    if (fam < F_TOP) return prodsGO(fam - F_GO, a, b, c, d, vis);
    prodsTOP(vis);
  }

  // ======================= fill / outside sweeps =======================

  void fillCell(int fam, int a, int b, int c, int d) {
    double acc = 0.0;
    prods(fam, a, b, c, d, [&](double w, const FR* fs, int n) {
      double v = w;
      for (int k = 0; k < n; ++k) v *= inv(fs[k]);
      acc += v;
    });
    tin[static_cast<size_t>(fam)][off(fam, a, b, c, d)] = acc;
  }

  void outCell(int fam, int a, int b, int c, int d) {
    double oc = tout[static_cast<size_t>(fam)][off(fam, a, b, c, d)];
    if (oc == 0.0) return;
    prods(fam, a, b, c, d, [&](double w, const FR* fs, int n) {
      if (n == 0) return;
      double pre[6];
      pre[0] = 1.0;
      for (int k = 0; k < n; ++k) pre[k + 1] = pre[k] * inv(fs[k]);
      double suf = 1.0;
      for (int k = n - 1; k >= 0; --k) {
        tout[static_cast<size_t>(fs[k].fam)][off(fs[k])] += oc * w * pre[k] * suf;
        suf *= inv(fs[k]);
      }
    });
  }

  // Fill the seven per-strand families for one strand (ascending span).
  void fillStrand(const SView& sv) {
    for (int a = 1; a <= sv.L + 1; ++a) {
      fillCell(sv.famM0, a, a - 1, 0, 0);
      fillCell(sv.famX, a, a - 1, 0, 0);
    }
    for (int d = 0; d <= sv.L - 1; ++d) {
      for (int i = 1; i + d <= sv.L; ++i) {
        int j = i + d;
        fillCell(sv.famP, i, j, 0, 0);
        fillCell(sv.famH, i, j, 0, 0);
        fillCell(sv.famM0A, i, j, 0, 0);
        fillCell(sv.famM0, i, j, 0, 0);
        fillCell(sv.famM2, i, j, 0, 0);
        fillCell(sv.famXA, i, j, 0, 0);
        fillCell(sv.famX, i, j, 0, 0);
      }
    }
  }

  void fillAll() {
    fillStrand(svR);
    fillStrand(svS);
    for (int wR = 0; wR <= N - 1; ++wR) {
      for (int i = 1; i + wR <= N; ++i) {
        int j = i + wR;
        // stage 1: ladders.
        for (int h = 1; h <= M; ++h) {
          for (int l = h; l <= M; ++l) {
            fillCell(F_FH, i, j, h, l);
            fillCell(F_EH, i, j, h, l);
          }
        }
        // stage 2: R-covered units.
        for (int s = 0; s < 3; ++s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              fillCell(F_PBRC + s, i, j, h, l);
              fillCell(F_RC + s, i, j, h, l);
            }
          }
        }
        // stage 3: chains.
        for (int s = 0; s < 9; ++s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              fillCell(F_CHO + s, i, j, h, l);
              fillCell(F_CHE + s, i, j, h, l);
            }
          }
        }
        // stage 4: S-covered units, ascending S span.
        for (int wS = 0; wS <= M - 1; ++wS) {
          for (int h = 1; h + wS <= M; ++h) {
            int l = h + wS;
            for (int s = 0; s < 3; ++s) {
              fillCell(F_PBSC + s, i, j, h, l);
              fillCell(F_SC + s, i, j, h, l);
            }
          }
        }
        // stage 5: R-gap prefixes.
        for (int s = 0; s < 9; ++s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              fillCell(F_TE1 + s, i, j, h, l);
              fillCell(F_TE2 + s, i, j, h, l);
              fillCell(F_TE3 + s, i, j, h, l);
            }
          }
        }
        // stage 6: both-gap prefixes.
        for (int s = 0; s < 9; ++s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              fillCell(F_GE + s, i, j, h, l);
              fillCell(F_GO + s, i, j, h, l);
            }
          }
        }
      }
    }
    fillCell(F_TOP, 0, 0, 0, 0);
  }

  // Outside sweep: exact reverse of fillAll.
  void outStrand(const SView& sv) {
    for (int d = sv.L - 1; d >= 0; --d) {
      for (int i = 1; i + d <= sv.L; ++i) {
        int j = i + d;
        outCell(sv.famX, i, j, 0, 0);
        outCell(sv.famXA, i, j, 0, 0);
        outCell(sv.famM2, i, j, 0, 0);
        outCell(sv.famM0, i, j, 0, 0);
        outCell(sv.famM0A, i, j, 0, 0);
        outCell(sv.famH, i, j, 0, 0);
        outCell(sv.famP, i, j, 0, 0);
      }
    }
  }

  void ensureOutside() {
    if (outside_done) return;
    for (int f = 0; f < F_COUNT; ++f)
      tout[static_cast<size_t>(f)].assign(tin[static_cast<size_t>(f)].size(), 0.0);
    tout[F_TOP][0] = 1.0;
    outCell(F_TOP, 0, 0, 0, 0);
    for (int wR = N - 1; wR >= 0; --wR) {
      for (int i = 1; i + wR <= N; ++i) {
        int j = i + wR;
        for (int s = 8; s >= 0; --s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              outCell(F_GO + s, i, j, h, l);
              outCell(F_GE + s, i, j, h, l);
            }
          }
        }
        for (int s = 8; s >= 0; --s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              outCell(F_TE3 + s, i, j, h, l);
              outCell(F_TE2 + s, i, j, h, l);
              outCell(F_TE1 + s, i, j, h, l);
            }
          }
        }
        for (int wS = M - 1; wS >= 0; --wS) {
          for (int h = 1; h + wS <= M; ++h) {
            int l = h + wS;
            for (int s = 2; s >= 0; --s) {
              outCell(F_SC + s, i, j, h, l);
              outCell(F_PBSC + s, i, j, h, l);
            }
          }
        }
        for (int s = 8; s >= 0; --s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              outCell(F_CHE + s, i, j, h, l);
              outCell(F_CHO + s, i, j, h, l);
            }
          }
        }
        for (int s = 2; s >= 0; --s) {
          for (int h = 1; h <= M; ++h) {
            for (int l = h; l <= M; ++l) {
              outCell(F_RC + s, i, j, h, l);
              outCell(F_PBRC + s, i, j, h, l);
            }
          }
        }
        for (int h = 1; h <= M; ++h) {
          for (int l = h; l <= M; ++l) {
            outCell(F_EH, i, j, h, l);
            outCell(F_FH, i, j, h, l);
          }
        }
      }
    }
    outStrand(svS);
    outStrand(svR);
    outside_done = true;
  }

  double zval() const { return tin[F_TOP][0]; }

  double oi(int fam, int a, int b, int c, int d) const {
    size_t o = off(fam, a, b, c, d);
    return tin[static_cast<size_t>(fam)][o] * tout[static_cast<size_t>(fam)][o];
  }

  // ======================= sampling =======================

  static double next01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * kInv53;
  }

  void emitArcs(const FR& c, JointStructure& js) const {
    int fam = c.fam;
    if (fam == F_P_R || fam == F_H_R) {
      js.arcs_r.emplace_back(c.a, c.b);
    } else if (fam == F_P_S || fam == F_H_S) {
      js.arcs_s.emplace_back(c.a, c.b);
    } else if (fam == F_FH || fam == F_EH) {
      js.ext.emplace_back(c.a, c.c);
    } else if (fam >= F_PBRC && fam < F_PBSC) {
      js.arcs_r.emplace_back(c.a, c.b);
    } else if (fam >= F_PBSC && fam < F_CHO) {
      js.arcs_s.emplace_back(c.c, c.d);
    }
  }

  JointStructure sampleOne(std::mt19937_64& rng) const {
    JointStructure js;
    js.n = N;
    js.m_len = M;
    std::vector<FR> work;
    work.push_back(FR{F_TOP, 0, 0, 0, 0});
    while (!work.empty()) {
      FR cur = work.back();
      work.pop_back();
      emitArcs(cur, js);
      double tot = inv(cur);
      double target = next01(rng) * tot;
      double acc = 0.0;
      bool done = false;
      FR pick[5];
      int np = 0;
      prods(cur.fam, cur.a, cur.b, cur.c, cur.d, [&](double w, const FR* fs, int n) {
        if (done) return;
        double v = w;
        for (int k = 0; k < n; ++k) v *= inv(fs[k]);
        if (v <= 0.0) return;
        acc += v;
        np = n;
        for (int k = 0; k < n; ++k) pick[k] = fs[k];
        if (target < acc) done = true;
      });
      for (int k = 0; k < np; ++k) work.push_back(pick[k]);
    }
    js.normalize();
    return js;
  }
};

namespace {

// Average stack terminal weight over alignment rows: exp(-mean/rt).
double avg_term_weight(const PairedAlignment& pa, const EnergyModel& em, bool strandR_outer,
                       bool strandR_inner, int o1, int o2, int i1, int i2) {
  double sum = 0.0;
  int m = pa.m;
  for (int r = 0; r < m; ++r) {
    const std::string& rr = pa.rmatrix[static_cast<size_t>(r)];
    const std::string& sr = pa.smatrix[static_cast<size_t>(r)];
    char a = (strandR_outer ? rr : sr)[static_cast<size_t>(o1 - 1)];
    char b = (strandR_outer ? rr : sr)[static_cast<size_t>(o2 - 1)];
    char c = (strandR_inner ? rr : sr)[static_cast<size_t>(i1 - 1)];
    char d = (strandR_inner ? rr : sr)[static_cast<size_t>(i2 - 1)];
    sum += stack_terminal(em, a, b, c, d);
  }
  return std::exp(-(sum / static_cast<double>(m)) / em.rt);
}

// Mixed-strand (exterior) stack terminal: outer arc (i,h), inner arc (p,w).
double avg_ext_term_weight(const PairedAlignment& pa, const EnergyModel& em, int i, int h, int p,
                           int w) {
  double sum = 0.0;
  int m = pa.m;
  for (int r = 0; r < m; ++r) {
    const std::string& rr = pa.rmatrix[static_cast<size_t>(r)];
    const std::string& sr = pa.smatrix[static_cast<size_t>(r)];
    sum += stack_terminal(em, rr[static_cast<size_t>(i - 1)], sr[static_cast<size_t>(h - 1)],
                          rr[static_cast<size_t>(p - 1)], sr[static_cast<size_t>(w - 1)]);
  }
  return std::exp(-(sum / static_cast<double>(m)) / em.rt);
}

}  // namespace

// ======================= public API =======================

InsideTables::InsideTables() = default;
InsideTables::~InsideTables() = default;
InsideTables::InsideTables(const InsideTables&) = default;
InsideTables& InsideTables::operator=(const InsideTables&) = default;
InsideTables::InsideTables(InsideTables&&) noexcept = default;
InsideTables& InsideTables::operator=(InsideTables&&) noexcept = default;

double InsideTables::z() const { return impl->zval(); }
double InsideTables::free_energy() const {
  // zval() carries a factor (1/scale)^(N+M); undo it so the reported free
  // energy is independent of the numeric rescaling.
  const Impl& im = *impl;
  const double logz = std::log(im.zval()) +
                      (im.N + im.M) * std::log(im.scale_val);
  return -im.rt_val * logz;
}
double InsideTables::rt() const { return impl->rt_val; }
double InsideTables::scale() const { return impl->scale_val; }
int InsideTables::n() const { return impl->N; }
int InsideTables::m_len() const { return impl->M; }

InsideTables partition_function(const PairedAlignment& pa, const CompatibilityMasks& masks,
                                const EnergyModel& em, const EngineConfig& cfg) {
  if (pa.n() != masks.n || pa.m_len() != masks.m_len)
    throw BoundsError("mask dimensions do not match the alignment");
  if (!(cfg.scale > 0.0) || !std::isfinite(cfg.scale))
    throw ParamsError("scale must be positive and finite");
  if (!(em.rt > 0.0)) throw ParamsError("rt must be positive");

  auto impl = std::make_shared<InsideTables::Impl>();
  InsideTables::Impl& im = *impl;
  im.N = pa.n();
  im.M = pa.m_len();
  im.m = pa.m;
  im.rt_val = em.rt;
  im.scale_val = cfg.scale;
  im.rho = 1.0 / cfg.scale;
  im.masks = masks;

  const int N = im.N, M = im.M;
  const double rt = em.rt;
  im.wmb = std::exp(-em.multi_branch / rt);
  im.wmu = std::exp(-em.multi_unpaired / rt);
  im.wmc = std::exp(-em.multi_close / rt);
  im.wkp = std::exp(-em.kissing_penalty / rt);
  im.whyi = std::exp(-em.hybrid_init / rt);

  int LMAX = std::max(N, M);
  im.whp.resize(static_cast<size_t>(LMAX) + 1);
  for (int u = 0; u <= LMAX; ++u)
    im.whp[static_cast<size_t>(u)] = std::exp(-(em.hairpin_base + u * em.hairpin_per_nt) / rt);
  im.wint.resize(static_cast<size_t>(N + M) + 2);
  im.wbul.resize(static_cast<size_t>(N + M) + 2);
  for (int g = 0; g <= N + M + 1; ++g) {
    im.wint[static_cast<size_t>(g)] = std::exp(-(em.interior_base + g * em.interior_per_nt) / rt);
    im.wbul[static_cast<size_t>(g)] = std::exp(-(em.bulge_base + g * em.bulge_per_nt) / rt);
  }
  im.powRho.resize(static_cast<size_t>(N + M) + 2);
  im.powMuRho.resize(static_cast<size_t>(N + M) + 2);
  im.powMu.resize(static_cast<size_t>(N + M) + 2);
  im.powRho[0] = im.powMuRho[0] = im.powMu[0] = 1.0;
  for (int k = 1; k <= N + M + 1; ++k) {
    im.powRho[static_cast<size_t>(k)] = im.powRho[static_cast<size_t>(k - 1)] * im.rho;
    im.powMuRho[static_cast<size_t>(k)] = im.powMuRho[static_cast<size_t>(k - 1)] * im.wmu * im.rho;
    im.powMu[static_cast<size_t>(k)] = im.powMu[static_cast<size_t>(k - 1)] * im.wmu;
  }

  im.mpR.assign(static_cast<size_t>(N) + 1, 0);
  for (int i = 1; i <= N; ++i)
    im.mpR[static_cast<size_t>(i)] =
        im.mpR[static_cast<size_t>(i - 1)] + (masks.r_must_pair[static_cast<size_t>(i)] ? 1 : 0);
  im.mpS.assign(static_cast<size_t>(M) + 1, 0);
  for (int h = 1; h <= M; ++h)
    im.mpS[static_cast<size_t>(h)] =
        im.mpS[static_cast<size_t>(h - 1)] + (masks.s_must_pair[static_cast<size_t>(h)] ? 1 : 0);

  im.rowR.assign(static_cast<size_t>(N) + 1, 0);
  for (int i = 1; i < N; ++i)
    im.rowR[static_cast<size_t>(i + 1)] = im.rowR[static_cast<size_t>(i)] + static_cast<size_t>(N - i + 1);
  im.TRIR = (N >= 1) ? im.rowR[static_cast<size_t>(N)] + 1 : 0;
  im.rowS.assign(static_cast<size_t>(M) + 1, 0);
  for (int h = 1; h < M; ++h)
    im.rowS[static_cast<size_t>(h + 1)] = im.rowS[static_cast<size_t>(h)] + static_cast<size_t>(M - h + 1);
  im.TRIS = (M >= 1) ? im.rowS[static_cast<size_t>(M)] + 1 : 0;

  // Memory guard: 77 joint tables, inside plus (lazy) outside.
  {
    double t4 = static_cast<double>(im.TRIR) * static_cast<double>(im.TRIS);
    double bytes = 77.0 * t4 * 16.0 + (im.TRIR * im.TRIR + im.TRIS * im.TRIS) * 8.0 +
                   std::pow(static_cast<double>(N) * static_cast<double>(M), 2.0) * 8.0;
    if (bytes > 3.5e9)
      throw TooLarge("sequence lengths " + std::to_string(N) + "x" + std::to_string(M) +
                     " exceed the memory guard");
  }

  // Averaged stack terminals for nested per-strand faces.
  im.termR.assign(im.TRIR * im.TRIR, 0.0);
  for (int i = 1; i <= N; ++i) {
    for (int j = i + 1; j <= N; ++j) {
      size_t o = im.triR(i, j);
      for (int a = i + 1; a <= j - 1; ++a) {
        for (int b = a; b <= j - 1; ++b) {
          im.termR[o * im.TRIR + im.triR(a, b)] = avg_term_weight(pa, em, true, true, i, j, a, b);
        }
      }
    }
  }
  im.termS.assign(im.TRIS * im.TRIS, 0.0);
  for (int h = 1; h <= M; ++h) {
    for (int l = h + 1; l <= M; ++l) {
      size_t o = im.triS(h, l);
      for (int c = h + 1; c <= l - 1; ++c) {
        for (int d = c; d <= l - 1; ++d) {
          im.termS[o * im.TRIS + im.triS(c, d)] = avg_term_weight(pa, em, false, false, h, l, c, d);
        }
      }
    }
  }

  // Per-strand views (needed by mpFree during the hybrid-step fill).
  im.svR = InsideTables::Impl::SView{N,       F_P_R,   F_H_R, F_M0A_R,          F_M0_R,
                                     F_M2_R,  F_XA_R,  F_X_R, &im.masks.interior_r,
                                     &im.mpR, &im.termR, &im.rowR, im.TRIR};
  im.svS = InsideTables::Impl::SView{M,       F_P_S,   F_H_S, F_M0A_S,          F_M0_S,
                                     F_M2_S,  F_XA_S,  F_X_S, &im.masks.interior_s,
                                     &im.mpS, &im.termS, &im.rowS, im.TRIS};

  // Hybrid ladder steps: face between consecutive exterior arcs (i,h)->(p,w):
  // always the stack terminal, plus an interior/bulge positional term when a
  // gap is present, plus backbone scaling and must-pair gating for the gaps.
  {
    size_t NM = static_cast<size_t>(N) * static_cast<size_t>(M);
    im.hstep.assign(NM * NM, 0.0);
    for (int i = 1; i <= N; ++i) {
      for (int h = 1; h <= M; ++h) {
        size_t a = static_cast<size_t>(i - 1) * static_cast<size_t>(M) + static_cast<size_t>(h - 1);
        for (int p = i + 1; p <= N; ++p) {
          if (!im.mpFree(im.svR, i + 1, p - 1)) break;
          int gr = p - i - 1;
          for (int w = h + 1; w <= M; ++w) {
            if (!im.mpFree(im.svS, h + 1, w - 1)) break;
            int gs = w - h - 1;
            int g = gr + gs;
            double posw = 1.0;
            if (gr > 0 && gs > 0)
              posw = im.wint[static_cast<size_t>(g)];
            else if (gr > 0 || gs > 0)
              posw = im.wbul[static_cast<size_t>(g)];
            size_t b = static_cast<size_t>(p - 1) * static_cast<size_t>(M) + static_cast<size_t>(w - 1);
            im.hstep[a * NM + b] = posw * im.powRho[static_cast<size_t>(g)] *
                                   avg_ext_term_weight(pa, em, i, h, p, w);
          }
        }
      }
    }
  }

  // Allocate tables.
  size_t sz2R = static_cast<size_t>(N + 2) * static_cast<size_t>(N + 2);
  size_t sz2S = static_cast<size_t>(M + 2) * static_cast<size_t>(M + 2);
  size_t sz4 = im.TRIR * im.TRIS;
  for (int f = 0; f < F_COUNT; ++f) {
    size_t sz = (f <= F_X_R) ? sz2R : (f <= F_X_S) ? sz2S : (f == F_TOP) ? 1 : sz4;
    im.tin[static_cast<size_t>(f)].assign(sz, 0.0);
  }

  im.fillAll();

  if (!std::isfinite(im.zval()))
    throw NumericsError("partition function overflowed; rerun with a larger scale");

  InsideTables t;
  t.impl = impl;
  return t;
}

ProbMatrices pair_probabilities(const InsideTables& t) {
  InsideTables::Impl& im = *t.impl;
  const int N = im.N, M = im.M;
  ProbMatrices pm;
  pm.p_interior_r.assign(static_cast<size_t>(N) + 1, VD(static_cast<size_t>(N) + 1, 0.0));
  pm.p_interior_s.assign(static_cast<size_t>(M) + 1, VD(static_cast<size_t>(M) + 1, 0.0));
  pm.p_ext.assign(static_cast<size_t>(N) + 1, VD(static_cast<size_t>(M) + 1, 0.0));
  double Z = im.zval();
  if (!(Z > 0.0)) return pm;
  im.ensureOutside();

  auto clamp01 = [](double p) { return std::min(1.0, std::max(0.0, p)); };

  for (int i = 1; i <= N; ++i) {
    for (int j = i + 1; j <= N; ++j) {
      double s = im.oi(F_P_R, i, j, 0, 0) + im.oi(F_H_R, i, j, 0, 0);
      for (int sl = 0; sl < 3; ++sl) {
        for (int h = 1; h <= M; ++h) {
          for (int l = h; l <= M; ++l) {
            s += im.oi(F_PBRC + sl, i, j, h, l) + im.oi(F_RC + sl, i, j, h, l);
          }
        }
      }
      pm.p_interior_r[static_cast<size_t>(i)][static_cast<size_t>(j)] = clamp01(s / Z);
    }
  }
  for (int h = 1; h <= M; ++h) {
    for (int l = h + 1; l <= M; ++l) {
      double s = im.oi(F_P_S, h, l, 0, 0) + im.oi(F_H_S, h, l, 0, 0);
      for (int sl = 0; sl < 3; ++sl) {
        for (int i = 1; i <= N; ++i) {
          for (int j = i; j <= N; ++j) {
            s += im.oi(F_PBSC + sl, i, j, h, l) + im.oi(F_SC + sl, i, j, h, l);
          }
        }
      }
      pm.p_interior_s[static_cast<size_t>(h)][static_cast<size_t>(l)] = clamp01(s / Z);
    }
  }
  for (int i = 1; i <= N; ++i) {
    for (int h = 1; h <= M; ++h) {
      double s = 0.0;
      for (int j = i; j <= N; ++j) {
        for (int l = h; l <= M; ++l) {
          s += im.oi(F_FH, i, j, h, l) + im.oi(F_EH, i, j, h, l);
        }
      }
      pm.p_ext[static_cast<size_t>(i)][static_cast<size_t>(h)] = clamp01(s / Z);
    }
  }
  return pm;
}

HybridProb hybrid_probabilities(const InsideTables& t) {
  InsideTables::Impl& im = *t.impl;
  HybridProb hp;
  double Z = im.zval();
  if (!(Z > 0.0)) return hp;
  im.ensureOutside();
  for (int i = 1; i <= im.N; ++i) {
    for (int j = i + 1; j <= im.N; ++j) {
      for (int h = 1; h <= im.M; ++h) {
        for (int l = h + 1; l <= im.M; ++l) {
          double v = im.oi(F_EH, i, j, h, l);
          if (v > 0.0) hp[HybridKey{i, j, h, l}] = std::min(1.0, v / Z);
        }
      }
    }
  }
  return hp;
}

std::vector<JointStructure> sample(const InsideTables& t, int count, uint64_t seed) {
  InsideTables::Impl& im = *t.impl;
  std::vector<JointStructure> out;
  if (count <= 0) return out;
  if (!(im.zval() > 0.0)) throw NumericsError("cannot sample: the ensemble is empty (z == 0)");
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::mt19937_64 rng(seed ^ static_cast<uint64_t>(k));
    out.push_back(im.sampleOne(rng));
  }
  return out;
}

RegionProb contact_region_probability(const InsideTables& t, const HybridProb& hp, int strand,
                                      int a, int b, int nsamples, uint64_t seed) {
  InsideTables::Impl& im = *t.impl;
  if (strand != 0 && strand != 1) throw BoundsError("strand must be 0 or 1");
  int len = (strand == 0) ? im.N : im.M;
  if (a < 1 || b < a || b > len) throw BoundsError("region out of range");
  RegionProb rp;
  if (!(im.zval() > 0.0)) return rp;

  std::vector<HybridKey> touching;
  for (const auto& kv : hp) {
    auto [i, j, h, l] = kv.first;
    int lo = (strand == 0) ? i : h;
    int hi = (strand == 0) ? j : l;
    if (hi >= a && lo <= b) touching.push_back(kv.first);
  }
  // Two boundaries can co-occur in one structure only when their spans are
  // disjoint on both strands and ordered the same way.
  auto co_occurrable = [](const HybridKey& x, const HybridKey& y) {
    auto [i1, j1, h1, l1] = x;
    auto [i2, j2, h2, l2] = y;
    return (j1 < i2 && l1 < h2) || (j2 < i1 && l2 < h1);
  };
  bool exclusive = true;
  for (size_t p = 0; p < touching.size() && exclusive; ++p) {
    for (size_t q = p + 1; q < touching.size(); ++q) {
      if (co_occurrable(touching[p], touching[q])) {
        exclusive = false;
        break;
      }
    }
  }
  if (exclusive) {
    double s = 0.0;
    for (const auto& k : touching) s += hp.at(k);
    rp.value = std::min(1.0, s);
    rp.exact = true;
    return rp;
  }
  int n = std::max(1, nsamples);
  auto draws = sample(t, n, seed);
  int hit = 0;
  for (const auto& js : draws) {
    for (const auto& hy : maximal_hybrids(js)) {
      int lo = (strand == 0) ? hy.i : hy.h;
      int hi = (strand == 0) ? hy.j : hy.l;
      if (hi >= a && lo <= b) {
        ++hit;
        break;
      }
    }
  }
  rp.value = static_cast<double>(hit) / static_cast<double>(n);
  rp.stderr_est = std::sqrt(rp.value * (1.0 - rp.value) / static_cast<double>(n));
  rp.exact = false;
  return rp;
}

}  // namespace riafold
