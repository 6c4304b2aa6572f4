// riafold -- averaged loop and structure energies.
#include "riafold/energy.hpp"

namespace riafold {

double stack_terminal(const EnergyModel& em, char xo, char yo, char xi, char yi) {
  int outer = pair_type(xo, yo);
  int inner = pair_type(xi, yi);
  if (outer < 0 || inner < 0) return 0.0;
  return em.stack[static_cast<size_t>(outer)][static_cast<size_t>(inner)];
}

double loop_energy_row(const Loop& loop, const PairedAlignment& pa, int row,
                       const EnergyModel& em) {
  if (row < 0 || row >= pa.m) throw BoundsError("loop_energy_row: row out of range");
  const std::string& r = pa.rmatrix[static_cast<size_t>(row)];
  const std::string& s = pa.smatrix[static_cast<size_t>(row)];
  const size_t u = loop.unpaired_r.size() + loop.unpaired_s.size();
  const size_t k = loop.branches.size();

  switch (loop.kind) {
    case LoopKind::External:
      return 0.0;
    case LoopKind::Hairpin:
      return em.hairpin_base + static_cast<double>(u) * em.hairpin_per_nt;
    case LoopKind::Stack: {
      const auto& strand = (loop.strand == 0) ? r : s;
      auto [i, j] = loop.closing;
      auto [p, q] = loop.branches.at(0);
      return stack_terminal(em, strand[static_cast<size_t>(i - 1)],
                            strand[static_cast<size_t>(j - 1)],
                            strand[static_cast<size_t>(p - 1)],
                            strand[static_cast<size_t>(q - 1)]);
    }
    case LoopKind::Interior:
    case LoopKind::Bulge: {
      // Two-pair faces carry the stack-table terminal of closing over branch.
      const auto& strand = (loop.strand == 0) ? r : s;
      auto [i, j] = loop.closing;
      auto [p, q] = loop.branches.at(0);
      double terminal = stack_terminal(em, strand[static_cast<size_t>(i - 1)],
                                       strand[static_cast<size_t>(j - 1)],
                                       strand[static_cast<size_t>(p - 1)],
                                       strand[static_cast<size_t>(q - 1)]);
      if (loop.kind == LoopKind::Interior)
        return em.interior_base + static_cast<double>(u) * em.interior_per_nt + terminal;
      return em.bulge_base + static_cast<double>(u) * em.bulge_per_nt + terminal;
    }
    case LoopKind::Multi:
      return em.multi_close + static_cast<double>(k) * em.multi_branch +
             static_cast<double>(u) * em.multi_unpaired;
    case LoopKind::Kissing:
      return em.kissing_penalty + static_cast<double>(k) * em.multi_branch +
             static_cast<double>(u) * em.multi_unpaired;
    case LoopKind::Hybrid: {
      double e = em.hybrid_init;
      for (size_t t = 1; t < loop.hybrid_arcs.size(); ++t) {
        auto [i1, h1] = loop.hybrid_arcs[t - 1];
        auto [i2, h2] = loop.hybrid_arcs[t];
        int g_r = i2 - i1 - 1;
        int g_s = h2 - h1 - 1;
        // Every consecutive arc pair is a two-pair face: terminal always applies,
        // plus a positional term when the face encloses unpaired positions.
        e += stack_terminal(em, r[static_cast<size_t>(i1 - 1)], s[static_cast<size_t>(h1 - 1)],
                            r[static_cast<size_t>(i2 - 1)], s[static_cast<size_t>(h2 - 1)]);
        if (g_r > 0 && g_s > 0) {
          e += em.interior_base + static_cast<double>(g_r + g_s) * em.interior_per_nt;
        } else if (g_r > 0 || g_s > 0) {
          e += em.bulge_base + static_cast<double>(g_r + g_s) * em.bulge_per_nt;
        }
      }
      return e;
    }
  }
  return 0.0;
}

LoopEnergy loop_energy(const Loop& loop, const PairedAlignment& pa, const EnergyModel& em) {
  LoopEnergy le;
  le.per_row.reserve(static_cast<size_t>(pa.m));
  for (int row = 0; row < pa.m; ++row) le.per_row.push_back(loop_energy_row(loop, pa, row, em));
  double sum = 0;
  for (double v : le.per_row) sum += v;
  le.value = pa.m > 0 ? sum / pa.m : 0.0;
  return le;
}

double structure_energy(const JointStructure& js, const PairedAlignment& pa,
                        const EnergyModel& em) {
  if (js.n != pa.n() || js.m_len != pa.m_len())
    throw BoundsError("structure_energy: structure and alignment dimensions differ");
  double total = 0;
  for (const Loop& loop : decompose_loops(js)) total += loop_energy(loop, pa, em).value;
  return total;
}

}  // namespace riafold
