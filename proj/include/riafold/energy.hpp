// riafold -- averaged loop and structure energies.
#pragma once

#include "riafold/common.hpp"
#include "riafold/joint_structure.hpp"
#include "riafold/msa.hpp"
#include "riafold/params.hpp"

namespace riafold {

struct LoopEnergy {
  double value = 0;  // row average
  VD per_row;
};

// Stack-table terminal for a two-pair face: outer pair (xo,yo) over inner
// pair (xi,yi). Zero when either pair is inadmissible (covers gap characters).
double stack_terminal(const EnergyModel& em, char xo, char yo, char xi, char yi);

// Energy of one loop as seen by one alignment row. Only stack terminals (the
// interior-stack and hybrid-ladder cases) depend on the row; a terminal whose
// bases include a gap or form no admissible pair contributes 0.
double loop_energy_row(const Loop& loop, const PairedAlignment& pa, int row,
                       const EnergyModel& em);

// Row average plus the per-row breakdown.
LoopEnergy loop_energy(const Loop& loop, const PairedAlignment& pa, const EnergyModel& em);

// Sum of averaged loop energies over the full decomposition.
double structure_energy(const JointStructure& js, const PairedAlignment& pa,
                        const EnergyModel& em);

}  // namespace riafold
