// riafold -- brute-force enumeration oracle for small instances.
#pragma once

#include <map>
#include <tuple>

#include "riafold/common.hpp"
#include "riafold/compat.hpp"
#include "riafold/energy.hpp"
#include "riafold/joint_structure.hpp"

namespace riafold {

struct OracleLimits {
  int max_n = 14;
  int max_m = 14;
  // Abort (TooLarge) when the candidate stream exceeds this many structures.
  long long max_candidates = 20000000;
};

struct WeightedStructure {
  JointStructure structure;
  double energy = 0;
  double weight = 1;
};

struct ExactEnsemble {
  std::vector<WeightedStructure> structures;
  double z = 0;
  long long count = 0;
  VVD p_interior_r;  // (n+1) x (n+1), entries i<j
  VVD p_interior_s;
  VVD p_ext;  // (n+1) x (m_len+1)
  // Probability per maximal hybrid, keyed by its full arc list.
  std::map<std::vector<std::pair<int, int>>, double> hybrid_probs;
  // The same aggregated over boundaries (i, j; h, l).
  std::map<std::tuple<int, int, int, int>, double> hybrid_boundary_probs;
};

// Every canonical, mask-compatible joint structure, in a fixed deterministic
// order. Throws TooLarge beyond the size caps or the candidate budget.
std::vector<JointStructure> enumerate(const CompatibilityMasks& masks,
                                      const OracleLimits& limits = {});

// Independent cross-check path for tiny instances (N, M <= 6): enumerate all
// subsets of allowed arcs, keep the ones validate() accepts.
std::vector<JointStructure> naive_enumerate(const CompatibilityMasks& masks);

// enumerate() plus exact Boltzmann statistics from per-structure energies.
ExactEnsemble brute_force(const CompatibilityMasks& masks, const PairedAlignment& pa,
                          const EnergyModel& em, const OracleLimits& limits = {});

// Probability that some maximal hybrid's span on the chosen strand (0 = R,
// 1 = S) intersects [a, b].
double region_probability(const ExactEnsemble& ens, int strand, int a, int b);

}  // namespace riafold
