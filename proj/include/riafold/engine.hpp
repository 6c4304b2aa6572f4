// riafold -- inside/outside partition-function engine over joint structures.
//
// The grammar decomposes every canonical joint structure into a unique parse
// tree, so the inside pass sums each structure's Boltzmann weight exactly
// once (checked in counting mode against exhaustive enumeration). The same
// production lists drive the inside fill, the outside sweep used for pair and
// hybrid probabilities, and the stochastic traceback used for sampling.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "riafold/common.hpp"
#include "riafold/compat.hpp"
#include "riafold/joint_structure.hpp"
#include "riafold/msa.hpp"
#include "riafold/params.hpp"

namespace riafold {

// Numeric rescaling: every backbone position consumed by the grammar
// multiplies the running weight by 1/scale, so z(scale) = z(1) / scale^(N+M).
// Downstream probabilities are scale-invariant.
struct EngineConfig {
  double scale = 1.0;
};

struct ProbMatrices {
  // 1-based; interior entries populated for i < j, exterior for all (i,h).
  VVD p_interior_r;  // (n+1) x (n+1)
  VVD p_interior_s;  // (m_len+1) x (m_len+1)
  VVD p_ext;         // (n+1) x (m_len+1)
};

// Maximal-hybrid boundary (first/last arc on R = i..j, on S = h..l) mapped to
// the ensemble probability of a maximal hybrid with exactly that boundary.
using HybridKey = std::tuple<int, int, int, int>;
using HybridProb = std::map<HybridKey, double>;

struct RegionProb {
  double value = 0.0;
  double stderr_est = 0.0;  // 0 when exact
  bool exact = true;
};

// Handle over the filled inside tables (and lazily computed outside tables).
// Cheap to copy; copies share the underlying tables.
class InsideTables {
 public:
  InsideTables();
  ~InsideTables();
  InsideTables(const InsideTables&);
  InsideTables& operator=(const InsideTables&);
  InsideTables(InsideTables&&) noexcept;
  InsideTables& operator=(InsideTables&&) noexcept;

  double z() const;            // partition function (scaled when scale != 1)
  double free_energy() const;  // -rt * ln z, corrected for the scale factor
  double rt() const;
  double scale() const;
  int n() const;      // R length
  int m_len() const;  // S length

  struct Impl;
  std::shared_ptr<Impl> impl;
};

// Fill the inside tables for the joint ensemble restricted by `masks`.
// Throws BoundsError on dimension mismatch between pa and masks, ParamsError
// on a non-positive scale or rt, TooLarge when the table set would exceed the
// memory guard, and NumericsError when the result overflows to non-finite.
InsideTables partition_function(const PairedAlignment& pa, const CompatibilityMasks& masks,
                                const EnergyModel& em, const EngineConfig& cfg = EngineConfig{});

// Marginal probabilities of every interior and exterior arc.
ProbMatrices pair_probabilities(const InsideTables& t);

// Marginal probabilities of maximal-hybrid boundaries.
HybridProb hybrid_probabilities(const InsideTables& t);

// Draw `count` independent structures. Sample k uses its own generator seeded
// with seed xor k, so results are reproducible and order-independent.
// Throws NumericsError when the ensemble is empty (z == 0).
std::vector<JointStructure> sample(const InsideTables& t, int count, uint64_t seed);

// Probability that at least one maximal hybrid touches [a,b] on the chosen
// strand (0 = first strand, 1 = second; 1-based inclusive columns). Exact sum
// over boundary probabilities when no two boundaries that touch the region
// can occur together in one structure; otherwise a sampling estimate with its
// standard error.
RegionProb contact_region_probability(const InsideTables& t, const HybridProb& hp, int strand,
                                      int a, int b, int nsamples = 100000, uint64_t seed = 1);

}  // namespace riafold
