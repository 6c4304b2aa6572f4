// riafold -- scoring thresholds, the averaged loop-energy model, and the
// key=value parameter file shared by both.
#pragma once

#include <array>
#include <string>

#include "riafold/common.hpp"

namespace riafold {

// Base codes. Gap ('.') is BASE_GAP; anything else is rejected upstream.
enum : int { BASE_A = 0, BASE_C = 1, BASE_G = 2, BASE_U = 3, BASE_GAP = 4 };
int base_code(char c);  // -1 for unknown characters

// Admissible pair types, in fixed order: AU, UA, GC, CG, GU, UG.
enum : int { PT_AU = 0, PT_UA = 1, PT_GC = 2, PT_CG = 3, PT_GU = 4, PT_UG = 5 };
// -1 when (x,y) is not one of the six (gaps included).
int pair_type(char x, char y);
const char* pair_type_name(int pt);  // "AU", "UA", ...

// Covariance-score thresholds and structural minima.
struct FoldParams {
  double phi1 = 1.0;        // weight of the inconsistency term q in b = c - phi1*q
  double bstar_r = -0.25;   // minimal b for an interior R arc
  double bstar_s = -0.25;   // minimal b for an interior S arc
  double bstar_ext = -0.25; // minimal b for an exterior arc
  int min_hairpin = 3;      // minimal unpaired alignment positions under an interior arc
};

// Averaged loop-energy model, kcal/mol. Loop sizes are alignment positions
// (gaps count as bases); only stack terminals depend on the row sequence.
struct EnergyModel {
  // stack[outer][inner]: terminal for an outer pair stacked over an inner pair.
  std::array<std::array<double, 6>, 6> stack{};
  double hairpin_base = 3.0;
  double hairpin_per_nt = 0.3;
  double interior_base = 1.0;
  double interior_per_nt = 0.3;
  double bulge_base = 2.0;
  double bulge_per_nt = 0.3;
  double multi_close = 3.4;
  double multi_branch = 0.4;
  double multi_unpaired = 0.1;
  double hybrid_init = 1.0;     // once per exterior helix
  double kissing_penalty = 2.0; // closing term of a loop containing exterior arc ends
  double rt = 0.6163;           // Boltzmann factor denominator, must stay > 0

  static EnergyModel defaults();
  // All energy terms zero (rt kept positive): Boltzmann weights all 1, so the
  // partition function counts structures.
  static EnergyModel zero();
};

// One parameter file configures thresholds, energies, and the DP rescaling
// factor. Unknown keys are rejected. A default-constructed ParamsFile carries
// the full default model, stack terminals included.
struct ParamsFile {
  FoldParams fold;
  EnergyModel energy = EnergyModel::defaults();
  double scale = 1.0;
};

// Parses `key = value` lines ('#' comments, blank lines allowed). Throws
// ParamsError on malformed lines, unknown keys, rt <= 0, scale <= 0, or
// min_hairpin < 0.
ParamsFile parse_params(const std::string& text);
ParamsFile load_params_file(const std::string& path);
// Energy-model view of the same file.
EnergyModel load_params(const std::string& path);

}  // namespace riafold
