// riafold -- alignment parsing and species-pair expansion.
#pragma once

#include <string>
#include <vector>

#include "riafold/common.hpp"

namespace riafold {

enum class Orientation { FivePrimeToThreePrime, ThreePrimeToFivePrime };
enum class MsaFormat { Clustal, AlignedFasta };

struct MsaRow {
  std::string name;     // full record name, species tag included
  std::string species;  // text after the '|' separator in the name
  std::string symbols;  // over {A,C,G,U,.}
};

struct Msa {
  std::vector<MsaRow> rows;
  int width = 0;
  Orientation orientation = Orientation::FivePrimeToThreePrime;
};

struct PairProvenance {
  int r_row = 0;  // 0-based row index into the source R alignment
  int s_row = 0;
  std::string species;
};

// The expanded m-row matrix pair: one row per same-species (R row, S row) pair.
struct PairedAlignment {
  std::vector<std::string> rmatrix;  // m rows of width N
  std::vector<std::string> smatrix;  // m rows of width M
  std::vector<PairProvenance> provenance;
  int m = 0;
  int n() const { return rmatrix.empty() ? 0 : static_cast<int>(rmatrix[0].size()); }
  int m_len() const { return smatrix.empty() ? 0 : static_cast<int>(smatrix[0].size()); }
};

// Parses Clustal or aligned-FASTA text. Symbols are upper-cased, T becomes U,
// '-' becomes '.'. Throws FormatError on ragged/illegal input, MissingSpecies
// when a record name carries no '|species' tag.
Msa parse_msa(const std::string& text, MsaFormat format, Orientation orientation);

// Expands all same-species cross pairs, ordered by (species in first-appearance
// order of r, then r row order, then s row order). Throws UnmatchedSpecies
// (naming the species) when a species appears on one side only.
PairedAlignment expand_interaction_pairs(const Msa& r, const Msa& s);

// Per-column majority symbol; ties broken by the fixed order A < C < G < U < '.'.
std::string consensus(const Msa& a);

}  // namespace riafold
