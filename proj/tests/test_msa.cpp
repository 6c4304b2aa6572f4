// riafold -- msa unit suite: parsing, normalization, species-pair expansion,
// consensus.
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "riafold/common.hpp"
#include "riafold/msa.hpp"

using namespace riafold;

namespace {

// Minimal aligned-FASTA writer used for the parse round-trip property.
std::string serialize_fasta(const Msa& a) {
  std::string out;
  for (const MsaRow& row : a.rows) {
    out += ">" + row.name + "\n";
    out += row.symbols + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("msa") {

TEST_CASE("fasta: two records of width 8") {
  Msa a = parse_msa(">a|t1\nAGAACGGA\n>b|t1\nGAAACGGA\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  CHECK(a.rows.size() == 2);
  CHECK(a.width == 8);
  CHECK(a.rows[0].symbols == "AGAACGGA");
  CHECK(a.rows[1].symbols == "GAAACGGA");
  CHECK(a.rows[0].species == "t1");
  CHECK(a.rows[1].species == "t1");
}

TEST_CASE("fasta: minimal single record") {
  Msa a = parse_msa(">a|t1\nA\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  CHECK(a.rows.size() == 1);
  CHECK(a.width == 1);
}

TEST_CASE("ragged rows rejected") {
  CHECK_THROWS_AS(parse_msa(">a|t1\nAGAACGGA\n>b|t1\nGAAACGG\n",
                            MsaFormat::AlignedFasta,
                            Orientation::FivePrimeToThreePrime),
                  FormatError);
}

TEST_CASE("symbol normalization: case, T, gap characters") {
  // Second row keeps every column occupied (all-gap columns are rejected).
  Msa a = parse_msa(">a|t1\nagt-Ac.\n>b|t1\nAGUUACA\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  CHECK(a.rows[0].symbols == "AGU.AC.");
}

TEST_CASE("a column of nothing but gaps is rejected") {
  CHECK_THROWS_AS(parse_msa(">a|t1\nA.G\n>b|t1\nU.C\n", MsaFormat::AlignedFasta,
                            Orientation::FivePrimeToThreePrime),
                  FormatError);
}

TEST_CASE("illegal symbol rejected") {
  CHECK_THROWS_AS(parse_msa(">a|t1\nAGXA\n", MsaFormat::AlignedFasta,
                            Orientation::FivePrimeToThreePrime),
                  FormatError);
}

TEST_CASE("missing species tag rejected") {
  CHECK_THROWS_AS(parse_msa(">a\nAGAA\n", MsaFormat::AlignedFasta,
                            Orientation::FivePrimeToThreePrime),
                  MissingSpecies);
}

TEST_CASE("clustal parsing matches fasta parsing") {
  const char* clustal =
      "CLUSTAL W (1.83) multiple sequence alignment\n"
      "\n"
      "a|t1    AGAACGGA\n"
      "b|t1    GAAACGGA\n";
  Msa c = parse_msa(clustal, MsaFormat::Clustal,
                    Orientation::FivePrimeToThreePrime);
  CHECK(c.rows.size() == 2);
  CHECK(c.width == 8);
  CHECK(c.rows[0].symbols == "AGAACGGA");
  CHECK(c.rows[1].symbols == "GAAACGGA");
}

TEST_CASE("expansion: three-row R and four-row S give the six pairs in order") {
  // R rows: (t1, AGAACGGA), (t1, GAAACGGA), (t2, AGA.CGAC)
  // S rows: (t1, GGGCCG), (t1, AGUUAG), (t2, AGGCAG), (t2, ..GUGG)
  Msa r = parse_msa(
      ">r1|t1\nAGAACGGA\n>r2|t1\nGAAACGGA\n>r3|t2\nAGA.CGAC\n",
      MsaFormat::AlignedFasta, Orientation::FivePrimeToThreePrime);
  Msa s = parse_msa(
      ">s1|t1\nGGGCCG\n>s2|t1\nAGUUAG\n>s3|t2\nAGGCAG\n>s4|t2\n..GUGG\n",
      MsaFormat::AlignedFasta, Orientation::ThreePrimeToFivePrime);
  PairedAlignment pa = expand_interaction_pairs(r, s);
  REQUIRE(pa.m == 6);
  CHECK(pa.n() == 8);
  CHECK(pa.m_len() == 6);
  const char* want_r[6] = {"AGAACGGA", "AGAACGGA", "GAAACGGA",
                           "GAAACGGA", "AGA.CGAC", "AGA.CGAC"};
  const char* want_s[6] = {"GGGCCG", "AGUUAG", "GGGCCG",
                           "AGUUAG", "AGGCAG", "..GUGG"};
  const char* want_sp[6] = {"t1", "t1", "t1", "t1", "t2", "t2"};
  for (int i = 0; i < 6; ++i) {
    CAPTURE(i);
    CHECK(pa.rmatrix[static_cast<size_t>(i)] == want_r[i]);
    CHECK(pa.smatrix[static_cast<size_t>(i)] == want_s[i]);
    CHECK(pa.provenance[static_cast<size_t>(i)].species == want_sp[i]);
  }
}

TEST_CASE("expansion: single same-species pair") {
  Msa r = parse_msa(">a|t1\nAG\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  Msa s = parse_msa(">b|t1\nCU\n", MsaFormat::AlignedFasta,
                    Orientation::ThreePrimeToFivePrime);
  PairedAlignment pa = expand_interaction_pairs(r, s);
  CHECK(pa.m == 1);
}

TEST_CASE("expansion: unmatched species reported by name") {
  Msa r = parse_msa(">a|t1\nAG\n>b|t3\nGG\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  Msa s = parse_msa(">c|t1\nCU\n", MsaFormat::AlignedFasta,
                    Orientation::ThreePrimeToFivePrime);
  CHECK_THROWS_WITH_AS(expand_interaction_pairs(r, s),
                       doctest::Contains("t3"), UnmatchedSpecies);
}

TEST_CASE("expansion row count equals the species cross-product sum") {
  std::mt19937_64 rng(511);
  for (int trial = 0; trial < 20; ++trial) {
    const int nsp = 1 + static_cast<int>(rng() % 3);
    std::string rtxt, stxt;
    std::vector<int> cnt_r(static_cast<size_t>(nsp)), cnt_s(static_cast<size_t>(nsp));
    int k = 0;
    for (int sp = 0; sp < nsp; ++sp) {
      cnt_r[static_cast<size_t>(sp)] = 1 + static_cast<int>(rng() % 3);
      cnt_s[static_cast<size_t>(sp)] = 1 + static_cast<int>(rng() % 3);
      for (int q = 0; q < cnt_r[static_cast<size_t>(sp)]; ++q)
        rtxt += ">r" + std::to_string(k++) + "|sp" + std::to_string(sp) + "\nAAG\n";
      for (int q = 0; q < cnt_s[static_cast<size_t>(sp)]; ++q)
        stxt += ">s" + std::to_string(k++) + "|sp" + std::to_string(sp) + "\nCCU\n";
    }
    Msa r = parse_msa(rtxt, MsaFormat::AlignedFasta,
                      Orientation::FivePrimeToThreePrime);
    Msa s = parse_msa(stxt, MsaFormat::AlignedFasta,
                      Orientation::ThreePrimeToFivePrime);
    int want = 0;
    for (int sp = 0; sp < nsp; ++sp)
      want += cnt_r[static_cast<size_t>(sp)] * cnt_s[static_cast<size_t>(sp)];
    CHECK(expand_interaction_pairs(r, s).m == want);
  }
}

TEST_CASE("parse after serialize is the identity") {
  Msa a = parse_msa(">a|t1\nAG.ACGGA\n>b|t2\nGAAACG.A\n",
                    MsaFormat::AlignedFasta, Orientation::FivePrimeToThreePrime);
  Msa b = parse_msa(serialize_fasta(a), MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  REQUIRE(b.rows.size() == a.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(b.rows[i].name == a.rows[i].name);
    CHECK(b.rows[i].species == a.rows[i].species);
    CHECK(b.rows[i].symbols == a.rows[i].symbols);
  }
}

TEST_CASE("consensus: majority, tie order, single row") {
  // Column-wise rows (G,G,A) -> G.
  Msa a = parse_msa(">a|t1\nG\n>b|t1\nG\n>c|t1\nA\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  CHECK(consensus(a) == "G");
  // Tie (A,U) broken by the fixed order A < C < G < U < gap.
  Msa b = parse_msa(">a|t1\nA\n>b|t1\nU\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  CHECK(consensus(b) == "A");
  // Single row: identity.
  Msa c = parse_msa(">a|t1\nAGCU\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  CHECK(consensus(c) == "AGCU");
  // A partially gapped column keeps its majority symbol.
  Msa d = parse_msa(">a|t1\nA.\n>b|t1\nAG\n>c|t1\nAG\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  CHECK(consensus(d) == "AG");
}

}  // TEST_SUITE
