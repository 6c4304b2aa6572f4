// riafold -- compat unit suite: covariance pair scores, masks, constraints.
#include <random>
#include <string>

#include "doctest.h"
#include "riafold/common.hpp"
#include "riafold/compat.hpp"
#include "riafold/constraints.hpp"
#include "riafold/msa.hpp"
#include "riafold/params.hpp"

using namespace riafold;

namespace {

// Builds a PairedAlignment whose rmatrix holds exactly `r_rows` (one species),
// with a fixed-width smatrix of matching row count.
PairedAlignment pa_from_rows(const std::vector<std::string>& r_rows,
                             const std::vector<std::string>& s_rows) {
  std::string rtxt, stxt;
  for (size_t k = 0; k < r_rows.size(); ++k)
    rtxt += ">r" + std::to_string(k) + "|sp" + std::to_string(k) + "\n" + r_rows[k] + "\n";
  for (size_t k = 0; k < s_rows.size(); ++k)
    stxt += ">s" + std::to_string(k) + "|sp" + std::to_string(k) + "\n" + s_rows[k] + "\n";
  Msa r = parse_msa(rtxt, MsaFormat::AlignedFasta, Orientation::FivePrimeToThreePrime);
  Msa s = parse_msa(stxt, MsaFormat::AlignedFasta, Orientation::ThreePrimeToFivePrime);
  return expand_interaction_pairs(r, s);
}

std::string random_seq(std::mt19937_64& rng, int len, bool gaps) {
  static const char* kSym = "ACGU.";
  std::string out;
  for (int i = 0; i < len; ++i) out += kSym[rng() % (gaps ? 5 : 4)];
  return out;
}

// Rows for one strand: the first row is gap-free so that no alignment column
// ends up entirely gapped (the parser rejects those).
std::vector<std::string> random_rows(std::mt19937_64& rng, int count, int len) {
  std::vector<std::string> rows;
  for (int k = 0; k < count; ++k)
    rows.push_back(random_seq(rng, len, k > 0));
  return rows;
}

}  // namespace

TEST_SUITE("compat") {

TEST_CASE("pair score: single consistent row scores zero") {
  PairedAlignment pa = pa_from_rows({"GC"}, {"A"});
  FoldParams fp;
  PairScore ps = pair_score(pa, Side::R, 1, 2, fp);
  CHECK(ps.c == 0.0);
  CHECK(ps.q == 0.0);
  CHECK(ps.b == 0.0);
}

TEST_CASE("pair score: compensatory mutation GC/AU scores 1.0") {
  PairedAlignment pa = pa_from_rows({"GC", "AU"}, {"A", "A"});
  FoldParams fp;  // phi1 = 1
  PairScore ps = pair_score(pa, Side::R, 1, 2, fp);
  CHECK(ps.c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ps.q == 0.0);
  CHECK(ps.b == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pair score: inconsistent row GC/AG scores -0.5") {
  PairedAlignment pa = pa_from_rows({"GC", "AG"}, {"A", "A"});
  FoldParams fp;
  PairScore ps = pair_score(pa, Side::R, 1, 2, fp);
  CHECK(ps.c == 0.0);
  CHECK(ps.q == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ps.b == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("pair score: a gap-gap row is not penalized") {
  PairedAlignment pa = pa_from_rows({"GC", ".."}, {"A", "A"});
  FoldParams fp;
  PairScore ps = pair_score(pa, Side::R, 1, 2, fp);
  CHECK(ps.c == 0.0);
  CHECK(ps.q == 0.0);
  CHECK(ps.b == 0.0);
}

TEST_CASE("pair score: out-of-range positions rejected") {
  PairedAlignment pa = pa_from_rows({"GC"}, {"AU"});
  FoldParams fp;
  CHECK_THROWS_AS(pair_score(pa, Side::R, 0, 2, fp), BoundsError);
  CHECK_THROWS_AS(pair_score(pa, Side::R, 1, 3, fp), BoundsError);
  CHECK_THROWS_AS(pair_score(pa, Side::Ext, 1, 3, fp), BoundsError);
}

TEST_CASE("pair score properties: symmetry, bounds, phi1 linearity") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 6, m_len = 5;
    const int rows = 1 + static_cast<int>(rng() % 4);
    PairedAlignment pa =
        pa_from_rows(random_rows(rng, rows, n), random_rows(rng, rows, m_len));
    FoldParams fp;
    FoldParams fp0 = fp;
    fp0.phi1 = 0.0;
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        PairScore a = pair_score(pa, Side::R, i, j, fp);
        PairScore b = pair_score(pa, Side::R, j, i, fp);
        CHECK(a.b == doctest::Approx(b.b).epsilon(1e-12));
        CHECK(a.c >= 0.0);
        CHECK(a.q >= 0.0);
        CHECK(a.q <= 1.0);
        CHECK(a.b <= a.c + 1e-15);
        PairScore c0 = pair_score(pa, Side::R, i, j, fp0);
        CHECK(c0.b == doctest::Approx(c0.c).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("masks: all-x constraints block everything") {
  PairedAlignment pa = pa_from_rows({"GGGGAAACCCC"}, {"GGAACC"});
  FoldParams fp;
  ConstraintSet cs = parse_constraints("xxxxxxxxxxx", "xxxxxx");
  CompatibilityMasks masks = build_masks(pa, fp, cs);
  for (int i = 1; i <= 11; ++i)
    for (int j = i + 1; j <= 11; ++j) CHECK_FALSE(masks.interior_r[i][j]);
  for (int h = 1; h <= 6; ++h)
    for (int l = h + 1; l <= 6; ++l) CHECK_FALSE(masks.interior_s[h][l]);
  for (int i = 1; i <= 11; ++i)
    for (int h = 1; h <= 6; ++h) CHECK_FALSE(masks.exterior[i][h]);
}

TEST_CASE("masks: 2x2 cross-pairing alignment") {
  PairedAlignment pa = pa_from_rows({"GG"}, {"CC"});
  FoldParams fp;
  fp.bstar_ext = 0.0;
  CompatibilityMasks masks = score_masks(pa, fp);
  for (int i = 1; i <= 2; ++i)
    for (int h = 1; h <= 2; ++h) CHECK(masks.exterior[i][h]);
  // Interior spans of width 1 never clear the minimum hairpin size.
  CHECK_FALSE(masks.interior_r[1][2]);
  CHECK_FALSE(masks.interior_s[1][2]);
}

TEST_CASE("masks: single sequence reduces to plain pair admissibility") {
  PairedAlignment pa = pa_from_rows({"GGGGAAAACCCC"}, {"AAA"});
  FoldParams fp;
  CompatibilityMasks masks = score_masks(pa, fp);
  const std::string& row = pa.rmatrix[0];
  for (int i = 1; i <= 12; ++i)
    for (int j = i + 1; j <= 12; ++j) {
      bool want = (j - i > fp.min_hairpin) &&
                  pair_type(row[static_cast<size_t>(i - 1)], row[static_cast<size_t>(j - 1)]) >= 0;
      CAPTURE(i);
      CAPTURE(j);
      CHECK(static_cast<bool>(masks.interior_r[i][j]) == want);
    }
}

TEST_CASE("masks: raising a threshold only removes entries") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    PairedAlignment pa =
        pa_from_rows(random_rows(rng, 2, 8), random_rows(rng, 2, 6));
    FoldParams lo;
    lo.bstar_r = lo.bstar_s = lo.bstar_ext = -0.6;
    FoldParams hi;
    hi.bstar_r = hi.bstar_s = hi.bstar_ext = 0.4;
    CompatibilityMasks ml = score_masks(pa, lo);
    CompatibilityMasks mh = score_masks(pa, hi);
    for (int i = 1; i <= 8; ++i) {
      for (int j = i + 1; j <= 8; ++j)
        if (mh.interior_r[i][j]) CHECK(ml.interior_r[i][j]);
      for (int h = 1; h <= 6; ++h)
        if (mh.exterior[i][h]) CHECK(ml.exterior[i][h]);
    }
  }
}

TEST_CASE("constraints: forced exterior pair isolates its endpoints") {
  PairedAlignment pa = pa_from_rows({"GGG"}, {"CCC"});
  FoldParams fp;
  ConstraintSet cs = parse_constraints(".[.", ".].");
  CompatibilityMasks masks = build_masks(pa, fp, cs);
  CHECK(masks.exterior[2][2]);
  CHECK_FALSE(masks.exterior[2][1]);
  CHECK_FALSE(masks.exterior[2][3]);
  CHECK_FALSE(masks.exterior[1][2]);
  CHECK_FALSE(masks.exterior[3][2]);
  CHECK(masks.exterior[1][1]);  // untouched elsewhere
  CHECK(masks.r_must_pair[2]);
  CHECK(masks.s_must_pair[2]);
}

TEST_CASE("constraints: '-' clears exterior, '^' clears interior") {
  PairedAlignment pa = pa_from_rows({"GGGGAAAACCCC"}, {"CCCC"});
  FoldParams fp;
  CompatibilityMasks base = score_masks(pa, fp);
  REQUIRE(base.interior_r[1][12]);
  REQUIRE(base.exterior[1][1]);

  ConstraintSet dash = parse_constraints("-...........", "....");
  CompatibilityMasks md = build_masks(pa, fp, dash);
  for (int h = 1; h <= 4; ++h) CHECK_FALSE(md.exterior[1][h]);
  CHECK(md.interior_r[1][12]);

  ConstraintSet caret = parse_constraints("^...........", "....");
  CompatibilityMasks mc = build_masks(pa, fp, caret);
  for (int j = 2; j <= 12; ++j) CHECK_FALSE(mc.interior_r[1][j]);
  CHECK(mc.exterior[1][1]);
}

TEST_CASE("constraints: contradictions are errors") {
  PairedAlignment pa = pa_from_rows({"GGG"}, {"CCC"});
  FoldParams fp;
  // Forced exterior pair whose R endpoint is also forced unpaired.
  ConstraintSet cs = ConstraintSet::none(3, 3);
  cs.forced_ext.push_back({1, 1});
  cs.r_sym[0] = 'x';
  CompatibilityMasks masks = score_masks(pa, fp);
  CHECK_THROWS_AS(apply_constraints(masks, cs, fp.min_hairpin), ConstraintError);
  // Forced interior pair whose covariance score fails the threshold: A-A
  // cannot pair, so the forced arc contradicts the data.
  PairedAlignment pa2 = pa_from_rows({"AAAAA"}, {"CCC"});
  ConstraintSet cs2 = parse_constraints("(...)", "...");
  CHECK_THROWS_AS(build_masks(pa2, fp, cs2), ConstraintError);
  // Length mismatch.
  ConstraintSet cs3 = parse_constraints("..", "...");
  CHECK_THROWS_AS(build_masks(pa, fp, cs3), ConstraintError);
}

TEST_CASE("parse_constraints: symbols and bracket discipline") {
  ConstraintSet a = parse_constraints(".x..", "....");
  CHECK(a.r_sym == ".x..");
  CHECK(a.s_sym == "....");
  CHECK(a.forced_r.empty());
  CHECK(a.forced_ext.empty());

  ConstraintSet b = parse_constraints("[...[", "]..]..");
  REQUIRE(b.forced_ext.size() == 2);
  CHECK(b.forced_ext[0] == std::pair<int, int>(1, 1));
  CHECK(b.forced_ext[1] == std::pair<int, int>(5, 4));

  ConstraintSet c = parse_constraints("(..).", ".....");
  REQUIRE(c.forced_r.size() == 1);
  CHECK(c.forced_r[0] == std::pair<int, int>(1, 4));

  CHECK_THROWS_AS(parse_constraints("(...", "...."), ConstraintError);
  CHECK_THROWS_AS(parse_constraints("[...", "...."), ConstraintError);
  CHECK_THROWS_AS(parse_constraints(".)..", "...."), ConstraintError);
  CHECK_THROWS_AS(parse_constraints("?...", "...."), ConstraintError);
}

}  // TEST_SUITE
