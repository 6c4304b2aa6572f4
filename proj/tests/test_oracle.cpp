// riafold -- oracle unit suite: exhaustive enumeration and exact statistics.
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "riafold/common.hpp"
#include "riafold/compat.hpp"
#include "riafold/energy.hpp"
#include "riafold/joint_structure.hpp"
#include "riafold/msa.hpp"
#include "riafold/oracle.hpp"

using namespace riafold;

namespace {

PairedAlignment tiny_pa(const std::string& r_row, const std::string& s_row) {
  Msa r = parse_msa(">a|t1\n" + r_row + "\n", MsaFormat::AlignedFasta,
                    Orientation::FivePrimeToThreePrime);
  Msa s = parse_msa(">b|t1\n" + s_row + "\n", MsaFormat::AlignedFasta,
                    Orientation::ThreePrimeToFivePrime);
  return expand_interaction_pairs(r, s);
}

CompatibilityMasks random_masks(std::mt19937_64& rng, int n, int m_len,
                                double density) {
  CompatibilityMasks masks = CompatibilityMasks::none(n, m_len);
  auto hit = [&] { return (rng() >> 11) * 0x1.0p-53 < density; };
  for (int i = 1; i <= n; ++i)
    for (int j = i + 4; j <= n; ++j) masks.interior_r[i][j] = hit();
  for (int h = 1; h <= m_len; ++h)
    for (int l = h + 4; l <= m_len; ++l) masks.interior_s[h][l] = hit();
  for (int i = 1; i <= n; ++i)
    for (int h = 1; h <= m_len; ++h) masks.exterior[i][h] = hit();
  return masks;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("all-false masks leave only the empty structure") {
  CompatibilityMasks masks = CompatibilityMasks::none(3, 3);
  std::vector<JointStructure> all = enumerate(masks);
  REQUIRE(all.size() == 1);
  CHECK(all[0].arcs_r.empty());
  CHECK(all[0].arcs_s.empty());
  CHECK(all[0].ext.empty());

  ExactEnsemble ens = brute_force(masks, tiny_pa("GGG", "CCC"),
                                  EnergyModel::defaults());
  CHECK(ens.count == 1);
  CHECK(ens.z == 1.0);
  for (int i = 1; i <= 3; ++i)
    for (int h = 1; h <= 3; ++h) CHECK(ens.p_ext[i][h] == 0.0);
  CHECK(ens.hybrid_probs.empty());
}

TEST_CASE("a lone admissible exterior arc cannot form a structure") {
  CompatibilityMasks masks = CompatibilityMasks::none(1, 1);
  masks.exterior[1][1] = true;
  CHECK(enumerate(masks).size() == 1);  // empty only: one arc violates (c2)
}

TEST_CASE("two-position strands: empty plus the two-arc hybrid") {
  CompatibilityMasks masks = CompatibilityMasks::none(2, 2);
  for (int i = 1; i <= 2; ++i)
    for (int h = 1; h <= 2; ++h) masks.exterior[i][h] = true;
  std::vector<JointStructure> all = enumerate(masks);
  REQUIRE(all.size() == 2);

  PairedAlignment pa = tiny_pa("GG", "CC");
  ExactEnsemble ens = brute_force(masks, pa, EnergyModel::zero());
  CHECK(ens.count == 2);
  CHECK(ens.z == 2.0);
  CHECK(ens.p_ext[1][1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ens.p_ext[2][2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ens.p_ext[1][2] == 0.0);
  CHECK(ens.p_ext[2][1] == 0.0);
  REQUIRE(ens.hybrid_probs.size() == 1);
  std::vector<std::pair<int, int>> arcs = {{1, 1}, {2, 2}};
  CHECK(ens.hybrid_probs.at(arcs) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ens.hybrid_boundary_probs.at({1, 2, 1, 2}) ==
        doctest::Approx(0.5).epsilon(1e-15));

  // Give the hybrid weight 3 (energy -rt ln 3): probability rises to 3/4.
  EnergyModel em = EnergyModel::zero();
  em.hybrid_init = -em.rt * std::log(3.0);
  ExactEnsemble w = brute_force(masks, pa, em);
  CHECK(w.z == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(w.hybrid_boundary_probs.at({1, 2, 1, 2}) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("recursive and naive enumerations agree on tiny instances") {
  std::mt19937_64 rng(90210);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 5);
    int m_len = 2 + static_cast<int>(rng() % 5);
    CompatibilityMasks masks = random_masks(rng, n, m_len, 0.5);
    std::vector<JointStructure> a = enumerate(masks);
    std::vector<JointStructure> b = naive_enumerate(masks);
    REQUIRE(a.size() == b.size());
    std::set<std::pair<std::string, std::string>> sa, sb;
    for (const auto& js : a) sa.insert(to_notation(js));
    for (const auto& js : b) sb.insert(to_notation(js));
    CHECK(sa == sb);
    CHECK(sa.size() == a.size());  // no duplicates
  }
}

TEST_CASE("every enumerated structure validates against its masks") {
  std::mt19937_64 rng(60601);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + static_cast<int>(rng() % 5);
    int m_len = 4 + static_cast<int>(rng() % 5);
    CompatibilityMasks masks = random_masks(rng, n, m_len, 0.5);
    for (const JointStructure& js : enumerate(masks))
      CHECK(validate(js, masks).all());
  }
}

TEST_CASE("size caps and candidate budgets raise TooLarge") {
  CHECK_THROWS_AS(enumerate(CompatibilityMasks::none(15, 4)), TooLarge);
  CHECK_THROWS_AS(enumerate(CompatibilityMasks::none(4, 15)), TooLarge);
  CompatibilityMasks masks = CompatibilityMasks::none(2, 2);
  for (int i = 1; i <= 2; ++i)
    for (int h = 1; h <= 2; ++h) masks.exterior[i][h] = true;
  OracleLimits lim;
  lim.max_candidates = 1;
  CHECK_THROWS_AS(enumerate(masks, lim), TooLarge);
}

TEST_CASE("hybrid probabilities grouped by leftmost arc stay below one") {
  std::mt19937_64 rng(444);
  PairedAlignment pa = tiny_pa("GGGGGG", "CCCCCC");
  CompatibilityMasks masks = random_masks(rng, 6, 6, 0.8);
  ExactEnsemble ens = brute_force(masks, pa, EnergyModel::defaults());
  std::map<std::pair<int, int>, double> by_first;
  for (const auto& kv : ens.hybrid_probs) {
    CHECK(kv.second >= 0.0);
    CHECK(kv.second <= 1.0);
    by_first[kv.first.front()] += kv.second;
  }
  for (const auto& kv : by_first) CHECK(kv.second <= 1.0 + 1e-12);
}

TEST_CASE("region probability on the two-position instance") {
  CompatibilityMasks masks = CompatibilityMasks::none(2, 2);
  for (int i = 1; i <= 2; ++i)
    for (int h = 1; h <= 2; ++h) masks.exterior[i][h] = true;
  ExactEnsemble ens =
      brute_force(masks, tiny_pa("GG", "CC"), EnergyModel::zero());
  CHECK(region_probability(ens, 0, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(region_probability(ens, 0, 2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(region_probability(ens, 1, 1, 2) == doctest::Approx(0.5).epsilon(1e-15));

  ExactEnsemble none = brute_force(CompatibilityMasks::none(2, 2),
                                   tiny_pa("GG", "CC"), EnergyModel::zero());
  CHECK(region_probability(none, 0, 1, 2) == 0.0);
}

TEST_CASE("enumeration order is deterministic") {
  std::mt19937_64 rng(31337);
  CompatibilityMasks masks = random_masks(rng, 6, 6, 0.6);
  std::vector<JointStructure> a = enumerate(masks);
  std::vector<JointStructure> b = enumerate(masks);
  REQUIRE(a.size() == b.size());
  for (size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

}  // TEST_SUITE
