// riafold -- params unit suite: pair types, defaults, key=value parsing.
#include "doctest.h"
#include "riafold/common.hpp"
#include "riafold/params.hpp"

using namespace riafold;

TEST_SUITE("params") {

TEST_CASE("pair types: the six admissible pairs and nothing else") {
  CHECK(pair_type('A', 'U') == PT_AU);
  CHECK(pair_type('U', 'A') == PT_UA);
  CHECK(pair_type('G', 'C') == PT_GC);
  CHECK(pair_type('C', 'G') == PT_CG);
  CHECK(pair_type('G', 'U') == PT_GU);
  CHECK(pair_type('U', 'G') == PT_UG);
  CHECK(pair_type('A', 'G') == -1);
  CHECK(pair_type('A', 'A') == -1);
  CHECK(pair_type('.', 'G') == -1);
  CHECK(pair_type('G', '.') == -1);
}

TEST_CASE("default model values") {
  EnergyModel em = EnergyModel::defaults();
  // Watson-Crick over Watson-Crick stacks: -2.0; any stack involving a
  // wobble pair: -1.3.
  CHECK(em.stack[PT_GC][PT_CG] == -2.0);
  CHECK(em.stack[PT_AU][PT_UA] == -2.0);
  CHECK(em.stack[PT_GC][PT_AU] == -2.0);
  CHECK(em.stack[PT_GU][PT_GC] == -1.3);
  CHECK(em.stack[PT_GC][PT_UG] == -1.3);
  CHECK(em.stack[PT_GU][PT_UG] == -1.3);
  CHECK(em.hairpin_base == 3.0);
  CHECK(em.hairpin_per_nt == 0.3);
  CHECK(em.interior_base == 1.0);
  CHECK(em.interior_per_nt == 0.3);
  CHECK(em.bulge_base == 2.0);
  CHECK(em.bulge_per_nt == 0.3);
  CHECK(em.multi_close == 3.4);
  CHECK(em.multi_branch == 0.4);
  CHECK(em.multi_unpaired == 0.1);
  CHECK(em.hybrid_init == 1.0);
  CHECK(em.kissing_penalty == 2.0);
  CHECK(em.rt == 0.6163);
}

TEST_CASE("zero model: every energy term zero, rt still positive") {
  EnergyModel em = EnergyModel::zero();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) CHECK(em.stack[static_cast<size_t>(a)][static_cast<size_t>(b)] == 0.0);
  CHECK(em.hairpin_base == 0.0);
  CHECK(em.hybrid_init == 0.0);
  CHECK(em.kissing_penalty == 0.0);
  CHECK(em.rt > 0.0);
}

TEST_CASE("fold-param defaults") {
  FoldParams fp;
  CHECK(fp.phi1 == 1.0);
  CHECK(fp.bstar_r == -0.25);
  CHECK(fp.bstar_s == -0.25);
  CHECK(fp.bstar_ext == -0.25);
  CHECK(fp.min_hairpin == 3);
}

TEST_CASE("empty file keeps every default") {
  ParamsFile pf = parse_params("");
  CHECK(pf.energy.rt == 0.6163);
  CHECK(pf.energy.stack[PT_GC][PT_GC] == -2.0);
  CHECK(pf.fold.phi1 == 1.0);
  CHECK(pf.scale == 1.0);
}

TEST_CASE("single override leaves everything else untouched") {
  ParamsFile pf = parse_params("rt = 1.0\n");
  CHECK(pf.energy.rt == 1.0);
  CHECK(pf.energy.hairpin_base == 3.0);
  CHECK(pf.fold.bstar_r == -0.25);
}

TEST_CASE("comments and blank lines are allowed") {
  ParamsFile pf = parse_params("# comment\n\nphi1 = 0.5\n  # indented comment\n");
  CHECK(pf.fold.phi1 == 0.5);
}

TEST_CASE("stack entries override individually") {
  ParamsFile pf = parse_params("stack_GC_AU = -1.7\n");
  CHECK(pf.energy.stack[PT_GC][PT_AU] == -1.7);
  CHECK(pf.energy.stack[PT_AU][PT_GC] == -2.0);
}

TEST_CASE("invalid inputs raise ParamsError") {
  CHECK_THROWS_AS(parse_params("rt = 0\n"), ParamsError);
  CHECK_THROWS_AS(parse_params("rt = -1\n"), ParamsError);
  CHECK_THROWS_AS(parse_params("scale = 0\n"), ParamsError);
  CHECK_THROWS_AS(parse_params("min_hairpin = -1\n"), ParamsError);
  CHECK_THROWS_AS(parse_params("garbage line\n"), ParamsError);
  CHECK_THROWS_AS(parse_params("no_such_key = 1\n"), ParamsError);
  CHECK_THROWS_AS(parse_params("rt = abc\n"), ParamsError);
  CHECK_THROWS_AS(parse_params("stack_GC_XX = -1\n"), ParamsError);
}

TEST_CASE("missing file raises IoError") {
  CHECK_THROWS_AS(load_params_file("/nonexistent/riafold.params"), IoError);
}

}  // TEST_SUITE
