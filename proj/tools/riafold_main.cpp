// riafold -- executable entry point (argument parsing only; the work lives
// in the library's run()).
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "riafold/cli.hpp"

namespace {

void add_common_options(CLI::App* sub, riafold::RunConfig& rc) {
  sub->add_option("--r-msa", rc.r_msa_path,
                  "alignment of the first strand (read 5'->3')")
      ->required();
  sub->add_option("--s-msa", rc.s_msa_path,
                  "alignment of the second strand (read 3'->5')")
      ->required();
  sub->add_option("--format", rc.format, "alignment file format")
      ->check(CLI::IsMember({"clustal", "fasta"}));
  sub->add_option("--constraints", rc.constraints_path,
                  "structure constraints file (two lines: R then S)");
  sub->add_option("--params", rc.params_path, "parameter file (key = value)");
  sub->add_option("--seed", rc.seed, "random seed for sampling");
  sub->add_flag("--zero-energy", rc.zero_energy,
                "weight every structure 1 (z counts structures)");
  sub->add_option("--scale", rc.scale,
                  "numeric rescaling base per backbone position (> 0)");
  sub->add_option("--out", rc.out_dir, "output directory (default: .)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "riafold: joint interaction-structure ensembles for a pair of RNA "
      "alignments"};
  app.require_subcommand(1);
  riafold::RunConfig rc;

  CLI::App* fold = app.add_subcommand(
      "fold", "partition function, ensemble free energy, modal structure");
  CLI::App* probs = app.add_subcommand(
      "probs", "base-pair and hybrid probability tables");
  CLI::App* samp =
      app.add_subcommand("sample", "draw structures from the ensemble");
  CLI::App* enumerate_ = app.add_subcommand(
      "enumerate", "list every admissible structure (small inputs only)");
  CLI::App* plot =
      app.add_subcommand("plot", "probability dot plot as an SVG file");

  for (CLI::App* sub : {fold, probs, samp, enumerate_, plot})
    add_common_options(sub, rc);
  for (CLI::App* sub : {fold, samp})
    sub->add_option("--samples", rc.samples, "number of structures to draw")
        ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0; any usage error exits 2
  }

  for (CLI::App* sub : {fold, probs, samp, enumerate_, plot})
    if (sub->parsed()) rc.command = sub->get_name();

  return riafold::run(rc, std::cerr);
}
