// riafold -- command-line front end: subcommand execution and file contracts.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace riafold {

struct RunConfig {
  std::string command;  // fold | probs | sample | enumerate | plot
  std::string r_msa_path;
  std::string s_msa_path;
  std::string format = "clustal";  // or "fasta"
  std::string constraints_path;    // optional: two lines, R then S
  std::string params_path;         // optional key=value file
  int samples = 1000;
  uint64_t seed = 1;
  bool zero_energy = false;
  double scale = 0.0;  // <= 0: use the params-file value (default 1.0)
  std::string out_dir = ".";
};

// Executes one subcommand, writing its outputs into cfg.out_dir:
//   fold      -> fold.txt
//   probs     -> pair_probs_r.tsv, pair_probs_s.tsv, pair_probs_ext.tsv,
//                hybrid_probs.tsv
//   sample    -> samples.txt
//   enumerate -> structures.txt
//   plot      -> dotplot.svg
// Returns 0 on success; on any error prints one diagnostic line to `err`
// and returns 1. No partial output files are left behind (temp + rename).
int run(const RunConfig& cfg, std::ostream& err);

// Output helpers, shared with tests.
void write_text_atomic(const std::string& path, const std::string& text);
std::string format_value(double v);        // %.12g ("-0" normalized to "0")
std::string format_probability(double p);  // %.12g; values below 1e-12 -> "0"

}  // namespace riafold
