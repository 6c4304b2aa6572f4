// riafold -- command-line front end implementation.
//
// Every output file is written atomically (temp file in the same directory,
// then rename), numeric values use "%.12g", and probabilities below 1e-12
// are written as "0" so that reruns produce byte-identical files.
#include "riafold/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "riafold/common.hpp"
#include "riafold/compat.hpp"
#include "riafold/constraints.hpp"
#include "riafold/dotplot.hpp"
#include "riafold/energy.hpp"
#include "riafold/engine.hpp"
#include "riafold/joint_structure.hpp"
#include "riafold/msa.hpp"
#include "riafold/oracle.hpp"
#include "riafold/params.hpp"

namespace riafold {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Everything the subcommands share: expanded alignment pair, admissibility
// masks (scores + constraints applied), energy model, and numeric scale.
struct Inputs {
  PairedAlignment pa;
  CompatibilityMasks masks;
  EnergyModel em;
  double scale = 1.0;
};

Inputs prepare(const RunConfig& cfg) {
  if (cfg.r_msa_path.empty() || cfg.s_msa_path.empty())
    throw FormatError("both --r-msa and --s-msa are required");

  MsaFormat fmt;
  if (cfg.format == "clustal")
    fmt = MsaFormat::Clustal;
  else if (cfg.format == "fasta")
    fmt = MsaFormat::AlignedFasta;
  else
    throw FormatError("unknown alignment format '" + cfg.format +
                      "' (expected clustal or fasta)");

  Msa r = parse_msa(read_file(cfg.r_msa_path), fmt,
                    Orientation::FivePrimeToThreePrime);
  Msa s = parse_msa(read_file(cfg.s_msa_path), fmt,
                    Orientation::ThreePrimeToFivePrime);

  Inputs in;
  in.pa = expand_interaction_pairs(r, s);

  ParamsFile pf;  // defaults
  if (!cfg.params_path.empty()) pf = load_params_file(cfg.params_path);
  if (cfg.zero_energy) pf.energy = EnergyModel::zero();
  in.em = pf.energy;
  in.scale = cfg.scale > 0.0 ? cfg.scale : pf.scale;

  ConstraintSet cs = ConstraintSet::none(in.pa.n(), in.pa.m_len());
  if (!cfg.constraints_path.empty()) {
    std::istringstream lines(read_file(cfg.constraints_path));
    std::vector<std::string> kept;
    std::string line;
    while (std::getline(lines, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                               line.back() == '\t'))
        line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      kept.push_back(line);
      if (kept.size() == 2) break;
    }
    if (kept.size() < 2)
      throw ConstraintError(
          "constraints file must hold two non-empty lines (R then S)");
    cs = parse_constraints(kept[0], kept[1]);
  }

  in.masks = build_masks(in.pa, pf.fold, cs);
  return in;
}

// One sampled/enumerated structure as a three-line record.
void append_record(std::ostringstream& out, long long index,
                   const JointStructure& js, const PairedAlignment& pa,
                   const EnergyModel& em) {
  auto notation = to_notation(js);
  out << "# " << index << "\tenergy\t"
      << format_value(structure_energy(js, pa, em)) << "\n"
      << notation.first << "\n"
      << notation.second << "\n";
}

void run_fold(const RunConfig& cfg, const Inputs& in, const std::string& dir) {
  InsideTables t =
      partition_function(in.pa, in.masks, in.em, EngineConfig{in.scale});

  std::string mode_r, mode_s;
  long long mode_count = 0;
  int drawn = 0;
  if (t.z() > 0.0 && cfg.samples > 0) {
    std::vector<JointStructure> draws = sample(t, cfg.samples, cfg.seed);
    drawn = static_cast<int>(draws.size());
    std::map<std::pair<std::string, std::string>, long long> freq;
    for (const JointStructure& js : draws) ++freq[to_notation(js)];
    for (const auto& kv : freq) {
      // std::map iterates in ascending key order, so on ties the
      // lexicographically smallest notation wins deterministically.
      if (kv.second > mode_count) {
        mode_count = kv.second;
        mode_r = kv.first.first;
        mode_s = kv.first.second;
      }
    }
  }

  std::ostringstream out;
  out << "z\t" << format_value(t.z()) << "\n";
  out << "free_energy\t" << format_value(t.free_energy()) << "\n";
  out << "samples\t" << drawn << "\n";
  out << "mode_count\t" << mode_count << "\n";
  out << "mode_structure_r\t" << mode_r << "\n";
  out << "mode_structure_s\t" << mode_s << "\n";
  write_text_atomic(dir + "/fold.txt", out.str());
}

void run_probs(const Inputs& in, const std::string& dir) {
  InsideTables t =
      partition_function(in.pa, in.masks, in.em, EngineConfig{in.scale});
  ProbMatrices pm = pair_probabilities(t);
  HybridProb hp = hybrid_probabilities(t);
  const int n = t.n(), m = t.m_len();

  std::ostringstream r_out;
  r_out << "i\tj\tp\n";
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      r_out << i << "\t" << j << "\t"
            << format_probability(pm.p_interior_r[i][j]) << "\n";
  write_text_atomic(dir + "/pair_probs_r.tsv", r_out.str());

  std::ostringstream s_out;
  s_out << "i\tj\tp\n";
  for (int h = 1; h <= m; ++h)
    for (int l = h + 1; l <= m; ++l)
      s_out << h << "\t" << l << "\t"
            << format_probability(pm.p_interior_s[h][l]) << "\n";
  write_text_atomic(dir + "/pair_probs_s.tsv", s_out.str());

  std::ostringstream e_out;
  e_out << "i\tj\tp\n";
  for (int i = 1; i <= n; ++i)
    for (int h = 1; h <= m; ++h)
      e_out << i << "\t" << h << "\t" << format_probability(pm.p_ext[i][h])
            << "\n";
  write_text_atomic(dir + "/pair_probs_ext.tsv", e_out.str());

  std::ostringstream h_out;
  h_out << "i\tj\th\tl\tp\n";
  for (const auto& kv : hp) {
    if (kv.second < 1e-12) continue;
    h_out << std::get<0>(kv.first) << "\t" << std::get<1>(kv.first) << "\t"
          << std::get<2>(kv.first) << "\t" << std::get<3>(kv.first) << "\t"
          << format_probability(kv.second) << "\n";
  }
  write_text_atomic(dir + "/hybrid_probs.tsv", h_out.str());
}

void run_sample(const RunConfig& cfg, const Inputs& in,
                const std::string& dir) {
  InsideTables t =
      partition_function(in.pa, in.masks, in.em, EngineConfig{in.scale});
  std::vector<JointStructure> draws = sample(t, cfg.samples, cfg.seed);
  std::ostringstream out;
  long long index = 1;
  for (const JointStructure& js : draws)
    append_record(out, index++, js, in.pa, in.em);
  write_text_atomic(dir + "/samples.txt", out.str());
}

void run_enumerate(const Inputs& in, const std::string& dir) {
  ExactEnsemble ens = brute_force(in.masks, in.pa, in.em);
  std::ostringstream out;
  out << "# count\t" << ens.count << "\tz\t" << format_value(ens.z) << "\n";
  long long index = 1;
  for (const WeightedStructure& ws : ens.structures) {
    auto notation = to_notation(ws.structure);
    out << "# " << index++ << "\tenergy\t" << format_value(ws.energy) << "\n"
        << notation.first << "\n"
        << notation.second << "\n";
  }
  write_text_atomic(dir + "/structures.txt", out.str());
}

void run_plot(const Inputs& in, const std::string& dir) {
  InsideTables t =
      partition_function(in.pa, in.masks, in.em, EngineConfig{in.scale});
  ProbMatrices pm = pair_probabilities(t);
  HybridProb hp = hybrid_probabilities(t);
  emit_dotplot(pm, hp, dir + "/dotplot.svg");
}

}  // namespace

std::string format_value(double v) {
  if (v == 0.0) return "0";  // avoid "-0"
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_probability(double p) {
  if (!(p >= 1e-12)) return "0";
  return format_value(p);
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + tmp);
    f << text;
    f.flush();
    if (!f) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move output into place: " + path);
  }
}

int run(const RunConfig& cfg, std::ostream& err) {
  try {
    const std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
    Inputs in = prepare(cfg);
    if (cfg.command == "fold")
      run_fold(cfg, in, dir);
    else if (cfg.command == "probs")
      run_probs(in, dir);
    else if (cfg.command == "sample")
      run_sample(cfg, in, dir);
    else if (cfg.command == "enumerate")
      run_enumerate(in, dir);
    else if (cfg.command == "plot")
      run_plot(in, dir);
    else
      throw FormatError("unknown command: " + cfg.command);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace riafold
