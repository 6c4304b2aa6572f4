// riafold -- parameter model and key=value file loading.
#include "riafold/params.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace riafold {

int base_code(char c) {
  switch (c) {
    case 'A': return BASE_A;
    case 'C': return BASE_C;
    case 'G': return BASE_G;
    case 'U': return BASE_U;
    case '.': return BASE_GAP;
    default: return -1;
  }
}

int pair_type(char x, char y) {
  int a = base_code(x), b = base_code(y);
  if (a == BASE_A && b == BASE_U) return PT_AU;
  if (a == BASE_U && b == BASE_A) return PT_UA;
  if (a == BASE_G && b == BASE_C) return PT_GC;
  if (a == BASE_C && b == BASE_G) return PT_CG;
  if (a == BASE_G && b == BASE_U) return PT_GU;
  if (a == BASE_U && b == BASE_G) return PT_UG;
  return -1;
}

const char* pair_type_name(int pt) {
  static const char* kNames[6] = {"AU", "UA", "GC", "CG", "GU", "UG"};
  return (pt >= 0 && pt < 6) ? kNames[pt] : "??";
}

EnergyModel EnergyModel::defaults() {
  EnergyModel em;
  auto is_wobble = [](int pt) { return pt == PT_GU || pt == PT_UG; };
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      em.stack[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          (is_wobble(a) || is_wobble(b)) ? -1.3 : -2.0;
  return em;
}

EnergyModel EnergyModel::zero() {
  EnergyModel em;
  for (auto& row : em.stack) row.fill(0.0);
  em.hairpin_base = em.hairpin_per_nt = 0.0;
  em.interior_base = em.interior_per_nt = 0.0;
  em.bulge_base = em.bulge_per_nt = 0.0;
  em.multi_close = em.multi_branch = em.multi_unpaired = 0.0;
  em.hybrid_init = 0.0;
  em.kissing_penalty = 0.0;
  return em;
}

namespace {

int pair_type_from_name(const std::string& s) {
  for (int pt = 0; pt < 6; ++pt)
    if (s == pair_type_name(pt)) return pt;
  return -1;
}

}  // namespace

ParamsFile parse_params(const std::string& text) {
  ParamsFile pf;  // starts from the full default model

  std::map<std::string, std::function<void(double)>> setters;
  auto bind = [&](const std::string& key, double* slot) {
    setters[key] = [slot](double v) { *slot = v; };
  };
  bind("phi1", &pf.fold.phi1);
  bind("bstar_r", &pf.fold.bstar_r);
  bind("bstar_s", &pf.fold.bstar_s);
  bind("bstar_ext", &pf.fold.bstar_ext);
  setters["min_hairpin"] = [&pf](double v) { pf.fold.min_hairpin = static_cast<int>(v); };
  bind("hairpin_base", &pf.energy.hairpin_base);
  bind("hairpin_per_nt", &pf.energy.hairpin_per_nt);
  bind("interior_base", &pf.energy.interior_base);
  bind("interior_per_nt", &pf.energy.interior_per_nt);
  bind("bulge_base", &pf.energy.bulge_base);
  bind("bulge_per_nt", &pf.energy.bulge_per_nt);
  bind("multi_close", &pf.energy.multi_close);
  bind("multi_branch", &pf.energy.multi_branch);
  bind("multi_unpaired", &pf.energy.multi_unpaired);
  bind("hybrid_init", &pf.energy.hybrid_init);
  bind("kissing_penalty", &pf.energy.kissing_penalty);
  bind("rt", &pf.energy.rt);
  bind("scale", &pf.scale);

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);

    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParamsError("line " + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      auto x = s.find_first_not_of(" \t");
      auto y = s.find_last_not_of(" \t");
      return (x == std::string::npos) ? std::string() : s.substr(x, y - x + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ParamsError("line " + std::to_string(lineno) + ": expected key = value");

    double v;
    try {
      size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw ParamsError("line " + std::to_string(lineno) + ": bad numeric value '" + val + "'");
    }

    if (key.rfind("stack_", 0) == 0) {
      // stack_XY_ZW overrides one entry of the stack terminal table.
      if (key.size() != 11 || key[8] != '_')
        throw ParamsError("line " + std::to_string(lineno) + ": bad stack key '" + key + "'");
      int outer = pair_type_from_name(key.substr(6, 2));
      int inner = pair_type_from_name(key.substr(9, 2));
      if (outer < 0 || inner < 0)
        throw ParamsError("line " + std::to_string(lineno) + ": bad stack key '" + key + "'");
      pf.energy.stack[static_cast<size_t>(outer)][static_cast<size_t>(inner)] = v;
      continue;
    }
    auto it = setters.find(key);
    if (it == setters.end())
      throw ParamsError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(v);
  }

  if (!(pf.energy.rt > 0.0)) throw ParamsError("rt must be > 0");
  if (!(pf.scale > 0.0)) throw ParamsError("scale must be > 0");
  if (pf.fold.min_hairpin < 0) throw ParamsError("min_hairpin must be >= 0");
  return pf;
}

ParamsFile load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open params file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str());
}

EnergyModel load_params(const std::string& path) { return load_params_file(path).energy; }

}  // namespace riafold
