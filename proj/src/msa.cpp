// riafold -- alignment parsing and species-pair expansion.
#include "riafold/msa.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace riafold {

namespace {

char normalize_symbol(char c, const std::string& row_name) {
  char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == 'T') u = 'U';
  if (u == '-') u = '.';
  if (u == 'A' || u == 'C' || u == 'G' || u == 'U' || u == '.') return u;
  throw FormatError("illegal symbol '" + std::string(1, c) + "' in record '" + row_name + "'");
}

std::string extract_species(const std::string& name) {
  auto pos = name.rfind('|');
  if (pos == std::string::npos || pos + 1 == name.size())
    throw MissingSpecies("record '" + name + "' carries no '|species' tag");
  return name.substr(pos + 1);
}

void finalize(Msa& a) {
  if (a.rows.empty()) throw FormatError("alignment has no records");
  a.width = static_cast<int>(a.rows[0].symbols.size());
  if (a.width == 0) throw FormatError("record '" + a.rows[0].name + "' is empty");
  for (auto& row : a.rows) {
    if (static_cast<int>(row.symbols.size()) != a.width)
      throw FormatError("ragged alignment: record '" + row.name + "' has width " +
                        std::to_string(row.symbols.size()) + ", expected " +
                        std::to_string(a.width));
    row.species = extract_species(row.name);
  }
  for (int col = 0; col < a.width; ++col) {
    bool all_gap = true;
    for (const auto& row : a.rows)
      if (row.symbols[static_cast<size_t>(col)] != '.') { all_gap = false; break; }
    if (all_gap)
      throw FormatError("column " + std::to_string(col + 1) + " consists entirely of gaps");
  }
}

Msa parse_fasta(const std::string& text, Orientation orientation) {
  Msa a;
  a.orientation = orientation;
  std::istringstream in(text);
  std::string line;
  MsaRow* cur = nullptr;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      std::string name = line.substr(1);
      // Trim surrounding whitespace; keep the full header as the name.
      auto b = name.find_first_not_of(" \t");
      auto e = name.find_last_not_of(" \t");
      name = (b == std::string::npos) ? std::string() : name.substr(b, e - b + 1);
      if (name.empty()) throw FormatError("FASTA record with empty name");
      a.rows.push_back(MsaRow{name, "", ""});
      cur = &a.rows.back();
    } else {
      if (!cur) throw FormatError("sequence data before first FASTA header");
      for (char c : line) {
        if (c == ' ' || c == '\t') continue;
        cur->symbols.push_back(normalize_symbol(c, cur->name));
      }
    }
  }
  finalize(a);
  return a;
}

Msa parse_clustal(const std::string& text, Orientation orientation) {
  Msa a;
  a.orientation = orientation;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  std::map<std::string, size_t> index;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line.empty()) continue;
      if (line.rfind("CLUSTAL", 0) != 0 && line.rfind("Clustal", 0) != 0)
        throw FormatError("missing CLUSTAL header line");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    // Conservation lines start with whitespace; sequence lines start with a name.
    if (line[0] == ' ' || line[0] == '\t') continue;
    std::istringstream fields(line);
    std::string name, chunk, tail;
    fields >> name >> chunk;
    if (chunk.empty()) throw FormatError("CLUSTAL record line without sequence: '" + line + "'");
    // An optional trailing cumulative-length column is ignored.
    if (fields >> tail) {
      if (!std::all_of(tail.begin(), tail.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw FormatError("unexpected trailing field '" + tail + "' in CLUSTAL line");
    }
    auto it = index.find(name);
    if (it == index.end()) {
      index.emplace(name, a.rows.size());
      a.rows.push_back(MsaRow{name, "", ""});
      it = index.find(name);
    }
    MsaRow& row = a.rows[it->second];
    for (char c : chunk) row.symbols.push_back(normalize_symbol(c, name));
  }
  if (!saw_header) throw FormatError("missing CLUSTAL header line");
  finalize(a);
  return a;
}

}  // namespace

Msa parse_msa(const std::string& text, MsaFormat format, Orientation orientation) {
  return format == MsaFormat::AlignedFasta ? parse_fasta(text, orientation)
                                           : parse_clustal(text, orientation);
}

PairedAlignment expand_interaction_pairs(const Msa& r, const Msa& s) {
  std::map<std::string, std::vector<int>> s_rows_by_species;
  for (size_t k = 0; k < s.rows.size(); ++k)
    s_rows_by_species[s.rows[k].species].push_back(static_cast<int>(k));

  // Species in first-appearance order of r.
  std::vector<std::string> order;
  std::map<std::string, std::vector<int>> r_rows_by_species;
  for (size_t k = 0; k < r.rows.size(); ++k) {
    const std::string& sp = r.rows[k].species;
    if (!r_rows_by_species.count(sp)) order.push_back(sp);
    r_rows_by_species[sp].push_back(static_cast<int>(k));
  }

  for (const auto& sp : order)
    if (!s_rows_by_species.count(sp))
      throw UnmatchedSpecies("species '" + sp + "' has no partner row in the second alignment");
  for (const auto& [sp, rows] : s_rows_by_species) {
    (void)rows;
    if (!r_rows_by_species.count(sp))
      throw UnmatchedSpecies("species '" + sp + "' has no partner row in the first alignment");
  }

  PairedAlignment pa;
  for (const auto& sp : order)
    for (int ri : r_rows_by_species[sp])
      for (int si : s_rows_by_species[sp]) {
        pa.rmatrix.push_back(r.rows[static_cast<size_t>(ri)].symbols);
        pa.smatrix.push_back(s.rows[static_cast<size_t>(si)].symbols);
        pa.provenance.push_back(PairProvenance{ri, si, sp});
      }
  pa.m = static_cast<int>(pa.rmatrix.size());
  return pa;
}

std::string consensus(const Msa& a) {
  static const std::string kOrder = "ACGU.";
  std::string out;
  out.reserve(static_cast<size_t>(a.width));
  for (int col = 0; col < a.width; ++col) {
    int counts[5] = {0, 0, 0, 0, 0};
    for (const auto& row : a.rows) {
      auto pos = kOrder.find(row.symbols[static_cast<size_t>(col)]);
      ++counts[pos];
    }
    int best = 0;
    for (int k = 1; k < 5; ++k)
      if (counts[k] > counts[best]) best = k;
    out.push_back(kOrder[static_cast<size_t>(best)]);
  }
  return out;
}

}  // namespace riafold
