// riafold -- constraint line parsing.
#include "riafold/constraints.hpp"

#include <algorithm>

namespace riafold {

namespace {

// Decodes one line into per-position chars, folding the UTF-8 minus sign
// (U+2212) into ASCII '-'.
std::string decode_line(const std::string& line, const char* which) {
  std::string out;
  for (size_t k = 0; k < line.size();) {
    unsigned char c = static_cast<unsigned char>(line[k]);
    if (c == 0xE2 && k + 2 < line.size() &&
        static_cast<unsigned char>(line[k + 1]) == 0x88 &&
        static_cast<unsigned char>(line[k + 2]) == 0x92) {
      out.push_back('-');
      k += 3;
      continue;
    }
    if (c >= 0x80)
      throw ConstraintError(std::string(which) + " constraint line has a non-ASCII symbol");
    out.push_back(static_cast<char>(c));
    ++k;
  }
  return out;
}

void parse_strand(const std::string& raw, bool is_r, std::string& sym,
                  std::vector<std::pair<int, int>>& forced_int,
                  std::vector<int>& ext_marks) {
  const char* which = is_r ? "R" : "S";
  const char ext_open = '[';
  const char ext_close = ']';
  std::vector<int> stack;
  sym.clear();
  for (size_t k = 0; k < raw.size(); ++k) {
    char c = raw[k];
    int pos = static_cast<int>(k) + 1;
    switch (c) {
      case '.': case 'x': case '-': case '^': case '*':
        sym.push_back(c);
        break;
      case '(':
        stack.push_back(pos);
        sym.push_back('.');
        break;
      case ')':
        if (stack.empty())
          throw ConstraintError(std::string(which) + " constraints: unbalanced ')' at position " +
                                std::to_string(pos));
        forced_int.emplace_back(stack.back(), pos);
        stack.pop_back();
        sym.push_back('.');
        break;
      default:
        if (c == (is_r ? ext_open : ext_close)) {
          ext_marks.push_back(pos);
          sym.push_back('.');
          break;
        }
        if (c == (is_r ? ext_close : ext_open))
          throw ConstraintError(std::string(which) + " constraints: '" + std::string(1, c) +
                                "' belongs on the other strand (position " + std::to_string(pos) + ")");
        throw ConstraintError(std::string(which) + " constraints: illegal symbol '" +
                              std::string(1, c) + "' at position " + std::to_string(pos));
    }
  }
  if (!stack.empty())
    throw ConstraintError(std::string(which) + " constraints: unbalanced '(' at position " +
                          std::to_string(stack.back()));
  std::sort(forced_int.begin(), forced_int.end());
}

}  // namespace

ConstraintSet ConstraintSet::none(int n, int m_len) {
  ConstraintSet cs;
  cs.r_sym.assign(static_cast<size_t>(n), '.');
  cs.s_sym.assign(static_cast<size_t>(m_len), '.');
  return cs;
}

ConstraintSet parse_constraints(const std::string& r_line, const std::string& s_line) {
  ConstraintSet cs;
  std::vector<int> r_marks, s_marks;
  parse_strand(decode_line(r_line, "R"), true, cs.r_sym, cs.forced_r, r_marks);
  parse_strand(decode_line(s_line, "S"), false, cs.s_sym, cs.forced_s, s_marks);
  if (r_marks.size() != s_marks.size())
    throw ConstraintError("constraints: " + std::to_string(r_marks.size()) + " '[' in R vs " +
                          std::to_string(s_marks.size()) + " ']' in S");
  for (size_t k = 0; k < r_marks.size(); ++k)
    cs.forced_ext.emplace_back(r_marks[k], s_marks[k]);
  return cs;
}

}  // namespace riafold
