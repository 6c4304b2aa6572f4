// riafold -- SVG dot plot of pair and hybrid probabilities.
#include "riafold/dotplot.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace riafold {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string fmt_int(int v) { return std::to_string(v); }

constexpr double kCell = 12.0;
constexpr double kMargin = 46.0;
constexpr double kMinP = 1e-12;

// One probability square centered in grid cell (row, col), 1-based.
void square(std::ostringstream& out, int row, int col, double p, const char* kind, int i, int j) {
  if (!(p >= kMinP)) return;
  double side = kCell * std::sqrt(std::min(1.0, p));
  double cx = kMargin + (col - 0.5) * kCell;
  double cy = kMargin + (row - 0.5) * kCell;
  out << "<rect class=\"cell\" data-kind=\"" << kind << "\" data-i=\"" << i << "\" data-j=\"" << j
      << "\" data-p=\"" << fmt("%.6g", p) << "\" x=\"" << fmt("%.2f", cx - side / 2) << "\" y=\""
      << fmt("%.2f", cy - side / 2) << "\" width=\"" << fmt("%.2f", side) << "\" height=\""
      << fmt("%.2f", side) << "\" fill=\"#1f3c66\"/>\n";
}

}  // namespace

std::string dotplot_svg(const ProbMatrices& pm, const HybridProb& hp) {
  int n = pm.p_interior_r.empty() ? 0 : static_cast<int>(pm.p_interior_r.size()) - 1;
  int m = pm.p_interior_s.empty() ? 0 : static_cast<int>(pm.p_interior_s.size()) - 1;
  int total = n + m;
  double w = kMargin * 2 + total * kCell;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt("%.0f", w)
      << "\" height=\"" << fmt("%.0f", w) << "\" viewBox=\"0 0 " << fmt("%.0f", w) << " "
      << fmt("%.0f", w) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << fmt("%.0f", w) << "\" height=\"" << fmt("%.0f", w)
      << "\" fill=\"#ffffff\"/>\n";

  // Axes: outer frame plus the strand separators.
  double lo = kMargin, hi = kMargin + total * kCell;
  out << "<g class=\"axes\" stroke=\"#222222\" fill=\"none\" stroke-width=\"1\">\n";
  out << "<rect x=\"" << fmt("%.1f", lo) << "\" y=\"" << fmt("%.1f", lo) << "\" width=\""
      << fmt("%.1f", hi - lo) << "\" height=\"" << fmt("%.1f", hi - lo) << "\"/>\n";
  if (n > 0 && m > 0) {
    double sep = kMargin + n * kCell;
    out << "<line x1=\"" << fmt("%.1f", sep) << "\" y1=\"" << fmt("%.1f", lo) << "\" x2=\""
        << fmt("%.1f", sep) << "\" y2=\"" << fmt("%.1f", hi) << "\"/>\n";
    out << "<line x1=\"" << fmt("%.1f", lo) << "\" y1=\"" << fmt("%.1f", sep) << "\" x2=\""
        << fmt("%.1f", hi) << "\" y2=\"" << fmt("%.1f", sep) << "\"/>\n";
  }
  out << "</g>\n";

  // Tick labels every five columns on each strand block.
  out << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"8\" fill=\"#222222\">\n";
  for (int k = 1; k <= total; ++k) {
    bool isR = k <= n;
    int idx = isR ? k : k - n;
    if (idx != 1 && idx % 5 != 0) continue;
    std::string label = (isR ? "R" : "S") + fmt_int(idx);
    double c = kMargin + (k - 0.5) * kCell;
    out << "<text x=\"" << fmt("%.1f", c) << "\" y=\"" << fmt("%.1f", lo - 6)
        << "\" text-anchor=\"middle\">" << label << "</text>\n";
    out << "<text x=\"" << fmt("%.1f", lo - 6) << "\" y=\"" << fmt("%.1f", c + 3)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  out << "</g>\n";

  // Probability squares.
  out << "<g class=\"squares\">\n";
  std::ostringstream sq;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      square(sq, i, j, pm.p_interior_r[static_cast<size_t>(i)][static_cast<size_t>(j)], "rr", i, j);
  for (int h = 1; h <= m; ++h)
    for (int l = h + 1; l <= m; ++l)
      square(sq, n + h, n + l, pm.p_interior_s[static_cast<size_t>(h)][static_cast<size_t>(l)],
             "ss", h, l);
  for (int i = 1; i <= n; ++i)
    for (int h = 1; h <= m; ++h)
      square(sq, i, n + h, pm.p_ext[static_cast<size_t>(i)][static_cast<size_t>(h)], "rs", i, h);
  out << sq.str() << "</g>\n";

  // Hybrid boundary annotations above 10%.
  out << "<g class=\"hybrids\" font-family=\"sans-serif\" font-size=\"9\">\n";
  for (const auto& kv : hp) {
    if (!(kv.second > 0.10)) continue;
    auto [i, j, h, l] = kv.first;
    double x0 = kMargin + (n + h - 1) * kCell;
    double y0 = kMargin + (i - 1) * kCell;
    double bw = (l - h + 1) * kCell;
    double bh = (j - i + 1) * kCell;
    out << "<rect class=\"hybrid-box\" data-i=\"" << i << "\" data-j=\"" << j << "\" data-h=\"" << h
        << "\" data-l=\"" << l << "\" x=\"" << fmt("%.1f", x0) << "\" y=\"" << fmt("%.1f", y0)
        << "\" width=\"" << fmt("%.1f", bw) << "\" height=\"" << fmt("%.1f", bh)
        << "\" fill=\"none\" stroke=\"#b03030\" stroke-width=\"1\"/>\n";
    std::string label = "R[" + fmt_int(i) + ".." + fmt_int(j) + "]xS[" + fmt_int(h) + ".." +
                        fmt_int(l) + "] " + fmt("%.1f", kv.second * 100.0) + "%";
    out << "<text class=\"hybrid-label\" x=\"" << fmt("%.1f", x0 + bw + 3) << "\" y=\""
        << fmt("%.1f", y0 - 3) << "\" fill=\"#b03030\">" << label << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

void emit_dotplot(const ProbMatrices& pm, const HybridProb& hp, const std::string& path) {
  std::string svg = dotplot_svg(pm, hp);
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp);
    f << svg;
    f.flush();
    if (!f) throw IoError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move " + tmp + " to " + path);
  }
}

}  // namespace riafold
