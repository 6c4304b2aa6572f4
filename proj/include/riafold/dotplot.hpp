// riafold -- SVG dot plot of pair and hybrid probabilities.
#pragma once

#include <string>

#include "riafold/engine.hpp"

namespace riafold {

// One combined grid over both strands: interior-R pairs in the upper-left
// block, interior-S in the lower-right, exterior pairs in the upper-right.
// Each probability is drawn as a square whose AREA is proportional to it;
// probabilities below 1e-12 draw nothing. Maximal-hybrid boundaries with
// probability above 10% are outlined and labeled with their boundary and a
// one-decimal percentage. The output is self-contained SVG 1.1.
std::string dotplot_svg(const ProbMatrices& pm, const HybridProb& hp);

// Renders and writes the plot atomically (temp file + rename).
// Throws IoError when the path cannot be written.
void emit_dotplot(const ProbMatrices& pm, const HybridProb& hp, const std::string& path);

}  // namespace riafold
