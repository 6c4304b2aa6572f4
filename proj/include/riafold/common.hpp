// riafold -- shared aliases and error types.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace riafold {

using VD = std::vector<double>;
using VVD = std::vector<VD>;
using VI = std::vector<int>;
// vector<char> used as a bool vector to avoid vector<bool> proxy pitfalls.
using VB = std::vector<char>;
using VVB = std::vector<VB>;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingSpecies : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnmatchedSpecies : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConstraintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidStructure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParamsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace riafold
