#pragma once

#include <stdexcept>
#include <string>

namespace synckit {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFinite : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotHurwitz : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoStabilizingSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResidualTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// More than one Laplacian eigenvalue at zero: the graph is not connected
// and synchronization is impossible.
struct MultipleZeroEigenvalues : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownPreset : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyValueList : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FrozenGainViolatesNormBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigParse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace synckit
