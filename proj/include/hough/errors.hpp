#pragma once

#include <stdexcept>
#include <string>

namespace hough {

// Invalid input: bad names, dimension mismatches, malformed files.
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A point whose Hough polynomial vanishes identically (affine base point) or
// drops below the family's generic degree.
struct degenerate_point_error : std::runtime_error {
  degenerate_point_error(const std::string& what, std::size_t index)
      : std::runtime_error(what), point_index(index) {}
  std::size_t point_index;
};

struct unsupported_dimension_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The accumulator never received a vote.
struct no_signal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct sampling_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hough
