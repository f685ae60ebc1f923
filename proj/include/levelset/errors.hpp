#pragma once

#include <stdexcept>
#include <string>

namespace levelset {

/// Malformed input file or configuration document.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A bandwidth selector could not produce a bandwidth (e.g. the level
/// lambda is above every estimated density, or no grid point satisfies
/// the selection rule).
class SelectionError : public std::runtime_error {
 public:
  explicit SelectionError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure of a Monte Carlo routine: the importance-sampling
/// pilot does not dominate the target, or a rejection sampler exceeded
/// its rejection cap.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levelset
