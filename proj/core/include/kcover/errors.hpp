#pragma once

#include <stdexcept>
#include <string>

namespace kcover {

// Base class for all errors thrown by this library.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user input: bad dimension, radius out of range, malformed config.
struct config_error : error {
  explicit config_error(const std::string& what) : error(what) {}
};

// A query asked for more neighbors than the cloud contains.
struct insufficient_points_error : config_error {
  explicit insufficient_points_error(const std::string& what) : config_error(what) {}
};

// Numerically unreliable geometry: rank-deficient circumsphere system,
// condition estimate above the ceiling, or an unresolvable antipodal tie.
// Statistical drivers treat the whole trial as degenerate when this escapes.
struct degenerate_error : error {
  explicit degenerate_error(const std::string& what) : error(what) {}
};

// A non-generator sample point sits within the boundary tolerance band of a
// candidate sphere, so the strict interior count cannot be trusted.
struct marginal_error : degenerate_error {
  explicit marginal_error(const std::string& what) : degenerate_error(what) {}
};

// The requested radius regime is outside the range where the critical-point
// criterion is valid and the fallback could not resolve the query either.
struct out_of_regime_error : error {
  explicit out_of_regime_error(const std::string& what) : error(what) {}
};

// A statistic is undefined for the supplied data: too few trials, or an
// all-empty sample where a mean or dispersion is required.
struct insufficient_data_error : error {
  explicit insufficient_data_error(const std::string& what) : error(what) {}
};

}  // namespace kcover
