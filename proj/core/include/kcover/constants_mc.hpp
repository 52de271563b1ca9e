#pragma once

#include <cstddef>
#include <cstdint>

#include "kcover/point_process.hpp"

namespace kcover {

// Monte Carlo estimate of the limiting first-moment constant C_{d,k}: the
// coefficient in E[#critical points in the window] ~ C * n * (window mass).
struct ConstantEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  int d = 0;
  int k = 0;
};

// d == 1 has a closed form (1 / (k-1)!) and ignores `samples`.  For d >= 2
// the estimate averages, over d+1 independent uniform directions on the unit
// sphere, the simplex volume they span times the indicator that the origin
// lies in the open simplex.  Deterministic in `seed`.
ConstantEstimate estimate_Cd(int d, int k, std::size_t samples, SeedSpec seed);

}  // namespace kcover
