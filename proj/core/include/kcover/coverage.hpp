#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "kcover/critical_points.hpp"

namespace kcover {

enum class Covered {
  kYes,
  kNo,
  kInconclusive,  // grid decider only: resolution too coarse to certify
  kOutOfRegime,   // vacancy may extend beyond the supported radius 1/4
};

struct CoverageVerdict {
  Covered status = Covered::kInconclusive;
  std::optional<TorusPoint> witness;  // uncovered location when status == kNo
  double witness_depth = 0.0;         // k-NN distance at the witness
  std::string detail;                 // cause for kInconclusive / kOutOfRegime
};

// Decides whether every torus point lies within r of at least k cloud points,
// using the critical point structure: the k-NN distance maximum is attained
// at an index-d critical point, so coverage holds iff no such point has
// rho > r. A certified ceiling keeps the enumeration window narrow. Throws
// marginal_error when the verdict would hinge on a critical value within
// kTolGeo of r, out_of_regime_error when r > 1/4, insufficient_points_error
// when the cloud holds fewer than k points.
CoverageVerdict is_covered_morse(const SpatialIndex& index, int k, double r);

// Independent lattice decider with spacing 1/ceil(1/h): covered when every
// node value is at most r - h*sqrt(d)/2 (Lipschitz certificate), uncovered
// when some node value exceeds r + kTolGeo (the node itself is a witness),
// inconclusive otherwise. Works for any r > 0.
CoverageVerdict is_covered_grid(const SpatialIndex& index, int k, double r,
                                double h);

// Number of connected components of the vacant region {x : d_k(x) > r}
// sampled on the same lattice as is_covered_grid, with 2d-neighbor adjacency
// across the periodic boundary. Zero when no node is vacant.
std::size_t vacancy_components(const SpatialIndex& index, int k, double r,
                               double h);

}  // namespace kcover
