#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "kcover/grid_index.hpp"

namespace kcover {

// Critical point of the k-th nearest neighbor distance function. The center
// is the circumcenter of the generator subset, rho the circumradius, and the
// Morse index is mu = |generators| + interior_count - k.
struct CriticalPoint {
  TorusPoint center;
  double rho = 0.0;
  int mu = 0;
  std::vector<std::uint32_t> generators;  // sorted cloud ids, 2 <= m <= d+1
  int interior_count = 0;                 // points strictly inside B(center, rho)
  std::int64_t delta = 0;                 // multiplicity binom(m-1, mu)
};

// Radius window (r_min, r_max] and inclusive index range for enumeration.
struct EnumerationWindow {
  double r_min = 0.0;
  double r_max = kRMax;
  int mu_min = 0;
  int mu_max = kMaxDim;
};

// Certified upper bound for every critical value of the k-NN distance
// function: the function is 1-Lipschitz, so its maximum over the torus is at
// most the lattice maximum plus half a lattice diagonal. Every critical value
// is a value of the function, hence at most `upper`.
struct CeilingBound {
  double upper = 0.0;     // >= max over the torus of the k-NN distance
  double max_node = 0.0;  // largest value seen on the lattice (a lower bound)
  double spacing = 0.0;   // lattice spacing of the final refinement pass
  TorusPoint arg_max;     // lattice node where max_node was attained
};

CeilingBound critical_value_ceiling(const SpatialIndex& index, int k);

// Classifies one generator subset (sorted distinct cloud ids). Returns the
// critical point, or nullopt when the subset is not critical: circumcenter
// outside the open simplex, interior count out of range, or circumradius
// beyond the supported 1/4. Throws degenerate_error for coincident or
// unresolvably ill-conditioned input and marginal_error when a non-generator
// point sits on the sphere boundary band.
std::optional<CriticalPoint> classify_subset(
    const std::vector<std::uint32_t>& subset, const SpatialIndex& index,
    int k);

// All critical points with rho in (win.r_min, win.r_max] and index in
// [win.mu_min, win.mu_max], sorted by rho. Complete within the window: every
// generator subset whose members fit in a ball of radius r_max is visited
// exactly once (the smallest id owns the subset). Antipodal ties expand into
// every consistent lift, so mirrored centers are both reported. Degenerate
// and marginal outcomes propagate; statistical drivers flag the whole trial.
std::vector<CriticalPoint> enumerate_critical_points(
    const SpatialIndex& index, int k, const EnumerationWindow& win);

// Focused variant for windows that sit near the top of the value range.
// Yields exactly the critical points of (win.r_min, min(win.r_max,
// bound.upper)] along with the ceiling certificate, but reuses the
// certifying lattice sweep to skip every neighborhood whose k-NN values
// stay below r_min: a center above r_min lies within half a lattice
// diagonal of a node reading above r_min minus that slack, and generators
// lie on the sphere of their center. Statistical drivers over the extreme
// window spend their enumeration time near the deep vacancies only.
struct HighWindowResult {
  std::vector<CriticalPoint> crits;
  CeilingBound bound;
};
HighWindowResult enumerate_high_window(const SpatialIndex& index, int k,
                                       const EnumerationWindow& win);

// Number of critical points per index with rho in (r, 1/4], computed with a
// certified ceiling so only the occupied radius range is enumerated. The
// returned vector has dim+1 entries (index 0..d).
std::vector<std::int64_t> count_by_index(const SpatialIndex& index, int k,
                                         double r);
std::int64_t count_by_index(const SpatialIndex& index, int k, double r,
                            int mu);

// Number of already-enumerated critical points of the given index with
// rho >= r. Lets one enumeration serve a whole grid of thresholds.
std::int64_t count_by_index(std::span<const CriticalPoint> crits, int mu,
                            double r);

// Line-oriented serialization, one critical point per line.
void write_critical_jsonl(const std::vector<CriticalPoint>& pts,
                          std::ostream& os);
std::vector<CriticalPoint> read_critical_jsonl(std::istream& is, int dim);

namespace detail {

// Shared classification core used by both the public classifier and the
// enumerator. `v` holds the lifted offsets (row-major m x d, v[0] = 0) and
// `ids` the sorted generator ids. Appends to `out` when the subset is
// critical and inside the window.
bool classify_lifted(const double* v, int m, const std::uint32_t* ids,
                     const SpatialIndex& index, int k,
                     const EnumerationWindow& win, const double* base,
                     std::vector<CriticalPoint>& out);

}  // namespace detail
}  // namespace kcover
