#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "kcover/errors.hpp"

namespace kcover {

// Numerical policy shared by the geometry kernel and everything built on it.
inline constexpr double kTolGeo = 1e-9;   // half-width of the sphere-boundary band
inline constexpr double kTolBary = 1e-9;  // open-simplex margin on barycentric coords
inline constexpr double kCondMax = 1e12;  // condition ceiling for circumsphere solves
inline constexpr double kRMax = 0.25;     // largest ball radius supported on the torus
inline constexpr int kMaxDim = 8;         // ambient dimension cap (1..3 exercised)

// Point on the unit torus [0,1)^d, stored with canonical coordinates.
struct TorusPoint {
  std::vector<double> x;

  int dim() const { return static_cast<int>(x.size()); }
};

// Canonical representative of v modulo 1, in [0,1).
inline double wrap01(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;  // guards against floor rounding for tiny negatives
  return r;
}

// Representative of t + Z closest to zero, in (-1/2, 1/2]; a tie at exactly
// half a period resolves to +1/2 so the lift is deterministic.
inline double wrap_delta(double t) { return t - std::ceil(t - 0.5); }

// Builds a TorusPoint, wrapping every coordinate into [0,1).
TorusPoint make_point(std::vector<double> coords);

// Shortest toroidal distance; never exceeds sqrt(d)/2.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

// Minimal displacement taking `from` to `to`, one wrap_delta per coordinate.
std::vector<double> displacement(const TorusPoint& from, const TorusPoint& to);

// Toroidal configuration unrolled into a single Euclidean chart around the
// first point. Valid (distance preserving for all pairs) as long as the set
// fits inside a ball of radius 1/4, which every caller here guarantees.
struct LiftedConfig {
  TorusPoint base;                            // the first input point
  std::vector<std::vector<double>> offsets;   // offsets[i] = lift(pts[i]) - base
  double diameter = 0.0;                      // max pairwise Euclidean distance
};

// Lifts pts into the chart of pts[0] using minimal displacements.
// Throws config_error on dimension mismatch or an empty input.
LiftedConfig lift(const std::vector<TorusPoint>& pts);

// Circumsphere of a subset X with 2 <= |X| <= d+1: the unique smallest sphere
// through all of X whose center lies in the affine hull of the lift of X.
struct Circumsphere {
  TorusPoint center;                  // center wrapped back onto the torus
  std::vector<double> center_lifted;  // center in the lift chart of X[0]
  double radius = 0.0;
  double cond = 0.0;                  // 1-norm condition estimate of the solve
};

// Throws degenerate_error when X is affinely dependent within working
// precision or the defining linear system has cond > kCondMax.
Circumsphere circumsphere(const std::vector<TorusPoint>& X);

// True iff the lift of c lies strictly inside the open simplex spanned by the
// lift of X: every barycentric coordinate exceeds kTolBary. c must lie in the
// affine hull of X (the circumcenter does by construction).
bool in_open_simplex(const std::vector<TorusPoint>& X, const TorusPoint& c);

// Volume of the (m-1)-simplex spanned by m Euclidean points (not torus
// points; callers pass lifted or raw coordinates). Returns 0 for degenerate
// input.
double simplex_volume(const std::vector<std::vector<double>>& pts);

// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

// Surface measure of the unit sphere S^{d-1}.
double unit_sphere_area(int d);

namespace detail {

// Flat kernels used by the enumeration hot path; `v` is row-major m x d with
// v[0] the zero vector of the lift chart.

struct CircumResult {
  double radius = 0.0;
  double cond = 0.0;
};

enum class CircumStatus {
  kOk,
  kCoincident,      // two rows closer than kTolGeo
  kSingular,        // affinely dependent within working precision
  kIllConditioned,  // cond >= kCondMax; radius/center still filled (untrusted)
};

// Solves for the circumcenter in the affine hull of the rows of v. Writes the
// center offset (size d) and all m barycentric coordinates. Never throws; on
// kIllConditioned the outputs hold the (inaccurate) solve so callers can
// still bound the radius away from the regime of interest.
CircumStatus circumsphere_try(const double* v, int m, int d, double* c_loc,
                              double* bary, CircumResult* res);

// Throwing wrapper over circumsphere_try: degenerate_error on any non-kOk
// status.
CircumResult circumsphere_flat(const double* v, int m, int d, double* c_loc,
                               double* bary);

// Gram-determinant volume of the (m-1)-simplex spanned by the rows of v.
double simplex_volume_flat(const double* v, int m, int d);

// Squared Euclidean norm of the difference of two d-vectors.
inline double dist2_flat(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

// Squared shortest toroidal distance between two canonical d-vectors.
inline double torus_dist2_flat(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = wrap_delta(a[i] - b[i]);
    s += t * t;
  }
  return s;
}

}  // namespace detail
}  // namespace kcover
