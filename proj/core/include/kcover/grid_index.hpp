#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kcover/point_process.hpp"

namespace kcover {

// Uniform bucket grid over the torus with wrapped neighbor lookups. Buckets
// are stored in CSR form, so construction is linear in the cloud size and
// queries never allocate on the hot path. All query results are exact: the
// grid only prunes, every reported distance is the true toroidal distance.
class SpatialIndex {
 public:
  // cell_size must lie in (0, 1/4]. The axis cell count is floor(1/cell_size),
  // clamped so the bucket table stays linear in the cloud size.
  SpatialIndex(const PointCloud& cloud, double cell_size);

  // Default sizing keeps about k points per cell: min(1/4, (k/n)^(1/d)).
  static double default_cell_size(std::size_t n, int k, int dim);

  int cells_per_axis() const { return cells_axis_; }
  double cell_width() const { return cell_width_; }
  const PointCloud& cloud() const { return *cloud_; }

  // Distance from x to its k-th nearest cloud point. Exact; throws
  // insufficient_points_error when the cloud holds fewer than k points.
  double knn_distance(const double* x, int k) const;
  double knn_distance(const TorusPoint& x, int k) const;

  // Number of cloud points strictly inside the ball B(c, rho), excluding the
  // ids in `exclude` (sorted). "Strictly inside" means d_T < rho - kTolGeo;
  // a non-excluded point in the band [rho - kTolGeo, rho + kTolGeo] raises
  // marginal_error because the strict count is not trustworthy there.
  int count_in_ball(const double* c, double rho,
                    std::span<const std::uint32_t> exclude) const;

  // Same contract, but returns limit+1 as soon as more than `limit` strict
  // interior points are certain. A marginal point only raises when the final
  // count stayed at or below the limit, where it could flip a decision.
  int count_in_ball_at_most(const double* c, double rho,
                            std::span<const std::uint32_t> exclude,
                            int limit) const;

  // Appends the ids of all points with d_T(c, p) <= radius, in increasing id
  // order.
  void gather(const double* c, double radius,
              std::vector<std::uint32_t>& out) const;

 private:
  int cell_of_axis(double x) const;
  std::size_t cell_id(const int* ci) const;

  template <class Visit>
  void visit_box(const double* c, double radius, Visit&& visit) const;

  const PointCloud* cloud_;
  int dim_;
  int cells_axis_;
  double cell_width_;
  std::vector<std::uint32_t> bucket_start_;
  std::vector<std::uint32_t> ids_;
};

}  // namespace kcover
