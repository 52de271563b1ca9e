#include "kcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace kcover {
namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDim)
    throw config_error("dimension must be in [1, " + std::to_string(kMaxDim) +
                       "], got " + std::to_string(d));
}

void check_same_dim(const std::vector<TorusPoint>& pts) {
  if (pts.empty()) throw config_error("empty point list");
  const int d = pts[0].dim();
  check_dim(d);
  for (const auto& p : pts)
    if (p.dim() != d) throw config_error("mixed dimensions in point list");
}

// Dense LU with partial pivoting for the tiny (<= kMaxDim) systems that
// appear in circumsphere and barycentric solves. a is n x n row-major and is
// overwritten; perm receives the pivot rows. Returns false on (near) exact
// singularity.
bool lu_factor(double* a, int n, int* perm) {
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(a[col * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::fabs(a[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (!(best > 0.0)) return false;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
      std::swap(perm[col], perm[piv]);
    }
    const double diag = a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / diag;
      a[r * n + col] = f;
      for (int j = col + 1; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
    }
  }
  return true;
}

void lu_solve(const double* lu, int n, const int* perm, const double* b,
              double* x) {
  double y[kMaxDim];
  for (int i = 0; i < n; ++i) y[i] = b[perm[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) y[i] -= lu[i * n + j] * y[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) y[i] -= lu[i * n + j] * x[j];
    x[i] = y[i] / lu[i * n + i];
  }
}

double norm1(const double* a, int n) {
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::fabs(a[i * n + j]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TorusPoint make_point(std::vector<double> coords) {
  check_dim(static_cast<int>(coords.size()));
  for (double& v : coords) v = wrap01(v);
  return TorusPoint{std::move(coords)};
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim()) throw config_error("dimension mismatch");
  return std::sqrt(detail::torus_dist2_flat(a.x.data(), b.x.data(), a.dim()));
}

std::vector<double> displacement(const TorusPoint& from, const TorusPoint& to) {
  if (from.dim() != to.dim()) throw config_error("dimension mismatch");
  std::vector<double> d(from.dim());
  for (int i = 0; i < from.dim(); ++i) d[i] = wrap_delta(to.x[i] - from.x[i]);
  return d;
}

LiftedConfig lift(const std::vector<TorusPoint>& pts) {
  check_same_dim(pts);
  LiftedConfig cfg;
  cfg.base = pts[0];
  cfg.offsets.resize(pts.size());
  const int d = pts[0].dim();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cfg.offsets[i].resize(d);
    for (int c = 0; c < d; ++c)
      cfg.offsets[i][c] = wrap_delta(pts[i].x[c] - pts[0].x[c]);
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double s = 0.0;
      for (int c = 0; c < d; ++c) {
        const double t = cfg.offsets[i][c] - cfg.offsets[j][c];
        s += t * t;
      }
      cfg.diameter = std::max(cfg.diameter, std::sqrt(s));
    }
  return cfg;
}

Circumsphere circumsphere(const std::vector<TorusPoint>& X) {
  check_same_dim(X);
  const int d = X[0].dim();
  const int m = static_cast<int>(X.size());
  if (m < 2 || m > d + 1)
    throw config_error("circumsphere needs 2 <= |X| <= d+1 points");

  const LiftedConfig cfg = lift(X);
  double v[(kMaxDim + 1) * kMaxDim];
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < d; ++c) v[i * d + c] = cfg.offsets[i][c];

  double c_loc[kMaxDim];
  double bary[kMaxDim + 1];
  const detail::CircumResult res =
      detail::circumsphere_flat(v, m, d, c_loc, bary);

  Circumsphere out;
  out.center_lifted.assign(c_loc, c_loc + d);
  std::vector<double> wrapped(d);
  for (int c = 0; c < d; ++c) wrapped[c] = wrap01(X[0].x[c] + c_loc[c]);
  out.center = TorusPoint{std::move(wrapped)};
  out.radius = res.radius;
  out.cond = res.cond;
  return out;
}

bool in_open_simplex(const std::vector<TorusPoint>& X, const TorusPoint& c) {
  check_same_dim(X);
  if (c.dim() != X[0].dim()) throw config_error("dimension mismatch");
  const int d = X[0].dim();
  const int m = static_cast<int>(X.size());
  if (m < 2 || m > d + 1)
    throw config_error("in_open_simplex needs 2 <= |X| <= d+1 points");

  // Everything is expressed in the lift chart of X[0].
  double v[(kMaxDim + 1) * kMaxDim];
  double w[kMaxDim];
  for (int i = 0; i < m; ++i)
    for (int cc = 0; cc < d; ++cc)
      v[i * d + cc] = wrap_delta(X[i].x[cc] - X[0].x[cc]);
  for (int cc = 0; cc < d; ++cc) w[cc] = wrap_delta(c.x[cc] - X[0].x[cc]);

  const int n = m - 1;
  double g[kMaxDim * kMaxDim];
  double rhs[kMaxDim];
  for (int i = 0; i < n; ++i) {
    const double* vi = v + (i + 1) * d;
    for (int j = 0; j < n; ++j) {
      const double* vj = v + (j + 1) * d;
      double s = 0.0;
      for (int cc = 0; cc < d; ++cc) s += vi[cc] * vj[cc];
      g[i * n + j] = s;
    }
    double s = 0.0;
    for (int cc = 0; cc < d; ++cc) s += vi[cc] * w[cc];
    rhs[i] = s;
  }

  int perm[kMaxDim];
  if (!lu_factor(g, n, perm))
    throw degenerate_error("affinely dependent simplex");
  double t[kMaxDim];
  lu_solve(g, n, perm, rhs, t);

  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (t[i] <= kTolBary) return false;
    sum += t[i];
  }
  return 1.0 - sum > kTolBary;
}

double simplex_volume(const std::vector<std::vector<double>>& pts) {
  if (pts.empty()) throw config_error("empty point list");
  const int d = static_cast<int>(pts[0].size());
  check_dim(d);
  const int m = static_cast<int>(pts.size());
  if (m > d + 1) throw config_error("simplex has more than d+1 vertices");
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != d)
      throw config_error("mixed dimensions in point list");

  double v[(kMaxDim + 1) * kMaxDim];
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < d; ++c) v[i * d + c] = pts[i][c] - pts[0][c];
  return detail::simplex_volume_flat(v, m, d);
}

double unit_ball_volume(int d) {
  check_dim(d);
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

namespace detail {

CircumStatus circumsphere_try(const double* v, int m, int d, double* c_loc,
                              double* bary, CircumResult* res) {
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (dist2_flat(v + i * d, v + j * d, d) < kTolGeo * kTolGeo)
        return CircumStatus::kCoincident;

  const int n = m - 1;
  double g[kMaxDim * kMaxDim];
  double rhs[kMaxDim];
  for (int i = 0; i < n; ++i) {
    const double* vi = v + (i + 1) * d;
    for (int j = 0; j < n; ++j) {
      const double* vj = v + (j + 1) * d;
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += vi[c] * vj[c];
      g[i * n + j] = s;
    }
    rhs[i] = 0.5 * g[i * n + i];
  }

  double lu[kMaxDim * kMaxDim];
  std::memcpy(lu, g, sizeof(double) * n * n);
  int perm[kMaxDim];
  if (!lu_factor(lu, n, perm)) return CircumStatus::kSingular;

  double t[kMaxDim];
  lu_solve(lu, n, perm, rhs, t);

  // 1-norm condition estimate of the Gram system; exact at these sizes.
  double inv_norm = 0.0;
  {
    double e[kMaxDim], col[kMaxDim];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) e[i] = (i == j) ? 1.0 : 0.0;
      lu_solve(lu, n, perm, e, col);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += std::fabs(col[i]);
      inv_norm = std::max(inv_norm, s);
    }
  }
  res->cond = norm1(g, n) * inv_norm;

  double r2 = 0.0;
  for (int c = 0; c < d; ++c) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += t[i] * v[(i + 1) * d + c];
    c_loc[c] = s;
    r2 += s * s;
  }
  res->radius = std::sqrt(r2);

  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    bary[i + 1] = t[i];
    sum += t[i];
  }
  bary[0] = 1.0 - sum;
  return (res->cond < kCondMax) ? CircumStatus::kOk
                                : CircumStatus::kIllConditioned;
}

CircumResult circumsphere_flat(const double* v, int m, int d, double* c_loc,
                               double* bary) {
  CircumResult res;
  switch (circumsphere_try(v, m, d, c_loc, bary, &res)) {
    case CircumStatus::kOk:
      return res;
    case CircumStatus::kCoincident:
      throw degenerate_error("coincident circumsphere input");
    case CircumStatus::kSingular:
      throw degenerate_error("affinely dependent circumsphere input");
    case CircumStatus::kIllConditioned:
      throw degenerate_error("ill-conditioned circumsphere solve");
  }
  throw degenerate_error("unreachable circumsphere status");
}

double simplex_volume_flat(const double* v, int m, int d) {
  const int n = m - 1;
  if (n == 0) return 1.0;
  double g[kMaxDim * kMaxDim];
  for (int i = 0; i < n; ++i) {
    const double* vi = v + (i + 1) * d;
    for (int j = 0; j < n; ++j) {
      const double* vj = v + (j + 1) * d;
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += vi[c] * vj[c];
      g[i * n + j] = s;
    }
  }
  int perm[kMaxDim];
  if (!lu_factor(g, n, perm)) return 0.0;
  double det = 1.0;
  for (int i = 0; i < n; ++i) det *= g[i * n + i];
  // Row swaps flip the sign of the determinant but the Gram determinant is
  // nonnegative, so take the absolute value and guard roundoff.
  det = std::fabs(det);
  if (!(det > 0.0)) return 0.0;
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return std::sqrt(det) / fact;
}

}  // namespace detail
}  // namespace kcover
