#include "kcover/critical_points.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "kcover/errors.hpp"

namespace kcover {
namespace {

std::int64_t binom(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::int64_t v = 1;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

}  // namespace

namespace detail {

bool classify_lifted(const double* v, int m, const std::uint32_t* ids,
                     const SpatialIndex& index, int k,
                     const EnumerationWindow& win, const double* base,
                     std::vector<CriticalPoint>& out) {
  const PointCloud& cloud = index.cloud();
  const int d = cloud.dim();

  double c_loc[kMaxDim];
  double bary[kMaxDim + 1];
  CircumResult res;
  switch (circumsphere_try(v, m, d, c_loc, bary, &res)) {
    case CircumStatus::kOk:
      break;
    case CircumStatus::kCoincident:
      throw degenerate_error("coincident points in circumsphere input");
    case CircumStatus::kSingular:
      // Affinely dependent: no circumcenter exists in the affine hull, so the
      // subset cannot be critical.
      return false;
    case CircumStatus::kIllConditioned:
      // The solve is untrusted, but even with worst-case error a radius this
      // far beyond the supported window certifies non-criticality. Anything
      // closer cannot be resolved and poisons the trial.
      if (res.radius > 4.0 * kRMax) return false;
      throw degenerate_error("ill-conditioned circumsphere solve");
  }

  const double rho = res.radius;
  if (!(rho > win.r_min) || !(rho <= win.r_max)) return false;
  for (int i = 0; i < m; ++i)
    if (!(bary[i] > kTolBary)) return false;

  double cw[kMaxDim];
  for (int c = 0; c < d; ++c) cw[c] = wrap01(base[c] + c_loc[c]);

  // A valid configuration has every generator at toroidal distance exactly
  // rho from the wrapped center; candidates coming from a distorted lift
  // (offsets not realizable inside one chart) fail this and are not critical.
  for (int i = 0; i < m; ++i) {
    const double dist = std::sqrt(torus_dist2_flat(cw, cloud.point(ids[i]), d));
    if (std::fabs(dist - rho) > kTolGeo) return false;
  }

  const int limit = k - 1;
  const int inner = index.count_in_ball_at_most(
      cw, rho, std::span<const std::uint32_t>(ids, static_cast<std::size_t>(m)),
      limit);
  if (inner > limit) return false;
  if (inner < k - m) return false;
  const int mu = m + inner - k;
  if (mu < win.mu_min || mu > win.mu_max) return false;

  CriticalPoint cp;
  cp.center.x.assign(cw, cw + d);
  cp.rho = rho;
  cp.mu = mu;
  cp.generators.assign(ids, ids + m);
  cp.interior_count = inner;
  cp.delta = binom(m - 1, mu);
  out.push_back(std::move(cp));
  return true;
}

}  // namespace detail

std::optional<CriticalPoint> classify_subset(
    const std::vector<std::uint32_t>& subset, const SpatialIndex& index,
    int k) {
  const PointCloud& cloud = index.cloud();
  const int d = cloud.dim();
  if (k < 1) throw config_error("k must be >= 1");
  const int m = static_cast<int>(subset.size());
  if (m < 2 || m > d + 1)
    throw config_error("subset size must be in [2, d+1]");

  std::vector<std::uint32_t> ids(subset);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw config_error("subset ids must be distinct");
  if (ids.back() >= cloud.size()) throw config_error("subset id out of range");

  const double* base = cloud.point(ids[0]);
  double v[(kMaxDim + 1) * kMaxDim];
  for (int c = 0; c < d; ++c) v[c] = 0.0;
  for (int i = 1; i < m; ++i) {
    const double* p = cloud.point(ids[i]);
    for (int c = 0; c < d; ++c) v[i * d + c] = wrap_delta(p[c] - base[c]);
  }

  EnumerationWindow win;
  win.r_min = 0.0;
  win.r_max = kRMax;
  win.mu_min = 0;
  win.mu_max = kMaxDim;
  std::vector<CriticalPoint> tmp;
  if (!detail::classify_lifted(v, m, ids.data(), index, k, win, base, tmp))
    return std::nullopt;
  return std::move(tmp.front());
}

namespace {

std::vector<CriticalPoint> enumerate_impl(const SpatialIndex& index, int k,
                                          const EnumerationWindow& win,
                                          const std::vector<bool>* keep) {
  const PointCloud& cloud = index.cloud();
  const int d = cloud.dim();
  if (k < 1) throw config_error("k must be >= 1");
  if (d > 3)
    throw config_error("critical point enumeration supports dimensions 1..3");
  if (!(win.r_min >= 0.0) || !(win.r_max <= kRMax + 1e-15) ||
      !(win.r_min <= win.r_max))
    throw config_error("invalid enumeration window");

  std::vector<CriticalPoint> out;
  const std::size_t n = cloud.size();
  if (n < 2 || n < static_cast<std::size_t>(k)) return out;
  if (!(win.r_max > win.r_min) || win.mu_min > win.mu_max) return out;

  const int m_max = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(d) + 1, n));
  const double rg = 2.0 * win.r_max * (1.0 + 1e-12) + 1e-15;
  const double up2 = 4.0 * win.r_max * win.r_max * (1.0 + 1e-12);
  const double lo2_pair = 4.0 * win.r_min * win.r_min * (1.0 - 1e-12);
  const double rho2_lo = win.r_min * win.r_min * (1.0 - 1e-9);
  const double rho2_hi = win.r_max * win.r_max * (1.0 + 1e-9);
  const double coincide2 = kTolGeo * kTolGeo;

  // A critical center lies in the convex hull of its generators, so some
  // pair subtends at least 120 degrees there for triples and at least
  // arccos(-1/3) for quadruples (three angles around an interior planar
  // center sum to 360; four unit vectors with all dots > -1/3 cannot
  // positively span R^3). Hence diam^2 >= 3 rho^2 resp. (8/3) rho^2, and a
  // subset below the matching multiple of r_min cannot reach the window.
  const double lo2_tri = 3.0 * win.r_min * win.r_min * (1.0 - 1e-9);
  const double lo2_quad = (8.0 / 3.0) * win.r_min * win.r_min * (1.0 - 1e-9);

  // Index feasibility per subset size: mu = m + I - k with 0 <= I <= k - 1.
  const auto mu_feasible = [&](int m) {
    return m - 1 >= win.mu_min && std::max(0, m - k) <= win.mu_max;
  };
  const bool do_pair = mu_feasible(2);
  const bool do_triple = m_max >= 3 && mu_feasible(3);
  const bool do_quad = m_max >= 4 && mu_feasible(4);
  const bool extend_pairs = do_triple || do_quad;
  if (!do_pair && !extend_pairs) return out;

  std::vector<std::uint32_t> nbr;
  std::vector<std::uint32_t> cand;
  std::vector<double> off;
  std::vector<double> offx;
  std::vector<double> offy;
  std::vector<double> off2;
  std::vector<double> dd;
  std::vector<std::uint16_t> tie;
  double v[(kMaxDim + 1) * kMaxDim];
  double vv[(kMaxDim + 1) * kMaxDim];

  // Emits one owner-rooted subset, expanding antipodal ties (a coordinate
  // offset of exactly +1/2 is equally valid as -1/2) into every consistent
  // lift and dropping duplicate centers among the variants.
  const auto emit = [&](std::uint32_t owner, const int* slots, int m) {
    std::uint32_t ids[kMaxDim + 1];
    ids[0] = owner;
    std::uint16_t tie_any = 0;
    for (int c = 0; c < d; ++c) v[c] = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
      ids[i + 1] = cand[slots[i]];
      tie_any = static_cast<std::uint16_t>(tie_any | tie[slots[i]]);
      for (int c = 0; c < d; ++c)
        v[(i + 1) * d + c] = off[slots[i] * d + c];
    }
    const double* base = cloud.point(owner);
    if (!tie_any) {
      detail::classify_lifted(v, m, ids, index, k, win, base, out);
      return;
    }
    int tslots[8];
    int tcount = 0;
    for (int i = 1; i < m; ++i)
      for (int c = 0; c < d; ++c)
        if (v[i * d + c] == 0.5) {
          if (tcount == 8)
            throw degenerate_error("antipodal tie expansion overflow");
          tslots[tcount++] = i * d + c;
        }
    const std::size_t first = out.size();
    for (unsigned combo = 0; combo < (1u << tcount); ++combo) {
      std::copy(v, v + m * d, vv);
      for (int b = 0; b < tcount; ++b)
        if (combo & (1u << b)) vv[tslots[b]] = -0.5;
      if (!detail::classify_lifted(vv, m, ids, index, k, win, base, out))
        continue;
      const CriticalPoint& fresh = out.back();
      for (std::size_t q = first; q + 1 < out.size(); ++q) {
        if (std::fabs(out[q].rho - fresh.rho) > 1e-12) continue;
        bool same = true;
        for (int c = 0; c < d; ++c)
          if (std::fabs(out[q].center.x[c] - fresh.center.x[c]) > 1e-12) {
            same = false;
            break;
          }
        if (same) {
          out.pop_back();
          break;
        }
      }
    }
  };

  for (std::uint32_t owner = 0; owner + 1 < n; ++owner) {
    if (keep && !(*keep)[owner]) continue;
    const double* base = cloud.point(owner);
    nbr.clear();
    index.gather(base, rg, nbr);
    cand.clear();
    off.clear();
    offx.clear();
    offy.clear();
    off2.clear();
    tie.clear();
    for (const std::uint32_t id : nbr) {
      if (id <= owner) continue;
      const double* p = cloud.point(id);
      double o[kMaxDim];
      double s = 0.0;
      std::uint16_t tmask = 0;
      for (int c = 0; c < d; ++c) {
        o[c] = wrap_delta(p[c] - base[c]);
        if (o[c] == 0.5) tmask = static_cast<std::uint16_t>(tmask | (1u << c));
        s += o[c] * o[c];
      }
      if (s < coincide2) throw degenerate_error("coincident points in cloud");
      if (s > up2) continue;
      cand.push_back(id);
      for (int c = 0; c < d; ++c) off.push_back(o[c]);
      if (d == 2) {
        offx.push_back(o[0]);
        offy.push_back(o[1]);
      }
      off2.push_back(s);
      tie.push_back(tmask);
    }
    const int nc = static_cast<int>(cand.size());

    int slots[kMaxDim];
    if (d == 2) {
      // Planar fast path: the whole distance row first (branch-free, so it
      // vectorizes), filters after. Candidate pair loops dominate large runs.
      dd.resize(static_cast<std::size_t>(nc));
      for (int a = 0; a < nc; ++a) {
        if (do_pair && off2[a] > lo2_pair) {
          slots[0] = a;
          emit(owner, slots, 2);
        }
        if (!do_triple) continue;
        const double ax = offx[a];
        const double ay = offy[a];
        for (int b = a + 1; b < nc; ++b) {
          const double ex = ax - offx[b];
          const double ey = ay - offy[b];
          dd[b] = ex * ex + ey * ey;
        }
        const double a2 = off2[a];
        for (int b = a + 1; b < nc; ++b) {
          const double dab2 = dd[b];
          if (dab2 < coincide2)
            throw degenerate_error("coincident points in cloud");
          if (dab2 > up2) continue;
          const double b2 = off2[b];
          const double mx = std::max({a2, b2, dab2});
          if (mx <= lo2_tri) continue;
          slots[0] = a;
          slots[1] = b;
          if ((tie[a] | tie[b]) != 0) {
            emit(owner, slots, 3);
            continue;
          }
          // Circumradius and center-in-triangle tests from squared side
          // lengths alone; survivors get the full solve. The center is
          // strictly inside iff the triangle is acute, and
          // 16 * area^2 = 2(a2 b2 + b2 c2 + c2 a2) - a2^2 - b2^2 - c2^2.
          const double c2 = dab2;
          const double area16 = 2.0 * (a2 * b2 + b2 * c2 + c2 * a2) -
                                a2 * a2 - b2 * b2 - c2 * c2;
          if (area16 <= 0.0) continue;
          const double rho2 = (a2 * b2) * (c2 / area16);
          if (!(rho2 > rho2_lo && rho2 <= rho2_hi)) continue;
          const double acute_slack = -1e-9 * mx;
          if (a2 + b2 - c2 > acute_slack && b2 + c2 - a2 > acute_slack &&
              c2 + a2 - b2 > acute_slack) {
            emit(owner, slots, 3);
          }
        }
      }
      continue;
    }

    for (int a = 0; a < nc; ++a) {
      if (do_pair && off2[a] > lo2_pair) {
        slots[0] = a;
        emit(owner, slots, 2);
      }
      if (!extend_pairs) continue;
      const double* oa = off.data() + static_cast<std::size_t>(a) * d;
      for (int b = a + 1; b < nc; ++b) {
        const double* ob = off.data() + static_cast<std::size_t>(b) * d;
        const double dab2 = detail::dist2_flat(oa, ob, d);
        if (dab2 < coincide2)
          throw degenerate_error("coincident points in cloud");
        if (dab2 > up2) continue;
        if (do_triple) {
          const double mx = std::max({off2[a], off2[b], dab2});
          if (mx > lo2_tri) {
            slots[0] = a;
            slots[1] = b;
            if ((tie[a] | tie[b]) != 0) {
              emit(owner, slots, 3);
            } else {
              // Same squared-side-length filter as the planar path; the
              // triangle tests only involve its own plane.
              const double a2 = off2[a];
              const double b2 = off2[b];
              const double c2 = dab2;
              const double area16 = 2.0 * (a2 * b2 + b2 * c2 + c2 * a2) -
                                    a2 * a2 - b2 * b2 - c2 * c2;
              if (area16 > 0.0) {
                const double rho2 = (a2 * b2) * (c2 / area16);
                if (rho2 > rho2_lo && rho2 <= rho2_hi) {
                  const double acute_slack = -1e-9 * mx;
                  if (a2 + b2 - c2 > acute_slack &&
                      b2 + c2 - a2 > acute_slack &&
                      c2 + a2 - b2 > acute_slack) {
                    emit(owner, slots, 3);
                  }
                }
              }
            }
          }
        }
        if (!do_quad) continue;
        for (int e = b + 1; e < nc; ++e) {
          const double* oe = off.data() + static_cast<std::size_t>(e) * d;
          const double dae2 = detail::dist2_flat(oa, oe, d);
          if (dae2 > up2) continue;
          const double dbe2 = detail::dist2_flat(ob, oe, d);
          if (dbe2 > up2) continue;
          const double mx =
              std::max({off2[a], off2[b], off2[e], dab2, dae2, dbe2});
          if (mx <= lo2_quad) continue;
          slots[0] = a;
          slots[1] = b;
          slots[2] = e;
          emit(owner, slots, 4);
        }
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              if (a.rho != b.rho) return a.rho < b.rho;
              if (a.generators != b.generators)
                return a.generators < b.generators;
              return a.center.x < b.center.x;
            });
  return out;
}

}  // namespace

std::vector<CriticalPoint> enumerate_critical_points(
    const SpatialIndex& index, int k, const EnumerationWindow& win) {
  return enumerate_impl(index, k, win, nullptr);
}

std::vector<std::int64_t> count_by_index(const SpatialIndex& index, int k,
                                         double r) {
  const PointCloud& cloud = index.cloud();
  const int d = cloud.dim();
  if (!(r >= 0.0)) throw config_error("r must be nonnegative");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(d) + 1, 0);
  const std::size_t n = cloud.size();
  if (n < 2 || n < static_cast<std::size_t>(k)) return counts;
  if (r >= kRMax) return counts;

  EnumerationWindow win;
  win.r_min = r;
  win.r_max = kRMax;
  win.mu_min = 0;
  win.mu_max = d;
  for (const CriticalPoint& cp : enumerate_high_window(index, k, win).crits)
    counts[static_cast<std::size_t>(cp.mu)] += 1;
  return counts;
}

std::int64_t count_by_index(const SpatialIndex& index, int k, double r,
                            int mu) {
  const int d = index.cloud().dim();
  if (mu < 0 || mu > d) throw config_error("mu must be in [0, dim]");
  return count_by_index(index, k, r)[static_cast<std::size_t>(mu)];
}

std::int64_t count_by_index(std::span<const CriticalPoint> crits, int mu,
                            double r) {
  if (mu < 0) throw config_error("mu must be nonnegative");
  std::int64_t count = 0;
  for (const CriticalPoint& cp : crits)
    if (cp.mu == mu && cp.rho >= r) ++count;
  return count;
}

namespace {

// Lattice sweep behind both the ceiling certificate and the focused window
// enumeration. When hot_floor > 0 the final pass also records every node
// whose value exceeds hot_floor minus the pass slack: a point of the torus
// with k-NN distance above hot_floor lies within half a lattice diagonal of
// such a node (the function is 1-Lipschitz), so the recorded nodes cover
// every candidate region.
CeilingBound scan_lattice(const SpatialIndex& index, int k, double hot_floor,
                          std::vector<double>* hot) {
  const PointCloud& cloud = index.cloud();
  const int d = cloud.dim();
  if (k < 1) throw config_error("k must be >= 1");
  if (cloud.size() < static_cast<std::size_t>(k))
    throw insufficient_points_error("cloud smaller than k");
  const double sqd = std::sqrt(static_cast<double>(d));

  // The k-NN distance function is 1-Lipschitz, so max over the torus is at
  // most the lattice max plus half a lattice diagonal. Refine until the
  // Lipschitz slack is a small fraction of the bound (or the node budget is
  // exhausted); every pass yields a valid bound on its own.
  const double node_budget = 8.0e6;
  int nodes_axis =
      std::max(2, static_cast<int>(std::floor(std::pow(4096.0, 1.0 / d))));
  CeilingBound best;
  for (int pass = 0; pass < 4; ++pass) {
    const double h = 1.0 / nodes_axis;
    const double tau =
        hot && hot_floor > 0.0 ? hot_floor - 0.5 * h * sqd : 0.0;
    if (hot) hot->clear();
    double maxv = -1.0;
    double argv[kMaxDim] = {0};
    int idx[kMaxDim] = {0};
    double x[kMaxDim];
    for (;;) {
      for (int c = 0; c < d; ++c) x[c] = idx[c] * h;
      const double val = index.knn_distance(x, k);
      if (val > maxv) {
        maxv = val;
        for (int c = 0; c < d; ++c) argv[c] = x[c];
      }
      if (hot && hot_floor > 0.0 && val > tau)
        hot->insert(hot->end(), x, x + d);
      int c = 0;
      while (c < d && ++idx[c] == nodes_axis) {
        idx[c] = 0;
        ++c;
      }
      if (c == d) break;
    }
    const double slack = 0.5 * h * sqd;
    best.max_node = maxv;
    best.upper = std::min(maxv + slack, 0.5 * sqd);
    best.spacing = h;
    best.arg_max.x.assign(argv, argv + d);
    if (slack <= 0.12 * best.upper) break;
    long long next =
        static_cast<long long>(std::ceil(sqd / (0.24 * best.upper)));
    const long long cap =
        static_cast<long long>(std::floor(std::pow(node_budget, 1.0 / d)));
    next = std::min(next, cap);
    if (next <= nodes_axis) break;
    nodes_axis = static_cast<int>(next);
  }
  return best;
}

}  // namespace

CeilingBound critical_value_ceiling(const SpatialIndex& index, int k) {
  return scan_lattice(index, k, -1.0, nullptr);
}

HighWindowResult enumerate_high_window(const SpatialIndex& index, int k,
                                       const EnumerationWindow& win) {
  if (!(win.r_min >= 0.0) || !(win.r_max <= kRMax + 1e-15) ||
      !(win.r_min <= win.r_max))
    throw config_error("invalid enumeration window");
  const PointCloud& cloud = index.cloud();
  const int d = cloud.dim();
  const std::size_t n = cloud.size();

  HighWindowResult out;
  std::vector<double> hot;
  out.bound = scan_lattice(index, k, win.r_min, &hot);

  EnumerationWindow capped = win;
  capped.r_max = std::min(win.r_max, out.bound.upper);
  if (!(capped.r_max > capped.r_min) || n < 2 ||
      n < static_cast<std::size_t>(k))
    return out;

  // A generator sits on the sphere of its center, so it lies within
  // capped.r_max + half a lattice diagonal of some hot node. Cells at least
  // that wide make the 3^d ring around a generator's cell a complete cover.
  const double slack = 0.5 * out.bound.spacing * std::sqrt(double(d));
  const double reach = capped.r_max + slack + 1e-12;
  const int cells_axis = std::max(1, static_cast<int>(std::floor(1.0 / reach)));
  std::size_t total = 1;
  for (int c = 0; c < d; ++c) total *= static_cast<std::size_t>(cells_axis);
  const bool mask_pays = win.r_min > 0.0 && cells_axis >= 3 &&
                         hot.size() / static_cast<std::size_t>(d) < total / 4;
  if (!mask_pays) {
    out.crits = enumerate_impl(index, k, capped, nullptr);
    return out;
  }

  std::vector<bool> hot_cell(total, false);
  const auto cell_of = [&](const double* x) {
    std::size_t id = 0;
    for (int c = d - 1; c >= 0; --c) {
      int ic = static_cast<int>(x[c] * cells_axis);
      if (ic >= cells_axis) ic = cells_axis - 1;
      id = id * static_cast<std::size_t>(cells_axis) +
           static_cast<std::size_t>(ic);
    }
    return id;
  };
  for (std::size_t i = 0; i + d <= hot.size(); i += d)
    hot_cell[cell_of(hot.data() + i)] = true;

  std::vector<bool> keep(n, false);
  const long long ca = cells_axis;
  for (std::size_t p = 0; p < n; ++p) {
    const double* x = cloud.point(p);
    long long ic[kMaxDim];
    for (int c = 0; c < d; ++c) {
      ic[c] = static_cast<long long>(x[c] * cells_axis);
      if (ic[c] >= ca) ic[c] = ca - 1;
    }
    bool near = false;
    long long off[kMaxDim] = {0};
    for (int c = 0; c < d; ++c) off[c] = -1;
    for (;;) {
      std::size_t id = 0;
      for (int c = d - 1; c >= 0; --c) {
        const long long v = (ic[c] + off[c] + ca) % ca;
        id = id * static_cast<std::size_t>(ca) + static_cast<std::size_t>(v);
      }
      if (hot_cell[id]) {
        near = true;
        break;
      }
      int c = 0;
      while (c < d && ++off[c] == 2) {
        off[c] = -1;
        ++c;
      }
      if (c == d) break;
    }
    keep[p] = near;
  }

  out.crits = enumerate_impl(index, k, capped, &keep);
  return out;
}

void write_critical_jsonl(const std::vector<CriticalPoint>& pts,
                          std::ostream& os) {
  for (const CriticalPoint& cp : pts) {
    const nlohmann::json j{{"center", cp.center.x},
                           {"rho", cp.rho},
                           {"mu", cp.mu},
                           {"generators", cp.generators},
                           {"interior", cp.interior_count},
                           {"delta", cp.delta}};
    os << j.dump() << '\n';
  }
}

std::vector<CriticalPoint> read_critical_jsonl(std::istream& is, int dim) {
  std::vector<CriticalPoint> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    CriticalPoint cp;
    cp.center.x = j.at("center").get<std::vector<double>>();
    if (static_cast<int>(cp.center.x.size()) != dim)
      throw config_error("dimension mismatch in critical point record");
    cp.rho = j.at("rho").get<double>();
    cp.mu = j.at("mu").get<int>();
    cp.generators = j.at("generators").get<std::vector<std::uint32_t>>();
    cp.interior_count = j.at("interior").get<int>();
    cp.delta = j.at("delta").get<std::int64_t>();
    pts.push_back(std::move(cp));
  }
  return pts;
}

}  // namespace kcover
