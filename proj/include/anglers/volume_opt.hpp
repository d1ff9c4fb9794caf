#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "anglers/angles.hpp"
#include "anglers/tet_volume.hpp"
#include "anglers/triangulation.hpp"

namespace anglers {

struct VolumeReport {
  double total_volume = 0;
  std::vector<double> per_tet_volumes;
  double gradient_norm = 0;        // projected Schlafli gradient at the point
  double edge_length_residual = 0; // max over classes of (max - min) corner length
};

namespace detail {

// Deterministic parallel map over tetrahedra: every worker writes only its own
// slots, reductions happen sequentially in tet order afterwards.
template <class F>
void for_each_tet(int tet_count, int threads, F&& f) {
  threads = std::max(1, threads);
  if (threads == 1 || tet_count < 2 * threads) {
    for (int t = 0; t < tet_count; ++t) f(t);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < tet_count; t = next.fetch_add(1)) f(t);
    });
  for (auto& th : pool) th.join();
}

struct GeometrySweep {
  std::vector<double> per_tet_volume;
  std::vector<double> corner_length;  // 6T, length of the edge at each corner
};

inline GeometrySweep sweep_geometry(const IdealTriangulation& tri, const std::vector<double>& x,
                                    int threads, const Tolerances& tol) {
  GeometrySweep s;
  s.per_tet_volume.assign(tri.tet_count(), 0.0);
  s.corner_length.assign(x.size(), 0.0);
  std::vector<std::string> errors(tri.tet_count());
  for_each_tet(tri.tet_count(), threads, [&](int t) {
    AngleSextuple th;
    for (int e = 0; e < 6; ++e) th.a[e] = x[t * 6 + e];
    try {
      auto lengths = edge_lengths(th, tol);
      for (int e = 0; e < 6; ++e) s.corner_length[t * 6 + e] = lengths[e];
      s.per_tet_volume[t] = tet_volume(th, tol);
    } catch (const GeometryError& err) {
      errors[t] = err.what();
    }
  });
  for (int t = 0; t < tri.tet_count(); ++t)
    if (!errors[t].empty())
      throw GeometryError("tetrahedron " + std::to_string(t) + ": " + errors[t]);
  return s;
}

// Orthogonal projection onto {per-edge-class sums = 0}: subtract class means.
inline void project_to_edge_sums(const IdealTriangulation& tri, std::vector<double>& g) {
  for (const auto& cls : tri.edge_classes()) {
    double mean = 0;
    for (const auto& c : cls.corners) mean += g[c.slot()];
    mean /= cls.valence();
    for (const auto& c : cls.corners) g[c.slot()] -= mean;
  }
}

inline double strictness_margin(const IdealTriangulation& tri, const std::vector<double>& x) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : x) m = std::min(m, v);
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int v = 0; v < 4; ++v) {
      double s = 0;
      for (int e : edges_at_vertex(v)) s += x[t * 6 + e];
      m = std::min(m, kPi - s);
    }
  return m;
}

}  // namespace detail

inline VolumeReport total_volume(const IdealTriangulation& tri, const AngleAssignment& a,
                                 int threads = 1, const Tolerances& tol = default_tolerances()) {
  auto rep = verify(tri, a);
  if (!rep.pass) throw GeometryError("assignment is not a strict angle structure");
  std::vector<double> x(a.size());
  for (int i = 0; i < a.size(); ++i) x[i] = a.radians(i);
  auto sweep = detail::sweep_geometry(tri, x, threads, tol);

  VolumeReport out;
  out.per_tet_volumes = sweep.per_tet_volume;
  out.total_volume = std::accumulate(sweep.per_tet_volume.begin(), sweep.per_tet_volume.end(), 0.0);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = -0.5 * sweep.corner_length[i];
  detail::project_to_edge_sums(tri, g);
  out.gradient_norm = std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
  for (const auto& cls : tri.edge_classes()) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : cls.corners) {
      lo = std::min(lo, sweep.corner_length[c.slot()]);
      hi = std::max(hi, sweep.corner_length[c.slot()]);
    }
    out.edge_length_residual = std::max(out.edge_length_residual, hi - lo);
  }
  return out;
}

enum class AscentStatus { critical, boundary, max_iters };

inline std::string ascent_status_name(AscentStatus s) {
  switch (s) {
    case AscentStatus::critical: return "critical";
    case AscentStatus::boundary: return "boundary";
    default: return "max_iters";
  }
}

struct MaximizeOptions {
  double tol = 1e-7;       // projected-gradient norm for criticality
  int max_iters = 20000;
  double guard = 1e-8;     // strictness margin every iterate must keep
  int threads = 1;
};

struct MaximizeResult {
  AngleAssignment angles;  // radians mode
  VolumeReport report;
  AscentStatus status = AscentStatus::max_iters;
  int iterations = 0;
  bool monotone = true;
  std::vector<std::string> pinned_constraints;  // boundary status: active margins
  std::vector<double> margin_trace;             // strictness margin per accepted iterate
};

// Projected gradient ascent on the volume functional over the angle polytope.
// The gradient is the Schlafli gradient dV/d(alpha) = -length/2, projected
// onto the affine subspace of fixed edge sums; an Armijo backtracking line
// search keeps every iterate strictly feasible with margin >= guard.
inline MaximizeResult maximize(const IdealTriangulation& tri, const AngleAssignment& start,
                               MaximizeOptions opt = {},
                               const Tolerances& tol = default_tolerances()) {
  auto rep = verify(tri, start);
  if (!rep.pass) throw GeometryError("maximize needs a strict starting angle structure");

  std::vector<double> x(start.size());
  for (int i = 0; i < start.size(); ++i) x[i] = start.radians(i);

  // re-impose exact edge sums after float drift
  auto renormalize = [&](std::vector<double>& v) {
    for (const auto& cls : tri.edge_classes()) {
      double sum = 0;
      for (const auto& c : cls.corners) sum += v[c.slot()];
      double corr = (sum - 2 * kPi) / cls.valence();
      for (const auto& c : cls.corners) v[c.slot()] -= corr;
    }
  };
  renormalize(x);

  MaximizeResult res;
  auto sweep = detail::sweep_geometry(tri, x, opt.threads, tol);
  double V = std::accumulate(sweep.per_tet_volume.begin(), sweep.per_tet_volume.end(), 0.0);
  res.margin_trace.push_back(detail::strictness_margin(tri, x));

  const double armijo = 1e-4;
  const double tau_min = 1e-14;
  while (res.iterations < opt.max_iters) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -0.5 * sweep.corner_length[i];
    detail::project_to_edge_sums(tri, g);
    double gnorm2 = std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    if (std::sqrt(gnorm2) <= opt.tol) {
      res.status = AscentStatus::critical;
      break;
    }
    double tau = 1.0;
    bool accepted = false;
    std::vector<double> xt(x.size());
    while (tau >= tau_min) {
      for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] + tau * g[i];
      if (detail::strictness_margin(tri, xt) >= opt.guard) {
        try {
          auto sweep_t = detail::sweep_geometry(tri, xt, opt.threads, tol);
          double Vt =
              std::accumulate(sweep_t.per_tet_volume.begin(), sweep_t.per_tet_volume.end(), 0.0);
          if (Vt >= V + armijo * tau * gnorm2) {
            if (Vt < V) res.monotone = false;
            x = xt;
            renormalize(x);
            sweep = detail::sweep_geometry(tri, x, opt.threads, tol);
            V = std::accumulate(sweep.per_tet_volume.begin(), sweep.per_tet_volume.end(), 0.0);
            accepted = true;
            break;
          }
        } catch (const GeometryError&) {
          // treat as infeasible step
        }
      }
      tau *= 0.5;
    }
    ++res.iterations;
    if (!accepted) {
      // ascent is blocked; report which strictness constraints are pinned
      res.status = AscentStatus::boundary;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] <= 2 * opt.guard)
          res.pinned_constraints.push_back("corner " + std::to_string(i / 6) + "." +
                                           std::to_string(i % 6) + " angle ~ 0");
      for (int t = 0; t < tri.tet_count(); ++t)
        for (int v = 0; v < 4; ++v) {
          double s = 0;
          for (int e : edges_at_vertex(v)) s += x[t * 6 + e];
          if (kPi - s <= 2 * opt.guard)
            res.pinned_constraints.push_back("vertex (" + std::to_string(t) + "," +
                                             std::to_string(v) + ") sum ~ pi");
        }
      break;
    }
  }

  res.angles = AngleAssignment::floating(x);
  res.report = total_volume(tri, res.angles, opt.threads, tol);
  return res;
}

}  // namespace anglers
