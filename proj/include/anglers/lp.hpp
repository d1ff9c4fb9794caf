#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "anglers/angles.hpp"
#include "anglers/simplex.hpp"
#include "anglers/triangulation.hpp"

namespace anglers {

// The angle-structure feasibility system in units of pi, with a uniform
// interior-margin variable s:
//   per edge class   sum of its corner angles            = 2
//   per (tet,vertex) sum of the three incident angles + s <= 1
//   per corner       angle - s                           >= 0
// maximize s. Strict angle structures exist iff the optimum s* > 0.
struct AnglePolytope {
  int corner_count = 0;
  std::vector<std::vector<int>> edge_rows;        // corner slots per edge class
  std::vector<std::array<int, 3>> vertex_rows;    // corner slots per (tet, vertex)
  std::vector<std::pair<int, int>> vertex_names;  // (tet, vertex) per vertex row

  int equality_count() const { return static_cast<int>(edge_rows.size()); }
  int vertex_inequality_count() const { return static_cast<int>(vertex_rows.size()); }
  int positivity_inequality_count() const { return corner_count; }
  int variable_count() const { return corner_count + 1; }  // corners + slack
};

inline AnglePolytope build_polytope(const IdealTriangulation& tri) {
  AnglePolytope p;
  p.corner_count = tri.corner_count();
  for (const auto& cls : tri.edge_classes()) {
    std::vector<int> slots;
    slots.reserve(cls.corners.size());
    for (const auto& c : cls.corners) slots.push_back(c.slot());
    p.edge_rows.push_back(std::move(slots));
  }
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int v = 0; v < 4; ++v) {
      auto es = edges_at_vertex(v);
      p.vertex_rows.push_back({t * 6 + es[0], t * 6 + es[1], t * 6 + es[2]});
      p.vertex_names.emplace_back(t, v);
    }
  return p;
}

enum class LPStatus { strictly_feasible, boundary_feasible, infeasible };

inline std::string lp_status_name(LPStatus s) {
  switch (s) {
    case LPStatus::strictly_feasible: return "strictly_feasible";
    case LPStatus::boundary_feasible: return "boundary_feasible";
    default: return "infeasible";
  }
}

// Dual multipliers proving max s <= value. When value <= 0 this is a Farkas
// certificate that no strict angle structure exists: combining the system with
// these weights recombines to 0 < s <= value <= 0.
struct FarkasCertificate {
  std::vector<Rational> edge_y;    // free, one per edge class
  std::vector<Rational> vertex_u;  // >= 0, one per (tet, vertex)
  std::vector<Rational> corner_w;  // >= 0, one per corner
  Rational value;                  // certified upper bound on s
};

struct LPOutcome {
  LPStatus status = LPStatus::infeasible;
  Rational s_star;
  std::optional<AngleAssignment> witness;          // present when s* >= 0
  std::optional<FarkasCertificate> certificate;    // present when s* <= 0
  int pivots = 0;
};

// Exact recombination check: u,w >= 0, per corner the multipliers cancel,
// the s-coefficients add to 1, and the combined bound is <= 0. Any x
// satisfying the system then obeys s <= value, so s > 0 is contradictory.
inline bool certificate_recombines(const AnglePolytope& p, const FarkasCertificate& cert) {
  if (static_cast<int>(cert.edge_y.size()) != p.equality_count()) return false;
  if (static_cast<int>(cert.vertex_u.size()) != p.vertex_inequality_count()) return false;
  if (static_cast<int>(cert.corner_w.size()) != p.corner_count) return false;
  for (const auto& u : cert.vertex_u)
    if (u < 0) return false;
  for (const auto& w : cert.corner_w)
    if (w < 0) return false;
  // corner stationarity: sum_{e contains c} y_e + sum_{v contains c} u_v - w_c = 0
  std::vector<Rational> acc(p.corner_count, Rational(0));
  for (int e = 0; e < p.equality_count(); ++e)
    for (int slot : p.edge_rows[e]) acc[slot] += cert.edge_y[e];
  for (int v = 0; v < p.vertex_inequality_count(); ++v)
    for (int slot : p.vertex_rows[v]) acc[slot] += cert.vertex_u[v];
  for (int cc = 0; cc < p.corner_count; ++cc)
    if (acc[cc] != cert.corner_w[cc]) return false;
  // s-normalization: sum u + sum w = 1
  Rational norm = 0;
  for (const auto& u : cert.vertex_u) norm += u;
  for (const auto& w : cert.corner_w) norm += w;
  if (norm != 1) return false;
  // certified bound: 2 sum y + sum u = value <= 0
  Rational bound = 0;
  for (const auto& y : cert.edge_y) bound += 2 * y;
  for (const auto& u : cert.vertex_u) bound += u;
  return bound == cert.value && cert.value <= 0;
}

// Solves the max-slack LP exactly. Internally substitutes x_c = g_c + s with
// g_c >= 0 (the positivity rows become variable bounds) and splits s into
// s+ - s-; the witness and duals are mapped back to the original system.
inline LPOutcome solve(const AnglePolytope& p) {
  const int nc = p.corner_count;
  LinearProgram lp;
  lp.n = nc + 2;  // g_0..g_{nc-1}, s+, s-
  lp.c.assign(lp.n, Rational(0));
  lp.c[nc] = 1;
  lp.c[nc + 1] = -1;
  for (const auto& row : p.edge_rows) {
    LinearProgram::Row r;
    r.a.assign(lp.n, Rational(0));
    for (int slot : row) r.a[slot] += 1;
    r.a[nc] = static_cast<int>(row.size());
    r.a[nc + 1] = -static_cast<int>(row.size());
    r.rel = LinearProgram::Rel::eq;
    r.b = 2;
    lp.rows.push_back(std::move(r));
  }
  for (const auto& row : p.vertex_rows) {
    LinearProgram::Row r;
    r.a.assign(lp.n, Rational(0));
    for (int slot : row) r.a[slot] += 1;
    r.a[nc] = 4;  // three corner substitutions plus the slack itself
    r.a[nc + 1] = -4;
    r.rel = LinearProgram::Rel::le;
    r.b = 1;
    lp.rows.push_back(std::move(r));
  }

  SimplexResult sol = simplex_solve(lp);
  if (sol.status != SimplexResult::Status::optimal)
    throw SimplexError("angle LP must be feasible and bounded");

  LPOutcome out;
  out.pivots = sol.pivots;
  out.s_star = sol.x[nc] - sol.x[nc + 1];
  out.status = out.s_star > 0   ? LPStatus::strictly_feasible
               : out.s_star == 0 ? LPStatus::boundary_feasible
                                  : LPStatus::infeasible;

  if (out.s_star >= 0) {
    std::vector<Rational> values(nc);
    for (int i = 0; i < nc; ++i) values[i] = sol.x[i] + out.s_star;
    out.witness = AngleAssignment::exact(std::move(values));
  }
  if (out.s_star <= 0) {
    FarkasCertificate cert;
    const int ne = p.equality_count();
    cert.edge_y.assign(sol.y.begin(), sol.y.begin() + ne);
    cert.vertex_u.assign(sol.y.begin() + ne, sol.y.end());
    // duals of <= rows must be >= 0 for a max problem; flip the convention
    // if the solver reports the opposite sign
    cert.corner_w.assign(nc, Rational(0));
    for (int e = 0; e < ne; ++e)
      for (int slot : p.edge_rows[e]) cert.corner_w[slot] += cert.edge_y[e];
    for (int v = 0; v < p.vertex_inequality_count(); ++v)
      for (int slot : p.vertex_rows[v]) cert.corner_w[slot] += cert.vertex_u[v];
    cert.value = 0;
    for (const auto& y : cert.edge_y) cert.value += 2 * y;
    for (const auto& u : cert.vertex_u) cert.value += u;
    if (!certificate_recombines(p, cert))
      throw SimplexError("internal error: optimal duals failed certificate recombination");
    out.certificate = std::move(cert);
  }
  return out;
}

inline LPOutcome solve(const IdealTriangulation& tri) { return solve(build_polytope(tri)); }

}  // namespace anglers
