#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "anglers/rational.hpp"
#include "anglers/tolerances.hpp"
#include "anglers/triangulation.hpp"

namespace anglers {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

enum class AngleMode { rational_pi, radians };

// One dihedral angle per corner slot (tet*6+edge). Exact values are rational
// multiples of pi; float values are radians. Conversion happens only at module
// boundaries, never inside the exact pipeline.
struct AngleAssignment {
  AngleMode mode = AngleMode::rational_pi;
  std::vector<Rational> rat;  // units of pi
  std::vector<double> flt;    // radians

  static AngleAssignment exact(std::vector<Rational> values) {
    AngleAssignment a;
    a.mode = AngleMode::rational_pi;
    a.rat = std::move(values);
    return a;
  }
  static AngleAssignment floating(std::vector<double> values) {
    AngleAssignment a;
    a.mode = AngleMode::radians;
    a.flt = std::move(values);
    return a;
  }

  bool exact_mode() const { return mode == AngleMode::rational_pi; }
  int size() const {
    return static_cast<int>(exact_mode() ? rat.size() : flt.size());
  }
  double radians(int slot) const {
    return exact_mode() ? to_double(rat[slot]) * kPi : flt[slot];
  }
  const Rational& pi_units(int slot) const {
    if (!exact_mode()) throw std::logic_error("pi_units on a radians-mode assignment");
    return rat[slot];
  }
};

enum class TetTag { hyperideal, flat };

inline std::string tag_name(TetTag t) { return t == TetTag::flat ? "flat" : "hyperideal"; }

// Non-negative assignment where each tetrahedron is either strictly hyperideal
// or carries the exact flat pattern (pi on one opposite edge pair, 0 on the
// other four edges).
struct PartiallyFlatAssignment {
  AngleAssignment values;
  std::vector<TetTag> tags;  // one per tetrahedron
};

// --------------------------------------------------------------------------
// Scalar abstraction: Rational values are in units of pi, doubles in radians.

template <class S>
struct angle_scalar;

template <>
struct angle_scalar<Rational> {
  static constexpr bool exact = true;
  static Rational pi() { return Rational(1); }
  static Rational get(const AngleAssignment& a, int slot) { return a.pi_units(slot); }
  static double report(const Rational& v) { return to_double(v) * kPi; }
};

template <>
struct angle_scalar<double> {
  static constexpr bool exact = false;
  static double pi() { return kPi; }
  static double get(const AngleAssignment& a, int slot) { return a.flt[slot]; }
  static double report(double v) { return v; }
};

// --------------------------------------------------------------------------
// Verification of the angle-structure conditions (edge sums 2*pi, positive
// angles, vertex sums < pi).

struct VerifyReport {
  bool pass = false;
  double max_edge_residual = 0;  // |sum - 2pi|, radians
  double min_vertex_margin = 0;  // pi - sum, radians
  double min_angle = 0;          // radians
  std::vector<double> edge_residuals;
  std::vector<std::string> failures;
};

namespace detail {

template <class S>
VerifyReport verify_impl(const IdealTriangulation& tri, const AngleAssignment& a, double tol) {
  using tr = angle_scalar<S>;
  VerifyReport rep;
  rep.pass = true;
  if (a.size() != tri.corner_count()) {
    rep.pass = false;
    rep.failures.push_back("assignment covers " + std::to_string(a.size()) + " corners, expected " +
                           std::to_string(tri.corner_count()));
    return rep;
  }
  const S two_pi = 2 * tr::pi();
  rep.min_vertex_margin = std::numeric_limits<double>::infinity();
  rep.min_angle = std::numeric_limits<double>::infinity();
  for (const auto& cls : tri.edge_classes()) {
    S sum{};
    for (const auto& c : cls.corners) sum += tr::get(a, c.slot());
    double residual = std::abs(tr::report(sum) - tr::report(two_pi));
    if constexpr (tr::exact) {
      if (sum != two_pi) {
        rep.pass = false;
        rep.failures.push_back("edge class " + std::to_string(cls.id) + " sum != 2pi exactly");
      }
      residual = (sum == two_pi) ? 0.0 : residual;
    } else {
      if (!(residual <= tol)) {
        rep.pass = false;
        rep.failures.push_back("edge class " + std::to_string(cls.id) + " residual " +
                               std::to_string(residual) + " > tol");
      }
    }
    rep.edge_residuals.push_back(residual);
    rep.max_edge_residual = std::max(rep.max_edge_residual, residual);
  }
  for (int t = 0; t < tri.tet_count(); ++t) {
    for (int e = 0; e < 6; ++e) {
      S v = tr::get(a, t * 6 + e);
      rep.min_angle = std::min(rep.min_angle, tr::report(v));
      if (!(v > S{})) {
        rep.pass = false;
        rep.failures.push_back("non-positive angle at corner " + std::to_string(t) + "." +
                               std::to_string(e));
      }
    }
    for (int v = 0; v < 4; ++v) {
      S sum{};
      for (int e : edges_at_vertex(v)) sum += tr::get(a, t * 6 + e);
      double margin = tr::report(tr::pi()) - tr::report(sum);
      rep.min_vertex_margin = std::min(rep.min_vertex_margin, margin);
      if (!(sum < tr::pi())) {
        rep.pass = false;
        rep.failures.push_back("vertex sum >= pi at (" + std::to_string(t) + "," +
                               std::to_string(v) + ")");
      }
    }
  }
  return rep;
}

}  // namespace detail

inline VerifyReport verify(const IdealTriangulation& tri, const AngleAssignment& a,
                           double tol = default_tolerances().verify) {
  return a.exact_mode() ? detail::verify_impl<Rational>(tri, a, tol)
                        : detail::verify_impl<double>(tri, a, tol);
}

// --------------------------------------------------------------------------
// Partially flat assignments: validation, edge profiles, t_max, perturbation.

class Lemma41Error : public std::runtime_error {
 public:
  Lemma41Error(int edge_class, const std::string& what)
      : std::runtime_error(what), edge_class_(edge_class) {}
  int edge_class() const { return edge_class_; }

 private:
  int edge_class_;
};

// Counts of 0-angles (m), pi-angles (n) and interior angles (k) around an
// edge class.
struct EdgeProfile {
  int m = 0, n = 0, k = 0;
  int valence() const { return m + n + k; }
};

struct PartiallyFlatReport {
  bool pass = true;
  std::vector<std::string> failures;
  void fail(const std::string& msg) {
    pass = false;
    failures.push_back(msg);
  }
};

namespace detail {

template <class S>
int classify_value(const S& v, double float_tol) {
  using tr = angle_scalar<S>;
  if constexpr (tr::exact) {
    if (v == S{}) return 0;       // zero angle
    if (v == tr::pi()) return 2;  // pi angle
    return 1;                     // interior
  } else {
    if (std::abs(v) <= float_tol) return 0;
    if (std::abs(v - tr::pi()) <= float_tol) return 2;
    return 1;
  }
}

// The flat pattern's two pi-edges must be an opposite pair, the rest zero.
template <class S>
bool is_flat_pattern_values(const AngleAssignment& a, int tet, double float_tol) {
  using tr = angle_scalar<S>;
  int pi_edges[2], npi = 0;
  for (int e = 0; e < 6; ++e) {
    int c = classify_value<S>(tr::get(a, tet * 6 + e), float_tol);
    if (c == 1) return false;
    if (c == 2) {
      if (npi == 2) return false;
      pi_edges[npi++] = e;
    }
  }
  return npi == 2 && pi_edges[1] == opposite_edge(pi_edges[0]);
}

template <class S>
std::vector<EdgeProfile> edge_profiles_impl(const IdealTriangulation& tri,
                                            const AngleAssignment& a, double float_tol) {
  using tr = angle_scalar<S>;
  std::vector<EdgeProfile> out;
  out.reserve(tri.edge_classes().size());
  for (const auto& cls : tri.edge_classes()) {
    EdgeProfile p;
    for (const auto& c : cls.corners) {
      switch (classify_value<S>(tr::get(a, c.slot()), float_tol)) {
        case 0: ++p.m; break;
        case 1: ++p.k; break;
        default: ++p.n; break;
      }
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace detail

inline std::vector<EdgeProfile> edge_profiles(const IdealTriangulation& tri,
                                              const PartiallyFlatAssignment& beta,
                                              double float_tol = default_tolerances().verify) {
  auto profs = beta.values.exact_mode()
                   ? detail::edge_profiles_impl<Rational>(tri, beta.values, float_tol)
                   : detail::edge_profiles_impl<double>(tri, beta.values, float_tol);
  for (std::size_t i = 0; i < profs.size(); ++i)
    if (profs[i].k == 0)
      throw Lemma41Error(static_cast<int>(i), "edge with no interior angle: class " +
                                                  std::to_string(i) + " has k(e) = 0");
  return profs;
}

namespace detail {

template <class S>
PartiallyFlatReport validate_partially_flat_impl(const IdealTriangulation& tri,
                                                 const PartiallyFlatAssignment& beta,
                                                 double float_tol) {
  using tr = angle_scalar<S>;
  PartiallyFlatReport rep;
  const AngleAssignment& a = beta.values;
  if (a.size() != tri.corner_count()) {
    rep.fail("assignment size mismatch");
    return rep;
  }
  if (static_cast<int>(beta.tags.size()) != tri.tet_count()) {
    rep.fail("tag list size mismatch");
    return rep;
  }
  for (int t = 0; t < tri.tet_count(); ++t) {
    if (beta.tags[t] == TetTag::flat) {
      if (!is_flat_pattern_values<S>(a, t, float_tol))
        rep.fail("flat-tagged tetrahedron " + std::to_string(t) +
                 " does not carry the exact flat pattern");
    } else {
      for (int e = 0; e < 6; ++e) {
        S v = tr::get(a, t * 6 + e);
        if (!(S{} < v && v < tr::pi()))
          rep.fail("hyperideal tetrahedron " + std::to_string(t) + " has angle outside (0,pi) at edge " +
                   std::to_string(e));
      }
      for (int v = 0; v < 4; ++v) {
        S sum{};
        for (int e : edges_at_vertex(v)) sum += tr::get(a, t * 6 + e);
        if (!(sum < tr::pi()))
          rep.fail("hyperideal tetrahedron " + std::to_string(t) + " vertex " + std::to_string(v) +
                   " sum >= pi");
      }
    }
  }
  const S two_pi = 2 * tr::pi();
  for (const auto& cls : tri.edge_classes()) {
    S sum{};
    for (const auto& c : cls.corners) sum += tr::get(a, c.slot());
    if constexpr (tr::exact) {
      if (sum != two_pi) rep.fail("edge class " + std::to_string(cls.id) + " sum != 2pi");
    } else {
      if (std::abs(tr::report(sum) - 2 * kPi) > float_tol)
        rep.fail("edge class " + std::to_string(cls.id) + " sum != 2pi within tolerance");
    }
  }
  // Lemma 4.1: every edge class needs at least one interior corner
  auto profs = edge_profiles_impl<S>(tri, a, float_tol);
  for (std::size_t i = 0; i < profs.size(); ++i)
    if (profs[i].k == 0) rep.fail("edge class " + std::to_string(i) + " has no interior angle");
  return rep;
}

}  // namespace detail

inline PartiallyFlatReport validate_partially_flat(const IdealTriangulation& tri,
                                                   const PartiallyFlatAssignment& beta,
                                                   double float_tol = default_tolerances().verify) {
  return beta.values.exact_mode()
             ? detail::validate_partially_flat_impl<Rational>(tri, beta, float_tol)
             : detail::validate_partially_flat_impl<double>(tri, beta, float_tol);
}

// --------------------------------------------------------------------------
// t_max: supremum of admissible perturbation parameters. For each edge class e
// write c_e = (m(e) - 3 n(e)) / k(e); the constraints on t are
//   * interior corners stay positive:      beta - c_e t > 0   (binds iff c_e > 0)
//   * pi-corners stay positive:            pi - 3t > 0
//   * hyperideal vertex sums stay < pi:    sum(beta) - (sum c_{e_i}) t < pi
//                                          (binds iff sum c_{e_i} < 0)
// capped at pi/3 even when nothing binds.

template <class S>
struct TMaxResult {
  S value{};
  std::string binding;  // description of the first binding constraint
};

namespace detail {

template <class S>
TMaxResult<S> t_max_impl(const IdealTriangulation& tri, const PartiallyFlatAssignment& beta,
                         double float_tol) {
  using tr = angle_scalar<S>;
  auto profs = edge_profiles_impl<S>(tri, beta.values, float_tol);
  for (std::size_t i = 0; i < profs.size(); ++i)
    if (profs[i].k == 0)
      throw Lemma41Error(static_cast<int>(i),
                         "edge with no interior angle: class " + std::to_string(i));

  std::vector<S> c_edge(profs.size());
  for (std::size_t i = 0; i < profs.size(); ++i)
    c_edge[i] = (S(profs[i].m) - S(3) * S(profs[i].n)) / S(profs[i].k);

  TMaxResult<S> best{tr::pi() / S(3), "flat-pattern cap t < pi/3"};
  auto consider = [&](const S& bound, const std::string& what) {
    if (bound < best.value) best = {bound, what};
  };
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int e = 0; e < 6; ++e) {
      S v = tr::get(beta.values, t * 6 + e);
      if (classify_value<S>(v, float_tol) != 1) continue;
      const S& c = c_edge[tri.edge_class_id(t, e)];
      if (c > S{})
        consider(v / c, "positivity of corner " + std::to_string(t) + "." + std::to_string(e));
    }
  for (int t = 0; t < tri.tet_count(); ++t) {
    if (beta.tags[t] == TetTag::flat) continue;
    for (int v = 0; v < 4; ++v) {
      S bsum{}, csum{};
      for (int e : edges_at_vertex(v)) {
        bsum += tr::get(beta.values, t * 6 + e);
        csum += c_edge[tri.edge_class_id(t, e)];
      }
      if (csum < S{})
        consider((tr::pi() - bsum) / (S{} - csum),
                 "vertex sum (" + std::to_string(t) + "," + std::to_string(v) + ")");
    }
  }
  return best;
}

template <class S>
AngleAssignment perturb_impl(const IdealTriangulation& tri, const PartiallyFlatAssignment& beta,
                             const S& t, double float_tol) {
  using tr = angle_scalar<S>;
  auto tmax = t_max_impl<S>(tri, beta, float_tol);
  if (!(S{} < t && t < tmax.value))
    throw std::domain_error("perturbation parameter outside the admissible interval (0, t_max)");
  auto profs = edge_profiles_impl<S>(tri, beta.values, float_tol);
  std::vector<S> out(static_cast<std::size_t>(tri.corner_count()));
  for (int tet = 0; tet < tri.tet_count(); ++tet)
    for (int e = 0; e < 6; ++e) {
      int slot = tet * 6 + e;
      S v = tr::get(beta.values, slot);
      const EdgeProfile& p = profs[tri.edge_class_id(tet, e)];
      switch (classify_value<S>(v, float_tol)) {
        case 0: out[slot] = t; break;
        case 2: out[slot] = tr::pi() - S(3) * t; break;
        default: out[slot] = v - (S(p.m) - S(3) * S(p.n)) / S(p.k) * t; break;
      }
    }
  if constexpr (tr::exact)
    return AngleAssignment::exact(std::move(out));
  else
    return AngleAssignment::floating(std::move(out));
}

}  // namespace detail

inline TMaxResult<Rational> t_max(const IdealTriangulation& tri,
                                  const PartiallyFlatAssignment& beta) {
  if (!beta.values.exact_mode()) throw std::logic_error("exact t_max needs rational-pi mode");
  return detail::t_max_impl<Rational>(tri, beta, 0.0);
}

inline TMaxResult<double> t_max_float(const IdealTriangulation& tri,
                                      const PartiallyFlatAssignment& beta,
                                      double float_tol = default_tolerances().verify) {
  if (beta.values.exact_mode()) {
    auto r = detail::t_max_impl<Rational>(tri, beta, 0.0);
    return {to_double(r.value) * kPi, r.binding};
  }
  return detail::t_max_impl<double>(tri, beta, float_tol);
}

// alpha_t per the perturbation rule: t on 0-corners, pi-3t on pi-corners,
// beta - ((m-3n)/k) t on interior corners. Edge sums are preserved exactly.
inline AngleAssignment perturb(const IdealTriangulation& tri, const PartiallyFlatAssignment& beta,
                               const Rational& t) {
  if (!beta.values.exact_mode()) throw std::logic_error("exact perturb needs rational-pi mode");
  return detail::perturb_impl<Rational>(tri, beta, t, 0.0);
}

inline AngleAssignment perturb_float(const IdealTriangulation& tri,
                                     const PartiallyFlatAssignment& beta, double t_radians,
                                     double float_tol = default_tolerances().verify) {
  if (beta.values.exact_mode()) throw std::logic_error("float perturb needs radians mode");
  return detail::perturb_impl<double>(tri, beta, t_radians, float_tol);
}

}  // namespace anglers
