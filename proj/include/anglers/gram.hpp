#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "anglers/angles.hpp"
#include "anglers/edge_index.hpp"
#include "anglers/tolerances.hpp"

namespace anglers {

class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Six dihedral angles in radians, indexed by EdgeIndex.
struct AngleSextuple {
  std::array<double, 6> a{};

  static AngleSextuple uniform(double v) {
    AngleSextuple s;
    s.a.fill(v);
    return s;
  }
  static AngleSextuple of_tet(const AngleAssignment& assign, int tet) {
    AngleSextuple s;
    for (int e = 0; e < 6; ++e) s.a[e] = assign.radians(tet * 6 + e);
    return s;
  }
  double operator[](int e) const { return a[e]; }
  double vertex_sum(int v) const {
    auto es = edges_at_vertex(v);
    return a[es[0]] + a[es[1]] + a[es[2]];
  }
};

struct Realizability {
  bool ok = false;
  int bad_vertex = -1;  // first vertex with sum >= pi, if any
  std::string diagnostic;
};

// Strict hyperideal realizability: every angle in (0, pi) and each of the
// four vertex sums < pi (the Bao-Bonahon dihedral-angle characterization).
inline Realizability is_realizable(const AngleSextuple& angles,
                                   const Tolerances& tol = default_tolerances()) {
  for (int e = 0; e < 6; ++e) {
    if (angles[e] < 0.0 || angles[e] > kPi)
      throw GeometryError("angle outside [0,pi] at edge " + std::to_string(e));
  }
  for (int e = 0; e < 6; ++e) {
    if (angles[e] <= tol.realizability_margin || angles[e] >= kPi - tol.realizability_margin)
      return {false, -1, "angle at edge " + std::to_string(e) + " not interior to (0,pi)"};
  }
  for (int v = 0; v < 4; ++v) {
    if (angles.vertex_sum(v) >= kPi - tol.realizability_margin)
      return {false, v, "vertex " + std::to_string(v) + " angle sum >= pi"};
  }
  return {true, -1, ""};
}

// The degenerate flat pattern: pi on one opposite edge pair, 0 elsewhere.
inline bool is_flat_pattern(const AngleSextuple& angles, double tol = 1e-12) {
  for (int pair = 0; pair < 3; ++pair) {
    int e1 = pair, e2 = opposite_edge(pair);
    bool ok = true;
    for (int e = 0; e < 6; ++e) {
      double want = (e == e1 || e == e2) ? kPi : 0.0;
      if (std::abs(angles[e] - want) > tol) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Gram matrix of the four face planes: unit diagonal, entry (i,j) equal to
// -cos of the dihedral angle at the edge shared by faces i and j (the edge
// joining the two vertices other than i and j).
struct GramMatrix {
  Eigen::Matrix4d m;
};

// Standard cofactor matrix cof(i,j) = (-1)^{i+j} minor(i,j) (the adjugate,
// since G is symmetric). For a strict hyperideal tetrahedron the principal
// 3x3 minors are the Gram matrices of the hyperbolic link triangles, so the
// diagonal entries come out negative while the off-diagonals are positive.
inline Eigen::Matrix4d gram_cofactors(const GramMatrix& g) {
  Eigen::Matrix4d cof;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Eigen::Matrix3d minor;
      int rr = 0;
      for (int r = 0; r < 4; ++r) {
        if (r == i) continue;
        int cc = 0;
        for (int c = 0; c < 4; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = g.m(r, c);
        }
        ++rr;
      }
      double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      cof(i, j) = sign * minor.determinant();
    }
  return cof;
}

// Diagonal cofactors reported in the truncation sign convention (negated
// principal minors), positive exactly when vertex k is hyperideal and its
// truncation triangle exists. The edge-length formula below is unchanged by
// the convention because the diagonal entries only enter as a product of two.
inline std::array<double, 4> vertex_cofactors(const GramMatrix& g) {
  Eigen::Matrix4d cof = gram_cofactors(g);
  return {-cof(0, 0), -cof(1, 1), -cof(2, 2), -cof(3, 3)};
}

inline GramMatrix gram_from_angles(const AngleSextuple& angles,
                                   const Tolerances& tol = default_tolerances()) {
  auto real = is_realizable(angles, tol);
  if (!real.ok) throw GeometryError("angles not realizable: " + real.diagnostic);
  GramMatrix g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) {
        g.m(i, j) = 1.0;
        continue;
      }
      int a = -1, b = -1;
      for (int v = 0; v < 4; ++v)
        if (v != i && v != j) (a < 0 ? a : b) = v;
      g.m(i, j) = -std::cos(angles[kEdgeBetween[a][b]]);
    }
  double det = g.m.determinant();
  auto vc = vertex_cofactors(g);
  if (!(det < -tol.degeneration * tol.degeneration))
    throw GeometryError("realization failed: Gram determinant " + std::to_string(det) +
                        " not negative beyond tolerance");
  for (int k = 0; k < 4; ++k)
    if (!(vc[k] > 0))
      throw GeometryError("realization failed: diagonal cofactor " + std::to_string(k) + " = " +
                          std::to_string(vc[k]) + " not positive");
  return g;
}

// Length of each edge between its two truncation triangles. Lengths grow
// without bound toward the ideal limit (vertex sums -> pi) and shrink to zero
// toward the all-zero-angles octahedral limit.
inline std::array<double, 6> edge_lengths(const GramMatrix& g,
                                          const Tolerances& tol = default_tolerances()) {
  Eigen::Matrix4d cof = gram_cofactors(g);
  auto vc = vertex_cofactors(g);
  std::array<double, 6> out{};
  for (int e = 0; e < 6; ++e) {
    int k = kEdgeVertices[e][0], l = kEdgeVertices[e][1];
    double den = vc[k] * vc[l];
    if (!(den > 0))
      throw GeometryError("degenerate truncation cofactors at edge " + std::to_string(e));
    double ch = cof(k, l) / std::sqrt(den);
    if (ch < 1.0 - tol.degeneration)
      throw GeometryError("degeneration: cosh(length) = " + std::to_string(ch) + " < 1 at edge " +
                          std::to_string(e));
    out[e] = std::acosh(std::max(1.0, ch));
  }
  return out;
}

inline std::array<double, 6> edge_lengths(const AngleSextuple& angles,
                                          const Tolerances& tol = default_tolerances()) {
  return edge_lengths(gram_from_angles(angles, tol), tol);
}

// Side lengths of the truncation triangle at vertex v (the external edges).
// The triangle's interior angles are the dihedral angles at v's three edges;
// these shrink to points in the ideal limit.
inline std::array<double, 3> truncation_triangle_sides(const AngleSextuple& angles, int v) {
  auto es = edges_at_vertex(v);
  std::array<double, 3> out{};
  // hyperbolic law of cosines from the angles (A,B,C) of the link triangle:
  // cosh(side opposite A) = (cos A + cos B cos C) / (sin B sin C)
  for (int i = 0; i < 3; ++i) {
    double A = angles[es[i]], B = angles[es[(i + 1) % 3]], C = angles[es[(i + 2) % 3]];
    double ch = (std::cos(A) + std::cos(B) * std::cos(C)) / (std::sin(B) * std::sin(C));
    out[i] = std::acosh(std::max(1.0, ch));
  }
  return out;
}

}  // namespace anglers
