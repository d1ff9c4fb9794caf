#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

#include "anglers/gram.hpp"

namespace anglers {

// Point of Minkowski space R^{3,1} with the form <x,x> = -x0^2+x1^2+x2^2+x3^2.
// Hyperideal vertices are spacelike, stored normalized to <x,x>=1 with the
// x0 >= 0 sign convention; the polar plane of the vertex is its truncation
// plane.
struct MinkowskiVertex {
  std::array<double, 4> x{};

  static double inner(const MinkowskiVertex& p, const MinkowskiVertex& q) {
    return -p.x[0] * q.x[0] + p.x[1] * q.x[1] + p.x[2] * q.x[2] + p.x[3] * q.x[3];
  }
  double norm2() const { return inner(*this, *this); }

  MinkowskiVertex normalized_spacelike() const {
    double n2 = norm2();
    if (!(n2 > 0)) throw GeometryError("vertex is not hyperideal (<x,x> <= 0)");
    double s = 1.0 / std::sqrt(n2);
    MinkowskiVertex out{{x[0] * s, x[1] * s, x[2] * s, x[3] * s}};
    if (out.x[0] < 0)
      for (auto& v : out.x) v = -v;
    return out;
  }
  MinkowskiVertex negated() const { return {{-x[0], -x[1], -x[2], -x[3]}}; }
};

// Realizes a strict hyperideal tetrahedron from its Gram matrix: face normals
// n_i with <n_i,n_j> = G_ij from the (3,1) eigendecomposition, vertices as the
// dual basis p = N G^{-1}, normalized spacelike. Deterministic up to a global
// isometry.
inline std::array<MinkowskiVertex, 4> realize_vertices(const GramMatrix& g,
                                                       const Tolerances& tol = default_tolerances()) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(g.m);
  if (eig.info() != Eigen::Success) throw GeometryError("Gram eigendecomposition failed");
  Eigen::Vector4d ev = eig.eigenvalues();  // ascending
  if (!(ev(0) < -tol.degeneration && ev(1) > tol.degeneration))
    throw GeometryError("Gram matrix is not of signature (3,1)");
  // order coordinates so the timelike direction is coordinate 0
  Eigen::Matrix4d W;
  for (int i = 0; i < 4; ++i)
    W.row(i) = std::sqrt(std::abs(ev(i))) * eig.eigenvectors().col(i).transpose();
  // columns of W are the face normals in coordinates (timelike first)
  Eigen::Matrix4d P = W * g.m.inverse();  // dual basis: vertex k = column k
  std::array<MinkowskiVertex, 4> out;
  for (int k = 0; k < 4; ++k) {
    MinkowskiVertex p{{P(0, k), P(1, k), P(2, k), P(3, k)}};
    out[k] = p.normalized_spacelike();
  }
  return out;
}

// Dihedral angles from four hyperideal vertices. Representative signs are
// resolved internally so that every edge segment crosses H^3 (<p,q> < -1 for
// the chosen unit representatives); face normals are the Minkowski duals.
inline AngleSextuple angles_from_vertices(const std::array<MinkowskiVertex, 4>& input,
                                          const Tolerances& tol = default_tolerances()) {
  std::array<MinkowskiVertex, 4> p;
  for (int i = 0; i < 4; ++i) p[i] = input[i].normalized_spacelike();

  // pairwise products; |<p,q>| <= 1 means the polar planes meet and the edge
  // misses hyperbolic space regardless of representatives
  double c[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c[i][j] = MinkowskiVertex::inner(p[i], p[j]);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(c[i][j]) <= 1.0 + tol.segment_meets_h3)
        throw GeometryError("edge misses hyperbolic space between vertices " + std::to_string(i) +
                            " and " + std::to_string(j));
  // resolve signs: eps_0 = +1, eps_j chosen so <p_0, p_j> < -1, then check
  // the remaining pairs are consistent
  std::array<double, 4> eps{1, 1, 1, 1};
  for (int j = 1; j < 4; ++j) eps[j] = (c[0][j] < 0) ? 1.0 : -1.0;
  for (int i = 1; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!(eps[i] * eps[j] * c[i][j] < 0))
        throw GeometryError("vertex configuration is not a projective tetrahedron meeting H^3 "
                            "(inconsistent edge signs between vertices " +
                            std::to_string(i) + " and " + std::to_string(j) + ")");
  for (int i = 0; i < 4; ++i)
    if (eps[i] < 0) p[i] = p[i].negated();

  // face normal n_i: Minkowski-orthogonal to the three vertices other than i,
  // normalized spacelike, signed so <n_i, p_i> > 0
  Eigen::Matrix4d eta = Eigen::Matrix4d::Identity();
  eta(0, 0) = -1;
  std::array<MinkowskiVertex, 4> n;
  for (int i = 0; i < 4; ++i) {
    Eigen::Matrix<double, 3, 4> M;
    int r = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      for (int kk = 0; kk < 4; ++kk) M(r, kk) = p[j].x[kk];
      ++r;
    }
    // solve M eta x = 0 via the full-pivot kernel of (M eta)
    Eigen::FullPivLU<Eigen::Matrix<double, 3, 4>> lu(M * eta);
    Eigen::Matrix<double, 4, Eigen::Dynamic> ker = lu.kernel();
    if (ker.cols() != 1) throw GeometryError("coplanar vertices: face normal is not unique");
    MinkowskiVertex ni{{ker(0, 0), ker(1, 0), ker(2, 0), ker(3, 0)}};
    double n2 = ni.norm2();
    if (!(n2 > tol.degeneration))
      throw GeometryError("degenerate face " + std::to_string(i) + ": normal is not spacelike");
    double s = 1.0 / std::sqrt(n2);
    for (auto& v : ni.x) v *= s;
    if (MinkowskiVertex::inner(ni, p[i]) < 0)
      ni = ni.negated();
    n[i] = ni;
  }

  // dihedral angle at edge {k,l} between the two faces not opposite k or l
  AngleSextuple out;
  for (int e = 0; e < 6; ++e) {
    int k = kEdgeVertices[e][0], l = kEdgeVertices[e][1];
    int fa = -1, fb = -1;
    for (int v = 0; v < 4; ++v)
      if (v != k && v != l) (fa < 0 ? fa : fb) = v;
    double ca = -MinkowskiVertex::inner(n[fa], n[fb]);
    out.a[e] = std::acos(std::clamp(ca, -1.0, 1.0));
  }
  auto real = is_realizable(out, tol);
  if (!real.ok)
    throw GeometryError("vertices do not bound a strict hyperideal tetrahedron: " +
                        real.diagnostic);
  return out;
}

}  // namespace anglers
