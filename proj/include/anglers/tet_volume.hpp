#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "anglers/gram.hpp"
#include "anglers/polylog.hpp"

namespace anglers {

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::vector<std::pair<int, std::pair<std::vector<double>, std::vector<double>>>> cache;
  for (auto& entry : cache)
    if (entry.first == n) return entry.second;
  std::vector<double> xs(n), ws(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p1 = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    xs[i] = x;
    ws[i] = 2.0 / ((1 - x * x) * dp * dp);
  }
  cache.push_back({n, {std::move(xs), std::move(ws)}});
  return cache.back().second;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Closed-form volume via complex dilogarithms (the generalized-tetrahedron
// formula of Murakami-Yano, extended to truncated tetrahedra by Ushijima).
// With A,B,C the angles at the edges around vertex 0 and D,E,F at the
// opposite edges, and a = e^{iA} etc., set
//   U(z) = 1/2 [ Li2(z) + Li2(z abde) + Li2(z acdf) + Li2(z bcef)
//               - Li2(-z abc) - Li2(-z aef) - Li2(-z bdf) - Li2(-z cde) ].
// dU/dz = 0 reduces to a quadratic whose two roots z1, z2 give
//   Vol = 1/2 | Im U(z1) - Im U(z2) |.
// The formula is validated against the Schlafli path integral below, the
// ideal limit 3 Lob(pi/3), and the octahedral limit 8 Lob(pi/4).
inline double tet_volume_closed_form(const AngleSextuple& th) {
  using cplx = std::complex<double>;
  // our edge order: A={0,1} B={0,2} C={0,3}, opposite D={2,3} E={1,3} F={1,2}
  const double A = th[0], B = th[1], C = th[2], D = th[5], E = th[4], F = th[3];
  const cplx I(0, 1);
  const cplx a = std::exp(I * A), b = std::exp(I * B), c = std::exp(I * C);
  const cplx d = std::exp(I * D), e = std::exp(I * E), f = std::exp(I * F);
  const cplx P = a * b * d * e, Q = a * c * d * f, R = b * c * e * f;
  const cplx S = a * b * c, T = a * e * f, W = b * d * f, V = c * d * e;
  const cplx q0 = 1.0 + P + Q + R + S + T + W + V;
  const cplx q1 = -((P + Q + R + P * Q + P * R + Q * R) -
                    (S * T + S * W + S * V + T * W + T * V + W * V));
  const cplx q2 =
      P * Q + P * R + Q * R + P * Q * R + S * T * W + S * T * V + S * W * V + T * W * V;
  const cplx disc = std::sqrt(q1 * q1 - 4.0 * q0 * q2);
  const cplx z1 = (-q1 + disc) / (2.0 * q2);
  const cplx z2 = (-q1 - disc) / (2.0 * q2);
  auto U = [&](cplx z) {
    return 0.5 * (dilog(z) + dilog(z * P) + dilog(z * Q) + dilog(z * R) - dilog(-z * S) -
                  dilog(-z * T) - dilog(-z * W) - dilog(-z * V));
  };
  return 0.5 * std::abs(U(z1).imag() - U(z2).imag());
}

// --------------------------------------------------------------------------
// Independent evaluator: integrate the Schlafli identity dV = -1/2 sum l_e
// d(theta_e) along the straight segment from the all-angles-zero corner of
// the realizable region. That base point is the ideal right-angled
// octahedron, whose volume 8 Lob(pi/4) comes from the Lobachevsky function;
// edge lengths vanish linearly there, so the integrand is smooth and plain
// Gauss-Legendre converges to near machine precision.
inline double tet_volume_schlafli(const AngleSextuple& th, int nodes = 96,
                                  const Tolerances& tol = default_tolerances()) {
  auto real = is_realizable(th, tol);
  if (!real.ok) throw GeometryError("Schlafli evaluator needs strict angles: " + real.diagnostic);
  const auto& [xs, ws] = detail::gauss_legendre(nodes);
  double integral = 0;
  for (int i = 0; i < nodes; ++i) {
    double s = 0.5 * (xs[i] + 1.0), w = 0.5 * ws[i];
    AngleSextuple at;
    for (int e = 0; e < 6; ++e) at.a[e] = s * th.a[e];
    GramMatrix g;  // build Gram directly; realizability holds on the open segment
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        if (r == c) {
          g.m(r, c) = 1.0;
          continue;
        }
        int u = -1, v = -1;
        for (int x = 0; x < 4; ++x)
          if (x != r && x != c) (u < 0 ? u : v) = x;
        g.m(r, c) = -std::cos(at[kEdgeBetween[u][v]]);
      }
    auto L = edge_lengths(g, tol);
    double slope = 0;
    for (int e = 0; e < 6; ++e) slope += L[e] * th.a[e];
    integral += w * slope;
  }
  return 8.0 * lobachevsky(kPi / 4.0) - 0.5 * integral;
}

// Volume of one tetrahedron from its six dihedral angles: 0 for the flat
// pattern, otherwise the closed form (strict hyperideal angles required).
inline double tet_volume(const AngleSextuple& th, const Tolerances& tol = default_tolerances()) {
  if (is_flat_pattern(th)) return 0.0;
  auto real = is_realizable(th, tol);
  if (!real.ok)
    throw GeometryError("tet_volume needs strict hyperideal angles or the flat pattern: " +
                        real.diagnostic);
  return tet_volume_closed_form(th);
}

// Full per-tetrahedron geometry record.
struct TetGeometry {
  AngleSextuple angles;
  GramMatrix gram;
  std::array<double, 6> lengths{};
  double volume = 0;
};

inline TetGeometry tet_geometry(const AngleSextuple& th,
                                const Tolerances& tol = default_tolerances()) {
  TetGeometry out;
  out.angles = th;
  out.gram = gram_from_angles(th, tol);
  out.lengths = edge_lengths(out.gram, tol);
  out.volume = tet_volume(th, tol);
  return out;
}

}  // namespace anglers
