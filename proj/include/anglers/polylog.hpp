#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace anglers {

namespace detail {

// zeta(2k) by direct summation plus an Euler-Maclaurin tail; accurate to
// ~1e-16 already at k=1 and essentially exact beyond.
inline double zeta_even_term(int twok) {
  const double N = 64.0;
  double s = 0;
  for (int n = 1; n <= 64; ++n) s += std::pow(static_cast<double>(n), -twok);
  double k = twok;
  s += std::pow(N, 1.0 - k) / (k - 1.0) - 0.5 * std::pow(N, -k) + k * std::pow(N, -k - 1.0) / 12.0 -
       k * (k + 1) * (k + 2) * std::pow(N, -k - 3.0) / 720.0;
  return s;
}

inline constexpr int kZetaTerms = 48;

inline const std::array<double, kZetaTerms + 1>& zeta_even_table() {
  static const std::array<double, kZetaTerms + 1> table = [] {
    std::array<double, kZetaTerms + 1> z{};
    for (int k = 1; k <= kZetaTerms; ++k) z[k] = zeta_even_term(2 * k);
    return z;
  }();
  return table;
}

}  // namespace detail

// Lobachevsky function  Lob(x) = -Integral_0^x log|2 sin t| dt.
// Odd, pi-periodic; evaluated from the zeta power series after reduction to
// [-pi/2, pi/2]. Lob(pi/6)*3 + ... anchors: Lob(pi/4) = Catalan/2.
inline double lobachevsky(double x) {
  constexpr double pi = 3.14159265358979323846264338327950288;
  double y = std::remainder(x, pi);
  if (y == 0.0) return 0.0;
  double sign = 1.0;
  if (y < 0) {
    y = -y;
    sign = -1.0;
  }
  const auto& zt = detail::zeta_even_table();
  double s = y - y * std::log(2.0 * y);
  const double r = (y / pi) * (y / pi);
  double p = y;
  for (int k = 1; k <= detail::kZetaTerms; ++k) {
    p *= r;
    double term = zt[k] * p / (k * (2 * k + 1.0));
    s += term;
    if (std::abs(term) < 1e-19 * std::abs(s)) break;
  }
  return sign * s;
}

// Complex dilogarithm Li_2, principal branch (cut along [1, inf)). Inversion
// and reflection reduce the argument to a region where the Bernoulli series in
// w = -log(1-z) converges quickly; the B_{2k} come from the same zeta table.
inline std::complex<double> dilog(std::complex<double> z) {
  using cplx = std::complex<double>;
  constexpr double pi = 3.14159265358979323846264338327950288;
  if (z == cplx(0.0)) return cplx(0.0);
  if (z == cplx(1.0)) return cplx(pi * pi / 6.0, 0.0);
  cplx add = 0.0;
  double sign = 1.0;
  if (std::abs(z) > 1.0) {
    cplx lz = std::log(-z);
    add += -pi * pi / 6.0 - 0.5 * lz * lz;
    z = 1.0 / z;
    sign = -1.0;
  }
  if (z.real() > 0.5) {
    cplx lz = std::log(z), l1z = std::log(1.0 - z);
    add += sign * (pi * pi / 6.0 - lz * l1z);
    z = 1.0 - z;
    sign = -sign;
  }
  const auto& zt = detail::zeta_even_table();
  cplx w = -std::log(1.0 - z);
  cplx w2 = w * w;
  cplx sum = w - w2 / 4.0;
  cplx wp = w;
  double denom = 1.0;
  const double fourpi2 = 4.0 * pi * pi;
  for (int k = 1; k <= detail::kZetaTerms; ++k) {
    wp *= w2;
    denom *= fourpi2;
    double coef = 2.0 * zt[k] / ((2 * k + 1.0) * denom);
    cplx term = (k % 2 == 1 ? coef : -coef) * wp;
    sum += term;
    if (std::abs(term) < 1e-19 * (1.0 + std::abs(sum))) break;
  }
  return sign * sum + add;
}

}  // namespace anglers
