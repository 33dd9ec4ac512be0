#pragma once

// Reference evaluators written independently of the library code paths.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using complex = std::complex<double>;

/// Σ_{k>=0} (-1)^k a_k for totally monotone a_k (Cohen, Rodriguez Villegas, Zagier).
template <typename Term>
double alternating_sum(Term&& a, int n = 40) {
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, s = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c * a(k);
    b = static_cast<double>(k + n) * static_cast<double>(k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

inline double catalan() {
  return alternating_sum([](int k) { return 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 1.0)); });
}

inline double leibniz() {
  return alternating_sum([](int k) { return 1.0 / (2.0 * k + 1.0); });
}

/// ζ(s) from the alternating η series with Borwein's Chebyshev weights.
inline complex zeta_borwein(complex s, int n = 100) {
  std::vector<double> d(n + 1);
  double term = 1.0, acc = 1.0;
  d[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    term *= 4.0 * static_cast<double>(n + i) * static_cast<double>(n - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
    acc += term;
    d[i + 1] = acc;
  }
  complex sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * (d[k] - d[n]) / d[n] * std::exp(-s * std::log(static_cast<double>(k + 1)));
  }
  return -sum / (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

/// Riemann–Siegel θ(t) from its Stirling series.
inline double riemann_siegel_theta(double t) {
  return 0.5 * t * std::log(t / (2.0 * std::numbers::pi)) - 0.5 * t - std::numbers::pi / 8.0 + 1.0 / (48.0 * t) +
         7.0 / (5760.0 * t * t * t) + 31.0 / (80640.0 * std::pow(t, 5));
}

inline double hardy_z(double t) { return (std::polar(1.0, riemann_siegel_theta(t)) * zeta_borwein(complex(0.5, t))).real(); }

/// Zeros of the Hardy Z-function on [lo, hi] by a uniform sign-change scan
/// and bisection.
inline std::vector<double> zeta_zeros(double lo, double hi, double step, double tol = 1e-12) {
  std::vector<double> out;
  double t0 = lo, f0 = hardy_z(lo);
  const auto count = static_cast<long>(std::ceil((hi - lo) / step));
  for (long j = 1; j <= count; ++j) {
    const double t1 = std::min(hi, lo + static_cast<double>(j) * step);
    const double f1 = hardy_z(t1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double a = t0, b = t1, fa = f0;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = hardy_z(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    t0 = t1;
    f0 = f1;
  }
  return out;
}

}  // namespace oracle
