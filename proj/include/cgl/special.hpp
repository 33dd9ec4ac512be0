#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "cgl/errors.hpp"
#include "cgl/numeric.hpp"

namespace cgl {

namespace detail {

inline bool is_nonpositive_integer(complex z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()); }

// Lanczos coefficients for g = 671/128, 14 terms. Relative error of Γ below
// about 1e-15 on the right half-plane for moderate |z|.
inline constexpr double kLanczosG = 5.24218750000000000;
inline constexpr std::array<double, 14> kLanczosCoefficients = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,     -0.491913816097620199,
    .339946499848118887e-4,  .465236289270485756e-4,  -.983744753048795646e-4, .158088703224912494e-3,
    -.210264441724104883e-3, .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

inline complex lanczos_log_gamma(complex z) {
  const complex t = z + kLanczosG;
  complex series = 0.999999999999997092;
  complex denominator = z;
  for (const double c : kLanczosCoefficients) {
    denominator += 1.0;
    series += c / denominator;
  }
  return (z + 0.5) * std::log(t) - t + std::log(2.5066282746310005 * series) - std::log(z);
}

/// A logarithm of sin(πz) that stays finite for large |Im z|.
inline complex log_sin_pi(complex z) {
  if (std::abs(z.imag()) < 20.0) return std::log(std::sin(kPi * z));
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  // sin(πz) = e^{-iπz} (1 - e^{2iπz}) / (-2i)
  const complex I(0.0, 1.0);
  return -I * kPi * z + std::log(1.0 - std::exp(2.0 * I * kPi * z)) - complex(std::log(2.0), -kPi / 2.0);
}

}  // namespace detail

/// log Γ(z). For Re z >= 1/2 the imaginary part follows the principal branch
/// continuous from the positive real axis; for Re z < 1/2 the reflection
/// formula is used, and only exp(log_gamma(z)) is branch independent.
inline complex log_gamma(complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("log_gamma: non-finite argument");
  if (detail::is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
  if (z.real() >= 0.5) return detail::lanczos_log_gamma(z);
  // Γ(z) Γ(1 - z) = π / sin(πz)
  return std::log(kPi) - detail::log_sin_pi(z) - detail::lanczos_log_gamma(1.0 - z);
}

inline complex gamma(complex z) { return std::exp(log_gamma(z)); }

/// Γ(num) / Γ(den) assembled in log space.
inline complex gamma_ratio(complex num, complex den) { return std::exp(log_gamma(num) - log_gamma(den)); }

namespace detail {

// B_{2j} / (2j)!, j = 1..10
inline constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0};

/// Number of directly summed terms for the Euler–Maclaurin evaluation.
inline int euler_maclaurin_terms(complex s) { return std::max(20, static_cast<int>(std::ceil(std::abs(s.imag()))) + 10); }

/// Everything in the Euler–Maclaurin formula for ζ(s, α) except the pole
/// term (M + α)^{1-s} / (s - 1).
inline complex hurwitz_regular_part(complex s, double alpha, int terms) {
  CompensatedSum<complex> sum;
  for (int n = 0; n < terms; ++n) sum.add(std::exp(-s * std::log(n + alpha)));
  const double u = terms + alpha;
  const double log_u = std::log(u);
  const complex u_pow_minus_s = std::exp(-s * log_u);
  sum.add(0.5 * u_pow_minus_s);
  // B_{2j}/(2j)! s (s+1) ... (s+2j-2) u^{-s-2j+1}
  complex rising = s;
  complex power = u_pow_minus_s / u;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    sum.add(kBernoulliOverFactorial[j] * rising * power);
    rising *= (s + static_cast<double>(2 * j + 1)) * (s + static_cast<double>(2 * j + 2));
    power /= u * u;
  }
  return sum.value();
}

/// (e^w - 1) / w, accurate near w = 0.
inline complex expm1_over(complex w) {
  if (std::abs(w) < 0.5) {
    complex term = 1.0, sum = 1.0;
    for (int n = 2; n < 30; ++n) {
      term *= w / static_cast<double>(n);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(w) - 1.0) / w;
}

inline void check_hurwitz_domain(complex s) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("hurwitz_zeta: non-finite s");
  if (s.real() <= -1.0) throw DomainError("hurwitz_zeta: Re(s) must exceed -1");
  if (std::abs(s.imag()) > 1e3) throw DomainError("hurwitz_zeta: |Im(s)| must not exceed 1000");
}

}  // namespace detail

/// Hurwitz zeta ζ(s, α) = Σ_{n>=0} (n + α)^{-s} by Euler–Maclaurin summation,
/// for α in (0, 1], Re(s) > -1, |Im(s)| <= 1000, s != 1.
inline complex hurwitz_zeta(complex s, double alpha) {
  detail::check_hurwitz_domain(s);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("hurwitz_zeta: alpha must lie in (0, 1]");
  if (s == complex(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");
  const int terms = detail::euler_maclaurin_terms(s);
  const double u = terms + alpha;
  return detail::hurwitz_regular_part(s, alpha, terms) + std::exp((1.0 - s) * std::log(u)) / (s - 1.0);
}

}  // namespace cgl
