#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cgl/characters.hpp"
#include "cgl/errors.hpp"
#include "cgl/explicit_formula.hpp"
#include "cgl/goldbach.hpp"
#include "cgl/lfunction.hpp"
#include "cgl/numeric.hpp"
#include "cgl/special.hpp"
#include "cgl/zero_catalog.hpp"

namespace cgl {

struct BoundComparison {
  double measured = 0.0;
  double bound_shape = 1.0;
  double ratio = 0.0;
};

inline BoundComparison compare(double measured, double bound_shape) {
  if (!(bound_shape > 0.0)) throw NumericConsistencyError("bound shape must be positive");
  return {measured, bound_shape, measured / bound_shape};
}

/// 𝓔(z; q, a) = φ(q) S̃_{a,q}(z) - [1/z - Σ_χ conj χ(a) Σ_{|γ| <= T} z^{-ρ} Γ(ρ)],
/// evaluated as a difference of computables. Includes the truncation tail
/// of the zero sum.
class ErrorFunction {
 public:
  ErrorFunction(std::uint64_t q, std::int64_t a, const ZeroCatalog& catalog, double gamma_max, const LambdaTable& table,
                double eps)
      : q_(q), a_(a), phi_(static_cast<double>(euler_phi(q))), table_(&table), eps_(eps) {
    if (std::gcd(residue(a, q), q) != 1) throw InvalidArgument("a must be coprime to q");
    if (gamma_max <= 0.0) return;
    for (const auto& chi : character_group(q)) {
      const CharacterKey key = key_of(conductor(chi).primitive);
      const auto* entry = catalog.find(key);
      if (entry == nullptr || entry->gamma_max < gamma_max) {
        throw CoverageError("zero catalog does not cover " + key.str() + " up to gamma_max " + detail::format_decimal(gamma_max));
      }
      const complex w = std::conj(chi(a));
      for (const auto& z : entry->zeros) {
        if (std::abs(z.gamma) > gamma_max) continue;
        zeros_.push_back({z.rho(), w, log_gamma(z.rho())});
        if (entry->real_character && z.gamma != 0.0) zeros_.push_back({std::conj(z.rho()), w, log_gamma(std::conj(z.rho()))});
      }
    }
  }

  /// 1/z - Σ_χ conj χ(a) Σ_ρ z^{-ρ} Γ(ρ).
  complex main_term(const EvalPoint& point) const {
    point.validate();
    const complex z = point.z();
    const complex log_z = std::log(z);
    CompensatedSum<complex> sum;
    for (const auto& zero : zeros_) sum.add(zero.weight * std::exp(zero.log_gamma - zero.rho * log_z));
    return 1.0 / z - sum.value();
  }

  complex direct_term(const EvalPoint& point) const { return phi_ * stilde_progression(point, q_, a_, *table_, eps_); }

  complex operator()(const EvalPoint& point) const { return direct_term(point) - main_term(point); }

 private:
  struct PreparedZero {
    complex rho;
    complex weight;
    complex log_gamma;
  };

  std::uint64_t q_;
  std::int64_t a_;
  double phi_;
  const LambdaTable* table_;
  double eps_;
  std::vector<PreparedZero> zeros_;
};

inline complex error_function(const EvalPoint& z, std::uint64_t q, std::int64_t a, const ZeroCatalog& catalog, double gamma_max,
                              const LambdaTable& table, double eps) {
  return ErrorFunction(q, a, catalog, gamma_max, table, eps)(z);
}

/// g(q) + 1 + |log|z|| + |z|^{1/2} (log q + 1) B(y), with B = 1 for |y| <= x
/// and B = 1 + log²(|y|/x) above.
inline double linnik_bound_shape(const EvalPoint& z, double g_q, std::uint64_t q) {
  const double r = std::abs(z.z());
  const double ay = std::abs(z.y);
  const double branch = ay <= z.x ? 1.0 : 1.0 + std::pow(std::log(ay / z.x), 2);
  return g_q + 1.0 + std::abs(std::log(r)) + std::sqrt(r) * (std::log(static_cast<double>(q)) + 1.0) * branch;
}

inline std::vector<BoundComparison> linnik_bound_ratio(std::uint64_t q, std::int64_t a, std::uint64_t N,
                                                       const std::vector<EvalPoint>& grid, const ZeroCatalog& catalog,
                                                       double gamma_max, const LambdaTable& table, double eps = 1e-12,
                                                       unsigned threads = 1) {
  const double x = 1.0 / static_cast<double>(N);
  for (const auto& p : grid) {
    if (std::abs(p.x - x) > 1e-15 * x) throw InvalidArgument("linnik_bound_ratio: grid points must lie on x = 1/N");
  }
  const ErrorFunction E(q, a, catalog, gamma_max, table, eps);
  const double g_q = g_factor(q, exceptional_zero_scan(q));
  std::vector<BoundComparison> out(grid.size());
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { out[i] = compare(std::abs(E(grid[i])), linnik_bound_shape(grid[i], g_q, q)); });
  return out;
}

struct LIntegralResult {
  BoundComparison comparison;
  /// Estimated contribution of |y| > y_max, from the integrand decay y^{-(k+1)}.
  double truncation_tail = 0.0;
  std::size_t nodes = 0;
};

/// Trapezoidal ∫_{-y_max}^{y_max} |𝓔(x + iy)|² / |z|^{k+1} dy at x = 1/N,
/// compared with N^k (g(q) + log N)².
inline LIntegralResult l_integral(std::uint64_t N, std::uint64_t q, std::int64_t a, double k, double y_max, double quad_step,
                                  const ZeroCatalog& catalog, double gamma_max, const LambdaTable& table, double eps = 1e-12,
                                  unsigned threads = 1) {
  if (!(k > 1.0)) throw InvalidArgument("l_integral: k must exceed 1");
  if (!(y_max > 0.0) || !(quad_step > 0.0)) throw InvalidArgument("l_integral: y_max and quad_step must be positive");
  const double x = 1.0 / static_cast<double>(N);
  const ErrorFunction E(q, a, catalog, gamma_max, table, eps);
  const auto half = static_cast<std::size_t>(std::ceil(y_max / quad_step));
  const double h = y_max / static_cast<double>(half);
  const std::size_t nodes = 2 * half + 1;
  std::vector<double> f(nodes);
  parallel_for(nodes, threads, [&](std::size_t i) {
    const double y = (static_cast<double>(i) - static_cast<double>(half)) * h;
    const EvalPoint p{x, y};
    f[i] = std::norm(E(p)) / std::pow(std::abs(p.z()), k + 1.0);
  });
  CompensatedSum<double> sum;
  for (std::size_t i = 0; i < nodes; ++i) sum.add((i == 0 || i + 1 == nodes ? 0.5 : 1.0) * f[i]);
  const double integral = sum.value() * h;
  const double g_q = g_factor(q, exceptional_zero_scan(q));
  const double log_n = std::log(static_cast<double>(N));
  LIntegralResult out;
  out.comparison = compare(integral, std::pow(static_cast<double>(N), k) * (g_q + log_n) * (g_q + log_n));
  // ∫_{y_max}^∞ f(y_max) (y_max / y)^{k+1} dy on both sides.
  out.truncation_tail = (f.front() + f.back()) * y_max / k;
  out.nodes = nodes;
  return out;
}

/// (1/2πi) ∫_{a-iT}^{a+iT} u^{-s} e^u du by the trapezoid rule, plus the
/// asymptotic integration-by-parts expansion of the two tails beyond ±T.
inline complex gamma_transform_integral(complex s, double a, double T, double step, bool tail_correction = true) {
  if (!(s.real() > 0.0)) throw InvalidArgument("gamma_transform: Re(s) must be positive");
  if (!(a > 0.0) || !(T > 0.0) || !(step > 0.0)) throw InvalidArgument("gamma_transform: a, T and step must be positive");
  const auto n = static_cast<std::int64_t>(std::ceil(T / step));
  const double h = T / static_cast<double>(n);
  auto f = [&](double v) { return std::exp(-s * std::log(complex(a, v))) * std::polar(1.0, v); };
  CompensatedSum<complex> sum;
  for (std::int64_t j = -n; j <= n; ++j) {
    const double w = (j == -n || j == n) ? 0.5 : 1.0;
    sum.add(w * f(static_cast<double>(j) * h));
  }
  complex integral = sum.value() * h;
  if (tail_correction) {
    // ∫_T^∞ g e^{iv} dv ~ Σ i^{n+1} g^{(n)}(T) e^{iT}, ∫_{-∞}^{-T} g e^{iv} dv ~ -Σ i^{n+1} g^{(n)}(-T) e^{-iT},
    // g(v) = (a + iv)^{-s}, g^{(n)} = (-s)(-s-1)...(-s-n+1) i^n (a + iv)^{-s-n}.
    const complex I(0.0, 1.0);
    for (const double sign : {1.0, -1.0}) {
      const complex u(a, sign * T);
      const complex base = std::exp(-s * std::log(u));
      complex coefficient = 1.0, i_pow = I;
      complex tail = 0.0;
      double previous = std::numeric_limits<double>::infinity();
      for (int m = 0; m < 30; ++m) {
        const complex term = i_pow * coefficient * base;
        if (std::abs(term) >= previous) break;
        tail += term;
        previous = std::abs(term);
        coefficient *= (-s - static_cast<double>(m)) * I / u;
        i_pow *= I;
      }
      integral += sign * tail * std::polar(1.0, sign * T);
    }
  }
  return std::exp(a) / kTwoPi * integral;
}

/// Deviation of the quadrature from 1/Γ(s), against a 10⁻⁶ target.
inline BoundComparison gamma_transform_check(complex s, double a, double T, double step) {
  const complex numeric = gamma_transform_integral(s, a, T, step);
  return compare(std::abs(numeric - std::exp(-log_gamma(s))), 1e-6);
}

struct DiagnosticRow {
  double y = 0.0;
  BoundComparison value;
};

inline void write_diagnostic_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows) {
  out << "y,measured,bound_shape,ratio\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.y, r.value.measured, r.value.bound_shape, r.value.ratio);
    out << buf;
  }
}

}  // namespace cgl
