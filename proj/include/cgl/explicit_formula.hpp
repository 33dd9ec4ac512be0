#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cgl/arith.hpp"
#include "cgl/characters.hpp"
#include "cgl/errors.hpp"
#include "cgl/goldbach.hpp"
#include "cgl/lfunction.hpp"
#include "cgl/numeric.hpp"
#include "cgl/special.hpp"
#include "cgl/zero_catalog.hpp"

namespace cgl {

struct MainTermBreakdown {
  double m1 = 0.0;
  complex m2_a;
  complex m2_b;
  complex m3;
  double total_real = 0.0;
  double imaginary_residue = 0.0;
  double gamma_max = 0.0;
  double tail_estimate = 0.0;
};

struct DiscrepancyReport {
  WeightedAverageRequest request;
  double sigma = 0.0;
  MainTermBreakdown main;
  double discrepancy = 0.0;
  double g_q = 0.0;
  double normalized = 0.0;
};

/// N^{k+2} / (φ(q)² Γ(k+3)).
inline double m1_term(double N, std::uint64_t q, double k) {
  const double phi = static_cast<double>(euler_phi(q));
  return std::exp((k + 2.0) * std::log(N) - std::lgamma(k + 3.0)) / (phi * phi);
}

/// log² q without an exceptional zero, q^{1/2} log² q with one.
inline double g_factor(std::uint64_t q, const std::optional<ExceptionalZero>& scan) {
  if (q <= 1) return 0.0;
  const double l = std::log(static_cast<double>(q));
  return scan ? std::sqrt(static_cast<double>(q)) * l * l : l * l;
}

/// Closed-form bound for the zeros discarded above gamma_max (clamped at 10):
/// the M⁽²⁾ part C φ(q) N^{k+3/2} log(qT) T^{-(k+1)} plus the M⁽³⁾ part
/// C N^{k+1} (log(qT)/2π)² T^{-(k-1/2)} / (k - 1/2), with C = 10.
/// The second part is infinite for k <= 1/2.
inline double tail_estimate_m2(double N, std::uint64_t q, double k, double gamma_max) {
  constexpr double C = 10.0;
  const double T = std::max(gamma_max, 10.0);
  const double phi = static_cast<double>(euler_phi(q));
  return C * phi * std::log(static_cast<double>(q) * T) * std::exp((k + 1.5) * std::log(N) - (k + 1.0) * std::log(T));
}

inline double tail_estimate_m3(double N, std::uint64_t q, double k, double gamma_max) {
  constexpr double C = 10.0;
  if (k <= 0.5) return std::numeric_limits<double>::infinity();
  const double T = std::max(gamma_max, 10.0);
  const double density = std::log(static_cast<double>(q) * T) / kTwoPi;
  return C * density * density * std::exp((k + 1.0) * std::log(N) - (k - 0.5) * std::log(T)) / (k - 0.5);
}

inline double tail_estimate(double N, std::uint64_t q, double k, double gamma_max) {
  return tail_estimate_m2(N, q, k, gamma_max) + tail_estimate_m3(N, q, k, gamma_max);
}

/// Zero sets of all χ mod q with the N-independent parts of M⁽²⁾ and M⁽³⁾
/// precomputed in log form. Evaluation for a given N is then one
/// exponential per term.
class ExplicitFormula {
 public:
  ExplicitFormula(std::uint64_t q, std::int64_t a, std::int64_t b, double k, const ZeroCatalog& catalog, double gamma_max)
      : q_(q), k_(k), gamma_max_(gamma_max) {
    if (q == 0) throw InvalidArgument("q must be positive");
    if (std::gcd(residue(a, q), q) != 1) throw InvalidArgument("a must be coprime to q");
    if (std::gcd(residue(b, q), q) != 1) throw InvalidArgument("b must be coprime to q");
    if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("k must be a finite nonnegative number");
    const double phi = static_cast<double>(euler_phi(q));
    inv_phi2_ = 1.0 / (phi * phi);
    if (gamma_max <= 0.0) return;
    for (const auto& chi : character_group(q)) {
      const CharacterKey key = key_of(conductor(chi).primitive);
      const auto* entry = catalog.find(key);
      if (entry == nullptr || entry->gamma_max < gamma_max) {
        throw CoverageError("zero catalog does not cover " + key.str() + " up to gamma_max " + detail::format_decimal(gamma_max) +
                            (entry ? " (covered to " + detail::format_decimal(entry->gamma_max) + ")" : ""));
      }
      const complex wa = std::conj(chi(a)), wb = std::conj(chi(b));
      for (const auto& z : entry->zeros) {
        if (std::abs(z.gamma) > gamma_max) continue;
        push_zero(z.rho(), wa, wb);
        if (entry->real_character && z.gamma != 0.0) push_zero(std::conj(z.rho()), wa, wb);
      }
    }
    const std::size_t n = zeros_.size();
    pair_log_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const complex c = zeros_[i].log_gamma_rho + zeros_[j].log_gamma_rho - log_gamma(k + 1.0 + zeros_[i].rho + zeros_[j].rho);
        pair_log_[i * n + j] = c;
        pair_log_[j * n + i] = c;
      }
    }
  }

  std::size_t zero_count() const noexcept { return zeros_.size(); }
  double gamma_max() const noexcept { return gamma_max_; }

  double m1(double N) const { return m1_term(N, q_, k_); }

  /// -(1/φ²) Σ_χ conj χ(c) Σ_ρ Γ(ρ)/Γ(k+2+ρ) N^{k+1+ρ}, with c = a or b.
  complex m2(double N, bool use_b) const {
    const double log_n = std::log(N);
    CompensatedSum<complex> sum;
    for (const auto& z : zeros_) {
      sum.add((use_b ? z.wb : z.wa) * std::exp(z.log_ratio + (k_ + 1.0 + z.rho) * log_n));
    }
    return -inv_phi2_ * sum.value();
  }

  /// (1/φ²) Σ_{χ1,χ2} conj χ1(a) conj χ2(b) Σ_{ρ1,ρ2} Γ(ρ1)Γ(ρ2)/Γ(k+1+ρ1+ρ2) N^{k+ρ1+ρ2}.
  /// Pairs more than 18 orders of magnitude below the largest pair are skipped.
  complex m3(double N) const {
    const std::size_t n = zeros_.size();
    if (n == 0) return {};
    const double log_n = std::log(N);
    double largest = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double mag = pair_log_[i * n + j].real() + (zeros_[i].rho.real() + zeros_[j].rho.real()) * log_n;
        largest = std::max(largest, mag);
      }
    }
    const double cutoff = largest + std::log(1e-18);
    CompensatedSum<complex> sum;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const complex e = pair_log_[i * n + j] + (k_ + zeros_[i].rho + zeros_[j].rho) * log_n;
        if (e.real() - k_ * log_n < cutoff) continue;
        sum.add(zeros_[i].wa * zeros_[j].wb * std::exp(e));
      }
    }
    return inv_phi2_ * sum.value();
  }

  MainTermBreakdown evaluate(double N) const {
    MainTermBreakdown out;
    out.m1 = m1(N);
    out.m2_a = m2(N, false);
    out.m2_b = m2(N, true);
    out.m3 = m3(N);
    const complex total = out.m1 + out.m2_a + out.m2_b + out.m3;
    out.total_real = total.real();
    out.imaginary_residue = std::abs(total.imag());
    out.gamma_max = gamma_max_;
    out.tail_estimate = tail_estimate(N, q_, k_, gamma_max_);
    if (out.imaginary_residue > 1e-6 * std::abs(out.total_real) + 1e-6) {
      throw NumericConsistencyError("explicit formula: imaginary residue " + detail::format_decimal(out.imaginary_residue) +
                                    " exceeds tolerance for real part " + detail::format_decimal(out.total_real));
    }
    return out;
  }

 private:
  struct PreparedZero {
    complex rho;
    complex wa;
    complex wb;
    complex log_gamma_rho;
    complex log_ratio;
  };

  void push_zero(complex rho, complex wa, complex wb) {
    const complex lg = log_gamma(rho);
    zeros_.push_back({rho, wa, wb, lg, lg - log_gamma(k_ + 2.0 + rho)});
  }

  std::uint64_t q_;
  double k_;
  double gamma_max_;
  double inv_phi2_ = 1.0;
  std::vector<PreparedZero> zeros_;
  std::vector<complex> pair_log_;
};

inline complex m2_term(double N, std::uint64_t q, std::int64_t a, double k, const ZeroCatalog& catalog, double gamma_max) {
  return ExplicitFormula(q, a, a, k, catalog, gamma_max).m2(N, false);
}

inline complex m3_term(double N, std::uint64_t q, std::int64_t a, std::int64_t b, double k, const ZeroCatalog& catalog,
                       double gamma_max) {
  return ExplicitFormula(q, a, b, k, catalog, gamma_max).m3(N);
}

inline DiscrepancyReport make_report(const WeightedAverageRequest& req, double sigma, MainTermBreakdown main, double g_q) {
  DiscrepancyReport out;
  out.request = req;
  out.sigma = sigma;
  out.main = main;
  out.discrepancy = sigma - main.total_real;
  out.g_q = g_q;
  const double N = static_cast<double>(req.N);
  out.normalized = out.discrepancy / (std::exp((req.k + 1.0) * std::log(N)) * (g_q + std::log(N)));
  if (!std::isfinite(out.normalized)) throw NumericConsistencyError("verify: normalized discrepancy is not finite");
  return out;
}

/// Σ_k against M_k = M⁽¹⁾ + M⁽²⁾(a) + M⁽²⁾(b) + M⁽³⁾ for one request.
inline DiscrepancyReport verify(const WeightedAverageRequest& req, const ZeroCatalog& catalog, double gamma_max,
                                const LambdaTable& table) {
  req.validate();
  const ExplicitFormula formula(req.q, req.a, req.b, req.k, catalog, gamma_max);
  const double sigma = sigma_k(req, table);
  const double g_q = g_factor(req.q, exceptional_zero_scan(req.q));
  return make_report(req, sigma, formula.evaluate(static_cast<double>(req.N)), g_q);
}

/// verify over a list of N sharing one Λ table, one set of representation
/// counts and one prepared zero set. Results are independent of `threads`.
inline std::vector<DiscrepancyReport> verify_sweep(std::uint64_t q, std::int64_t a, std::int64_t b, double k,
                                                   const std::vector<std::uint64_t>& n_list, const ZeroCatalog& catalog,
                                                   double gamma_max, const LambdaTable& table, unsigned threads = 1) {
  std::vector<DiscrepancyReport> out(n_list.size());
  if (n_list.empty()) return out;
  for (const auto N : n_list) WeightedAverageRequest{N, q, a, b, k}.validate();
  const std::uint64_t largest = *std::max_element(n_list.begin(), n_list.end());
  if (largest > table.limit()) {
    throw TableTooSmall("sweep: N = " + std::to_string(largest) + " exceeds table limit " + std::to_string(table.limit()));
  }
  const ExplicitFormula formula(q, a, b, k, catalog, gamma_max);
  const RepresentationCounts counts(q, a, b, largest, table);
  const double g_q = g_factor(q, exceptional_zero_scan(q));
  parallel_for(n_list.size(), threads, [&](std::size_t i) {
    const WeightedAverageRequest req{n_list[i], q, a, b, k};
    out[i] = make_report(req, sigma_k(req.N, k, counts), formula.evaluate(static_cast<double>(req.N)), g_q);
  });
  return out;
}

}  // namespace cgl
