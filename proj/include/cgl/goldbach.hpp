#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cgl/arith.hpp"
#include "cgl/characters.hpp"
#include "cgl/errors.hpp"
#include "cgl/numeric.hpp"

namespace cgl {

/// z = x + iy with x > 0.
struct EvalPoint {
  double x = 1.0;
  double y = 0.0;

  complex z() const { return {x, y}; }

  void validate() const {
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(y)) throw InvalidArgument("evaluation point needs finite x > 0");
  }
};

struct WeightedAverageRequest {
  std::uint64_t N = 2;
  std::uint64_t q = 1;
  std::int64_t a = 1;
  std::int64_t b = 1;
  double k = 2.0;

  void validate() const {
    if (q == 0) throw InvalidArgument("q must be positive");
    if (N < 2) throw InvalidArgument("N must be at least 2");
    if (std::gcd(residue(a, q), q) != 1) throw InvalidArgument("a must be coprime to q");
    if (std::gcd(residue(b, q), q) != 1) throw InvalidArgument("b must be coprime to q");
    if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("k must be a finite nonnegative number");
  }
};

namespace detail {

/// Contribution of the unordered pair {j, n - j}, j <= n - j, to R_G(n).
/// Swapping a and b swaps the two summands, so R_G(n; a, b) = R_G(n; b, a) exactly.
inline double pair_term(std::uint64_t j, std::uint64_t n, double product, std::uint64_t q, std::uint64_t ra, std::uint64_t rb) {
  const std::uint64_t r = j % q;
  if (2 * j == n) return r == ra && r == rb ? product : 0.0;
  return (r == ra ? product : 0.0) + (r == rb ? product : 0.0);
}

}  // namespace detail

/// R_G(n; q, a, b) by direct convolution, pairing m1 = j with m1 = n - j.
inline double rg(std::uint64_t n, std::uint64_t q, std::int64_t a, std::int64_t b, const LambdaTable& table) {
  if (q == 0) throw InvalidArgument("rg: q must be positive");
  if (n > table.limit()) {
    throw TableTooSmall("rg: n = " + std::to_string(n) + " exceeds table limit " + std::to_string(table.limit()));
  }
  const std::uint64_t ra = residue(a, q), rb = residue(b, q);
  if ((ra + rb) % q != n % q || n < 2) return 0.0;
  double sum = 0.0;
  for (std::uint64_t j = 1; 2 * j <= n; ++j) {
    const double l1 = table[j];
    if (l1 == 0.0) continue;
    const double l2 = table[n - j];
    if (l2 == 0.0) continue;
    const double t = detail::pair_term(j, n, l1 * l2, q, ra, rb);
    if (t != 0.0) sum += t;
  }
  return sum;
}

/// R_G(n; q, a, b) for every n <= limit, built from prime-power pairs.
///
/// Each value accumulates the same pair terms in the same order as rg, so the
/// two agree bit for bit.
class RepresentationCounts {
 public:
  RepresentationCounts(std::uint64_t q, std::int64_t a, std::int64_t b, std::uint64_t limit, const LambdaTable& table)
      : q_(q), a_(residue(a, q == 0 ? 1 : q)), b_(residue(b, q == 0 ? 1 : q)) {
    if (q == 0) throw InvalidArgument("rg: q must be positive");
    if (limit > table.limit()) {
      throw TableTooSmall("rg: limit " + std::to_string(limit) + " exceeds table limit " + std::to_string(table.limit()));
    }
    values_.assign(limit + 1, 0.0);
    std::vector<PrimePower> used;
    for (const auto& pp : table.prime_powers()) {
      if (pp.m >= limit) break;
      const std::uint64_t r = pp.m % q;
      if (r == a_ || r == b_) used.push_back(pp);
    }
    for (std::size_t i = 0; i < used.size(); ++i) {
      const auto& p1 = used[i];
      for (std::size_t j = i; j < used.size(); ++j) {
        const auto& p2 = used[j];
        const std::uint64_t n = p1.m + p2.m;
        if (n > limit) break;
        if ((a_ + b_) % q != n % q) continue;
        const double t = detail::pair_term(p1.m, n, p1.lambda * p2.lambda, q, a_, b_);
        if (t != 0.0) values_[n] += t;
      }
    }
  }

  std::uint64_t limit() const noexcept { return values_.size() - 1; }
  std::uint64_t modulus() const noexcept { return q_; }

  double operator[](std::uint64_t n) const { return values_[n]; }

  double at(std::uint64_t n) const {
    if (n > limit()) throw TableTooSmall("rg: n = " + std::to_string(n) + " beyond representation table");
    return values_[n];
  }

  std::span<const double> values() const noexcept { return values_; }

 private:
  std::uint64_t q_;
  std::uint64_t a_;
  std::uint64_t b_;
  std::vector<double> values_;
};

/// Σ_k(N) = Σ_{n <= N} R_G(n) (N - n)^k / Γ(k + 1) from precomputed counts.
/// For k = 0 the n = N term has weight 1.
inline double sigma_k(std::uint64_t N, double k, const RepresentationCounts& counts) {
  if (N > counts.limit()) {
    throw TableTooSmall("sigma_k: N = " + std::to_string(N) + " exceeds table limit " + std::to_string(counts.limit()));
  }
  if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("sigma_k: k must be a finite nonnegative number");
  CompensatedSum<double> sum;
  for (std::uint64_t n = 4; n <= N; ++n) {
    const double r = counts[n];
    if (r == 0.0) continue;
    sum.add(r * cesaro_power(static_cast<double>(N - n), k));
  }
  return sum.value() / std::tgamma(k + 1.0);
}

inline double sigma_k(const WeightedAverageRequest& req, const LambdaTable& table) {
  req.validate();
  if (req.N > table.limit()) {
    throw TableTooSmall("sigma_k: N = " + std::to_string(req.N) + " exceeds table limit " + std::to_string(table.limit()));
  }
  return sigma_k(req.N, req.k, RepresentationCounts(req.q, req.a, req.b, req.N, table));
}

namespace detail {

/// ∫_M^∞ log t e^{-xt} dt <= e^{-xM} (log M + 1/(xM)) / x.
inline double log_exp_tail(double x, double M) { return std::exp(-x * M) * (std::log(M) + 1.0 / (x * M)) / x; }

/// Truncation point with Σ_{m>M} log m e^{-mx} <= eps certified by the
/// integral comparison (valid once log t e^{-xt} decreases on [M, ∞)).
inline std::uint64_t truncation_point(double x, double eps, std::uint64_t limit) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  double M = std::ceil((std::log(1.0 / eps) + 2.0 * std::log(1.0 + 1.0 / x)) / x);
  M = std::max(M, 2.0);
  while (M * std::log(M) * x <= 1.0 || log_exp_tail(x, M) > eps) M = std::ceil(M * 1.05) + 1.0;
  if (M > static_cast<double>(limit)) {
    throw TableTooSmall("exponential sum at x = " + std::to_string(x) + " needs terms up to " + std::to_string(M) +
                        ", table limit is " + std::to_string(limit));
  }
  return static_cast<std::uint64_t>(M);
}

template <typename Weight>
complex exponential_sum(const EvalPoint& point, double eps, const LambdaTable& table, Weight&& weight) {
  point.validate();
  const std::uint64_t M = truncation_point(point.x, eps, table.limit());
  CompensatedSum<complex> sum;
  for (const auto& pp : table.prime_powers()) {
    if (pp.m > M) break;
    const complex w = weight(pp.m);
    if (w == complex(0.0, 0.0)) continue;
    const double m = static_cast<double>(pp.m);
    sum.add(w * pp.lambda * std::polar(std::exp(-m * point.x), -m * point.y));
  }
  return sum.value();
}

}  // namespace detail

/// S̃_{a,q}(z) = Σ_{m ≡ a (q)} Λ(m) e^{-mz}, truncated with tail <= eps.
inline complex stilde_progression(const EvalPoint& z, std::uint64_t q, std::int64_t a, const LambdaTable& table, double eps) {
  if (q == 0) throw InvalidArgument("stilde_progression: q must be positive");
  const std::uint64_t ra = residue(a, q);
  return detail::exponential_sum(z, eps, table, [&](std::uint64_t m) { return m % q == ra ? complex(1.0) : complex(0.0); });
}

/// S̃(z; χ) = Σ_m χ(m) Λ(m) e^{-mz}, truncated with tail <= eps.
inline complex stilde_character(const EvalPoint& z, const Character& chi, const LambdaTable& table, double eps) {
  return detail::exponential_sum(z, eps, table, [&](std::uint64_t m) { return chi(static_cast<std::int64_t>(m)); });
}

/// Upper bound for Σ_{m > n_terms} R_G(m) e^{-mx}, using R_G(m) <= m log² m.
inline double product_tail_bound(double x, std::uint64_t n_terms) {
  if (!(x > 0.0)) throw InvalidArgument("product_tail_bound: x must be positive");
  auto term = [x](double m) { return m * std::log(m) * std::log(m) * std::exp(-m * x); };
  double m = std::max<double>(static_cast<double>(n_terms) + 1.0, 2.0);
  CompensatedSum<double> sum;
  // Sum explicitly until the term ratio, which decreases in m, drops to 0.9.
  for (;;) {
    const double ratio = term(m + 1.0) / term(m);
    if (ratio <= 0.9 || !std::isfinite(ratio)) {
      sum.add(term(m) / (1.0 - std::min(ratio, 0.9)));
      break;
    }
    sum.add(term(m));
    m += 1.0;
  }
  return sum.value();
}

/// |S̃_{a,q}(z) S̃_{b,q}(z) - Σ_{m <= n_terms} R_G(m) e^{-mz}|.
inline double generating_residual(const EvalPoint& z, std::uint64_t q, std::int64_t a, std::int64_t b, std::uint64_t n_terms,
                                  const LambdaTable& table, double eps) {
  const complex sa = stilde_progression(z, q, a, table, eps);
  const complex sb = stilde_progression(z, q, b, table, eps);
  CompensatedSum<complex> partial;
  for (std::uint64_t m = 1; m <= n_terms; ++m) {
    const double r = rg(m, q, a, b, table);
    if (r == 0.0) continue;
    const double md = static_cast<double>(m);
    partial.add(r * std::polar(std::exp(-md * z.x), -md * z.y));
  }
  return std::abs(sa * sb - partial.value());
}

}  // namespace cgl
