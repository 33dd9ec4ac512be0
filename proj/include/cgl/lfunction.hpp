#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgl/characters.hpp"
#include "cgl/errors.hpp"
#include "cgl/numeric.hpp"
#include "cgl/special.hpp"

namespace cgl {

/// Dirichlet L(s, χ) = q^{-s} Σ_{a=1}^{q} χ(a) ζ(s, a/q).
///
/// For nonprincipal χ the Hurwitz pole terms cancel exactly (Σ χ(a) = 0) and
/// are evaluated in cancelled form, so s = 1 is allowed.
inline complex dirichlet_l(complex s, const Character& chi) {
  detail::check_hurwitz_domain(s);
  const std::uint64_t q = chi.modulus();
  const bool principal = chi.is_principal();
  if (principal && s == complex(1.0, 0.0)) throw PoleError("dirichlet_l: pole of the principal L-function at s = 1");
  const int terms = detail::euler_maclaurin_terms(s);
  CompensatedSum<complex> sum;
  for (std::uint64_t a = 1; a <= q; ++a) {
    const complex value = chi(static_cast<std::int64_t>(a));
    if (value == complex(0.0, 0.0)) continue;
    const double alpha = static_cast<double>(a) / static_cast<double>(q);
    const double log_u = std::log(terms + alpha);
    complex pole;
    if (principal) {
      pole = std::exp((1.0 - s) * log_u) / (s - 1.0);
    } else {
      // (u^{1-s} - 1) / (s - 1) = -log u * (e^w - 1) / w with w = (1 - s) log u
      pole = -log_u * detail::expm1_over((1.0 - s) * log_u);
    }
    sum.add(value * (detail::hurwitz_regular_part(s, alpha, terms) + pole));
  }
  return std::exp(-s * std::log(static_cast<double>(q))) * sum.value();
}

/// A nontrivial zero β + iγ of L(s, χ*) for the character q.label.
struct Zero {
  enum class Source { computed, loaded };

  double beta = 0.5;
  double gamma = 0.0;
  std::uint64_t modulus = 1;
  std::uint64_t conrey_label = 1;
  Source source = Source::computed;

  complex rho() const { return {beta, gamma}; }
};

/// Real rotation of L(1/2 + it, χ) for primitive χ, with the phase taken from
/// the completed function (q/π)^{(s+𝔞)/2} Γ((s+𝔞)/2) L(s, χ) and the root
/// number τ(χ) / (i^𝔞 √q).
class HardyZ {
 public:
  explicit HardyZ(Character chi) : chi_(std::move(chi)) {
    if (!is_primitive(chi_)) throw InvalidArgument("hardy_z: character " + chi_.key() + " is not primitive");
    const double q = static_cast<double>(chi_.modulus());
    odd_ = chi_.parity() == Parity::odd;
    const complex tau = gauss_sum(chi_);
    const complex i_pow = odd_ ? complex(0.0, 1.0) : complex(1.0, 0.0);
    const complex root_number = tau / (i_pow * std::sqrt(q));
    half_root_phase_ = 0.5 * std::arg(root_number);
    log_q_over_pi_ = std::log(q / kPi);
    // The rotated value must be real; check at a sample height away from t = 0.
    const complex sample = rotated(3.7);
    if (std::abs(sample.imag()) > 1e-8 * std::max(1.0, std::abs(sample))) {
      throw NumericConsistencyError("hardy_z: rotation of " + chi_.key() + " is not real at the sample point");
    }
  }

  const Character& character() const noexcept { return chi_; }

  /// e^{iθ(t)} L(1/2 + it, χ); the imaginary part is rounding residue.
  complex rotated(double t) const {
    if (std::abs(t) > 1e3) throw DomainError("hardy_z: |t| must not exceed 1000");
    const complex s(0.5, t);
    const complex half = (s + (odd_ ? 1.0 : 0.0)) / 2.0;
    const double theta = log_gamma(half).imag() + 0.5 * t * log_q_over_pi_ - half_root_phase_;
    return std::polar(1.0, theta) * dirichlet_l(s, chi_);
  }

  double operator()(double t) const { return rotated(t).real(); }

 private:
  Character chi_;
  bool odd_ = false;
  double half_root_phase_ = 0.0;
  double log_q_over_pi_ = 0.0;
};

inline double hardy_z(const Character& chi, double t) { return HardyZ(chi)(t); }

/// Smooth zero-counting main term (T/2π) log(qT/(2πe)) for zeros with
/// 0 < γ <= T, clamped at zero.
inline double zero_count_main_term(std::uint64_t q, double height) {
  if (height <= 0.0) return 0.0;
  const double v = height / kTwoPi * std::log(static_cast<double>(q) * height / (kTwoPi * std::numbers::e));
  return std::max(0.0, v);
}

struct ZeroScanOptions {
  double step = 1e-2;
  /// Grid halvings attempted when the count check fails.
  int max_refinements = 4;
  /// Scan [-T, T] even for real characters.
  bool full_line = false;
  /// Allowed deviation from the counting main term.
  double count_tolerance = 2.0;
};

namespace detail {

inline double bisect_sign_change(const HardyZ& z, double lo, double hi, double f_lo, double tol) {
  while (hi - lo > 2.0 * tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = z(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> scan_sign_changes(const HardyZ& z, double t_lo, double t_hi, double step, double tol) {
  std::vector<double> out;
  const auto count = static_cast<std::int64_t>(std::ceil((t_hi - t_lo) / step));
  double prev_t = t_lo;
  double prev_f = z(t_lo);
  for (std::int64_t j = 1; j <= count; ++j) {
    const double t = j == count ? t_hi : t_lo + static_cast<double>(j) * step;
    const double f = z(t);
    if (f == 0.0) {
      out.push_back(t);
    } else if (prev_f != 0.0 && (f < 0.0) != (prev_f < 0.0)) {
      out.push_back(bisect_sign_change(z, prev_t, t, prev_f, tol));
    }
    prev_t = t;
    prev_f = f;
  }
  return out;
}

}  // namespace detail

/// Critical-line zeros of L(s, χ) for primitive χ with |γ| <= gamma_max, by
/// sign changes of the Hardy Z-function on a grid followed by bisection.
///
/// Real characters are scanned on (0, T] (zeros come in ±γ pairs); complex
/// characters on [-T, T]. The count is checked against the counting main term
/// and the grid halved on mismatch; persistent mismatch raises IncompleteScan.
inline std::vector<Zero> find_zeros(const Character& chi, double gamma_max, double tol, const ZeroScanOptions& options = {}) {
  if (gamma_max > 1e3) throw InvalidArgument("find_zeros: gamma_max must not exceed 1000");
  if (tol < 1e-10) throw InvalidArgument("find_zeros: tol must be at least 1e-10");
  const HardyZ z(chi);
  std::vector<Zero> zeros;
  if (gamma_max <= 0.0) return zeros;
  const bool two_sided = options.full_line || !chi.is_real();
  const double expected = (two_sided ? 2.0 : 1.0) * zero_count_main_term(chi.modulus(), gamma_max);
  double step = options.step;
  std::vector<double> gammas;
  for (int attempt = 0;; ++attempt) {
    gammas = detail::scan_sign_changes(z, two_sided ? -gamma_max : 0.0, gamma_max, step, tol);
    if (!two_sided) std::erase_if(gammas, [](double g) { return g <= 0.0; });
    if (std::abs(static_cast<double>(gammas.size()) - expected) <= options.count_tolerance) break;
    if (attempt >= options.max_refinements) {
      throw IncompleteScan("find_zeros: " + std::to_string(gammas.size()) + " zeros found for " + chi.key() + " up to " +
                               std::to_string(gamma_max) + ", counting main term predicts " + std::to_string(expected),
                           chi.key());
    }
    step *= 0.5;
  }
  zeros.reserve(gammas.size());
  for (const double g : gammas) zeros.push_back({0.5, g, chi.modulus(), chi.label(), Zero::Source::computed});
  return zeros;
}

struct ExceptionalZero {
  Character character;
  double beta;
};

/// Scans L(σ, χ*) for σ in [max(1/2, 1 - 0.05/log q), 1) at step 1e-4 for every
/// real nonprincipal χ mod q and returns the first real zero found.
inline std::optional<ExceptionalZero> exceptional_zero_scan(std::uint64_t q) {
  if (q < 3) return std::nullopt;
  constexpr double kWindow = 0.05;
  constexpr double kStep = 1e-4;
  const double sigma0 = std::max(0.5, 1.0 - kWindow / std::log(static_cast<double>(q)));
  for (const auto& chi : character_group(q)) {
    if (chi.is_principal() || !chi.is_real()) continue;
    const Character primitive = conductor(chi).primitive;
    auto value = [&](double sigma) { return dirichlet_l(complex(sigma, 0.0), primitive).real(); };
    const auto count = static_cast<int>(std::ceil((1.0 - sigma0) / kStep));
    double prev_s = sigma0;
    double prev_v = value(sigma0);
    if (prev_v == 0.0) return ExceptionalZero{chi, prev_s};
    for (int j = 1; j <= count; ++j) {
      const double s = std::min(sigma0 + j * kStep, 1.0);
      const double v = value(s);
      if (v == 0.0 || (v < 0.0) != (prev_v < 0.0)) {
        double lo = prev_s, hi = s, f_lo = prev_v;
        while (hi - lo > 1e-12) {
          const double mid = 0.5 * (lo + hi);
          const double f = value(mid);
          if ((f < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f;
          } else {
            hi = mid;
          }
        }
        return ExceptionalZero{chi, 0.5 * (lo + hi)};
      }
      prev_s = s;
      prev_v = v;
    }
  }
  return std::nullopt;
}

}  // namespace cgl
