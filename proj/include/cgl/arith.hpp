#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cgl/errors.hpp"

namespace cgl {

struct PrimeFactor {
  std::uint64_t prime;
  unsigned exponent;
  bool operator==(const PrimeFactor&) const = default;
};

/// Trial-division factorization, primes strictly increasing. factorize(1) is empty.
inline std::vector<PrimeFactor> factorize(std::uint64_t n) {
  std::vector<PrimeFactor> out;
  if (n <= 1) return out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline std::uint64_t euler_phi(std::uint64_t q) {
  std::uint64_t phi = q;
  for (const auto& f : factorize(q)) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= base;
  return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

/// Inverse of a modulo m; a must be coprime to m.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t quotient = r / new_r;
    t = std::exchange(new_t, t - quotient * new_t);
    r = std::exchange(new_r, r - quotient * new_r);
  }
  if (r > 1) throw InvalidArgument("invmod: argument not invertible");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t) % m;
}

/// Reduces any integer into [0, q).
inline std::uint64_t residue(std::int64_t a, std::uint64_t q) {
  const auto sq = static_cast<std::int64_t>(q);
  std::int64_t r = a % sq;
  if (r < 0) r += sq;
  return static_cast<std::uint64_t>(r);
}

struct PrimePower {
  std::uint64_t m;
  double lambda;
};

/// Sieved values of the von Mangoldt function on [1, limit].
///
/// log p is computed once per prime and copied to all its powers, so
/// Λ(p) and Λ(p^ν) are bit-identical.
class LambdaTable {
 public:
  explicit LambdaTable(std::uint64_t limit) : limit_(limit) {
    if (limit == 0) throw InvalidArgument("sieve_lambda: limit must be positive");
    values_.assign(limit + 1, 0.0);
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t p = 2; p <= limit; ++p) {
      if (composite[p]) continue;
      if (p * p <= limit) {
        for (std::uint64_t j = p * p; j <= limit; j += p) composite[j] = true;
      }
      const double log_p = std::log(static_cast<double>(p));
      for (std::uint64_t pk = p;; pk *= p) {
        values_[pk] = log_p;
        if (pk > limit / p) break;
      }
    }
    for (std::uint64_t m = 2; m <= limit; ++m) {
      if (values_[m] != 0.0) prime_powers_.push_back({m, values_[m]});
    }
  }

  std::uint64_t limit() const noexcept { return limit_; }

  /// Λ(m) for 1 <= m <= limit.
  double operator[](std::uint64_t m) const { return values_[m]; }

  double at(std::uint64_t m) const {
    if (m == 0 || m > limit_) throw TableTooSmall("Lambda table queried at " + std::to_string(m) + " beyond limit " + std::to_string(limit_));
    return values_[m];
  }

  /// Index 0 is unused and holds 0.
  std::span<const double> values() const noexcept { return values_; }

  /// All m <= limit with Λ(m) != 0, ascending.
  const std::vector<PrimePower>& prime_powers() const noexcept { return prime_powers_; }

 private:
  std::uint64_t limit_;
  std::vector<double> values_;
  std::vector<PrimePower> prime_powers_;
};

inline LambdaTable sieve_lambda(std::uint64_t limit) { return LambdaTable(limit); }

/// One cyclic factor of (Z/qZ)*. `local_modulus` is the prime power p^e the
/// factor lives in; the generator is lifted by CRT to be 1 modulo q/p^e.
struct CyclicComponent {
  std::uint64_t generator;
  std::uint64_t order;
  std::uint64_t prime;
  std::uint64_t local_modulus;
};

namespace detail {

inline bool is_primitive_root(std::uint64_t g, std::uint64_t modulus, std::uint64_t phi,
                              const std::vector<PrimeFactor>& phi_factors) {
  if (std::gcd(g, modulus) != 1) return false;
  for (const auto& f : phi_factors) {
    if (powmod(g, phi / f.prime, modulus) == 1) return false;
  }
  return true;
}

/// Least primitive root mod p that is also a primitive root mod p^2, hence
/// mod every power of p. This is the generator used by Conrey labels.
inline std::uint64_t conrey_generator(std::uint64_t p) {
  const std::uint64_t p2 = p * p;
  const auto fac_p = factorize(p - 1);
  const auto fac_p2 = factorize(p * (p - 1));
  for (std::uint64_t g = 2; g < p2; ++g) {
    if (is_primitive_root(g, p, p - 1, fac_p) && is_primitive_root(g, p2, p * (p - 1), fac_p2)) return g;
  }
  throw InvalidArgument("no primitive root found");
}

inline std::uint64_t crt_lift(std::uint64_t g_local, std::uint64_t local_modulus, std::uint64_t q) {
  const std::uint64_t cofactor = q / local_modulus;
  if (cofactor == 1) return g_local % q;
  // x = g (mod p^e), x = 1 (mod cofactor)
  const std::uint64_t inv = invmod(cofactor % local_modulus, local_modulus);
  const std::uint64_t t = mulmod((g_local + local_modulus - 1) % local_modulus, inv, local_modulus);
  return (1 + mulmod(t, cofactor, q)) % q;
}

}  // namespace detail

/// (Z/qZ)* as a product of cyclic groups, with eagerly built discrete logs.
class UnitGroup {
 public:
  explicit UnitGroup(std::uint64_t q) : q_(q) {
    if (q == 0) throw InvalidArgument("unit_group: modulus must be positive");
    if (q > 1'000'000) throw InvalidArgument("unit_group: modulus above 10^6 is not supported");
    for (const auto& f : factorize(q)) {
      const std::uint64_t pe = ipow(f.prime, f.exponent);
      LocalTable local;
      local.modulus = pe;
      local.first_component = components_.size();
      if (f.prime == 2) {
        if (f.exponent == 1) continue;
        if (f.exponent == 2) {
          components_.push_back({detail::crt_lift(3, 4, q), 2, 2, 4});
          local.logs.assign(4 * 1, -1);
          local.width = 1;
          local.logs[1] = 0;
          local.logs[3] = 1;
        } else {
          const std::uint64_t big = pe / 4;
          components_.push_back({detail::crt_lift(pe - 1, pe, q), 2, 2, pe});
          components_.push_back({detail::crt_lift(5, pe, q), big, 2, pe});
          local.width = 2;
          local.logs.assign(pe * 2, -1);
          std::uint64_t x = 1;
          for (std::uint64_t a = 0; a < big; ++a) {
            local.logs[x * 2] = 0;
            local.logs[x * 2 + 1] = static_cast<std::int64_t>(a);
            const std::uint64_t neg = pe - x;
            local.logs[neg * 2] = 1;
            local.logs[neg * 2 + 1] = static_cast<std::int64_t>(a);
            x = x * 5 % pe;
          }
        }
      } else {
        const std::uint64_t g = detail::conrey_generator(f.prime);
        const std::uint64_t order = pe / f.prime * (f.prime - 1);
        components_.push_back({detail::crt_lift(g % pe, pe, q), order, f.prime, pe});
        local.width = 1;
        local.logs.assign(pe, -1);
        std::uint64_t x = 1;
        for (std::uint64_t a = 0; a < order; ++a) {
          local.logs[x] = static_cast<std::int64_t>(a);
          x = mulmod(x, g, pe);
        }
      }
      locals_.push_back(std::move(local));
    }
    exponent_ = 1;
    for (const auto& c : components_) exponent_ = std::lcm(exponent_, c.order);
  }

  std::uint64_t modulus() const noexcept { return q_; }
  const std::vector<CyclicComponent>& components() const noexcept { return components_; }

  /// φ(q), the product of the component orders.
  std::uint64_t size() const noexcept {
    std::uint64_t n = 1;
    for (const auto& c : components_) n *= c.order;
    return n;
  }

  /// Least common multiple of the component orders.
  std::uint64_t exponent() const noexcept { return exponent_; }

  bool is_unit(std::uint64_t u) const { return std::gcd(u % q_, q_) == 1; }

  /// Exponent vector of u with respect to components(); u must be a unit.
  std::vector<std::uint64_t> dlog(std::uint64_t u) const {
    if (!is_unit(u)) throw InvalidArgument("dlog: " + std::to_string(u) + " is not a unit mod " + std::to_string(q_));
    std::vector<std::uint64_t> out(components_.size());
    for (const auto& local : locals_) {
      const std::uint64_t r = u % local.modulus;
      for (std::size_t j = 0; j < local.width; ++j) {
        out[local.first_component + j] = static_cast<std::uint64_t>(local.logs[r * local.width + j]);
      }
    }
    return out;
  }

  /// Product of generator powers; inverse of dlog on units.
  std::uint64_t from_dlog(std::span<const std::uint64_t> exponents) const {
    std::uint64_t u = 1 % q_;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      u = mulmod(u, powmod(components_[i].generator, exponents[i], q_), q_);
    }
    return u;
  }

 private:
  struct LocalTable {
    std::uint64_t modulus = 1;
    std::size_t first_component = 0;
    std::size_t width = 0;
    std::vector<std::int64_t> logs;
  };

  std::uint64_t q_;
  std::vector<CyclicComponent> components_;
  std::vector<LocalTable> locals_;
  std::uint64_t exponent_ = 1;
};

inline UnitGroup unit_group(std::uint64_t q) { return UnitGroup(q); }

/// Divisors of n in increasing order.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d * d != n) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace cgl
