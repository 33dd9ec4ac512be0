#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "cgl/arith.hpp"
#include "cgl/errors.hpp"
#include "cgl/numeric.hpp"

namespace cgl {

enum class Parity { even, odd };

/// A Dirichlet character mod q identified by its Conrey label.
///
/// Values are stored as exponents e(u) of a common root of unity of order
/// value_order(), so χ(u) = exp(2πi e(u) / value_order()). Non-units carry -1.
class Character {
 public:
  Character(const UnitGroup& group, std::uint64_t label) {
    const std::uint64_t q = group.modulus();
    label %= q;
    if (q == 1) label = 1;
    if (std::gcd(label, q) != 1) {
      throw InvalidArgument("Conrey label " + std::to_string(label) + " is not coprime to " + std::to_string(q));
    }
    auto data = std::make_shared<Data>();
    data->modulus = q;
    data->label = label;
    data->order = group.exponent();
    data->exponents.assign(q, -1);
    const auto& comps = group.components();
    const auto label_log = group.dlog(label);
    for (std::uint64_t u = 0; u < q; ++u) {
      if (!group.is_unit(u)) continue;
      const auto u_log = group.dlog(u);
      std::uint64_t e = 0;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        const std::uint64_t scale = data->order / comps[c].order;
        e = (e + mulmod(mulmod(label_log[c], u_log[c], comps[c].order), scale, data->order)) % data->order;
      }
      data->exponents[u] = static_cast<std::int64_t>(e);
    }
    data_ = std::move(data);
  }

  Character(std::uint64_t q, std::uint64_t label) : Character(UnitGroup(q), label) {}

  std::uint64_t modulus() const noexcept { return data_->modulus; }
  std::uint64_t label() const noexcept { return data_->label; }
  std::uint64_t value_order() const noexcept { return data_->order; }

  /// Exponent of χ(m), or -1 when gcd(m, q) > 1.
  std::int64_t exponent(std::int64_t m) const { return data_->exponents[residue(m, data_->modulus)]; }

  complex operator()(std::int64_t m) const {
    const std::int64_t e = exponent(m);
    if (e < 0) return {0.0, 0.0};
    return unit_root(e, static_cast<long long>(data_->order));
  }

  bool is_principal() const noexcept { return data_->label == 1; }

  bool is_real() const {
    for (const auto e : data_->exponents) {
      if (e >= 0 && (2 * static_cast<std::uint64_t>(e)) % data_->order != 0) return false;
    }
    return true;
  }

  Parity parity() const {
    if (data_->modulus <= 2) return Parity::even;
    return exponent(static_cast<std::int64_t>(data_->modulus) - 1) == 0 ? Parity::even : Parity::odd;
  }

  /// The complex conjugate character, label n^{-1} mod q.
  Character conjugate() const {
    auto data = std::make_shared<Data>(*data_);
    data->label = data_->modulus == 1 ? 1 : invmod(data_->label, data_->modulus);
    for (auto& e : data->exponents) {
      if (e > 0) e = static_cast<std::int64_t>(data->order) - e;
    }
    return Character(std::move(data));
  }

  /// "q.label", the external identifier used by the CLI and zero files.
  std::string key() const { return std::to_string(modulus()) + "." + std::to_string(label()); }

  /// Same value table, possibly for different moduli with equal tables.
  bool same_values(const Character& other) const {
    if (modulus() != other.modulus()) return false;
    for (std::uint64_t u = 0; u < modulus(); ++u) {
      const auto e1 = data_->exponents[u];
      const auto e2 = other.data_->exponents[u];
      if ((e1 < 0) != (e2 < 0)) return false;
      if (e1 < 0) continue;
      // e1 / R1 == e2 / R2 (mod 1)
      const auto r1 = value_order(), r2 = other.value_order();
      if (mulmod(static_cast<std::uint64_t>(e1), r2, r1 * r2) != mulmod(static_cast<std::uint64_t>(e2), r1, r1 * r2)) return false;
    }
    return true;
  }

 private:
  struct Data {
    std::uint64_t modulus = 1;
    std::uint64_t label = 1;
    std::uint64_t order = 1;
    std::vector<std::int64_t> exponents;
  };

  explicit Character(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

/// All φ(q) characters mod q in increasing Conrey label order (principal first).
inline std::vector<Character> character_group(std::uint64_t q) {
  const UnitGroup group(q);
  std::vector<Character> out;
  out.reserve(group.size());
  for (std::uint64_t n = 1; n <= q; ++n) {
    if (std::gcd(n % q, q) == 1) out.emplace_back(group, n);
    if (q == 1) break;
  }
  return out;
}

inline complex evaluate(const Character& chi, std::int64_t m) { return chi(m); }

inline Parity parity(const Character& chi) { return chi.parity(); }

struct PrimitiveDescriptor {
  std::uint64_t conductor;
  Character primitive;
};

namespace detail {

/// χ mod q and ψ mod d (d | q) agree on every unit mod q.
inline bool induces(const Character& psi, const Character& chi) {
  const std::uint64_t q = chi.modulus();
  const std::uint64_t r1 = chi.value_order(), r2 = psi.value_order();
  for (std::uint64_t u = 1; u < q || q == 1; ++u) {
    const auto e1 = chi.exponent(static_cast<std::int64_t>(u));
    if (e1 >= 0) {
      const auto e2 = psi.exponent(static_cast<std::int64_t>(u));
      if (e2 < 0) return false;
      if (mulmod(static_cast<std::uint64_t>(e1), r2, r1 * r2) != mulmod(static_cast<std::uint64_t>(e2), r1, r1 * r2)) return false;
    }
    if (q == 1) break;
  }
  return true;
}

}  // namespace detail

/// Smallest d | q through which χ factors, and the primitive character mod d
/// inducing χ. Brute-force divisor search.
inline PrimitiveDescriptor conductor(const Character& chi) {
  const std::uint64_t q = chi.modulus();
  for (const std::uint64_t d : divisors(q)) {
    bool factors = true;
    for (std::uint64_t u = 1; u < q && factors; u += d) {
      if (std::gcd(u, q) == 1 && chi.exponent(static_cast<std::int64_t>(u)) != 0) factors = false;
    }
    if (!factors) continue;
    const UnitGroup group(d);
    // Conrey labels are compatible with induction: try label mod d first.
    const std::uint64_t guess = d == 1 ? 1 : chi.label() % d;
    if (std::gcd(guess, d) == 1) {
      Character psi(group, guess);
      if (detail::induces(psi, chi)) return {d, std::move(psi)};
    }
    for (std::uint64_t n = 1; n <= d; ++n) {
      if (std::gcd(n % d, d) != 1) continue;
      Character psi(group, n);
      if (detail::induces(psi, chi)) return {d, std::move(psi)};
      if (d == 1) break;
    }
    throw NumericConsistencyError("conductor: no primitive character mod " + std::to_string(d) + " induces " + chi.key());
  }
  throw NumericConsistencyError("conductor: search exhausted for " + chi.key());
}

inline bool is_primitive(const Character& chi) { return conductor(chi).conductor == chi.modulus(); }

/// Σ_χ conj(χ(a)) χ(b) over all characters mod q.
inline complex orthogonality_sum(std::uint64_t q, std::int64_t a, std::int64_t b) {
  if (std::gcd(residue(a, q), q) != 1 || std::gcd(residue(b, q), q) != 1) {
    throw InvalidArgument("orthogonality_sum: a and b must be coprime to q");
  }
  CompensatedSum<complex> sum;
  for (const auto& chi : character_group(q)) sum.add(std::conj(chi(a)) * chi(b));
  return sum.value();
}

/// Gauss sum τ(χ) = Σ_{a mod q} χ(a) e^{2πi a/q}, direct q-term summation.
inline complex gauss_sum(const Character& chi) {
  const std::uint64_t q = chi.modulus();
  CompensatedSum<complex> sum;
  for (std::uint64_t a = 1; a <= q; ++a) {
    const auto e = chi.exponent(static_cast<std::int64_t>(a));
    if (e < 0) continue;
    // χ(a) e(a/q) = exp(2πi (e/R + a/q))
    const std::uint64_t r = chi.value_order();
    sum.add(unit_root(static_cast<long long>(static_cast<std::uint64_t>(e) * q + a * r), static_cast<long long>(r * q)));
  }
  return sum.value();
}

}  // namespace cgl
