#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <numeric>
#include <numbers>

#include "cgl/explicit_formula.hpp"

using namespace cgl;

namespace {

constexpr double kGamma1 = 14.1347251417346938;

const ZeroCatalog& catalog() {
  static const ZeroCatalog c = [] {
    ZeroCatalog out = ensure(ZeroCatalog{}, 1, 240.0, 2);
    for (std::uint64_t q : {3, 4, 5}) out = ensure(out, q, 100.0, 2);
    return out;
  }();
  return c;
}

ZeroCatalog single_zero_catalog() {
  ZeroCatalog c;
  CatalogEntry e;
  e.gamma_max = 15.0;
  e.zeros = {{0.5, kGamma1, 1, 1}};
  c.put({1, 1}, e);
  return c;
}

// 1 / (ρ (ρ+1) ... (ρ+k+1)) = Γ(ρ) / Γ(k+2+ρ) for integer k.
complex rising_ratio(complex rho, int k) {
  complex p = 1.0;
  for (int j = 0; j <= k + 1; ++j) p *= rho + static_cast<double>(j);
  return 1.0 / p;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("m1 examples") {
  CHECK(m1_term(10, 1, 0) == Catch::Approx(50.0).epsilon(1e-14));
  CHECK(m1_term(100, 3, 1) == Catch::Approx(1e6 / 24.0).epsilon(1e-14));
  CHECK(m1_term(1, 1, 2) == Catch::Approx(1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("g factor") {
  CHECK(g_factor(3, std::nullopt) == Catch::Approx(std::log(3.0) * std::log(3.0)).epsilon(1e-15));
  CHECK(g_factor(3, exceptional_zero_scan(3)) == Catch::Approx(1.20695).epsilon(1e-5));
  CHECK(g_factor(1, std::nullopt) == 0.0);
  CHECK(g_factor(100, ExceptionalZero{Character(100, 99), 0.99}) == Catch::Approx(212.08).epsilon(1e-4));
}

TEST_CASE("zero sums over an empty zero set vanish") {
  const ZeroCatalog empty;
  CHECK(m2_term(1024, 1, 1, 2.0, empty, 0.0) == complex(0.0, 0.0));
  CHECK(m3_term(1024, 4, 1, 3, 2.0, empty, 0.0) == complex(0.0, 0.0));
  CHECK_THROWS_AS(m2_term(1024, 1, 1, 2.0, empty, 10.0), CoverageError);
  CHECK_THROWS_AS(m3_term(1024, 3, 1, 2, 2.0, single_zero_catalog(), 10.0), CoverageError);
  CHECK_THROWS_AS(m2_term(1024, 1, 1, 2.0, single_zero_catalog(), 16.0), CoverageError);
}

TEST_CASE("single zero pair for q = 1") {
  const auto c = single_zero_catalog();
  const complex rho(0.5, kGamma1);
  for (int k : {0, 1, 2, 3}) {
    for (double N : {64.0, 1024.0, 131072.0}) {
      const complex m2 = m2_term(N, 1, 1, k, c, 15.0);
      INFO("k = " << k << " N = " << N);
      CHECK(std::abs(m2.imag()) <= 1e-12 * std::abs(m2.real()));
      // -(term(ρ) + term(ρ̄)) with Γ(ρ)/Γ(k+2+ρ) from the rising factorial
      const complex one = rising_ratio(rho, k) * std::exp((k + 1.0 + rho) * std::log(N));
      CHECK(std::abs(m2.real() + 2.0 * one.real()) <= 1e-10 * std::abs(one));
      CHECK(std::abs(one) == Catch::Approx(std::abs(rising_ratio(rho, k)) * std::pow(N, k + 1.5)).epsilon(1e-10));

      const complex m3 = m3_term(N, 1, 1, 1, k, c, 15.0);
      CHECK(std::abs(m3.imag()) <= 1e-10 * std::abs(m3));
      // ρ + ρ̄ = 1 pairs: |Γ(1/2 + iγ)|² / Γ(k+2) = π / (cosh(πγ) (k+1)!)
      const double cross = std::numbers::pi / std::cosh(std::numbers::pi * kGamma1) / std::tgamma(k + 2.0) * std::pow(N, k + 1.0);
      const complex same = std::exp(2.0 * log_gamma(rho) - log_gamma(k + 1.0 + 2.0 * rho) + (static_cast<double>(k) + 2.0 * rho) * std::log(N));
      const double four_terms = 2.0 * cross + 2.0 * same.real();
      CHECK(m3.real() == Catch::Approx(four_terms).epsilon(1e-10));
      CHECK(m3_term(N, 1, 1, 2, k, c, 15.0) == m3_term(N, 1, 2, 1, k, c, 15.0));
    }
  }
}

TEST_CASE("q = 1 reduction") {
  for (std::int64_t a : {2, 7, -3}) CHECK(m2_term(5000, 1, a, 2.0, catalog(), 240.0) == m2_term(5000, 1, 1, 2.0, catalog(), 240.0));
}

TEST_CASE("tail estimate") {
  const double N = 131072.0;
  CHECK(tail_estimate(N, 1, 2.0, 240.0) <= 1e-2 * std::pow(N, 3.0));
  double prev = std::numeric_limits<double>::infinity();
  for (double T = 10.0; T < 1e8; T *= 1.7) {
    const double t = tail_estimate(N, 5, 2.0, T);
    REQUIRE(t < prev);
    prev = t;
  }
  CHECK(tail_estimate(N, 1, 2.0, 1e300) < 1e-200);
  for (double k : {0.5, 1.0, 2.0, 3.5}) {
    for (double T : {10.0, 60.0, 240.0}) {
      const double ratio = tail_estimate_m2(N, 3, k, T) / tail_estimate_m2(N, 3, k, 2.0 * T);
      // the power law gives 2^{k+1}, less the growth of log(qT)
      CHECK(ratio >= std::pow(2.0, k + 1.0) * std::log(3.0 * T) / std::log(6.0 * T) * (1 - 1e-12));
    }
  }
  CHECK(std::isinf(tail_estimate(N, 1, 0.5, 240.0)));
  CHECK(tail_estimate(N, 1, 2.0, 1.0) == tail_estimate(N, 1, 2.0, 10.0));
}

TEST_CASE("verify without zeros reduces to sigma minus m1") {
  const LambdaTable table(1 << 12);
  const WeightedAverageRequest req{4096, 3, 1, 2, 2.0};
  const auto r = verify(req, ZeroCatalog{}, 0.0, table);
  CHECK(r.main.m2_a == complex(0.0, 0.0));
  CHECK(r.main.m3 == complex(0.0, 0.0));
  CHECK(r.discrepancy == sigma_k(req, table) - m1_term(4096, 3, 2.0));
  CHECK(r.g_q == Catch::Approx(std::log(3.0) * std::log(3.0)));
  CHECK(r.normalized == Catch::Approx(r.discrepancy / (std::pow(4096.0, 3.0) * (r.g_q + std::log(4096.0)))));
  CHECK_THROWS_AS(verify(req, ZeroCatalog{}, 10.0, table), CoverageError);
  CHECK_THROWS_AS(verify({8192, 3, 1, 2, 2.0}, ZeroCatalog{}, 0.0, table), TableTooSmall);
  CHECK_THROWS_AS(verify({4096, 3, 3, 2, 2.0}, ZeroCatalog{}, 0.0, table), InvalidArgument);
}

TEST_CASE("mirrored zero sets give real main terms") {
  for (std::uint64_t q : {3, 4, 5}) {
    const auto group = character_group(q);
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(q); ++a) {
      for (std::int64_t b = 1; b < static_cast<std::int64_t>(q); ++b) {
        if (std::gcd(residue(a, q), q) != 1 || std::gcd(residue(b, q), q) != 1) continue;
        const ExplicitFormula f(q, a, b, 2.0, catalog(), 100.0);
        for (double N : {256.0, 4096.0, 32768.0}) {
          const auto m = f.evaluate(N);
          INFO("q = " << q << " a = " << a << " b = " << b << " N = " << N);
          CHECK(m.imaginary_residue <= 1e-6 * std::abs(m.total_real));
          const complex zero_part = m.m2_a + m.m2_b + m.m3;
          CHECK(std::abs(zero_part.imag()) <= 1e-6 * std::abs(zero_part.real()) + 1e-9 * m.m1);
        }
      }
    }
  }
}

TEST_CASE("truncation monotonicity") {
  for (std::uint64_t q : {1, 3, 4}) {
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(std::max<std::uint64_t>(q, 2)); ++a) {
      if (std::gcd(residue(a, q), q) != 1) continue;
      const std::int64_t b = 1;
      for (const auto& [t1, t2] : {std::pair{50.0, 100.0}, std::pair{50.0, 75.0}, std::pair{75.0, 100.0}}) {
        const ExplicitFormula lo(q, a, b, 2.0, catalog(), t1), hi(q, a, b, 2.0, catalog(), t2);
        for (double N : {256.0, 2048.0, 8192.0, 32768.0}) {
          const double change = std::abs(hi.evaluate(N).total_real - lo.evaluate(N).total_real);
          INFO("q = " << q << " a = " << a << " T = " << t1 << " -> " << t2 << " N = " << N);
          CHECK(change <= tail_estimate(N, q, 2.0, t1));
        }
      }
    }
  }
}

TEST_CASE("zero terms track the oscillation of sigma minus m1") {
  const LambdaTable table(1 << 17);
  std::vector<std::uint64_t> ns;
  for (int e = 10; e <= 17; ++e) ns.push_back(std::uint64_t{1} << e);
  const auto reports = verify_sweep(1, 1, 1, 2.0, ns, catalog(), 240.0, table, 2);
  std::vector<double> xs, ys;
  for (const auto& r : reports) {
    xs.push_back(r.sigma - r.main.m1);
    ys.push_back((r.main.m2_a + r.main.m2_b + r.main.m3).real());
  }
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); };
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  CHECK(sxy / std::sqrt(sxx * syy) > 0.0);
}

TEST_CASE("verify_sweep is independent of the thread count") {
  const LambdaTable table(1 << 14);
  const std::vector<std::uint64_t> ns = {1000, 1024, 3000, 5000, 8192, 10000, 16384, 2};
  const auto one = verify_sweep(4, 3, 3, 2.0, ns, catalog(), 60.0, table, 1);
  for (unsigned threads : {3u, 8u}) {
    const auto many = verify_sweep(4, 3, 3, 2.0, ns, catalog(), 60.0, table, threads);
    REQUIRE(many.size() == one.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
      CHECK(same_bits(many[i].sigma, one[i].sigma));
      CHECK(same_bits(many[i].main.total_real, one[i].main.total_real));
      CHECK(same_bits(many[i].normalized, one[i].normalized));
    }
  }
  const auto single = verify({5000, 4, 3, 3, 2.0}, catalog(), 60.0, table);
  CHECK(same_bits(single.sigma, one[3].sigma));
  CHECK(same_bits(single.main.total_real, one[3].main.total_real));
  CHECK(verify_sweep(1, 1, 1, 2.0, {}, catalog(), 240.0, table).empty());
  CHECK_THROWS_AS(verify_sweep(1, 1, 1, 2.0, {1 << 15}, catalog(), 240.0, table), TableTooSmall);
}

TEST_CASE("zero terms match sigma minus m1 once the constant of the explicit formula is removed") {
  // ψ(x) = x - Σ x^ρ/ρ - log 2π - ..., so Σ_k carries -2 log(2π) N^{k+1} / Γ(k+2).
  const LambdaTable table(1 << 17);
  std::vector<std::uint64_t> ns;
  for (int e = 10; e <= 17; ++e) ns.push_back(std::uint64_t{1} << e);
  const auto reports = verify_sweep(1, 1, 1, 2.0, ns, catalog(), 240.0, table, 2);
  for (const auto& r : reports) {
    const double N = static_cast<double>(r.request.N);
    const double constant_term = -2.0 * std::log(2.0 * std::numbers::pi) * N * N * N / 6.0;
    const double zero_part = (r.main.m2_a + r.main.m2_b + r.main.m3).real();
    INFO("N = " << N);
    CHECK(std::abs(r.sigma - r.main.m1 - constant_term - zero_part) <= 0.2 * N * N * std::sqrt(N));
  }
}

TEST_CASE("removing the zeros enlarges the discrepancy for most N") {
  const LambdaTable table(1 << 17);
  std::vector<std::uint64_t> ns;
  for (int e = 10; e <= 17; ++e) ns.push_back(std::uint64_t{1} << e);
  const auto with = verify_sweep(1, 1, 1, 2.0, ns, catalog(), 240.0, table, 2);
  const auto without = verify_sweep(1, 1, 1, 2.0, ns, ZeroCatalog{}, 0.0, table, 2);
  int larger = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    CHECK(without[i].discrepancy == without[i].sigma - without[i].main.m1);
    if (std::abs(without[i].discrepancy) > std::abs(with[i].discrepancy)) ++larger;
  }
  INFO(larger << " of " << ns.size());
  CHECK(5 * larger >= 4 * static_cast<int>(ns.size()));
}
