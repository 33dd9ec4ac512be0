#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cgl/goldbach.hpp"

using namespace cgl;

namespace {

// Λ(m) from trial division, independent of the sieve.
double lambda_direct(std::uint64_t m) {
  if (m < 2) return 0.0;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return std::log(static_cast<double>(m));
}

}  // namespace

TEST_CASE("rg examples") {
  const LambdaTable table(20000);
  CHECK(rg(10, 3, 1, 1, table) == 0.0);
  const double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0), l7 = std::log(7.0);
  CHECK(rg(10, 1, 1, 1, table) == Catch::Approx(2 * l2 * l2 + 2 * l3 * l7 + l5 * l5).epsilon(1e-15));
  CHECK(rg(1, 1, 1, 1, table) == 0.0);
  CHECK(rg(1, 5, 2, 3, table) == 0.0);
  CHECK(rg(4, 1, 1, 1, table) == l2 * l2);
  CHECK_THROWS_AS(rg(20001, 1, 1, 1, table), TableTooSmall);
  CHECK_THROWS_AS(rg(10, 0, 1, 1, table), InvalidArgument);
  // negative residues are reduced
  CHECK(rg(100, 4, -1, 1, table) == rg(100, 4, 3, 1, table));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t q = 1 + rng() % 12;
    std::int64_t a = 0, b = 0;
    do a = static_cast<std::int64_t>(rng() % q) + 1; while (std::gcd(static_cast<std::uint64_t>(a), q) != 1);
    do b = static_cast<std::int64_t>(rng() % q) + 1; while (std::gcd(static_cast<std::uint64_t>(b), q) != 1);
    const std::uint64_t n = rng() % 20000;
    REQUIRE(rg(n, q, a, b, table) == rg(n, q, b, a, table));
  }
}

TEST_CASE("rg against a brute-force convolution") {
  const LambdaTable table(600);
  for (std::uint64_t q : {1, 3, 4, 5}) {
    for (std::int64_t a = 1; a <= static_cast<std::int64_t>(q); ++a) {
      for (std::int64_t b = 1; b <= static_cast<std::int64_t>(q); ++b) {
        if (std::gcd(residue(a, q), q) != 1 || std::gcd(residue(b, q), q) != 1) continue;
        for (std::uint64_t n = 0; n <= 600; ++n) {
          double expected = 0.0;
          for (std::uint64_t m1 = 1; m1 < n; ++m1) {
            if (m1 % q == residue(a, q) && (n - m1) % q == residue(b, q)) expected += lambda_direct(m1) * lambda_direct(n - m1);
          }
          REQUIRE(rg(n, q, a, b, table) == Catch::Approx(expected).epsilon(1e-13).margin(1e-13));
        }
      }
    }
  }
}

TEST_CASE("sparse representation table is bit-identical to rg") {
  const LambdaTable table(5000);
  for (std::uint64_t q : {1, 3, 4, 5, 12}) {
    for (std::int64_t a = 1; a <= static_cast<std::int64_t>(q); ++a) {
      if (std::gcd(residue(a, q), q) != 1) continue;
      for (std::int64_t b = 1; b <= static_cast<std::int64_t>(q); ++b) {
        if (std::gcd(residue(b, q), q) != 1) continue;
        const RepresentationCounts counts(q, a, b, 5000, table);
        for (std::uint64_t n = 0; n <= 5000; ++n) REQUIRE(counts[n] == rg(n, q, a, b, table));
      }
    }
  }
  CHECK_THROWS_AS(RepresentationCounts(1, 1, 1, 5001, table), TableTooSmall);
  CHECK_THROWS_AS(RepresentationCounts(1, 1, 1, 10, table).at(11), TableTooSmall);
}

TEST_CASE("congruence support") {
  const LambdaTable table(10000);
  for (std::uint64_t q = 1; q <= 12; ++q) {
    for (std::int64_t a = 1; a <= static_cast<std::int64_t>(q); ++a) {
      if (std::gcd(residue(a, q), q) != 1) continue;
      for (std::int64_t b = 1; b <= static_cast<std::int64_t>(q); ++b) {
        if (std::gcd(residue(b, q), q) != 1) continue;
        const RepresentationCounts counts(q, a, b, 10000, table);
        for (std::uint64_t n = 0; n <= 10000; ++n) {
          if ((residue(a, q) + residue(b, q)) % q != n % q) REQUIRE(counts[n] == 0.0);
        }
      }
    }
  }
}

TEST_CASE("residue partition") {
  const LambdaTable table(10000);
  const RepresentationCounts all(1, 1, 1, 10000, table);
  for (std::uint64_t q : {3, 4, 5}) {
    std::vector<double> coprime(10001, 0.0);
    for (std::int64_t a = 1; a <= static_cast<std::int64_t>(q); ++a) {
      if (std::gcd(residue(a, q), q) != 1) continue;
      for (std::int64_t b = 1; b <= static_cast<std::int64_t>(q); ++b) {
        if (std::gcd(residue(b, q), q) != 1) continue;
        const RepresentationCounts counts(q, a, b, 10000, table);
        for (std::uint64_t n = 0; n <= 10000; ++n) coprime[n] += counts[n];
      }
    }
    // Pairs with a prime-power summand sharing a factor with q.
    std::vector<double> cross(10001, 0.0);
    for (const auto& p1 : table.prime_powers()) {
      for (const auto& p2 : table.prime_powers()) {
        if (p1.m + p2.m > 10000) break;
        if (std::gcd(p1.m, q) != 1 || std::gcd(p2.m, q) != 1) cross[p1.m + p2.m] += p1.lambda * p2.lambda;
      }
    }
    for (std::uint64_t n = 0; n <= 10000; ++n) {
      REQUIRE(coprime[n] <= all[n] * (1 + 1e-12));
      REQUIRE(coprime[n] + cross[n] == Catch::Approx(all[n]).epsilon(1e-12).margin(1e-12));
      if (cross[n] == 0.0) REQUIRE(coprime[n] == Catch::Approx(all[n]).epsilon(1e-12));
    }
  }
}

TEST_CASE("Cesàro sums") {
  const LambdaTable table(10000);
  const double l2 = std::log(2.0);
  CHECK(sigma_k({5, 1, 1, 1, 1.0}, table) == Catch::Approx(l2 * l2).epsilon(1e-15));
  CHECK(sigma_k({4, 1, 1, 1, 1.0}, table) == 0.0);
  CHECK(sigma_k({4, 1, 1, 1, 0.0}, table) == l2 * l2);

  // k = 0 is the plain cumulative sum
  for (std::uint64_t q : {1, 3, 4}) {
    double cumulative = 0.0;
    for (std::uint64_t n = 1; n <= 3000; ++n) cumulative += rg(n, q, 1, 1, table);
    CHECK(sigma_k({3000, q, 1, 1, 0.0}, table) == Catch::Approx(cumulative).epsilon(1e-12));
  }

  // non-integral k against a direct evaluation
  {
    double direct = 0.0;
    for (std::uint64_t n = 1; n <= 999; ++n) direct += rg(n, 1, 1, 1, table) * std::pow(1000.0 - n, 1.5);
    CHECK(sigma_k({1000, 1, 1, 1, 1.5}, table) == Catch::Approx(direct / std::tgamma(2.5)).epsilon(1e-12));
  }

  // monotone in N
  for (double k : {0.0, 0.5, 2.0}) {
    const RepresentationCounts counts(3, 1, 2, 3000, table);
    double prev = 0.0;
    for (std::uint64_t N = 2; N <= 3000; N += 7) {
      const double s = sigma_k(N, k, counts);
      REQUIRE(s >= prev);
      prev = s;
    }
  }

  CHECK_THROWS_AS(sigma_k({10001, 1, 1, 1, 2.0}, table), TableTooSmall);
  CHECK_THROWS_AS(sigma_k({100, 4, 2, 1, 2.0}, table), InvalidArgument);
  CHECK_THROWS_AS(sigma_k({100, 4, 1, 1, -1.0}, table), InvalidArgument);
  CHECK_THROWS_AS(sigma_k({1, 1, 1, 1, 1.0}, table), InvalidArgument);
}

TEST_CASE("partial summation identity") {
  const LambdaTable table(3000);
  for (std::uint64_t q : {1, 3, 4, 5}) {
    for (std::int64_t a = 1; a <= static_cast<std::int64_t>(q); ++a) {
      if (std::gcd(residue(a, q), q) != 1) continue;
      for (std::int64_t b = 1; b <= static_cast<std::int64_t>(q); ++b) {
        if (std::gcd(residue(b, q), q) != 1) continue;
        const RepresentationCounts counts(q, a, b, 3000, table);
        double running = 0.0;
        for (std::uint64_t N = 2; N <= 3000; ++N) {
          running += sigma_k(N - 1, 0.0, counts);
          const double s1 = sigma_k(N, 1.0, counts);
          REQUIRE(std::abs(s1 - running) <= 1e-9 * std::max(1.0, s1));
        }
      }
    }
  }
}

TEST_CASE("exponential sums") {
  const LambdaTable table(200000);
  SECTION("z = 5 against a 20-term direct sum") {
    double direct = 0.0;
    for (std::uint64_t m = 1; m <= 20; ++m) direct += lambda_direct(m) * std::exp(-5.0 * static_cast<double>(m));
    const complex s = stilde_progression({5.0, 0.0}, 1, 1, table, 1e-12);
    CHECK(std::abs(s - direct) <= 1e-12);
    CHECK(s.real() == Catch::Approx(3.18064e-5).epsilon(1e-5));
  }
  SECTION("residue classes partition the full sum") {
    for (std::uint64_t q : {3, 4, 6, 10}) {
      const EvalPoint z{0.01, 0.3};
      const double eps = 1e-12;
      complex sum = 0.0;
      for (std::int64_t a = 0; a < static_cast<std::int64_t>(q); ++a) sum += stilde_progression(z, q, a, table, eps);
      CHECK(std::abs(sum - stilde_progression(z, 1, 1, table, eps)) <= 2 * eps);
    }
  }
  SECTION("conjugate symmetry") {
    const complex s = stilde_progression({0.01, 0.3}, 1, 1, table, 1e-12);
    const complex t = stilde_progression({0.01, -0.3}, 1, 1, table, 1e-12);
    CHECK(std::abs(std::conj(t) - s) <= 1e-12 * std::abs(s));
  }
  SECTION("characters") {
    const EvalPoint z{0.01, 0.1};
    const double eps = 1e-12;
    CHECK(std::abs(stilde_character(z, Character(1, 1), table, eps) - stilde_progression(z, 1, 1, table, eps)) <= 2 * eps);
    for (std::int64_t a : {1, 3}) {
      complex sum = 0.0;
      for (const auto& chi : character_group(4)) sum += std::conj(chi(a)) * stilde_character(z, chi, table, eps);
      CHECK(std::abs(sum / 2.0 - stilde_progression(z, 4, a, table, eps)) <= 2 * eps);
    }
  }
  SECTION("induced and primitive characters differ by at most e^{-x} log q") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.02, 1.0), uy(-3.0, 3.0);
    int checked = 0;
    while (checked < 20) {
      const std::uint64_t q = 2 + rng() % 29;
      const auto group = character_group(q);
      const auto& chi = group[rng() % group.size()];
      const auto star = conductor(chi).primitive;
      const EvalPoint z{ux(rng), uy(rng)};
      const double diff = std::abs(stilde_character(z, chi, table, 1e-13) - stilde_character(z, star, table, 1e-13));
      INFO(chi.key() << " z = " << z.x << " + " << z.y << "i");
      CHECK(diff <= std::exp(-z.x) * std::log(static_cast<double>(q)) + 4e-13);
      ++checked;
    }
  }
  SECTION("errors") {
    CHECK_THROWS_AS(stilde_progression({0.0, 1.0}, 1, 1, table, 1e-12), InvalidArgument);
    CHECK_THROWS_AS(stilde_progression({1e-5, 0.0}, 1, 1, table, 1e-12), TableTooSmall);
    CHECK_THROWS_AS(stilde_progression({1.0, 0.0}, 1, 1, table, 0.0), InvalidArgument);
  }
  SECTION("certified truncation") {
    for (double x : {0.001, 0.01, 0.3, 2.0}) {
      const auto M = detail::truncation_point(x, 1e-12, 1u << 30);
      double tail = 0.0;
      for (std::uint64_t m = M + 1; m < M + 200000; ++m) tail += std::log(static_cast<double>(m)) * std::exp(-x * static_cast<double>(m));
      CHECK(tail <= 1e-12);
    }
  }
}

TEST_CASE("generating function identity") {
  const LambdaTable table(200000);
  const double eps = 1e-15;
  constexpr double kRound = 64 * std::numeric_limits<double>::epsilon();
  {
    const EvalPoint z{2.0, 0.0};
    const double sa = std::abs(stilde_progression(z, 1, 1, table, eps));
    const double r = generating_residual(z, 1, 1, 1, 50, table, eps);
    const double bound = product_tail_bound(z.x, 50) + eps * (2 * sa + eps) + kRound * sa * sa;
    CHECK(product_tail_bound(z.x, 50) <= 1e-25);
    CHECK(r <= bound);
  }
  {
    const EvalPoint z{0.1, 0.0};
    const double sa = std::abs(stilde_progression(z, 3, 1, table, eps));
    const double r = generating_residual(z, 3, 1, 1, 2000, table, eps);
    CHECK(r <= product_tail_bound(z.x, 2000) + eps * (2 * sa + eps) + kRound * sa * sa);
  }
  {
    const EvalPoint z{0.05, 1.5};
    const double r0 = generating_residual(z, 4, 1, 3, 0, table, eps);
    const complex sa = stilde_progression(z, 4, 1, table, eps), sb = stilde_progression(z, 4, 3, table, eps);
    CHECK(r0 == std::abs(sa * sb));
  }
}
