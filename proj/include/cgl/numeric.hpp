#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

namespace cgl {

using complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Kahan–Babuška (Neumaier) compensated accumulator.
template <typename T>
class CompensatedSum;

template <>
class CompensatedSum<double> {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

template <>
class CompensatedSum<complex> {
 public:
  void add(complex v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

/// (N - n)^k for a nonnegative exponent; small integral exponents are
/// evaluated by repeated multiplication so that k = 0, 1, 2, ... are exact
/// wherever the double range allows.
inline double cesaro_power(double base, double k) {
  if (k == 0.0) return 1.0;
  if (base <= 0.0) return 0.0;
  if (k == std::floor(k) && k <= 16.0) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(k); ++i) r *= base;
    return r;
  }
  return std::exp(k * std::log(base));
}

/// exp(2 pi i * num / den) with exact values on the quarter turns.
inline complex unit_root(long long num, long long den) {
  long long r = num % den;
  if (r < 0) r += den;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == den) return {-1.0, 0.0};
  if (4 * r == den) return {0.0, 1.0};
  if (4 * r == 3 * den) return {0.0, -1.0};
  const double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  // The failure reported is the one at the lowest index, independent of timing.
  std::exception_ptr failure;
  std::size_t failure_index = count;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (i < failure_index) {
            failure_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cgl
