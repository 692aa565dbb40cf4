#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define PMPLUS_HAVE_TSC 1
#endif

#include "tree_hasher.hpp"

namespace pmplus::bench {

struct bench_row {
  std::size_t length = 0;
  double bytes_per_ns = 0;
  /// Time-stamp-counter ticks, which track nominal rather than actual core
  /// cycles on most modern CPUs.
  std::optional<double> bytes_per_cycle;
  unsigned variant = 0;
};

struct bench_options {
  std::size_t min_length = 64;
  std::size_t max_length = 256 * 1024;
  unsigned repetitions = 9;
  /// Bytes hashed per timed repetition, at least.
  std::size_t bytes_per_repetition = 1 << 20;
  std::uint64_t seed = 1;
};

inline bool have_cycle_counter() {
#ifdef PMPLUS_HAVE_TSC
  return true;
#else
  return false;
#endif
}

/// Powers of two from min_length to max_length.
inline std::vector<std::size_t> length_grid(const bench_options& opt) {
  std::vector<std::size_t> g;
  for (std::size_t n = opt.min_length; n <= opt.max_length; n *= 2) g.push_back(n);
  return g;
}

/// Per length: one warm-up repetition, then the median of `repetitions`
/// timed repetitions over a pre-faulted random buffer.
template <class P>
  requires production_params<P>
std::vector<bench_row> run(const key_schedule<P>& ks, const bench_options& opt = {}) {
  std::vector<std::byte> buf(opt.max_length);
  std::mt19937_64 gen(opt.seed);
  for (auto& b : buf) b = static_cast<std::byte>(gen());

  std::vector<bench_row> rows;
  volatile typename P::word sink = 0;
  for (std::size_t len : length_grid(opt)) {
    const std::size_t iters = std::max<std::size_t>(1, opt.bytes_per_repetition / len);
    const std::span<const std::byte> input(buf.data(), len);
    tree_hasher<P> h(ks);
    auto once = [&] {
      for (std::size_t i = 0; i < iters; ++i) {
        h.reset();
        h.update(input);
        sink = sink ^ h.finalize();
      }
    };
    once();
    std::vector<double> ns, ticks;
    for (unsigned r = 0; r < std::max(1u, opt.repetitions); ++r) {
#ifdef PMPLUS_HAVE_TSC
      const auto t0 = __rdtsc();
#endif
      const auto c0 = std::chrono::steady_clock::now();
      once();
      const auto c1 = std::chrono::steady_clock::now();
#ifdef PMPLUS_HAVE_TSC
      ticks.push_back(static_cast<double>(__rdtsc() - t0));
#endif
      ns.push_back(static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(c1 - c0).count()));
    }
    auto median = [](std::vector<double> v) {
      std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
      return std::max(v[v.size() / 2], 1.0);
    };
    const double total = static_cast<double>(len) * static_cast<double>(iters);
    bench_row row{len, total / median(ns), std::nullopt, P::bits};
    if (!ticks.empty()) row.bytes_per_cycle = total / median(ticks);
    rows.push_back(row);
  }
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<bench_row>& rows) {
  const bool cycles = !rows.empty() && rows.front().bytes_per_cycle.has_value();
  os << "length,bytes_per_ns" << (cycles ? ",bytes_per_cycle" : "") << '\n';
  for (const auto& r : rows) {
    os << r.length << ',' << r.bytes_per_ns;
    if (cycles) os << ',' << r.bytes_per_cycle.value_or(0.0);
    os << '\n';
  }
}

} // namespace pmplus::bench
