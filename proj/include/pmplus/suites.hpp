#pragma once

// Named verification suites. Each returns a pass/fail verdict plus
// key=value report lines that include the seed and every size parameter.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "quality.hpp"

namespace pmplus::suites {

struct suite_config {
  std::uint64_t seed = 1;
  std::uint64_t fuzz_iterations = 10'000'000;
  std::uint64_t avalanche_trials = 100'000;
  double avalanche_threshold = 0.03;
  std::uint64_t mix_iterations = 10'000'000;
  bool mix_exhaustive32 = false;
  std::size_t regularity_draws = 50;
  std::size_t universality_triples = 10;
  std::uint64_t block_cases = 10'000;
  unsigned nh_max_bits = 12;
  unsigned threads = quality::detail::default_threads();
};

struct suite_result {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& line) {
    passed = passed && ok;
    lines.push_back(line + (ok ? " ok" : " FAIL"));
  }
};

inline constexpr std::array<std::string_view, 8> kSuiteNames = {
    "reduction",        "block-equivalence", "regularity", "universality", "avalanche", "mix",
    "tree-equivalence", "nh-fraction",
};

namespace detail {

template <class... Ts>
std::string kv(Ts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

inline std::string describe(const quality::reduction_verdict& v) {
  return kv("cases=", v.cases, " mismatches=", v.mismatches, " max_v1=", v.max_v1,
            v.first_mismatch.empty() ? "" : " first_mismatch=[" + v.first_mismatch + "]");
}

template <class P>
oracle::toy_params oracle_params() {
  return {P::bits, P::k, P::kappa, P::m, P::levels};
}

// Tree root from the streaming hasher over whole characters, or nullopt if
// the length is rejected.
template <class P>
std::optional<oracle::bigint> streaming_root(const key_schedule<P>& ks,
                                             std::span<const typename P::word> words) {
  try {
    tree_hasher<P> h(ks);
    h.update_words(words);
    const auto root = h.finalize_tree();
    return oracle::bigint(root.lo) + (oracle::bigint(root.hi) << P::bits);
  } catch (const error& e) {
    if (e.code() != errc::length_exceeded) throw;
    return std::nullopt;
  }
}

template <class P>
std::optional<oracle::bigint> oracle_root(const oracle::schedule& keys,
                                          std::span<const typename P::word> words) {
  try {
    std::vector<oracle::bigint> s(words.begin(), words.end());
    return oracle::oracle_tree(oracle_params<P>(), keys, std::move(s));
  } catch (const error& e) {
    if (e.code() != errc::length_exceeded) throw;
    return std::nullopt;
  }
}

// Random character strings of every length in [0, max_len] (plus `extra`
// lengths) through both paths. Returns the number of mismatching lengths.
template <class P>
std::size_t sweep_words(std::mt19937_64& gen, const key_schedule<P>& ks, std::size_t max_len,
                        std::span<const std::size_t> extra, std::size_t& rejected) {
  const auto keys = oracle::from_schedule(ks);
  std::vector<std::size_t> lens;
  for (std::size_t n = 0; n <= max_len; ++n) lens.push_back(n);
  lens.insert(lens.end(), extra.begin(), extra.end());
  std::size_t bad = 0;
  for (std::size_t n : lens) {
    std::vector<typename P::word> w(n);
    for (auto& x : w) x = static_cast<typename P::word>(gen() & P::mask);
    const auto a = streaming_root<P>(ks, w);
    const auto b = oracle_root<P>(keys, w);
    if (a != b) ++bad;
    if (!a) ++rejected;
  }
  return bad;
}

// Random byte strings of every length in [0, max_bytes] through the full
// digest path and the oracle digest.
template <class P>
std::size_t sweep_bytes(std::mt19937_64& gen, const key_schedule<P>& ks, std::size_t max_bytes) {
  const auto keys = oracle::from_schedule(ks);
  std::size_t bad = 0;
  std::vector<std::byte> buf;
  for (std::size_t n = 0; n <= max_bytes; ++n) {
    buf.resize(n);
    for (auto& b : buf) b = static_cast<std::byte>(gen());
    if (oracle::bigint(hash_oneshot<P>(ks, buf)) != oracle::oracle_digest(oracle_params<P>(), keys, buf))
      ++bad;
  }
  return bad;
}

// Every split of one input into two update calls, plus a three-way split
// grid, against the one-shot digest and the oracle.
template <class P>
std::size_t sweep_splits(std::mt19937_64& gen, const key_schedule<P>& ks, std::size_t size) {
  std::vector<std::byte> buf(size);
  for (auto& b : buf) b = static_cast<std::byte>(gen());
  const auto expect = hash_oneshot<P>(ks, buf);
  std::size_t bad = 0;
  if (oracle::bigint(expect) !=
      oracle::oracle_digest(oracle_params<P>(), oracle::from_schedule(ks), buf))
    ++bad;
  const std::span<const std::byte> all(buf);
  for (std::size_t cut = 0; cut <= size; ++cut) {
    tree_hasher<P> h(ks);
    h.update(all.first(cut));
    h.update(all.subspan(cut));
    if (h.finalize() != expect) ++bad;
  }
  for (std::size_t c1 = 0; c1 <= size; c1 += 37)
    for (std::size_t c2 = c1; c2 <= size; c2 += 53) {
      tree_hasher<P> h(ks);
      h.update(all.first(c1));
      h.update(all.subspan(c1, c2 - c1));
      h.update(all.subspan(c2));
      if (h.finalize() != expect) ++bad;
    }
  return bad;
}

// Random full blocks through both block hashes and the oracle. One key or
// input in eight is pinned to an extreme value.
template <class P>
std::uint64_t sweep_blocks(std::mt19937_64& gen, std::uint64_t cases) {
  using word = typename P::word;
  const auto tp = oracle_params<P>();
  std::uint64_t bad = 0;
  auto edge = [&] { return (gen() & 7) == 0; };
  for (std::uint64_t c = 0; c < cases; ++c) {
    key_schedule<P> ks = generate_schedule<P>(gen);
    auto& keys = ks.levels[0];
    for (auto& a : keys.a)
      if (edge()) a = (gen() & 1) ? P::max_key : word{1};
    if (edge()) keys.b = P::mask;
    const auto okey = oracle::from_schedule(ks)[0];

    std::array<word, P::m> words;
    std::array<field_element<P>, P::m> elems;
    std::vector<oracle::bigint> sw(P::m), se(P::m);
    for (std::size_t i = 0; i < P::m; ++i) {
      words[i] = edge() ? P::mask : static_cast<word>(gen() & P::mask);
      if (edge())
        elems[i] = {static_cast<word>(gen() % P::k), 1};
      else
        elems[i] = field_element<P>::from_word(static_cast<word>(gen() & P::mask));
      sw[i] = words[i];
      se[i] = oracle::bigint(elems[i].lo) + (oracle::bigint(elems[i].hi) << P::bits);
    }
    const auto fw = hash_block_words<P>(keys, words);
    const auto fe = hash_block_elems<P>(keys, elems);
    if (oracle::bigint(fw.lo) + (oracle::bigint(fw.hi) << P::bits) != oracle::oracle_block(tp, okey, sw)) ++bad;
    if (oracle::bigint(fe.lo) + (oracle::bigint(fe.hi) << P::bits) != oracle::oracle_block(tp, okey, se)) ++bad;
  }
  return bad;
}

} // namespace detail

inline suite_result run_reduction(const suite_config& cfg) {
  suite_result r{"reduction", true, {}};
  r.lines.push_back(detail::kv("seed=", cfg.seed, " fuzz_iterations=", cfg.fuzz_iterations));
  const auto toy = quality::reduction_exhaustive<toy257_wide>();
  r.check(toy.passed(), "exhaustive n=8 k=1 m=128 " + detail::describe(toy));
  const auto b32 = quality::reduction_boundaries<pm32>();
  r.check(b32.passed(), "boundaries n=32 " + detail::describe(b32));
  const auto b64 = quality::reduction_boundaries<pm64>();
  r.check(b64.passed(), "boundaries n=64 " + detail::describe(b64));
  const auto f32 = quality::reduction_fuzz<pm32>(cfg.fuzz_iterations, cfg.seed);
  r.check(f32.passed(), "fuzz n=32 k=15 " + detail::describe(f32));
  const auto f64 = quality::reduction_fuzz<pm64>(cfg.fuzz_iterations, cfg.seed + 1);
  r.check(f64.passed(), "fuzz n=64 k=13 " + detail::describe(f64));
  return r;
}

inline suite_result run_block_equivalence(const suite_config& cfg) {
  suite_result r{"block-equivalence", true, {}};
  r.lines.push_back(detail::kv("seed=", cfg.seed, " cases=", cfg.block_cases));
  std::mt19937_64 gen(cfg.seed);
  const auto b32 = detail::sweep_blocks<pm32>(gen, cfg.block_cases);
  r.check(b32 == 0, detail::kv("pm32 blocks=", cfg.block_cases, " mismatches=", b32));
  const auto b64 = detail::sweep_blocks<pm64>(gen, cfg.block_cases);
  r.check(b64 == 0, detail::kv("pm64 blocks=", cfg.block_cases, " mismatches=", b64));
  return r;
}

/// Component sweeps of the p = 257, m = 4 block function: each must be a
/// permutation of [0, p), and after mod 256 each output must have 1 or 2
/// preimages. The word-level block hash is compared with the oracle on
/// every point of every sweep.
inline suite_result run_regularity(const suite_config& cfg) {
  using P = toy257;
  suite_result r{"regularity", true, {}};
  const auto tp = detail::oracle_params<P>();
  r.lines.push_back(detail::kv("seed=", cfg.seed, " p=257 m=", P::m, " draws=", cfg.regularity_draws));
  std::mt19937_64 gen(cfg.seed);
  std::size_t not_perm = 0, not_two_regular = 0, path_mismatch = 0, sweeps = 0;
  for (std::size_t d = 0; d < cfg.regularity_draws; ++d) {
    const auto ks = generate_schedule<P>(gen);
    const auto key = oracle::from_schedule(ks)[0];
    std::vector<oracle::bigint> fixed(P::m);
    for (auto& f : fixed) f = gen() % 257;
    for (std::size_t i = 0; i < P::m; ++i) {
      ++sweeps;
      const auto v = oracle::check_component_regularity(tp, key, i, fixed);
      if (!v.permutation) ++not_perm;
      const auto hist = oracle::component_histogram_mod(tp, key, i, fixed, 256);
      std::size_t total = 0;
      for (auto c : hist) {
        total += c;
        if (c < 1 || c > 2) ++not_two_regular;
      }
      if (total != 257) ++not_two_regular;

      std::array<field_element<P>, P::m> elems;
      for (std::size_t c = 0; c < P::m; ++c) {
        const auto x = static_cast<unsigned>(fixed[c]);
        elems[c] = {static_cast<std::uint8_t>(x & 0xff), static_cast<std::uint8_t>(x >> 8)};
      }
      auto sweep = fixed;
      for (unsigned x = 0; x < 257; ++x) {
        elems[i] = {static_cast<std::uint8_t>(x & 0xff), static_cast<std::uint8_t>(x >> 8)};
        sweep[i] = x;
        const auto fast = hash_block_elems<P>(ks.levels[0], elems);
        if (oracle::bigint(fast.value()) != oracle::oracle_block(tp, key, sweep)) ++path_mismatch;
      }
    }
  }
  r.check(not_perm == 0, detail::kv("component_permutation sweeps=", sweeps, " failures=", not_perm));
  r.check(not_two_regular == 0,
          detail::kv("mod256_two_regular sweeps=", sweeps, " failures=", not_two_regular));
  r.check(path_mismatch == 0, detail::kv("block_vs_oracle mismatches=", path_mismatch));

  // A zero multiplier makes the sweep constant; the check must notice.
  auto bad_key = oracle::from_schedule(generate_schedule<P>(gen))[0];
  bad_key.a[1] = 0;
  const auto control = oracle::check_component_regularity(tp, bad_key, 1, std::vector<oracle::bigint>(P::m, 3));
  r.check(!control.permutation, "negative_control zero_multiplier detected");
  return r;
}

/// Exhaustive enumeration of every (a_1, a_2, b) for p = 17, kappa = 2,
/// m = 2: collision-with-offset probability, uniformity over b, and the
/// bound after reduction mod M.
inline suite_result run_universality(const suite_config& cfg) {
  using oracle::bigint;
  suite_result r{"universality", true, {}};
  const auto tp = oracle::toy17();
  const std::uint64_t denom = static_cast<std::uint64_t>(tp.key_count());
  r.lines.push_back(detail::kv("seed=", cfg.seed, " p=17 kappa=2 m=2 triples=", cfg.universality_triples,
                               " bound=1/", denom));
  std::mt19937_64 gen(cfg.seed);
  auto rand_vec = [&] {
    std::vector<bigint> v(tp.m);
    for (auto& x : v) x = gen() % 17;
    return v;
  };

  std::vector<std::array<std::vector<bigint>, 2>> pairs;
  double worst = 0;
  for (std::size_t t = 0; t < cfg.universality_triples; ++t) {
    auto s = rand_vec(), s2 = rand_vec();
    while (s2 == s) s2 = rand_vec();
    const bigint c = gen() % 17;
    const auto kc = oracle::check_delta_universality(tp, s, s2, c);
    worst = std::max(worst, kc.rate());
    // hits / total <= 1 / (p - 1 - kappa), compared exactly.
    r.check(kc.hits * denom <= kc.total,
            detail::kv("delta triple=", t, " c=", c, " hits=", kc.hits, " keys=", kc.total));
    pairs.push_back({s, s2});
  }
  r.lines.push_back(detail::kv("delta worst_rate=", worst, " bound=", 1.0 / static_cast<double>(denom)));

  const auto same = rand_vec();
  const auto ctl = oracle::check_delta_universality(tp, same, same, 0);
  r.check(ctl.hits == ctl.total, "delta control s=s' c=0 rate=1");

  // Uniformity: for every multiplier pair and target, one b in [0, p) and at
  // most one b in [0, 2^n) map s to y.
  std::uint64_t uniform_fail = 0, uniform_cases = 0;
  for (std::size_t t = 0; t < 4; ++t) {
    const auto s = rand_vec();
    for (std::uint64_t a1 = 1; a1 <= denom; ++a1)
      for (std::uint64_t a2 = 1; a2 <= denom; ++a2)
        for (unsigned y = 0; y < 17; ++y) {
          ++uniform_cases;
          const auto u = oracle::check_uniformity(tp, {bigint(a1), bigint(a2)}, s, y);
          if (u.solutions_in_p != 1 || u.solutions_in_2n > 1) ++uniform_fail;
        }
  }
  r.check(uniform_fail == 0, detail::kv("uniformity cases=", uniform_cases, " failures=", uniform_fail));

  // After mod M: ceil((2p - 1) / M) / (p - 1 - kappa).
  for (std::uint64_t modulus : {16u, 8u, 4u, 2u, 5u, 3u, 7u}) {
    const std::uint64_t scale = (2 * 17 - 1 + modulus - 1) / modulus;
    std::uint64_t worst_hits = 0, total = 0;
    bool ok = true;
    for (const auto& pr : pairs)
      for (std::uint64_t c = 0; c < modulus; ++c) {
        const auto kc = oracle::check_delta_universality_mod(tp, pr[0], pr[1], c, modulus);
        worst_hits = std::max(worst_hits, kc.hits);
        total = kc.total;
        ok = ok && kc.hits * denom <= scale * kc.total;
      }
    r.check(ok, detail::kv("mod_M M=", modulus, " worst_hits=", worst_hits, " keys=", total,
                           " bound=", scale, "/", denom));
  }
  return r;
}

inline suite_result run_avalanche(const suite_config& cfg) {
  suite_result r{"avalanche", true, {}};
  r.lines.push_back(detail::kv("seed=", cfg.seed, " trials=", cfg.avalanche_trials,
                               " threshold=", cfg.avalanche_threshold));
  const std::array<std::size_t, 5> lengths = {4, 8, 16, 32, 64};
  quality::avalanche_options opt;
  opt.trials = cfg.avalanche_trials;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  auto run = [&](auto tag, const char* name) {
    using P = decltype(tag);
    const auto ks = generate_schedule<P>(cfg.seed);
    for (const auto& rep : quality::avalanche_test<P>(ks, lengths, opt))
      r.check(rep.worst_bias() < cfg.avalanche_threshold,
              detail::kv(name, " length=", rep.input_length, " worst_bias=", rep.worst_bias()));
  };
  run(pm32{}, "pm32");
  run(pm64{}, "pm64");
  return r;
}

inline suite_result run_mix(const suite_config& cfg) {
  suite_result r{"mix", true, {}};
  r.lines.push_back(detail::kv("seed=", cfg.seed, " iterations=", cfg.mix_iterations));
  const auto v32 = quality::mix_roundtrip<std::uint32_t>(cfg.mix_iterations, cfg.seed);
  r.check(v32.passed(), detail::kv("mix32 cases=", v32.cases, " failures=", v32.failures));
  const auto v64 = quality::mix_roundtrip<std::uint64_t>(cfg.mix_iterations, cfg.seed);
  r.check(v64.passed(), detail::kv("mix64 cases=", v64.cases, " failures=", v64.failures));
  if (cfg.mix_exhaustive32) {
    const auto ex = quality::mix_roundtrip_exhaustive32();
    r.check(ex.passed(), detail::kv("mix32 exhaustive cases=", ex.cases, " failures=", ex.failures));
  }
  return r;
}

/// Streaming tree hash against the literal tree construction.
inline suite_result run_tree_equivalence(const suite_config& cfg) {
  suite_result r{"tree-equivalence", true, {}};
  r.lines.push_back(detail::kv("seed=", cfg.seed));
  std::mt19937_64 gen(cfg.seed);
  auto word_sweep = [&](auto tag, const char* name, std::size_t max_len, std::vector<std::size_t> extra,
                        std::size_t schedules) {
    using P = decltype(tag);
    std::size_t bad = 0, rejected = 0;
    for (std::size_t i = 0; i < schedules; ++i) {
      const auto ks = generate_schedule<P>(gen);
      bad += detail::sweep_words<P>(gen, ks, max_len, extra, rejected);
    }
    r.check(bad == 0, detail::kv(name, " word_lengths=0..", max_len, extra.empty() ? "" : "+boundaries",
                                 " schedules=", schedules, " rejected=", rejected, " mismatches=", bad));
  };
  // p = 17, m = 2, L = 3 accepts at most 7 characters; longer strings must
  // be rejected by both paths.
  word_sweep(toy17{}, "toy p=17 m=2 L=3", 30, {}, 20);
  word_sweep(toy17_deep{}, "toy p=17 m=2 L=5", 30, {}, 20);
  word_sweep(toy257{}, "toy p=257 m=4 L=3", 3 * toy257::m + 5, {63, 64, 65}, 20);
  const std::vector<std::size_t> big = {128 * 128 - 2, 128 * 128 - 1, 128 * 128, 128 * 128 + 1};
  word_sweep(pm32{}, "pm32", 3 * 128 + 5, big, 1);
  word_sweep(pm64{}, "pm64", 3 * 128 + 5, big, 1);

  const auto k32 = generate_schedule<pm32>(gen);
  const auto k64 = generate_schedule<pm64>(gen);
  const auto bytes32 = detail::sweep_bytes<pm32>(gen, k32, 4 * (3 * 128 + 5));
  r.check(bytes32 == 0, detail::kv("pm32 digest byte_lengths=0..", 4 * (3 * 128 + 5), " mismatches=", bytes32));
  const auto bytes64 = detail::sweep_bytes<pm64>(gen, k64, 8 * (3 * 128 + 5));
  r.check(bytes64 == 0, detail::kv("pm64 digest byte_lengths=0..", 8 * (3 * 128 + 5), " mismatches=", bytes64));
  const auto split32 = detail::sweep_splits<pm32>(gen, k32, 1024);
  r.check(split32 == 0, detail::kv("pm32 splits size=1024 mismatches=", split32));
  const auto split64 = detail::sweep_splits<pm64>(gen, k64, 1024);
  r.check(split64 == 0, detail::kv("pm64 splits size=1024 mismatches=", split64));
  return r;
}

inline suite_result run_nh_fraction(const suite_config& cfg) {
  suite_result r{"nh-fraction", true, {}};
  r.lines.push_back(detail::kv("n=1..", cfg.nh_max_bits));
  double prev = 1.0;
  for (unsigned n = 1; n <= cfg.nh_max_bits; ++n) {
    const auto pt = quality::nh_image_fraction(n);
    const auto brute = quality::nh_image_size_bruteforce(n);
    const bool ok = pt.image_size == brute && pt.fraction < prev && (n < 3 || pt.fraction < 0.5);
    r.check(ok, detail::kv("n=", n, " image_size=", pt.image_size, " bruteforce=", brute,
                           " fraction=", pt.fraction));
    prev = pt.fraction;
  }
  return r;
}

/// Runs a suite by name; nullopt for an unknown name.
inline std::optional<suite_result> run_suite(std::string_view name, const suite_config& cfg) {
  if (name == "reduction") return run_reduction(cfg);
  if (name == "block-equivalence") return run_block_equivalence(cfg);
  if (name == "regularity") return run_regularity(cfg);
  if (name == "universality") return run_universality(cfg);
  if (name == "avalanche") return run_avalanche(cfg);
  if (name == "mix") return run_mix(cfg);
  if (name == "tree-equivalence") return run_tree_equivalence(cfg);
  if (name == "nh-fraction") return run_nh_fraction(cfg);
  return std::nullopt;
}

} // namespace pmplus::suites
