#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <random>

#include "pmplus/oracle/toy_oracle.hpp"

using namespace pmplus::oracle;

namespace {

block_key key(std::initializer_list<int> a, int b) {
  block_key k;
  for (int x : a) k.a.emplace_back(x);
  k.b = b;
  return k;
}

std::vector<bigint> vec(std::initializer_list<int> xs) { return {xs.begin(), xs.end()}; }

} // namespace

TEST(ToyParams, Validity) {
  EXPECT_TRUE(toy17().valid());
  EXPECT_TRUE(toy257().valid());
  EXPECT_TRUE(production32().valid());
  EXPECT_TRUE(production64().valid());
  EXPECT_EQ(toy17().p(), 17);
  EXPECT_EQ(toy17().key_count(), 14);
  // kappa = 0: 256 * 256 = 2^16 overflows two words
  EXPECT_FALSE((toy_params{8, 1, 0, 4, 3}.valid()));
  EXPECT_TRUE((toy_params{8, 1, 1, 4, 3}.valid()));
  EXPECT_FALSE((toy_params{8, 3, 3, 4, 3}.valid())); // 259 is not prime
  EXPECT_FALSE((toy_params{4, 1, 2, 1, 3}.valid())); // m < 2
}

TEST(OracleBlock, HandChecked) {
  // (5 + 3*2 + 4*6) mod 17 = 35 mod 17 = 1
  EXPECT_EQ(oracle_block(toy17(), key({3, 4}, 5), vec({2, 6})), 1);
  EXPECT_EQ(oracle_block(toy17(), key({1, 1}, 0), vec({1, 2})), 3);
  EXPECT_THROW(oracle_block(toy17(), key({1, 1}, 0), vec({1})), std::invalid_argument);
}

TEST(OracleTree, ShortStringIsOneBlock) {
  // m = 4: "ab" -> f1(a, b, 1, 0)
  const auto tp = toy257();
  std::mt19937_64 gen(1);
  schedule ks;
  for (int j = 0; j < 3; ++j) ks.push_back(key({int(1 + gen() % 254), int(1 + gen() % 254), int(1 + gen() % 254),
                                               int(1 + gen() % 254)}, int(gen() % 256)));
  EXPECT_EQ(oracle_tree(tp, ks, vec({10, 20})), oracle_block(tp, ks[0], vec({10, 20, 1, 0})));
}

TEST(OracleTree, FiveCharactersUseTwoLevels) {
  // "abcde" -> f2(f1(a,b,c,d), f1(e,1,0,0), 0, 0)
  const auto tp = toy257();
  const schedule ks = {key({3, 5, 7, 11}, 13), key({17, 19, 23, 29}, 31), key({1, 1, 1, 1}, 0)};
  const auto left = oracle_block(tp, ks[0], vec({1, 2, 3, 4}));
  const auto right = oracle_block(tp, ks[0], vec({5, 1, 0, 0}));
  EXPECT_EQ(oracle_tree(tp, ks, vec({1, 2, 3, 4, 5})), oracle_block(tp, ks[1], std::vector<bigint>{left, right, 0, 0}));
}

TEST(OracleTree, EmptyStringStillUsesFirstLevel) {
  const auto tp = toy17();
  const schedule ks = {key({3, 4}, 5), key({1, 1}, 0), key({1, 1}, 0)};
  EXPECT_EQ(oracle_tree(tp, ks, {}), oracle_block(tp, ks[0], vec({1, 0})));
}

TEST(OracleTree, LengthLimit) {
  const auto tp = toy17(); // m^L = 8
  const schedule ks(3, key({1, 2}, 3));
  EXPECT_NO_THROW(oracle_tree(tp, ks, std::vector<bigint>(7, 1)));
  EXPECT_THROW(oracle_tree(tp, ks, std::vector<bigint>(8, 1)), pmplus::error);
}

TEST(MarkedSigma, MarkerPlacement) {
  auto b = [](const char* s) { return std::as_bytes(std::span(s, std::strlen(s))); };
  EXPECT_EQ(marked_sigma(b(""), 32), vec({1}));
  EXPECT_EQ(marked_sigma(b("a"), 32), vec({0x0161}));
  EXPECT_EQ(marked_sigma(b("abcd"), 32), (std::vector<bigint>{bigint(0x64636261), 1}));
  EXPECT_EQ(marked_sigma(b("abcde"), 32), (std::vector<bigint>{bigint(0x64636261), 0x0165}));
}

TEST(MarkedSigma, TrailingZerosAreDistinguished) {
  std::mt19937_64 gen(2);
  for (unsigned n : {32u, 64u})
    for (std::size_t len = 0; len < 24; ++len) {
      std::vector<std::byte> s(len);
      for (auto& x : s) x = static_cast<std::byte>(gen());
      auto prev = marked_sigma(s, n);
      for (int extra = 1; extra <= 9; ++extra) {
        s.push_back(std::byte{0});
        const auto next = marked_sigma(s, n);
        EXPECT_NE(prev, next) << "n=" << n << " len=" << len << " extra=" << extra;
        prev = next;
      }
    }
}

TEST(OracleMix, MatchesDirectEvaluation) {
  EXPECT_EQ(oracle_mix(32, 1), 0xab3b4e74u);
  EXPECT_EQ(oracle_mix(64, 1), bigint("0xc4ceb9fe78e2b0ac"));
  EXPECT_EQ(oracle_mix(32, 0), 0);
}

TEST(ComponentRegularity, RandomKeysArePermutations) {
  const auto tp = toy257();
  std::mt19937_64 gen(3);
  for (int t = 0; t < 10; ++t) {
    block_key k = key({int(1 + gen() % 254), int(1 + gen() % 254), int(1 + gen() % 254), int(1 + gen() % 254)},
                      int(gen() % 256));
    std::vector<bigint> fixed = vec({int(gen() % 257), int(gen() % 257), int(gen() % 257), int(gen() % 257)});
    for (std::size_t i = 0; i < 4; ++i) {
      const auto v = check_component_regularity(tp, k, i, fixed);
      EXPECT_TRUE(v.permutation);
      const auto h = component_histogram_mod(tp, k, i, fixed, 256);
      std::size_t total = 0, twos = 0;
      for (auto c : h) {
        EXPECT_TRUE(c == 1 || c == 2);
        total += c;
        twos += c == 2;
      }
      EXPECT_EQ(total, 257u);
      EXPECT_EQ(twos, 1u);
    }
  }
}

TEST(ComponentRegularity, ZeroMultiplierFails) {
  const auto v = check_component_regularity(toy257(), key({0, 1, 1, 1}, 0), 0, vec({0, 1, 2, 3}));
  EXPECT_FALSE(v.permutation);
  EXPECT_EQ(*std::max_element(v.histogram.begin(), v.histogram.end()), 257u);
}

TEST(DeltaUniversality, Controls) {
  const auto tp = toy17();
  const auto s = vec({3, 9});
  const auto same = check_delta_universality(tp, s, s, 0);
  EXPECT_EQ(same.total, 14u * 14u * 16u);
  EXPECT_EQ(same.hits, same.total);
  EXPECT_EQ(check_delta_universality(tp, s, s, 5).hits, 0u);
}

TEST(DeltaUniversality, BoundHolds) {
  const auto tp = toy17();
  std::mt19937_64 gen(4);
  for (int t = 0; t < 10; ++t) {
    const auto s = vec({int(gen() % 17), int(gen() % 17)});
    auto s2 = s;
    s2[gen() % 2] += 1 + gen() % 16;
    s2[0] %= 17;
    s2[1] %= 17;
    const auto kc = check_delta_universality(tp, s, s2, gen() % 17);
    EXPECT_LE(kc.hits * 14, kc.total);
  }
}

TEST(Uniformity, OneOffsetPerTarget) {
  const auto tp = toy17();
  for (int y = 0; y < 17; ++y) {
    const auto u = check_uniformity(tp, vec({5, 9}), vec({16, 2}), y);
    EXPECT_EQ(u.solutions_in_p, 1u);
    EXPECT_LE(u.solutions_in_2n, 1u);
  }
}
