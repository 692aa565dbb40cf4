#include <gtest/gtest.h>

#include <sstream>

#include "pmplus/quality.hpp"

using namespace pmplus;
using namespace pmplus::quality;

namespace {

std::span<const std::byte> bytes(const std::string& s) { return std::as_bytes(std::span(s.data(), s.size())); }

} // namespace

TEST(Avalanche, EmptyLengthListGivesNoReports) {
  const auto ks = generate_schedule<pm32>(1);
  EXPECT_TRUE(avalanche_test<pm32>(ks, {}).empty());
}

TEST(Avalanche, ZeroLengthReportHasNoRows) {
  const auto ks = generate_schedule<pm32>(1);
  const std::size_t lens[] = {0};
  const auto r = avalanche_test<pm32>(ks, lens, {.trials = 10});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].flips.empty());
  EXPECT_EQ(r[0].worst_bias(), 0.0);
}

TEST(Avalanche, MixedDigestIsNearHalf) {
  const auto ks = generate_schedule<pm64>(2);
  const std::size_t lens[] = {4, 9};
  const auto r = avalanche_test<pm64>(ks, lens, {.trials = 20000, .seed = 3});
  ASSERT_EQ(r.size(), 2u);
  for (const auto& rep : r) {
    EXPECT_EQ(rep.flips.size(), 8 * rep.input_length * 64);
    EXPECT_LT(rep.worst_bias(), 0.03) << rep.input_length;
  }
}

TEST(Avalanche, WithoutMixLowBitsStayLinear) {
  // Flipping input bit 0 shifts the root by a_1 mod p; the raw root is far from avalanche.
  const auto ks = generate_schedule<pm32>(4);
  const std::size_t lens[] = {8};
  const auto r = avalanche_test<pm32>(ks, lens, {.trials = 4000, .apply_mix = false});
  EXPECT_GT(r[0].worst_bias(), 0.1);
}

TEST(Avalanche, ThreadCountDoesNotChangeResult) {
  const auto ks = generate_schedule<pm32>(5);
  const std::size_t lens[] = {3};
  const auto one = avalanche_test<pm32>(ks, lens, {.trials = 9000, .seed = 11, .threads = 1});
  const auto four = avalanche_test<pm32>(ks, lens, {.trials = 9000, .seed = 11, .threads = 4});
  EXPECT_EQ(one[0].flips, four[0].flips);
}

TEST(Avalanche, CsvShape) {
  const auto ks = generate_schedule<pm32>(6);
  const std::size_t lens[] = {1};
  const auto r = avalanche_test<pm32>(ks, lens, {.trials = 100});
  std::ostringstream os;
  write_csv(os, r[0]);
  std::size_t lines = 0;
  for (char c : os.str()) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 8u * 32u);
}

TEST(Reduction, Boundaries) {
  EXPECT_TRUE(reduction_boundaries<pm32>().passed());
  EXPECT_TRUE(reduction_boundaries<pm64>().passed());
  EXPECT_TRUE(reduction_boundaries<toy257>().passed());
}

TEST(Reduction, ExhaustiveToy) {
  const auto v17 = reduction_exhaustive<toy17>();
  EXPECT_TRUE(v17.passed()) << v17.first_mismatch;
  EXPECT_EQ(v17.cases, 3u * 16u * 16u);
  const auto v257 = reduction_exhaustive<toy257_wide>();
  EXPECT_TRUE(v257.passed()) << v257.first_mismatch;
  EXPECT_EQ(v257.cases, 129u * 256u * 256u);
}

TEST(Reduction, FuzzSmall) {
  const auto v32 = reduction_fuzz<pm32>(200000, 9);
  EXPECT_TRUE(v32.passed()) << v32.first_mismatch;
  const auto v64 = reduction_fuzz<pm64>(200000, 9);
  EXPECT_TRUE(v64.passed()) << v64.first_mismatch;
  EXPECT_EQ(v64.cases, 200000u);
  EXPECT_LE(v64.max_v1, 2u);
}

TEST(MixRoundTrip, Random) {
  EXPECT_TRUE(mix_roundtrip<std::uint32_t>(100000, 1).passed());
  EXPECT_TRUE(mix_roundtrip<std::uint64_t>(100000, 1).passed());
}

TEST(Collision, IdenticalInputsAlwaysCollide) {
  const auto e = collision_monte_carlo<pm32>(200, bytes("same"), bytes("same"), 1);
  EXPECT_EQ(e.collisions, 200u);
  EXPECT_EQ(e.rate(), 1.0);
}

TEST(Collision, DistinctInputsRarelyCollide) {
  const auto e = collision_monte_carlo<pm32>(2000, bytes("abc"), bytes("abd"), 2);
  EXPECT_EQ(e.collisions, 0u);
  // differ only in a trailing zero byte
  const std::string a = "x", b = std::string("x\0", 2);
  EXPECT_EQ(collision_monte_carlo<pm64>(2000, bytes(a), bytes(b), 3).collisions, 0u);
}

TEST(ImageFraction, SmallValues) {
  EXPECT_EQ(nh_image_fraction(1).image_size, 2u);
  EXPECT_DOUBLE_EQ(nh_image_fraction(1).fraction, 0.5);
  EXPECT_EQ(nh_image_fraction(2).image_size, 7u);
  EXPECT_DOUBLE_EQ(nh_image_fraction(2).fraction, 7.0 / 16.0);
  EXPECT_EQ(nh_image_fraction(3).image_size, 26u);
  EXPECT_EQ(nh_image_fraction(4).image_size, 90u);
}

TEST(ImageFraction, AgreesWithBruteForce) {
  for (unsigned n = 1; n <= 10; ++n) EXPECT_EQ(nh_image_fraction(n).image_size, nh_image_size_bruteforce(n)) << n;
}

TEST(ImageFraction, DecreasesWithWidth) {
  double prev = 1;
  for (unsigned n = 1; n <= 12; ++n) {
    const double f = nh_image_fraction(n).fraction;
    EXPECT_LT(f, prev) << n;
    prev = f;
  }
}

TEST(ImageFraction, RejectsOutOfRange) {
  EXPECT_THROW(nh_image_fraction(0), error);
  EXPECT_THROW(nh_image_fraction(15), error);
  try {
    nh_image_fraction(9, 8);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::out_of_range);
  }
}
