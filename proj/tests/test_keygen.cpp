#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "pmplus/keygen.hpp"

using namespace pmplus;

namespace {

template <class P>
errc load_error(std::vector<std::byte> bytes) {
  try {
    load_schedule<P>(bytes);
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return errc::out_of_range;
}

// Overwrites word `index` of the payload (0 = b of level 1, 1 = a_1, ...).
template <class W>
void poke(std::vector<std::byte>& file, std::size_t index, W value) {
  for (std::size_t i = 0; i < sizeof(W); ++i)
    file[kKeyHeaderSize + index * sizeof(W) + i] = static_cast<std::byte>(value >> (8 * i));
}

} // namespace

TEST(Keygen, SeedIsDeterministic) {
  EXPECT_EQ(save_schedule(generate_schedule<pm64>(42)), save_schedule(generate_schedule<pm64>(42)));
  EXPECT_NE(save_schedule(generate_schedule<pm64>(42)), save_schedule(generate_schedule<pm64>(43)));
}

TEST(Keygen, GeneratedKeysAreValid) {
  EXPECT_TRUE(generate_schedule<pm32>(1).valid());
  EXPECT_TRUE(generate_schedule<pm64>(1).valid());
  EXPECT_TRUE(generate_schedule_from_entropy<pm64>().valid());
  EXPECT_TRUE(generate_schedule<toy17>(1).valid());
}

TEST(Keygen, EntropyModeUsesSameFormat) {
  const auto file = save_schedule(generate_schedule_from_entropy<pm32>());
  EXPECT_EQ(file.size(), 4136u);
  EXPECT_EQ(file[7], std::byte{0});
  EXPECT_EQ(load_schedule<pm32>(file), load_schedule<pm32>(save_schedule(load_schedule<pm32>(file))));
}

TEST(Keygen, MultiplierRangeAndMean32) {
  // About 10^6 multipliers, all in [1, 2^32 - 14], mean within 3 sigma of the midpoint.
  std::mt19937_64 gen(7);
  double sum = 0;
  std::uint64_t count = 0;
  while (count < 1000000) {
    const auto ks = generate_schedule<pm32>(gen);
    for (const auto& level : ks.levels)
      for (auto a : level.a) {
        ASSERT_GE(a, 1u);
        ASSERT_LE(a, 0xffffffffu - 13);
        sum += a;
        ++count;
      }
  }
  const double hi = 4294967282.0, lo = 1.0;
  const double mid = (lo + hi) / 2, sigma = (hi - lo + 1) / std::sqrt(12.0) / std::sqrt(double(count));
  EXPECT_LT(std::abs(sum / double(count) - mid), 3 * sigma);
}

TEST(Keygen, MultipliersPassChiSquared) {
  constexpr int buckets = 100;
  std::vector<double> hist(buckets, 0);
  std::mt19937_64 gen(8);
  std::uint64_t count = 0;
  const double width = (4294967282.0) / buckets;
  while (count < 1000000) {
    const auto ks = generate_schedule<pm32>(gen);
    for (const auto& level : ks.levels)
      for (auto a : level.a) {
        hist[std::min(buckets - 1, int((a - 1) / width))] += 1;
        ++count;
      }
  }
  const double expect = double(count) / buckets;
  double chi2 = 0;
  for (double h : hist) chi2 += (h - expect) * (h - expect) / expect;
  const double pvalue = boost::math::cdf(complement(boost::math::chi_squared(buckets - 1), chi2));
  EXPECT_GT(pvalue, 0.01) << "chi2=" << chi2;
}

TEST(KeyFile, RoundTripSizes) {
  const auto k64 = generate_schedule<pm64>(5);
  const auto f64 = save_schedule(k64);
  EXPECT_EQ(f64.size(), 8264u);
  EXPECT_EQ(load_schedule<pm64>(f64), k64);
  EXPECT_EQ(save_schedule(load_schedule<pm64>(f64)), f64);

  const auto k32 = generate_schedule<pm32>(5);
  const auto f32 = save_schedule(k32);
  EXPECT_EQ(f32.size(), 4136u);
  EXPECT_EQ(load_schedule<pm32>(f32), k32);
}

TEST(KeyFile, HeaderLayout) {
  const auto f = save_schedule(generate_schedule<pm64>(6));
  EXPECT_EQ(f[0], std::byte{'P'});
  EXPECT_EQ(f[3], std::byte{'H'});
  EXPECT_EQ(f[4], std::byte{1});
  EXPECT_EQ(f[5], std::byte{0x40});
  EXPECT_EQ(f[6], std::byte{8});
  EXPECT_EQ(f[7], std::byte{0});
  // b of level 1 comes first, little-endian.
  const auto ks = generate_schedule<pm64>(6);
  EXPECT_EQ(detail::get_le<std::uint64_t>(std::span(f).subspan(8)), ks.levels[0].b);
  EXPECT_EQ(detail::get_le<std::uint64_t>(std::span(f).subspan(16)), ks.levels[0].a[0]);
}

TEST(KeyFile, ZeroMultiplierRejected) {
  auto f = save_schedule(generate_schedule<pm64>(9));
  poke<std::uint64_t>(f, 1, 0);
  EXPECT_EQ(load_error<pm64>(f), errc::key_out_of_range);
}

TEST(KeyFile, MultiplierAboveRangeRejected) {
  auto f = save_schedule(generate_schedule<pm32>(9));
  poke<std::uint32_t>(f, 129 * 3 + 5, pm32::max_key + 1);
  EXPECT_EQ(load_error<pm32>(f), errc::key_out_of_range);
  poke<std::uint32_t>(f, 129 * 3 + 5, pm32::max_key);
  EXPECT_NO_THROW(load_schedule<pm32>(f));
}

TEST(KeyFile, OffsetMayBeAnyWord) {
  auto f = save_schedule(generate_schedule<pm64>(9));
  poke<std::uint64_t>(f, 0, ~0ull);
  EXPECT_EQ(load_schedule<pm64>(f).levels[0].b, ~0ull);
}

TEST(KeyFile, ErrorDoesNotEchoKeyMaterial) {
  auto f = save_schedule(generate_schedule<pm64>(9));
  poke<std::uint64_t>(f, 2, 0xfffffffffffffffeull);
  try {
    load_schedule<pm64>(f);
    FAIL();
  } catch (const error& e) {
    const std::string what = e.what();
    EXPECT_EQ(what.find("18446744073709551614"), std::string::npos);
    EXPECT_EQ(what.find("fffffffffffffffe"), std::string::npos);
  }
}

TEST(KeyFile, StructuralErrors) {
  const auto good = save_schedule(generate_schedule<pm64>(10));
  auto truncated = good;
  truncated.resize(100);
  EXPECT_EQ(load_error<pm64>(truncated), errc::bad_magic);
  EXPECT_EQ(load_error<pm64>(std::vector<std::byte>(3)), errc::bad_magic);

  auto magic = good;
  magic[0] = std::byte{'X'};
  EXPECT_EQ(load_error<pm64>(magic), errc::bad_magic);

  auto version = good;
  version[4] = std::byte{2};
  EXPECT_EQ(load_error<pm64>(version), errc::unsupported_version);

  auto levels = good;
  levels[6] = std::byte{4};
  EXPECT_EQ(load_error<pm64>(levels), errc::bad_magic);

  auto reserved = good;
  reserved[7] = std::byte{1};
  EXPECT_EQ(load_error<pm64>(reserved), errc::bad_magic);

  // A 64-bit file is not a 32-bit file.
  EXPECT_EQ(load_error<pm32>(good), errc::bad_magic);
}

TEST(KeyFile, LoadAnyDispatchesOnWordSize) {
  const auto a = load_any_schedule(save_schedule(generate_schedule<pm32>(11)));
  EXPECT_TRUE(std::holds_alternative<key_schedule<pm32>>(a));
  const auto b = load_any_schedule(save_schedule(generate_schedule<pm64>(11)));
  EXPECT_TRUE(std::holds_alternative<key_schedule<pm64>>(b));
  auto odd = save_schedule(generate_schedule<pm32>(11));
  odd[5] = std::byte{16};
  EXPECT_THROW(load_any_schedule(odd), error);
}
