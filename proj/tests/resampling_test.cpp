#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dnaevo/resampling.hpp"
#include "dnaevo/synthetic.hpp"

namespace dnaevo {
namespace {

std::string sorted(std::string s) {
  std::sort(s.begin(), s.end());
  return s;
}

TEST(BlockPermutation, FixedOrder) {
  EXPECT_EQ(permute_blocks(DnaSequence("AACCTT"), 2, {2, 0, 1}).str(), "TTAACC");
  EXPECT_EQ(permute_blocks(DnaSequence("AACCT"), 2, {2, 0, 1}).str(), "TAACC");
  EXPECT_THROW(permute_blocks(DnaSequence("AACCTT"), 2, {0, 1}), Error);
  EXPECT_THROW(permute_blocks(DnaSequence("AACCTT"), 0, {}), Error);
}

TEST(BlockPermutation, KeepsBlockMultiset) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = MarkovSource{}.sequence(1 + rng.index(60), rng);
    const std::size_t bs = 1 + rng.index(7);
    const auto out = resample_block_permutation(s, bs, rng);
    ASSERT_EQ(sorted(out.str()), sorted(s.str()));
    ASSERT_EQ(out.size(), s.size());
  }
}

TEST(BlockBootstrap, AlignedBlocksAndLength) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = MarkovSource{}.sequence(1 + rng.index(80), rng);
    const std::size_t bs = 1 + rng.index(9);
    const auto out = resample_block_bootstrap(s, bs, rng);
    ASSERT_EQ(out.size(), s.size());
    if (s.size() <= bs) {
      ASSERT_EQ(out, s);
      continue;
    }
    for (std::size_t pos = 0; pos < out.size(); pos += bs) {
      const auto piece = out.view().substr(pos, bs);
      bool found = false;
      for (std::size_t b = 0; b + bs <= s.size() && !found; b += bs) found = s.view().substr(b, piece.size()) == piece;
      ASSERT_TRUE(found) << "trial " << trial << " pos " << pos;
    }
  }
}

TEST(Average, LengthsAndSupport) {
  Group g;
  g.members = {DnaSequence("AAAA"), DnaSequence("CC"), DnaSequence("A")};
  Rng rng(3);
  const auto out = resample_average(g, rng);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].size(), 4u);
  EXPECT_EQ(out[1].size(), 2u);
  EXPECT_EQ(out[2].size(), 1u);
  for (const auto& m : out.members)
    for (char c : m) EXPECT_TRUE(c == 'A' || c == 'C');
}

TEST(Average, MatchesPooledFrequencies) {
  Group g;
  g.members = {DnaSequence(std::string(60, 'A') + std::string(30, 'C') + std::string(10, 'T'))};
  g.members.resize(50, g.members.front());
  Rng rng(4);
  const auto out = resample_average(g, rng);
  const double n = 5000.0;
  const std::pair<char, double> expect[] = {{'A', 0.6}, {'C', 0.3}, {'T', 0.1}};
  for (const auto& [base, p] : expect) {
    double count = 0;
    for (const auto& m : out.members) count += static_cast<double>(std::count(m.begin(), m.end(), base));
    EXPECT_LT(std::abs(count - n * p), 3 * std::sqrt(n * p * (1 - p))) << base;
  }
}

TEST(Resample, DeterministicPerSeed) {
  Rng src(5);
  const auto g = MarkovSource{}.group(8, 50, src);
  for (auto method : {ResampleMethod::average, ResampleMethod::block_permutation, ResampleMethod::block_bootstrap}) {
    const ResampleSpec spec{method, 5, 42};
    EXPECT_EQ(resample(g, spec).members, resample(g, spec).members);
    EXPECT_NE(resample(g, spec).members, resample(g, {method, 5, 43}).members);
  }
}

TEST(Resample, ParseMethod) {
  EXPECT_EQ(parse_resample_method("average"), ResampleMethod::average);
  EXPECT_EQ(parse_resample_method("block_bootstrap"), ResampleMethod::block_bootstrap);
  EXPECT_EQ(parse_resample_method("block_permutation"), ResampleMethod::block_permutation);
  EXPECT_THROW(parse_resample_method("jackknife"), Error);
}

}  // namespace
}  // namespace dnaevo
