#include <gtest/gtest.h>

#include <set>

#include "terzatic/random.hpp"
#include "test_support.hpp"

namespace terzatic {
namespace {

using testing::q;
using testing::qs;
using testing::Q;

TEST(ParseRational, AcceptsFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/8"), Q(3, 8));
  EXPECT_EQ(parse_rational("6/16"), Q(3, 8));
  EXPECT_EQ(parse_rational("-2"), Q(-2));
  EXPECT_EQ(parse_rational("0.375"), Q(3, 8));
  EXPECT_EQ(parse_rational("-1.5e-3"), Q(-3, 2000));
  EXPECT_EQ(parse_rational("2.5E2"), Q(250));
}

TEST(ParseRational, RejectsGarbage) {
  for (const char* bad : {"", "1/0", "abc", "1/2/3", "0x10", "1.2.3", "nan", "inf"}) {
    EXPECT_THROW(parse_rational(bad), ValidationError) << bad;
  }
}

TEST(FormatRational, CanonicalText) {
  EXPECT_EQ(format_rational(testing::frac(6, 16)), "3/8");
  EXPECT_EQ(format_rational(testing::frac(4, 2)), "2");
  EXPECT_EQ(format_rational(Q(-1, 3)), "-1/3");
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Accumulator, CompensatesCancellation) {
  Accumulator<double> acc;
  acc.add(1e16);
  acc.add(1.0);
  acc.add(-1e16);
  EXPECT_EQ(acc.value(), 1.0);
}

TEST(Weights, NormalizeDividesBySum) {
  const auto w = Weights<Q>::normalize(qs({"1", "3"}));
  EXPECT_EQ(w[0], Q(1, 4));
  EXPECT_EQ(w[1], Q(3, 4));
}

TEST(Weights, RejectsNonPositiveEntries) {
  EXPECT_THROW(Weights<Q>::normalize(qs({"1", "0"})), ValidationError);
  EXPECT_THROW(Weights<double>::normalize({1.0, -1.0}), ValidationError);
  EXPECT_THROW(Weights<double>::normalize({}), ValidationError);
}

TEST(Weights, FromNormalizedChecksSum) {
  EXPECT_NO_THROW(Weights<Q>::from_normalized(qs({"1/3", "2/3"})));
  EXPECT_THROW(Weights<Q>::from_normalized(qs({"1/3", "1/3"})), ValidationError);
  EXPECT_NO_THROW(Weights<double>::from_normalized({0.1, 0.2, 0.7}));
  EXPECT_THROW(Weights<double>::from_normalized({0.5, 0.5 + 1e-9}), ValidationError);
}

TEST(Weights, ErrorCarriesFieldPath) {
  try {
    Weights<Q>::from_normalized(qs({"1/2", "1/4"}), "instance.blocks[0].p");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.path(), "instance.blocks[0].p");
    EXPECT_NE(std::string(e.what()).find("instance.blocks[0].p"), std::string::npos);
  }
}

TEST(PointVector, EnforcesDomain) {
  EXPECT_NO_THROW(PointVector<Q>(qs({"0", "1"}), Q(1)));
  EXPECT_THROW(PointVector<Q>(qs({"0", "3/2"}), Q(1)), ValidationError);
  EXPECT_THROW(PointVector<Q>(qs({"-1/2"}), Q(1)), ValidationError);
  EXPECT_THROW(PointVector<Q>(qs({"0"}), Q(0)), ValidationError);
  EXPECT_THROW(PointVector<Q>({}, Q(1)), ValidationError);
}

TEST(SimpleInstance, LengthsMustMatch) {
  EXPECT_THROW(SimpleInstance<Q>(Weights<Q>::normalize(qs({"1", "1"})), PointVector<Q>(qs({"0"}), Q(1))),
               ValidationError);
}

TEST(SimpleInstance, Barycenter) {
  EXPECT_EQ(barycenter(testing::simple_q({"1/4", "3/4"}, {"0", "1"})), Q(3, 4));
}

TEST(GeneralInstance, ValidatesShapes) {
  const auto b = Block<Q>(Weights<Q>::normalize(qs({"1", "1"})), PointVector<Q>(qs({"0", "1"}), Q(1)));
  EXPECT_THROW(GeneralInstance<Q>(Weights<Q>::normalize(qs({"1", "1"})), {b}), ValidationError);
  try {
    GeneralInstance<Q>(Weights<Q>::normalize(qs({"1"})), {b}, std::vector<Weights<Q>>{Weights<Q>::normalize(qs({"1"}))});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.path(), "instance.r_blocks[0]");
  }
  const auto other_domain = Block<Q>(Weights<Q>::normalize(qs({"1"})), PointVector<Q>(qs({"0"}), Q(2)));
  EXPECT_THROW(GeneralInstance<Q>(Weights<Q>::normalize(qs({"1", "1"})), {b, other_domain}), ValidationError);
}

TEST(GeneralInstance, RWeightsRequireRBlocks) {
  const auto g = GeneralInstance<Q>::single(testing::simple_q({"1/2", "1/2"}, {"0", "1"}));
  EXPECT_FALSE(g.has_r());
  EXPECT_THROW(g.weights(0, WeightFamily::r), ValidationError);
}

TEST(GeneralInstance, Degenerate) {
  EXPECT_TRUE(GeneralInstance<Q>::single(testing::simple_q({"1/2", "1/2"}, {"1/3", "1/3"})).is_degenerate());
  EXPECT_FALSE(GeneralInstance<Q>::single(testing::simple_q({"1/2", "1/2"}, {"1/3", "1/2"})).is_degenerate());
}

TEST(GeneralBarycenter, MatchesDoubleSum) {
  const auto s = testing::simple_q({"1/2", "1/2"}, {"0", "1"});
  const auto g = replicate_instance(s.p, s.x, Weights<Q>::from_normalized(qs({"1/3", "2/3"})));
  EXPECT_EQ(general_barycenter(g, WeightFamily::p), Q(1, 2));
}

TEST(TerzaQuotient, ZeroAtZeroAndDomainChecked) {
  const auto f = FunctionModel<Q>::power(3);
  EXPECT_EQ(terza_quotient(f, Q(0), Q(1)), Q(0));
  EXPECT_EQ(terza_quotient(f, Q(-1, 2), Q(1)), Q(1, 4));
  EXPECT_THROW(terza_quotient(f, Q(3, 2), Q(1)), DomainError);
}

TEST(MultiIndex, CountAndOrder) {
  const std::vector<std::size_t> extents{2, 3};
  EXPECT_EQ(count_multi_indices(extents), 6u);
  std::vector<MultiIndex> seen(multi_indices(extents).begin(), multi_indices(extents).end());
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen.front().j, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(seen[1].j, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(seen.back().j, (std::vector<std::size_t>{2, 3}));
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  EXPECT_EQ(std::set<MultiIndex>(seen.begin(), seen.end()).size(), 6u);
}

TEST(MultiIndex, CapExceeded) {
  const std::vector<std::size_t> huge{10'000, 10'000};
  EXPECT_THROW(count_multi_indices(huge), CapExceeded);
  EXPECT_THROW(multi_indices(huge), CapExceeded);
  const std::vector<std::size_t> overflow(8, std::size_t{1} << 20);
  EXPECT_THROW(count_multi_indices(overflow, std::numeric_limits<std::size_t>::max()), CapExceeded);
  try {
    count_multi_indices(huge);
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.requested(), 100'000'000u);
    EXPECT_EQ(e.cap(), kDefaultEnumerationCap);
  }
}

TEST(DeriveSeed, DeterministicAndSpread) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t i = 0; i < 256; ++i) seeds.insert(derive_seed(s, i));
  }
  EXPECT_EQ(seeds.size(), 1024u);
}

}  // namespace
}  // namespace terzatic
