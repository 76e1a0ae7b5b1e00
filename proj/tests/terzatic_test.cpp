#include <gtest/gtest.h>

#include "terzatic/oracle.hpp"
#include "test_support.hpp"

namespace terzatic {
namespace {

using testing::q;
using testing::qs;
using testing::Q;

const FunctionModel<Q> kCube = FunctionModel<Q>::power(3);

Q spread(const SimpleInstance<Q>& inst) {
  const Q c = barycenter(inst);
  Q a = 0;
  for (std::size_t i = 0; i < inst.size(); ++i) a += inst.p[i] * (inst.x[i] - c) * (inst.x[i] - c);
  return a;
}

TEST(SuperterzaticCheck, CounterexampleToPowerCertificate) {
  const auto inst = testing::simple_q({"1/2", "1/2"}, {"1/2", "1"});
  const auto report = check_def2(kCube, inst);
  EXPECT_EQ(report.c_used, Q(27, 16));
  EXPECT_EQ(report.slack, Q(-3, 256));
  EXPECT_EQ(report.verdict, Verdict::violated);
  EXPECT_EQ(report.tolerance, 0);
}

TEST(SuperterzaticCheck, SharpCertificateGivesZeroSlack) {
  const auto inst = testing::simple_q({"1/2", "1/2"}, {"1/2", "1"});
  const auto report = check_def2(kCube, inst, std::nullopt, std::optional<Q>(Q(3, 2)));
  EXPECT_EQ(report.slack, 0);
  EXPECT_EQ(report.verdict, Verdict::holds);
}

TEST(SuperterzaticCheck, RhsFormsAgree) {
  const auto f = FunctionModel<Q>::power(4);
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto inst = testing::random_simple<Q>(s);
    EXPECT_EQ(def2_rhs(f, Q(7, 5), inst), def2_rhs_alt(f, Q(7, 5), inst));
  }
}

TEST(SuperterzaticCheck, CubeIdentityAndThreshold) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto inst = testing::random_simple<Q>(s, {2, 6});
    const Q xbar = barycenter(inst);
    const Q c = testing::frac(static_cast<long>(s % 7), 3);
    EXPECT_EQ(jensen(kCube, inst) - def2_rhs(kCube, c, inst), (2 * xbar - c) * spread(inst));
    const auto t = feasibility_threshold(kCube, inst);
    if (spread(inst) == 0) {
      EXPECT_TRUE(t.is_infinite());
    } else {
      EXPECT_EQ(*t.value, 2 * xbar);
      const auto verdict = check_def2(kCube, inst, std::nullopt, std::optional<Q>(c)).verdict;
      EXPECT_EQ(verdict == Verdict::holds, c <= 2 * xbar);
    }
  }
}

TEST(SuperterzaticCheck, DegenerateIsReportedSeparately) {
  const auto report = check_def2(kCube, testing::simple_q({"1/3", "2/3"}, {"1/2", "1/2"}));
  EXPECT_EQ(report.verdict, Verdict::degenerate);
  EXPECT_EQ(report.slack, 0);
}

TEST(SuperterzaticCheck, SubDirectionFlipsSlack) {
  const auto inst = testing::simple_q({"1/2", "1/2"}, {"1/2", "1"});
  const auto super = check_def2(kCube, inst, Direction::super);
  const auto sub = check_def2(kCube, inst, Direction::sub);
  EXPECT_EQ(sub.slack, -super.slack);
  EXPECT_EQ(sub.verdict, Verdict::holds);
  EXPECT_EQ(check_def2(FunctionModel<double>::cube_log(), testing::simple_d({0.5, 0.5}, {0.2, 0.6}), std::nullopt,
                       std::optional<double>(0.0))
                .direction,
            Direction::sub);
}

TEST(SuperterzaticCheck, FloatToleranceIsRelative) {
  const auto f = FunctionModel<double>::power(3);
  const auto inst = testing::simple_d({0.5, 0.5}, {0.5, 1.0});
  const auto report = check_def2(f, inst, std::nullopt, std::optional<double>(1.5));
  EXPECT_NEAR(report.slack, 0.0, 1e-15);
  EXPECT_EQ(report.verdict, Verdict::holds);
  EXPECT_DOUBLE_EQ(report.tolerance, 1e-9);
  CheckOptions loose;
  loose.relative_tolerance = 1e-1;
  EXPECT_EQ(check_def2(f, inst, std::nullopt, std::optional<double>(27.0 / 16.0), loose).verdict, Verdict::holds);
}

TEST(SuperterzaticCheck, MissingCertificateIsValidationError) {
  const auto inst = testing::simple_d({0.5, 0.5}, {0.2, 0.6});
  EXPECT_THROW(check_def2(FunctionModel<double>::cube_log(), inst), ValidationError);
}

TEST(TensorBound, WorkedInstance) {
  const auto s = testing::simple_q({"1/2", "1/2"}, {"0", "1"});
  const auto g = replicate_instance(s.p, s.x, Weights<Q>::from_normalized(qs({"1/2", "1/2"})));
  EXPECT_EQ(lemma5_rhs(kCube, Q(1), g), Q(3, 16));
  EXPECT_EQ(check_lemma5(kCube, g, std::nullopt, std::optional<Q>(Q(1, 2))).slack, Q(1, 16));
}

TEST(TensorBound, SingleBlockEqualsSimpleBound) {
  const auto f = FunctionModel<Q>::power(4);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = testing::random_simple<Q>(s);
    EXPECT_EQ(lemma5_rhs(f, Q(2, 3), GeneralInstance<Q>::single(inst)), def2_rhs(f, Q(2, 3), inst));
  }
}

TEST(TensorBound, MatchesSerialOracle) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto g = testing::random_general<Q>(s, false);
    EXPECT_EQ(lemma5_rhs(kCube, Q(5, 4), g), oracle::brute_lemma5_rhs(kCube, Q(5, 4), g));
  }
}

TEST(Closure, SlackIsLinearInFunctionAndCertificate) {
  const auto f3 = FunctionModel<Q>::power(3);
  const auto f4 = FunctionModel<Q>::power(4);
  const auto combo = FunctionModel<Q>::linear_combination({{Q(2), f3}, {Q(1), f4}});
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto inst = testing::random_simple<Q>(s);
    const Q c3 = Q(1, 2), c4 = Q(1, 3);
    const Q combined = check_def2(combo, inst, std::nullopt, std::optional<Q>(2 * c3 + c4)).slack;
    const Q parts = 2 * check_def2(f3, inst, std::nullopt, std::optional<Q>(c3)).slack +
                    check_def2(f4, inst, std::nullopt, std::optional<Q>(c4)).slack;
    EXPECT_EQ(combined, parts);
  }
}

TEST(Threshold, WorkedValue) {
  EXPECT_EQ(*feasibility_threshold(kCube, testing::simple_q({"1/2", "1/2"}, {"1/2", "1"})).value, Q(3, 2));
}

TEST(Sampler, HitsBarycenterWithPositiveWeights) {
  for (const auto* xbar : {"1/4", "1/2", "3/4"}) {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto inst = sample_instance_with_barycenter(q(xbar), 2 + s % 6, s, Q(1));
      EXPECT_EQ(barycenter(inst), q(xbar));
      EXPECT_LT(inst.x[0], q(xbar));
      EXPECT_GT(inst.x[1], q(xbar));
      for (std::size_t i = 0; i < inst.size(); ++i) EXPECT_GT(inst.p[i], 0);
    }
  }
}

TEST(Sampler, FloatModeStaysInDomain) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto inst = sample_instance_with_barycenter(0.9, 5, s, 1.0);
    EXPECT_NEAR(barycenter(inst), 0.9, 1e-12);
    for (std::size_t i = 0; i < inst.size(); ++i) EXPECT_LE(inst.x[i], 1.0);
  }
}

TEST(Sampler, RejectsBoundaryBarycenter) {
  EXPECT_THROW(sample_instance_with_barycenter(Q(0), 3, 1, Q(1)), ValidationError);
  EXPECT_THROW(sample_instance_with_barycenter(Q(1), 3, 1, Q(1)), ValidationError);
}

TEST(EstimateCertificate, CubeEstimateIsTwiceBarycenter) {
  EXPECT_EQ(estimate_certificate(kCube, Q(1, 2), {2, 5}, 50, 3).c_sup_estimate, 1);
  const auto est = estimate_certificate(kCube, Q(3, 4), {2, 5}, 50, 3);
  EXPECT_EQ(est.c_sup_estimate, Q(3, 2));
  EXPECT_LT(est.c_sup_estimate, Q(27, 16));
  EXPECT_EQ(barycenter(est.witness), Q(3, 4));
}

TEST(EstimateCertificate, MonotoneInTrialsAndDeterministic) {
  const auto f = FunctionModel<double>::power(4);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t trials : {1, 10, 100, 400}) {
    const auto est = estimate_certificate(f, 0.4, {2, 6}, trials, 99);
    EXPECT_LE(est.c_sup_estimate, previous);
    previous = est.c_sup_estimate;
    EXPECT_LE(est.thresholds.min, est.thresholds.median);
    EXPECT_LE(est.thresholds.median, est.thresholds.max);
  }
  EXPECT_EQ(estimate_certificate(f, 0.4, {2, 6}, 100, 5).c_sup_estimate,
            estimate_certificate(f, 0.4, {2, 6}, 100, 5).c_sup_estimate);
}

TEST(EstimateCertificate, SingleTrialIsThatInstancesThreshold) {
  const auto est = estimate_certificate(kCube, Q(1, 3), {2, 2}, 1, 17);
  EXPECT_EQ(est.c_sup_estimate, *feasibility_threshold(kCube, est.witness).value);
}

TEST(EstimateCertificate, Preconditions) {
  EXPECT_THROW(estimate_certificate(kCube, Q(1, 2), {2, 5}, 0, 1), ValidationError);
  EXPECT_THROW(estimate_certificate(kCube, Q(1), {2, 5}, 10, 1), ValidationError);
  EXPECT_THROW(estimate_certificate(kCube, Q(1, 2), {1, 5}, 10, 1), ValidationError);
}

}  // namespace
}  // namespace terzatic
