#include <gtest/gtest.h>

#include <cmath>

#include "nmqa/tally.hpp"

namespace nmqa {
namespace {

SiteTally physical_only(double kappa) {
  SiteTally t;
  t.tau = 1;
  t.kappa = kappa;
  return t;
}

TEST(H1, Endpoints) {
  EXPECT_DOUBLE_EQ(update_map_h1(physical_only(1.0), 0.5), 0.0);
  EXPECT_DOUBLE_EQ(update_map_h1(physical_only(0.0), 0.5), kPi);
  EXPECT_DOUBLE_EQ(update_map_h1(physical_only(0.5), 0.5), kPi / 2);
}

TEST(H1, ZeroLambdaIgnoresMessages) {
  SiteTally t{3, 5, 0.8, 0.1};
  EXPECT_DOUBLE_EQ(born_estimate(t, 0.0), 0.8);
  for (const double gamma : {0.0, 0.3, 0.9, 1.0}) {
    t.gamma = gamma;
    EXPECT_EQ(update_map_h1(t, 0.0), std::acos(2 * 0.8 - 1));
  }
}

TEST(H1, FullLambdaMixesHalf) {
  const SiteTally t{1, 1, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(born_estimate(t, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(update_map_h1(t, 1.0), kPi / 2);
}

TEST(H1, MessagesOnly) {
  const SiteTally t{0, 4, 0.0, 0.25};
  EXPECT_DOUBLE_EQ(born_estimate(t, 0.7), 0.25);
}

TEST(H1, NoData) {
  EXPECT_THROW(update_map_h1(SiteTally{}, 0.5), NoData);
}

TEST(H1, InvertsBornRule) {
  double worst = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double f = kPi * k / 1000.0;
    worst = std::max(worst, std::abs(update_map_h1(physical_only(0.5 * std::cos(f) + 0.5), 0.0) - f));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Tally, FirstPhysicalShot) {
  SharedStateTally tally(3);
  tally.record({1, 1, Origin::physical});
  EXPECT_EQ(tally.at(1).tau, 1);
  EXPECT_DOUBLE_EQ(tally.at(1).kappa, 1.0);
  EXPECT_FALSE(tally.at(0).has_data());
}

TEST(Tally, RunningMean) {
  SharedStateTally tally(1);
  tally.record({0, 1, Origin::physical});
  tally.record({0, 0, Origin::physical});
  ASSERT_DOUBLE_EQ(tally.at(0).kappa, 0.5);
  tally.record({0, 1, Origin::physical});
  EXPECT_EQ(tally.at(0).tau, 3);
  EXPECT_DOUBLE_EQ(tally.at(0).kappa, 2.0 / 3.0);
}

TEST(Tally, MessagesLeavePhysicalCountersAlone) {
  SharedStateTally tally(2);
  tally.record({0, 0, Origin::physical});
  tally.record({0, 1, Origin::message});
  tally.record({0, 1, Origin::message});
  EXPECT_EQ(tally.at(0).tau, 1);
  EXPECT_DOUBLE_EQ(tally.at(0).kappa, 0.0);
  EXPECT_EQ(tally.at(0).phi, 2);
  EXPECT_DOUBLE_EQ(tally.at(0).gamma, 1.0);
}

TEST(Tally, RejectsBadSite) {
  SharedStateTally tally(2);
  EXPECT_THROW(tally.record({2, 0, Origin::physical}), InvalidArgument);
}

}  // namespace
}  // namespace nmqa
