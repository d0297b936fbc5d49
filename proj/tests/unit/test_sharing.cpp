#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "nmqa/sharing.hpp"

namespace nmqa {
namespace {

constexpr double kInvE = 0.36787944117144233;

TEST(Smearing, Values) {
  EXPECT_DOUBLE_EQ(smeared_phase(1.3, 2.0, 0.0), 1.3);
  EXPECT_NEAR(smeared_phase(1.3, 2.0, 2.0), 1.3 * kInvE, 1e-15);
  EXPECT_LT(smeared_phase(1.3, 1.0, 10.0), 1e-40 * 1.3);
  EXPECT_THROW(smeared_phase(1.0, 0.0, 1.0), InvalidArgument);
}

TEST(Smearing, BoundedByPhase) {
  Rng rng = make_stream(21, 0);
  for (int i = 0; i < 10000; ++i) {
    const double f = uniform(rng, 0.0, kPi);
    const double s = smeared_phase(f, uniform(rng, 0.1, 5.0), uniform(rng, 0.0, 6.0));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, f);
  }
}

TEST(SharedEstimate, Weights) {
  // unmeasured neighbour: lambda2^0 = 1 even when lambda2 = 0
  EXPECT_DOUBLE_EQ(shared_estimate(2.0, 1.0, 1.0, 1.0, 0, 0.0), 1.0 * kInvE);
  // measured neighbour with lambda2 = 0 keeps its own value
  EXPECT_DOUBLE_EQ(shared_estimate(2.0, 1.0, 1.0, 1.0, 3, 0.0), 2.0);
  // lambda2 = 0.5, tau = 1: halfway
  EXPECT_DOUBLE_EQ(shared_estimate(2.0, 1.0, 1.0, 0.0, 1, 0.5), 1.5);
}

TEST(Neighbourhood, AxisNeighbours) {
  const QubitArray a = build_grid(5, 5, 1.0);
  const Neighborhood n = neighborhood(a, 12, 1.2, 1.0);
  EXPECT_EQ(n.center, 12);
  EXPECT_EQ(n.members, (std::vector<Index>{7, 11, 13, 17}));
}

TEST(Neighbourhood, EmptyAndFull) {
  const QubitArray a = build_grid(5, 5, 1.0);
  EXPECT_TRUE(neighborhood(a, 12, 0.5, 1.0).members.empty());
  const Neighborhood all = neighborhood(a, 0, a.diameter(), 1.0);
  EXPECT_EQ(all.members.size(), 24U);
  EXPECT_EQ(std::count(all.members.begin(), all.members.end(), 0), 0);
}

TEST(Neighbourhood, ScalesWithK0) {
  const QubitArray a = build_grid(5, 5, 1.0);
  EXPECT_EQ(neighborhood(a, 12, 0.75, 2.0).members.size(), 8U);  // radius 1.5
}

TEST(Neighbourhood, RejectsBadArguments) {
  const QubitArray a = build_grid(2, 2, 1.0);
  EXPECT_THROW(neighborhood(a, 0, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(neighborhood(a, 0, 1.0, 0.5), InvalidArgument);
  EXPECT_THROW(neighborhood(a, 4, 1.0, 1.0), InvalidArgument);
}

TEST(Neighbourhood, MonotoneInRadius) {
  Rng rng = make_stream(22, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const QubitArray a(1 + uniform_index(rng, 6), 1 + uniform_index(rng, 6), uniform(rng, 0.5, 2.0));
    const Index j = uniform_index(rng, a.size());
    const double r = uniform(rng, 0.1, 5.0);
    const double r2 = r + uniform(rng, 0.0, 3.0);
    const auto small = neighborhood(a, j, r, 1.0).members;
    const auto large = neighborhood(a, j, r2, 1.0).members;
    EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    EXPECT_EQ(std::count(large.begin(), large.end(), j), 0);
  }
}

TEST(Messages, ZeroPhaseAlwaysOne) {
  const QubitArray a = build_grid(1, 3, 1.0);
  SharedStateTally tally(3);
  tally.record({0, 1, Origin::physical});
  tally.record({2, 1, Origin::physical});
  // lambda2 = 0 and tau_q >= 1: X_q = F_q = 0
  const ExtendedState<double> post{VectorXd::Zero(3), VectorXd::Constant(3, 1.0)};
  Rng rng = make_stream(23, 0);
  for (int i = 0; i < 200; ++i) {
    const auto msgs = generate_messages(post, 1, a, tally, 0.0, 1.0, rng);
    ASSERT_EQ(msgs.size(), 2U);
    for (const auto& m : msgs) {
      EXPECT_EQ(m.bit, 1);
      EXPECT_EQ(m.origin, Origin::message);
    }
  }
}

TEST(Messages, HalfPiIsFair) {
  const QubitArray a = build_grid(1, 2, 1.0);
  SharedStateTally tally(2);
  tally.record({1, 0, Origin::physical});
  const ExtendedState<double> post{VectorXd::Constant(2, kPi / 2), VectorXd::Constant(2, 1.0)};
  Rng rng = make_stream(24, 0);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    ones += generate_messages(post, 0, a, tally, 0.0, 1.0, rng).front().bit;
  }
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.006);
}

TEST(Messages, EmptyNeighbourhood) {
  const QubitArray a = build_grid(3, 3, 1.0);
  SharedStateTally tally(9);
  const ExtendedState<double> post{VectorXd::Constant(9, 1.0), VectorXd::Constant(9, 0.5)};
  Rng rng = make_stream(25, 0);
  EXPECT_TRUE(generate_messages(post, 4, a, tally, 0.9, 1.0, rng).empty());
}

TEST(Messages, OnePerNeighbour) {
  const QubitArray a = build_grid(5, 5, 1.0);
  SharedStateTally tally(25);
  const ExtendedState<double> post{VectorXd::Constant(25, 1.0), VectorXd::Constant(25, 1.5)};
  Rng rng = make_stream(26, 0);
  const auto msgs = generate_messages(post, 12, a, tally, 0.9, 1.0, rng);
  EXPECT_EQ(msgs.size(), neighborhood(a, 12, 1.5, 1.0).members.size());
}

}  // namespace
}  // namespace nmqa
