#include <gtest/gtest.h>

#include "property/property_cases.hpp"

TEST(Properties, five_hundred_random_cases) {
  const auto s = property::run_suite(500, 4242);
  EXPECT_EQ(s.cases, 500);
  EXPECT_LT(s.worst.unitarity_error, 1e-12);
  EXPECT_LT(s.worst.norm_error, 1e-10);
  EXPECT_EQ(s.photon_number_failures, 0);
  EXPECT_LT(s.worst.enumeration_error, 1e-10);
  EXPECT_LT(s.worst.conditional_norm_error, 1e-10);
  EXPECT_LT(s.worst.round_trip_error, 1e-10);
  EXPECT_LT(s.worst.hermiticity_error, 1e-14);
  EXPECT_LT(s.worst.linearity_error, 1e-10);
}

TEST(Properties, cases_are_reproducible) {
  const auto basis = dfs::logical_basis({"q1", "q2", "q3", "q4"});
  const auto a = property::run_case(99, basis), b = property::run_case(99, basis);
  EXPECT_EQ(a.norm_error, b.norm_error);
  EXPECT_EQ(a.round_trip_error, b.round_trip_error);
}
