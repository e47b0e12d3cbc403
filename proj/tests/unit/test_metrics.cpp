#include <gtest/gtest.h>

#include "tdms/metrics.hpp"

using namespace tdms;

TEST(Metrics, PrfHandArithmetic) {
    auto s = prf({2, 1, 0});
    EXPECT_NEAR(s.precision, 200.0 / 3.0, 1e-9);
    EXPECT_NEAR(s.recall, 100.0, 1e-9);
    EXPECT_NEAR(s.f1, 80.0, 1e-9);
}

TEST(Metrics, EmptyConventions) {
    auto both_empty = prf({0, 0, 0});
    EXPECT_EQ(both_empty.precision, 100.0);
    EXPECT_EQ(both_empty.recall, 100.0);
    EXPECT_EQ(both_empty.f1, 100.0);
    auto nothing_predicted = prf({0, 0, 3});
    EXPECT_EQ(nothing_predicted.precision, 0.0);
    EXPECT_EQ(nothing_predicted.recall, 0.0);
    EXPECT_EQ(nothing_predicted.f1, 0.0);
}

TEST(Metrics, Format1dpRoundsHalfUp) {
    EXPECT_EQ(format_1dp(58.35), "58.4");
    EXPECT_EQ(format_1dp(58.333), "58.3");
    EXPECT_EQ(format_1dp(100.0), "100.0");
    EXPECT_EQ(format_1dp(0.05), "0.1");
    EXPECT_EQ(format_1dp(0.0), "0.0");
}

TEST(Metrics, CountsAccumulate) {
    Counts c{1, 2, 3};
    c += Counts{1, 1, 1};
    EXPECT_EQ(c.tp, 2u);
    EXPECT_EQ(c.fp, 3u);
    EXPECT_EQ(c.fn, 4u);
}
