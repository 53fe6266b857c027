#include "fibcalc/core.hpp"

#include <gtest/gtest.h>

using namespace fibcalc;

namespace {

ErrorCode code_of(int g, int h, int n) {
    try {
        compute_params(g, h, n);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error for " << g << "," << h << "," << n;
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Params, HurwitzDegree) {
    EXPECT_EQ(compute_params(6, 1, 2).r, 10);
    EXPECT_EQ(compute_params(4, 1, 3).r, 3);
    EXPECT_EQ(compute_params(3, 0, 2).r, 8);
    EXPECT_EQ(compute_params(4, 0, 3).r, 6);
    EXPECT_EQ(code_of(5, 1, 3), ErrorCode::RNotMultipleOfN);
    EXPECT_EQ(code_of(3, 1, 4), ErrorCode::NonIntegralR);
    EXPECT_EQ(code_of(1, 1, 2), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of(3, 2, 2), ErrorCode::InvalidArgument);
}

TEST(Params, ValidTriplesHaveRMultipleOfN) {
    for (int n = 2; n <= 10; ++n)
        for (int h = 0; h <= 1; ++h)
            for (int g = 2; g <= 100; ++g) {
                try {
                    FibrationParams p = compute_params(g, h, n);
                    EXPECT_EQ(p.r % n, 0);
                    EXPECT_GE(p.r, n);
                    EXPECT_EQ((n - 1) * p.r, 2 * (g - 1 - n * (h - 1)));
                } catch (const Error& e) {
                    EXPECT_NE(e.code(), ErrorCode::InvalidArgument);
                }
            }
}

TEST(Multiplicity, Classes) {
    MultInfo a = classify_multiplicity(6, 3);
    EXPECT_EQ(a.cls, MultClass::NZ);
    EXPECT_EQ(a.k, 2);
    MultInfo b = classify_multiplicity(7, 3);
    EXPECT_EQ(b.cls, MultClass::NZ_PLUS_1);
    EXPECT_EQ(b.k, 2);
    EXPECT_THROW(classify_multiplicity(5, 3), Error);
    EXPECT_THROW(classify_multiplicity(1, 3), Error);
    // n = 2: every m >= 2 is classifiable
    for (int m = 2; m < 30; ++m) EXPECT_TRUE(classifiable(m, 2));
    EXPECT_FALSE(classifiable(5, 3));
}

TEST(Slopes, Lambda) {
    EXPECT_EQ(lambda_slope(compute_params(3, 1, 2)), 4);
    EXPECT_EQ(lambda_slope(compute_params(4, 1, 3)), rat(24, 5));
    EXPECT_EQ(lambda_slope(compute_params(11, 1, 5)), rat(16, 3));
    EXPECT_THROW(lambda_slope(compute_params(3, 0, 2)), Error);
}

TEST(Slopes, UpperBounds) {
    EXPECT_EQ(upper_bound_slope(compute_params(6, 1, 2)), rat(23, 2));
    EXPECT_EQ(upper_bound_slope(compute_params(4, 0, 3), true), rat(129, 17));
    EXPECT_EQ(upper_bound_slope(compute_params(2, 0, 2)), 7);
    try {
        upper_bound_slope(compute_params(3, 0, 4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OutOfScope);
    }
}

TEST(Slopes, MuValues) {
    EXPECT_EQ(mu_threshold(compute_params(3, 1, 2)), 2);
    EXPECT_EQ(mu_threshold(compute_params(10, 1, 3)), rat(24, 23));
    EXPECT_EQ(mu_threshold(compute_params(13, 1, 4)), rat(8, 5));
    EXPECT_EQ(mu_threshold(compute_params(4, 0, 3), true), rat(75, 17));
}

TEST(Slopes, BoundIsTwelveMinusMu) {
    for (int n = 2; n <= 10; ++n)
        for (int h = 0; h <= 1; ++h)
            for (int g = 2; g <= 100; ++g) {
                FibrationParams p;
                try {
                    p = compute_params(g, h, n);
                    require_bound_scope(p);
                } catch (const Error&) {
                    continue;
                }
                Rational b = upper_bound_slope(p);
                EXPECT_EQ(b, 12 - mu_threshold(p)) << g << "," << h << "," << n;
                EXPECT_GT(b, 0);
                EXPECT_LT(b, 12);
            }
    FibrationParams t = compute_params(4, 0, 3);
    EXPECT_EQ(upper_bound_slope(t, true), 12 - mu_threshold(t, true));
}

TEST(Slopes, IndThresholdEquivalence) {
    for (int n = 2; n <= 10; ++n)
        for (int g = 2; g <= 100; ++g) {
            Rational r = rat(2L * (g - 1), n - 1);
            bool by_r = r >= rat(12L * n, n + 1);
            bool by_g = Rational(g) >= rat(static_cast<long>(2 * n - 1) * (3 * n - 1), n + 1);
            EXPECT_EQ(by_r, by_g) << n << " " << g;
        }
}
