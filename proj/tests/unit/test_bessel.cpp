#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vk/bessel.hpp"

using vk::coeffs::bessel_i;
using vk::coeffs::bessel_i_scaled;

TEST(Bessel, MatchesTrapezoidIntegralAcrossRange) {
    for (int order : {0, 1}) {
        for (double x : {0.0, 1e-3, 0.5, 1.0, 4.0, 8.0, 14.9, 15.1, 30.0, 80.0}) {
            const double ref = oracle::bessel_i(order, x, 200000);
            EXPECT_NEAR(bessel_i(order, x), ref, 1e-12 * std::max(1.0, std::fabs(ref)))
                << "order " << order << " x " << x;
        }
    }
}

TEST(Bessel, ScaledFormAgreesWithUnscaled) {
    for (double x : {0.3, 5.0, 15.0, 40.0, 300.0}) {
        EXPECT_NEAR(bessel_i_scaled(0, x), std::exp(-x) * bessel_i(0, x), 1e-13 * bessel_i_scaled(0, x));
        EXPECT_NEAR(bessel_i_scaled(1, x), std::exp(-x) * bessel_i(1, x), 1e-13 * bessel_i_scaled(1, x));
    }
}

TEST(Bessel, ScaledFormStaysFiniteForHugeArguments) {
    const double x = 1e5;
    EXPECT_TRUE(std::isfinite(bessel_i_scaled(0, x)));
    // e^{-x} I0(x) ~ 1/sqrt(2 pi x)
    EXPECT_NEAR(bessel_i_scaled(0, x) * std::sqrt(2.0 * M_PI * x), 1.0, 1e-5);
}

TEST(Bessel, KnownValues) {
    EXPECT_DOUBLE_EQ(bessel_i(0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(bessel_i(1, 0.0), 0.0);
    EXPECT_NEAR(bessel_i(0, 1.0), 1.2660658777520082, 1e-15);
    EXPECT_NEAR(bessel_i(1, 1.0), 0.5651591039924851, 1e-15);
}

TEST(Bessel, RejectsBadArguments) {
    EXPECT_THROW(bessel_i(2, 1.0), std::domain_error);
    EXPECT_THROW(bessel_i(0, -1.0), std::domain_error);
    EXPECT_THROW(bessel_i_scaled(1, -0.5), std::domain_error);
}
