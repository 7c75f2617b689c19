#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "canput/errors.hpp"
#include "canput/levy_model.hpp"
#include "oracles.hpp"

using namespace canput;

namespace {

ModelParams brownian() { return make_model(0.05, 0.2, 0.0, 0.0); }
ModelParams jumpy() { return make_model(0.05, 0.2, 5.0, 2.0); }

}  // namespace

TEST(LevyModel, BrownianDriftAndExponent) {
    const ModelParams m = brownian();
    EXPECT_NEAR(m.mu(), -0.05, 1e-15);
    EXPECT_NEAR(m.alpha(), -0.5, 1e-15);
    EXPECT_FALSE(m.has_jumps());
    EXPECT_NEAR(m.sigma(), std::sqrt(0.2), 1e-15);
}

TEST(LevyModel, JumpDriftAndExponent) {
    const ModelParams m = jumpy();
    EXPECT_NEAR(m.mu(), 0.05 - 0.1 + 5.0 / 3.0, 1e-14);
    EXPECT_NEAR(m.alpha(), -0.925343, 1e-6);

    // Independent check: -alpha is the root of Psi in (0, 1), located by bisection.
    const double root = oracle::bisect([&](double t) { return laplace_exponent(m, t); }, 1e-6, 1.0);
    EXPECT_NEAR(-m.alpha(), root, 1e-12);
}

TEST(LevyModel, MartingaleConstraintHoldsForRandomParameters) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ur(0.01, 0.2), us(0.05, 0.8), ul(0.0, 10.0), uh(0.5, 6.0);
    int built = 0;
    for (int i = 0; i < 200; ++i) {
        try {
            const ModelParams m = make_model(ur(rng), us(rng), ul(rng), uh(rng));
            ++built;
            EXPECT_NEAR(laplace_exponent(m, 1.0), m.r(), 1e-13);
            EXPECT_NEAR(laplace_exponent(m, -m.alpha()), 0.0, 1e-13);
            EXPECT_GT(m.alpha(), -1.0);
            EXPECT_LT(m.alpha(), 0.0);
        } catch (const DegenerateCancellation&) {
        }
    }
    EXPECT_GT(built, 100);
}

TEST(LevyModel, ExponentIsConvexRightOfPole) {
    const ModelParams m = jumpy();
    const double h = 1e-3;
    for (double t = -m.rho() + 0.05; t < 5.0; t += 0.05) {
        const double d2 = laplace_exponent(m, t + h) - 2.0 * laplace_exponent(m, t) + laplace_exponent(m, t - h);
        EXPECT_GT(d2, 0.0) << "theta=" << t;
    }
}

TEST(LevyModel, ExponentAtZeroVanishes) {
    EXPECT_EQ(laplace_exponent(jumpy(), 0.0), 0.0);
    EXPECT_EQ(laplace_exponent(brownian(), 0.0), 0.0);
}

TEST(LevyModel, DerivativeMatchesFiniteDifference) {
    const ModelParams m = jumpy();
    for (double t : {-1.5, -0.5, 0.0, 1.0, 3.0}) {
        const double h = 1e-6;
        const double fd = (laplace_exponent(m, t + h) - laplace_exponent(m, t - h)) / (2.0 * h);
        EXPECT_NEAR(laplace_exponent_derivative(m, t), fd, 1e-7);
    }
}

TEST(LevyModel, EvaluationIsDeterministic) {
    const ModelParams a = jumpy();
    const ModelParams b = jumpy();
    EXPECT_EQ(a.alpha(), b.alpha());
    EXPECT_EQ(laplace_exponent(a, 0.3), laplace_exponent(b, 0.3));
}

TEST(LevyModel, PoleIsRejected) {
    const ModelParams m = jumpy();
    EXPECT_THROW(laplace_exponent(m, -2.0), PoleError);
    EXPECT_THROW(laplace_exponent(m, -3.0), PoleError);
    EXPECT_THROW(laplace_exponent_derivative(m, -2.0), PoleError);
    EXPECT_NO_THROW(laplace_exponent(brownian(), -5.0));
}

TEST(LevyModel, InvalidInputsAreRejected) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(make_model(0.0, 0.2, 0.0, 0.0), InvalidParams);
    EXPECT_THROW(make_model(-0.01, 0.2, 0.0, 0.0), InvalidParams);
    EXPECT_THROW(make_model(0.05, 0.0, 0.0, 0.0), InvalidParams);
    EXPECT_THROW(make_model(0.05, nan, 0.0, 0.0), InvalidParams);
    EXPECT_THROW(make_model(0.05, 0.2, -1.0, 2.0), InvalidParams);
    EXPECT_THROW(make_model(0.05, 0.2, 5.0, 0.0), InvalidParams);
    EXPECT_THROW(make_model(0.05, 0.2, 5.0, -2.0), InvalidParams);
}

TEST(LevyModel, NonNegativeAlphaIsDegenerate) {
    // Without jumps alpha = 2 mu / sigma^2 = 2 r / sigma^2 - 1 >= 0 once r >= sigma^2 / 2.
    EXPECT_THROW(make_model(0.1, 0.2, 0.0, 0.0), DegenerateCancellation);
    EXPECT_THROW(make_model(0.2, 0.2, 0.0, 0.0), DegenerateCancellation);
    // Tiny jumps do not rescue a positive drift.
    EXPECT_THROW(make_model(0.2, 0.2, 0.01, 2.0), DegenerateCancellation);
}

TEST(LevyModel, ErrorKindsAreReported) {
    try {
        make_model(0.2, 0.2, 0.0, 0.0);
        FAIL() << "expected DegenerateCancellation";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "DegenerateCancellation");
    }
}
