#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "canput/errors.hpp"
#include "canput/levy_model.hpp"
#include "canput/scale_functions.hpp"
#include "oracles.hpp"

using namespace canput;

namespace {

ModelParams jumpy() { return make_model(0.05, 0.2, 5.0, 2.0); }
ModelParams brownian() { return make_model(0.05, 0.2, 0.0, 0.0); }

}  // namespace

TEST(ScaleBasis, ExponentsMatchBisectedRoots) {
    const ModelParams m = jumpy();
    const ScaleBasis b = build_scale_basis(m);
    const auto cubic = [&](double t) { return scale_root_polynomial(m, t); };
    const double near = oracle::bisect(cubic, -m.rho() + 1e-12, -1e-12);
    const double far = oracle::bisect(cubic, -1e4, -m.rho() - 1e-12);

    EXPECT_EQ(b.terms, 3);
    EXPECT_EQ(b.eta[0], 1.0);
    EXPECT_NEAR(b.eta[1], near, 1e-12);
    EXPECT_NEAR(b.eta[2], far, 1e-10);
    EXPECT_NEAR(b.eta[1], -0.0523167, 1e-7);
    EXPECT_NEAR(b.eta[2], -19.11435, 1e-5);
}

TEST(ScaleBasis, CoefficientsOfJumpModel) {
    const ScaleBasis b = build_scale_basis(jumpy());
    EXPECT_NEAR(b.c[0], 1.41732, 1e-5);
    EXPECT_NEAR(b.c[1], -0.970963, 1e-6);
    EXPECT_NEAR(b.c[2], -0.446360, 1e-6);
}

TEST(ScaleBasis, ValueAndSlopeAtOrigin) {
    // W(0) = 0 and W'(0) = 2 / sigma^2 for a process with a Gaussian part.
    for (const ModelParams& m : {jumpy(), brownian()}) {
        const ScaleBasis b = make_scale_basis(m);
        double sum_c = 0.0, sum_ce = 0.0;
        for (int i = 0; i < b.terms; ++i) {
            sum_c += b.c[i];
            sum_ce += b.c[i] * b.eta[i];
        }
        EXPECT_NEAR(sum_c, 0.0, 1e-13);
        EXPECT_NEAR(sum_ce, 2.0 / m.sigma2(), 1e-12);
        EXPECT_NEAR(w_r(b, 0.0), 0.0, 1e-13);
        EXPECT_NEAR(w_r_prime(b, 0.0), 2.0 / m.sigma2(), 1e-12);
    }
}

TEST(ScaleBasis, LaplaceTransformIdentity) {
    const ModelParams m = jumpy();
    const ScaleBasis b = build_scale_basis(m);
    for (double beta : {1.5, 2.0, 3.0}) {
        // Tail beyond x = 80 is below e^{-40}.
        std::vector<double> knots;
        for (double x = 0.0; x <= 80.0; x += 2.0) knots.push_back(x);
        const double integral =
            oracle::simpson_panels([&](double x) { return std::exp(-beta * x) * w_r(b, x); }, knots, 1e-13);
        EXPECT_NEAR(integral, 1.0 / (laplace_exponent(m, beta) - m.r()), 1e-9) << "beta=" << beta;
    }
}

TEST(ScaleBasis, ZDerivativeIsRW) {
    const ModelParams m = jumpy();
    const ScaleBasis b = build_scale_basis(m);
    for (double x : {0.1, 0.5, 1.0, 3.0, 7.0}) {
        const double h = 1e-5;
        const double fd = (z_r(b, m, x + h) - z_r(b, m, x - h)) / (2.0 * h);
        EXPECT_LT(oracle::rel_err(fd, m.r() * w_r(b, x)), 1e-7) << "x=" << x;
    }
}

TEST(ScaleBasis, ZMatchesIntegralOfW) {
    const ModelParams m = jumpy();
    const ScaleBasis b = build_scale_basis(m);
    for (double x : {0.25, 1.0, 4.0}) {
        const double integral = oracle::simpson([&](double y) { return w_r(b, y); }, 0.0, x, 1e-13);
        EXPECT_NEAR(z_r(b, m, x), 1.0 + m.r() * integral, 1e-10);
    }
}

TEST(ScaleBasis, WIsNonNegativeAndIncreasing) {
    for (const ModelParams& m : {jumpy(), brownian()}) {
        const ScaleBasis b = make_scale_basis(m);
        double prev = w_r(b, 0.0);
        EXPECT_GE(prev, -1e-14);
        for (double x = 0.01; x < 20.0; x += 0.01) {
            const double w = w_r(b, x);
            EXPECT_GE(w, prev) << "x=" << x;
            EXPECT_GT(w_r_prime(b, x), 0.0);
            prev = w;
        }
    }
}

TEST(ScaleBasis, ConventionsBelowZero) {
    const ModelParams m = jumpy();
    const ScaleBasis b = build_scale_basis(m);
    EXPECT_EQ(w_r(b, -0.5), 0.0);
    EXPECT_EQ(w_r_prime(b, -0.5), 0.0);
    EXPECT_EQ(z_r(b, m, -0.5), 1.0);
}

TEST(ScaleBasis, BrownianBranchClosedForm) {
    const ModelParams m = brownian();
    const ScaleBasis b = build_scale_basis_bs(m);
    EXPECT_EQ(b.terms, 2);
    EXPECT_NEAR(b.eta[1], -2.0 * m.r() / m.sigma2(), 1e-15);
    const double norm = 0.5 * m.sigma2() * (1.0 - b.eta[1]);
    for (double x : {0.0, 0.3, 2.0, 10.0}) {
        const double want = (std::exp(x) - std::exp(b.eta[1] * x)) / norm;
        EXPECT_LT(std::abs(w_r(b, x) - want), 1e-12 * std::max(1.0, want));
    }
}

TEST(ScaleBasis, BranchGuards) {
    EXPECT_THROW(build_scale_basis(brownian()), BranchError);
    EXPECT_THROW(build_scale_basis_bs(jumpy()), BranchError);
    EXPECT_EQ(make_scale_basis(brownian()).terms, 2);
    EXPECT_EQ(make_scale_basis(jumpy()).terms, 3);
}

TEST(ScaleBasis, SmallJumpIntensityApproachesBrownianBranch) {
    const ScaleBasis bs = build_scale_basis_bs(brownian());
    const ScaleBasis tiny = build_scale_basis(make_model(0.05, 0.2, 1e-8, 2.0));
    for (double x : {0.1, 1.0, 5.0, 15.0}) {
        EXPECT_LT(oracle::rel_err(w_r(tiny, x), w_r(bs, x)), 1e-6) << "x=" << x;
    }
}

TEST(ScaleBasis, RootLocationForRandomParameters) {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ur(0.01, 0.2), us(0.05, 0.8), ul(0.01, 10.0), uh(0.5, 6.0);
    for (int i = 0; i < 300; ++i) {
        const double r = ur(rng), s2 = us(rng), lam = ul(rng), rho = uh(rng);
        ModelParams m = make_model(0.05, 0.2, 5.0, 2.0);
        try {
            m = make_model(r, s2, lam, rho);
        } catch (const DegenerateCancellation&) {
            continue;
        }
        const ScaleBasis b = build_scale_basis(m);
        EXPECT_GT(b.eta[1], -m.rho());
        EXPECT_LT(b.eta[1], 0.0);
        EXPECT_LT(b.eta[2], -m.rho());
        EXPECT_GT(b.omega, 0.0);
        for (int k = 0; k < 3; ++k) {
            EXPECT_LT(std::abs(scale_root_polynomial(m, b.eta[k])), 1e-10 * std::max(1.0, std::pow(std::abs(b.eta[k]), 3)));
        }
    }
}
