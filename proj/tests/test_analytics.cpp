#include <gtest/gtest.h>

#include <cmath>

#include <s6v/analytics.hpp>
#include <s6v/oracle.hpp>

using namespace s6v;

TEST(StationaryPair, KappaOneIsIdentity)
{
    const ModelParams p = derive_params(0.3, 0.3);
    for (double b : {0.1, 0.5, 0.77})
        EXPECT_NEAR(stationary_pair(b, p), b, 1e-15);
}

TEST(StationaryPair, HalfAndHalf)
{
    EXPECT_NEAR(stationary_pair(0.5, derive_params(0.6, 0.2)), 1.0 / 3.0, 1e-15);
}

TEST(StationaryPair, OddsRoundTrip)
{
    const ModelParams p = derive_params(0.4, 0.1);
    for (double b2 : {0.05, 0.3, 0.5, 0.9}) {
        const double b1 = stationary_pair(b2, p);
        const double beta1 = OddsPair::from_probability(b1).beta;
        const double want = p.kappa * b2 / (1 - b2);
        EXPECT_LE(std::abs(beta1 - want), 2 * std::numeric_limits<double>::epsilon() * want);
    }
}

TEST(StationaryPair, RejectsDegenerateDensity)
{
    EXPECT_THROW(stationary_pair(0.0, derive_params(0.6, 0.2)), std::invalid_argument);
    EXPECT_THROW(stationary_pair(1.0, derive_params(0.6, 0.2)), std::invalid_argument);
}

TEST(OddsPair, Conversions)
{
    const OddsPair a = OddsPair::from_probability(0.2);
    EXPECT_DOUBLE_EQ(a.beta, 0.25);
    const OddsPair b = OddsPair::from_odds(3.0);
    EXPECT_DOUBLE_EQ(b.b, 0.75);
    EXPECT_THROW(OddsPair::from_probability(1.0), std::invalid_argument);
    EXPECT_THROW(OddsPair::from_odds(-1.0), std::invalid_argument);
}

TEST(RainsEjs, StationaryPairGivesZero)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const double b2 = 0.35, b1 = stationary_pair(b2, p);
    const MgfValue m = rains_ejs_mgf(b1, b2, p, 17, 23);
    EXPECT_NEAR(m.epsilon, 0.0, 1e-15);
    EXPECT_NEAR(m.log_mgf, 0.0, 1e-13);
}

TEST(RainsEjs, OneByOneByHand)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const MgfValue m = rains_ejs_mgf(0.5, 0.5, p, 1, 1);
    EXPECT_NEAR(m.epsilon, std::log(0.5), 1e-15);
    // Four boundary cases: H = 1 w.p. 0.25 * 0.2, H = -1 w.p. 0.25 * 0.6, H = 0 otherwise.
    const double by_hand = 0.05 * 0.5 + 0.15 * 2.0 + 0.8;
    EXPECT_NEAR(by_hand, 1.125, 1e-15);
    EXPECT_NEAR(std::exp(m.log_mgf), by_hand, 1e-14);
}

TEST(RainsEjs, TwoByThreeAgainstOracle)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const MgfValue m = rains_ejs_mgf(0.5, 0.5, p, 2, 3);
    EXPECT_NEAR(m.log_mgf, 3 * std::log(0.75) + 2 * std::log(1.5), 1e-14);
    const ExactDistribution d = exact_height_dist(p, BoundarySpec::bernoulli(0.5, 0.5), 2, 3);
    EXPECT_NEAR(static_cast<double>(std::log(exact_mgf(d, m.epsilon))), m.log_mgf, 1e-12);
}

TEST(RainsEjs, LargeLatticeStaysFinite)
{
    const MgfValue m = rains_ejs_mgf(0.9, 0.05, derive_params(0.5, 0.1), 100000, 100000);
    EXPECT_TRUE(std::isfinite(m.log_mgf));
    EXPECT_GT(m.log_mgf, 100.0);
}

TEST(RainsEjs, RejectsDegenerateInputs)
{
    EXPECT_THROW(rains_ejs_mgf(0.0, 0.5, derive_params(0.6, 0.2), 1, 1), std::invalid_argument);
    EXPECT_THROW(rains_ejs_mgf(0.5, 0.5, derive_params(1.0, 0.2), 1, 1), std::domain_error);
}

TEST(ExpectedHeight, Examples)
{
    EXPECT_EQ(expected_height(0.4, 0.4, 7, 7), 0.0);
    EXPECT_NEAR(expected_height(1.0 / 3.0, 0.5, 2, 3), 0.0, 1e-15);
    EXPECT_NEAR(expected_height(0.2, 0.7, 10, 5), 5 * 0.2 - 10 * 0.7, 1e-15);
}

TEST(ExpectedHeight, MatchesExactMean)
{
    const ModelParams p = derive_params(0.5, 0.1);
    const double b2 = 0.4, b1 = stationary_pair(b2, p);
    for (int x = 1; x <= 4; ++x)
        for (int y = 1; y <= 4; ++y) {
            const ExactDistribution d = exact_height_dist(p, BoundarySpec::bernoulli(b1, b2), x, y);
            EXPECT_NEAR(static_cast<double>(d.mean()), expected_height(b1, b2, x, y), 1e-13);
        }
}

TEST(Characteristic, Examples)
{
    EXPECT_NEAR(x0_of_y(1000, 0.0, 0.5), 500, 1e-12);
    EXPECT_NEAR(x0_of_y(1000, 1.0, 0.5), 1125, 1e-9);
    const ModelParams p = derive_params(0.6, 0.2);
    EXPECT_NEAR(characteristic_point(CharacteristicMode::X0OfY, 1000, OddsPair::from_odds(1.0), p), 1125, 1e-9);
    EXPECT_NEAR(y0_of_x(1125, 0.5, 0.5), 1125 / 0.5 * std::pow((1 + 0.25) / 1.5, 2), 1e-9);
}

TEST(Characteristic, KappaOneIsDiagonal)
{
    for (double beta : {0.1, 1.0, 7.0})
        EXPECT_NEAR(x0_of_y(321, beta, 1.0), 321, 1e-12);
}

TEST(Characteristic, InvertRoundTrip)
{
    for (double kappa : {0.1, 0.5, 0.9, 0.999})
        for (double beta : {0.01, 0.3, 1.0, 4.0, 50.0}) {
            const double x1 = x0_of_y(2000, beta, kappa);
            EXPECT_NEAR(invert_beta(x1, 2000, kappa), beta, 1e-10 * beta) << kappa << ' ' << beta;
        }
}

TEST(Characteristic, InvertRejectsOutsideCone)
{
    EXPECT_THROW(invert_beta(400, 1000, 0.5), std::domain_error);
    EXPECT_THROW(invert_beta(2100, 1000, 0.5), std::domain_error);
}

TEST(Characteristic, IncreasingInBetaBelowKappaOne)
{
    // Runs from y*kappa at beta1 = 0 to y/kappa as beta1 grows.
    for (double kappa : {0.2, 0.5, 0.8})
        for (double beta = 0.01; beta < 20; beta *= 1.3) {
            const double a = x0_of_y(1000, beta, kappa), b = x0_of_y(1000, beta * 1.3, kappa);
            EXPECT_LT(a, b);
        }
}

TEST(StepConstants, AsepAtOrigin)
{
    const StepConstants c = asep_step_constants(0, 10, 1.0, 0.2);
    EXPECT_NEAR(c.J_script, -10 * 0.8 / 4, 1e-14);
    EXPECT_NEAR(c.nu_cubed, 10 * 0.8 / 16, 1e-14);
}

TEST(StepConstants, AsepEdgeOfFan)
{
    EXPECT_NEAR(asep_step_constants(8, 10, 1.0, 0.2).nu_cubed, 0.0, 1e-14);
    EXPECT_THROW(asep_step_constants(9, 10, 1.0, 0.2), std::domain_error);
    EXPECT_THROW(asep_step_constants(0, 10, 0.2, 1.0), std::domain_error);
}

TEST(StepConstants, LimitShapeVanishesOnTheEdge)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const double x = 100, y = x * 0.8 / 0.4;
    const StepConstants c = step_constants(x, y, p);
    EXPECT_NEAR(c.H_script, 0.0, 1e-10);
    EXPECT_NEAR(c.sigma_cubed, 0.0, 1e-10);
}

TEST(StepConstants, InteriorDirection)
{
    const ModelParams p = derive_params(0.4, 0.1);
    const StepConstants c = step_constants(1000, 1000, p);
    EXPECT_LT(c.H_script, 0.0);
    EXPECT_GT(c.sigma, 0.0);
    EXPECT_NEAR(c.sigma * c.sigma * c.sigma, c.sigma_cubed, 1e-9 * c.sigma_cubed);
    EXPECT_NEAR(c.H_script, -std::pow(std::sqrt(600.0) - std::sqrt(900.0), 2) / 0.3, 1e-9);
}

TEST(StepConstants, RejectsInadmissibleDirections)
{
    const ModelParams p = derive_params(0.6, 0.2);
    EXPECT_THROW(step_constants(100, 10, p), std::domain_error);
    EXPECT_THROW(step_constants(100, 1000, p), std::domain_error);
    EXPECT_THROW(step_constants(100, 100, derive_params(0.2, 0.6)), std::domain_error);
    const ModelParams narrow = derive_params(0.6, 0.2, 0.3);
    EXPECT_THROW(step_constants(100, 52, narrow), std::domain_error);
    EXPECT_NO_THROW(step_constants(100, 100, narrow));
}
