#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <s6v/experiments.hpp>
#include <s6v/oracle.hpp>
#include <s6v/stats.hpp>

using namespace s6v;

TEST(Wilson, CoverageOnSyntheticBernoulli)
{
    std::mt19937_64 gen(1);
    const double p = 0.07;
    const int n = 1000, reps = 3000;
    std::binomial_distribution<int> bin(n, p);
    int covered = 0;
    for (int r = 0; r < reps; ++r) {
        const stats::Interval ci = stats::wilson(bin(gen), n, 3.0);
        covered += ci.lo <= p && p <= ci.hi;
    }
    EXPECT_GE(static_cast<double>(covered) / reps, 0.99);
    EXPECT_THROW(stats::wilson(0, 0), std::invalid_argument);
}

TEST(ChiSquare, GoodnessOfFit)
{
    EXPECT_NEAR(stats::chi_square_gof({50, 50}, {0.5, 0.5}).p_value, 1.0, 1e-12);
    const auto r = stats::chi_square_gof({60, 40}, {0.5, 0.5});
    EXPECT_NEAR(r.statistic, 4.0, 1e-12);
    EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(2.0)), 1e-10);
    EXPECT_LT(stats::chi_square_gof({900, 100}, {0.5, 0.5}).p_value, 1e-10);
}

TEST(ChiSquare, MergesSparseBins)
{
    const auto r = stats::chi_square_gof({100, 1, 0, 1}, {0.97, 0.01, 0.01, 0.01});
    EXPECT_EQ(r.bins, 1);
}

TEST(ChiSquare, TwoSample)
{
    EXPECT_NEAR(stats::chi_square_two_sample({100, 200, 300}, {100, 200, 300}).statistic, 0.0, 1e-12);
    EXPECT_LT(stats::chi_square_two_sample({500, 100}, {100, 500}).p_value, 1e-10);
    const auto [a, b] = stats::aligned_counts(std::vector<int>{1, 1, 2}, std::vector<int>{2, 3});
    EXPECT_EQ(a, (std::vector<double>{2, 1, 0}));
    EXPECT_EQ(b, (std::vector<double>{0, 1, 1}));
}

TEST(Ols, ExactLine)
{
    const auto f = stats::ols({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
    EXPECT_THROW(stats::ols({1}, {1}), std::invalid_argument);
}

TEST(Variance, JackknifeOnGaussian)
{
    std::mt19937_64 gen(2);
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> xs(20000);
    for (auto& x : xs)
        x = g(gen);
    const auto v = stats::jackknife_variance(xs);
    // sd of the sample variance of a normal sample is sigma^2 sqrt(2/(n-1)).
    EXPECT_NEAR(v.stderr_var, 4.0 * std::sqrt(2.0 / 19999), 0.3 * 4.0 * std::sqrt(2.0 / 19999));
    EXPECT_NEAR(v.variance, 4.0, 4 * v.stderr_var);
}

TEST(Ks, Statistics)
{
    EXPECT_NEAR(stats::ks_critical_sqrt_n(1e-3), 1.9495, 1e-4);
    EXPECT_NEAR(stats::ks_uniform_statistic({0.5}), 0.5, 1e-15);
    EXPECT_NEAR(stats::ks_distance(std::vector<int>{1, 2, 3}, std::vector<int>{1, 2, 3}), 0.0, 1e-15);
    EXPECT_NEAR(stats::ks_distance(std::vector<int>{0, 0}, std::vector<int>{1, 1}), 1.0, 1e-15);
    EXPECT_NEAR(stats::wasserstein1(std::vector<int>{0, 0}, std::vector<int>{3, 3}), 3.0, 1e-15);
    EXPECT_NEAR(stats::wasserstein1(std::vector<int>{0, 2}, std::vector<int>{1, 1}), 1.0, 1e-15);
}

TEST(TailCurve, ZeroThreshold)
{
    const auto c = stats::estimate_tail(std::vector<double>{-1, 0, 0.5, 2}, {0});
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_LE(c.points[0].p_hat, 1.0);
    EXPECT_NEAR(c.points[0].p_hat, 0.5, 1e-15);
    EXPECT_THROW(stats::estimate_tail(std::vector<double>{}, {0}), std::invalid_argument);
}

TEST(TailCurve, MonotoneAndCsv)
{
    std::mt19937_64 gen(3);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> xs(10000);
    for (auto& x : xs)
        x = e(gen);
    const auto c = stats::estimate_tail(xs, {3, 1, 2, 0}, "expo", 3.0, 10, 19);
    EXPECT_TRUE(c.monotone());
    EXPECT_EQ(c.points.front().u, 0);
    std::ostringstream os;
    stats::write_tail_csv(os, c);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "observable,u,p_hat,ci_lo,ci_hi,N,seed_range");
    EXPECT_NE(os.str().find(",10000,10-19\n"), std::string::npos);
}

TEST(BoundTemplate, FitAndValidateOnDisjointSamples)
{
    std::mt19937_64 gen(4);
    std::exponential_distribution<double> e(0.5);
    std::vector<double> train(50000), test(50000);
    for (auto& x : train)
        x = e(gen);
    for (auto& x : test)
        x = e(gen);
    const std::vector<double> us{1, 2, 4, 6, 8, 10};
    const auto fit = stats::fit_bound(stats::estimate_tail(train, us), {stats::BoundShape::Linear, 1, 1, 1});
    EXPECT_NEAR(fit.c, 0.5, 0.05);
    const auto check = stats::compare_bound(stats::estimate_tail(test, us), fit, "fitted");
    EXPECT_TRUE(check.all);
    EXPECT_EQ(check.mode, "fitted");
    const auto tight = stats::compare_bound(stats::estimate_tail(test, us), {stats::BoundShape::Linear, 1, 0.1, 2.0});
    EXPECT_FALSE(tight.all);
}

TEST(StationarityTest, ExactOnOracleBoxes)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const double b1 = stationary_pair(0.4, p);
    const auto c = exact_stationarity_check(p, b1, 0.4, {3, 3});
    EXPECT_LE(static_cast<double>(c.max_marginal_error), 1e-12);
}

TEST(StationarityTest, MonteCarloPassesOnStationaryPair)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const double b1 = stationary_pair(0.5, p);
    const auto rep = test_stationarity(p, b1, 0.5, {40, 40}, 20, 20, 100000, 15);
    EXPECT_TRUE(rep.passed) << rep.min_p << " vs " << rep.threshold;
    EXPECT_EQ(rep.marginal_p.size(), 21u + 21u);
}

TEST(StationarityTest, BrokenPairFails)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const auto rep = test_stationarity(p, 0.5, 0.5, {40, 40}, 20, 20, 100000, 16);
    EXPECT_FALSE(rep.passed);
}

TEST(VarianceScaling, NeedsFourAbscissae)
{
    EXPECT_THROW(fit_variance_scaling(derive_params(0.4, 0.1), 0.5, {100}, 10, 1), std::invalid_argument);
}

TEST(VarianceScaling, OffCharacteristicGrowthIsLinear)
{
    const ModelParams p = derive_params(0.4, 0.1);
    const double b2 = 0.5, b1 = stationary_pair(b2, p);
    const int y = 100;
    const double x0 = x0_of_y(y, b1 / (1 - b1), p.kappa);
    std::vector<double> ld, lv;
    for (int d : {200, 400, 800, 1600}) {
        const auto hs = sample_heights(p, BoundarySpec::bernoulli(b1, b2), static_cast<int>(std::lround(x0)) + d, y,
                                       2000, 100 + d);
        ld.push_back(std::log(d));
        lv.push_back(std::log(stats::jackknife_variance(hs).variance));
    }
    const auto fit = stats::ols(ld, lv);
    EXPECT_NEAR(fit.slope, 1.0, 0.15);
}

TEST(TwoPointEstimate, DegenerateDensityAndPreconditions)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const auto t = two_point_estimate(p, 0.0, 0.0, 4, 4, 1000, 1, 10);
    EXPECT_EQ(t.direct, 0.0);
    EXPECT_EQ(t.laplacian, 0.0);
    EXPECT_THROW(two_point_estimate(p, 0.3, 0.5, 1, 4, 1000, 1), std::invalid_argument);
}

TEST(TwoPointEstimate, RoutesAgreeOnSmallBox)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const double b2 = 0.5, b1 = stationary_pair(b2, p);
    const auto mc = two_point_estimate(p, b1, b2, 3, 3, 400000, 2);
    const auto ex = exact_two_point(p, b1, b2, 3, 3);
    EXPECT_LT(std::abs(mc.z), 3.0);
    EXPECT_NEAR(mc.direct, static_cast<double>(ex.S), 4 * mc.direct_stderr);
    EXPECT_NEAR(mc.laplacian, static_cast<double>(ex.S), 4 * mc.laplacian_stderr);
}

TEST(StepTail, ZeroThresholdIsTrivial)
{
    EXPECT_EQ(step_tail_template(0.0, 3.0, 500.0), 1.0);
    const ModelParams p = derive_params(0.4, 0.1);
    const auto rep = step_tail_check(p, 300, 300, {0.0}, 200, 1, 0.0);
    EXPECT_TRUE(rep.all);
}

TEST(StepTail, RejectsConeEdge)
{
    const ModelParams p = derive_params(0.4, 0.1);
    EXPECT_THROW(step_tail_check(p, 100, 100 * 0.9 / 0.6, {1.0}, 10, 1, 0.0), std::domain_error);
}

TEST(LargeDeviation, BoundHoldsOnSmallBoxes)
{
    // n delta1 >= 1 and k >= 10 n delta1.
    const ModelParams p = derive_params(0.05, 0.02);
    const int n = 40;
    const double d1 = p.delta1;
    for (const BoundarySpec& b : {BoundarySpec::step(), BoundarySpec::bernoulli(0.5, 0.5)}) {
        const auto hs = sample_heights(p, b, n, n, 100000, 9);
        for (int k = static_cast<int>(std::ceil(10 * n * d1)); k <= n; k += 4) {
            const double phat =
                static_cast<double>(std::count_if(hs.begin(), hs.end(), [&](long h) { return std::labs(h) > k; })) /
                hs.size();
            EXPECT_LE(phat, large_deviation_bound(k, n, d1) + 3 * std::sqrt(std::max(phat, 1e-5) / hs.size())) << k;
        }
    }
}
