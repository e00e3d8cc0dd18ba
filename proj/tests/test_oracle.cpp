#include <gtest/gtest.h>

#include <cmath>

#include <s6v/oracle.hpp>
#include <s6v/sampler.hpp>

using namespace s6v;

TEST(ExactHeight, OneByOneStep)
{
    const ExactDistribution d = exact_height_dist(derive_params(0.6, 0.2), BoundarySpec::step(), 1, 1);
    EXPECT_NEAR(static_cast<double>(d.probability(-1)), 0.6, 1e-15);
    EXPECT_NEAR(static_cast<double>(d.probability(0)), 0.4, 1e-15);
    EXPECT_EQ(d.pmf.size(), 2u);
}

TEST(ExactHeight, EmptyBoundaryIsPointMass)
{
    const ExactDistribution d = exact_height_dist(derive_params(0.6, 0.2), BoundarySpec::empty(), 3, 4);
    ASSERT_EQ(d.pmf.size(), 1u);
    EXPECT_EQ(d.probability(0), 1.0L);
}

TEST(ExactHeight, OneByOneBernoulliByHand)
{
    const ExactDistribution d = exact_height_dist(derive_params(0.6, 0.2), BoundarySpec::bernoulli(0.5, 0.5), 1, 1);
    EXPECT_NEAR(static_cast<double>(d.probability(1)), 0.05, 1e-15);
    EXPECT_NEAR(static_cast<double>(d.probability(-1)), 0.15, 1e-15);
    EXPECT_NEAR(static_cast<double>(d.probability(0)), 0.8, 1e-15);
}

TEST(ExactHeight, SumsToOneAndRespectsCap)
{
    const ExactDistribution d =
        exact_height_dist(derive_params(0.7, 0.3), BoundarySpec::bernoulli(0.3, 0.6), 4, 4, true);
    EXPECT_NEAR(static_cast<double>(d.total()), 1.0, 1e-14);
    long double joint = 0;
    for (const auto& [t, p] : d.joint) {
        EXPECT_EQ(t.W - t.N, t.E - t.S);
        joint += p;
    }
    EXPECT_NEAR(static_cast<double>(joint), 1.0, 1e-14);
    EXPECT_THROW(exact_height_dist(derive_params(0.7, 0.3), BoundarySpec::step(), 5, 4), std::length_error);
}

TEST(ExactHeight, DynamicProgramMatchesBranchEnumeration)
{
    const ModelParams p = derive_params(0.55, 0.15);
    const BoundarySpec b = BoundarySpec::bernoulli(0.35, 0.65).with(west_slot(2), true);
    for (Dims d : {Dims{1, 3}, Dims{2, 2}, Dims{3, 2}, Dims{2, 4}}) {
        std::map<long, long double> brute;
        for_each_outcome(p, b, d, [&](const PathEnsemble& e, long double w) {
            ASSERT_TRUE(e.valid());
            const HeightDecomposition c = boundary_counts(e, d.x, d.y);
            ASSERT_EQ(c.W - c.N, c.E - c.S);
            brute[c.H] += w;
        });
        const ExactDistribution dp = exact_height_dist(p, b, d.x, d.y);
        ASSERT_EQ(brute.size(), dp.pmf.size());
        for (const auto& [h, w] : brute)
            EXPECT_NEAR(static_cast<double>(dp.probability(h)), static_cast<double>(w), 1e-15);
    }
}

TEST(ExactMgf, Examples)
{
    const ExactDistribution d = exact_height_dist(derive_params(0.6, 0.2), BoundarySpec::bernoulli(0.5, 0.5), 1, 1);
    EXPECT_NEAR(static_cast<double>(exact_mgf(d, 0)), 1.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(exact_mgf(d, std::log(0.5L))), 1.125, 1e-15);
    ExactDistribution sym;
    sym.pmf = {{-2, 0.25L}, {0, 0.5L}, {2, 0.25L}};
    EXPECT_EQ(exact_mgf(sym, 0.7L), exact_mgf(sym, -0.7L));
}

TEST(TwoPoint, IdentityOnSmallGrids)
{
    const ModelParams p = derive_params(0.6, 0.2);
    for (double b2 : {0.3, 0.5, 0.8}) {
        const double b1 = stationary_pair(b2, p);
        for (int x = 2; x <= 3; ++x)
            for (int y = 1; y <= 3; ++y) {
                const TwoPointExact t = exact_two_point(p, b1, b2, x, y);
                EXPECT_LE(std::fabs(static_cast<double>(t.residual())), 1e-12) << x << ' ' << y;
            }
    }
}

TEST(TwoPoint, CovarianceAgainstBranchEnumeration)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const double b2 = 0.5, b1 = stationary_pair(b2, p);
    const int x = 3, y = 2;
    long double top = 0, first = 0, both = 0;
    for_each_outcome(p, BoundarySpec::bernoulli(b1, b2), {x, y}, [&](const PathEnsemble& e, long double w) {
        top += e.v(x, y + 1) * w;
        first += e.v(1, 1) * w;
        both += (e.v(x, y + 1) && e.v(1, 1)) * w;
    });
    EXPECT_NEAR(static_cast<double>(exact_two_point(p, b1, b2, x, y).S), static_cast<double>(both - top * first),
                1e-15);
}

TEST(TwoPoint, DegenerateDensityGivesZero)
{
    const ModelParams p = derive_params(0.6, 0.2);
    EXPECT_EQ(exact_two_point(p, 0.0, 0.0, 3, 2).S, 0.0L);
    EXPECT_EQ(exact_two_point(p, 1.0, 1.0, 3, 2).S, 0.0L);
}

TEST(TwoPoint, Preconditions)
{
    const ModelParams p = derive_params(0.6, 0.2);
    EXPECT_THROW(exact_two_point(p, 1.0 / 3, 0.5, 1, 2), std::invalid_argument);
    EXPECT_THROW(exact_two_point(p, 1.0 / 3, 0.5, 5, 5), std::length_error);
    EXPECT_THROW(exact_two_point(p, 0.5, 0.5, 2, 2), std::domain_error);
}

TEST(Stationarity, ExactProductLaw)
{
    for (auto [d1, d2] : {std::pair{0.6, 0.2}, std::pair{0.5, 0.1}, std::pair{0.9, 0.3}}) {
        const ModelParams p = derive_params(d1, d2);
        for (double b2 : {0.2, 0.5, 0.7}) {
            const double b1 = stationary_pair(b2, p);
            const StationarityCheck c = exact_stationarity_check(p, b1, b2, {3, 3});
            EXPECT_LE(static_cast<double>(c.max_marginal_error), 1e-12);
            EXPECT_LE(static_cast<double>(c.max_factorization_error), 1e-12);
            EXPECT_LE(static_cast<double>(c.max_pairwise_error), 1e-12);
        }
    }
}

TEST(Stationarity, BrokenPairIsDetected)
{
    const ModelParams p = derive_params(0.6, 0.2);
    const StationarityCheck c = exact_stationarity_check(p, 0.5, 0.5, {2, 2});
    EXPECT_GT(static_cast<double>(c.max_marginal_error), 1e-3);
}

TEST(SecondClassExit, SumsToOne)
{
    const auto law = exact_second_class_exit(derive_params(0.5, 0.2), BoundarySpec::bernoulli(0.5, 0.5).with(west_slot(1), false),
                                             west_slot(1), {2, 3});
    long double s = 0;
    for (const auto& [k, w] : law)
        s += w;
    EXPECT_NEAR(static_cast<double>(s), 1.0, 1e-14);
    EXPECT_THROW(exact_second_class_exit(derive_params(0.5, 0.2), BoundarySpec::step(), south_slot(1), {2, 2}),
                 std::invalid_argument);
}
