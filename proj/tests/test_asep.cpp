#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include <s6v/analytics.hpp>
#include <s6v/asep.hpp>
#include <s6v/stats.hpp>

using namespace s6v;

TEST(Asep, EmptySystemHasNoCurrent)
{
    const ASEPConfig c = ASEPConfig::with_window(1.0, 0.3, 0.0, 5.0, {-3, 0, 4});
    const ASEPState s = asep_simulate(c, NoiseField(1));
    EXPECT_EQ(s.particles(), 0);
    for (long x : c.observe)
        EXPECT_EQ(s.current(x), 0);
}

TEST(Asep, FullSystemIsFrozen)
{
    const ASEPConfig c = ASEPConfig::with_window(1.0, 0.3, 1.0, 5.0, {-3, 0, 4});
    const ASEPState s = asep_simulate(c, NoiseField(2));
    EXPECT_EQ(static_cast<std::size_t>(s.particles()), c.sites());
    // Nothing moves, so the height function is minus the particle count.
    EXPECT_EQ(s.current(-3), 3);
    EXPECT_EQ(s.current(0), 0);
    EXPECT_EQ(s.current(4), -4);
}

TEST(Asep, Deterministic)
{
    const ASEPConfig c = ASEPConfig::with_window(1.0, 0.5, 0.4, 3.0);
    const ASEPState a = asep_simulate(c, NoiseField(9)), b = asep_simulate(c, NoiseField(9));
    EXPECT_EQ(a.occ, b.occ);
    EXPECT_EQ(a.J0, b.J0);
}

TEST(Asep, WindowTooSmallIsRejected)
{
    ASEPConfig c = ASEPConfig::with_window(1.0, 0.0, 0.5, 10.0);
    c.hi = 5;
    EXPECT_THROW(asep_simulate(c, NoiseField(1)), std::invalid_argument);
    EXPECT_THROW(ASEPConfig::with_window(-1.0, 0.0, 0.5, 1.0), std::invalid_argument);
}

TEST(Asep, ParticleNumberIsConserved)
{
    const ASEPConfig c = ASEPConfig::with_window(0.8, 0.6, 0.45, 4.0);
    for (int r = 0; r < 20; ++r) {
        const NoiseField f = NoiseField(3).replicate(r);
        const auto init = detail::initial_occupation(c, f);
        long n0 = 0;
        for (auto o : init)
            n0 += o;
        EXPECT_EQ(asep_simulate(c, f).particles(), n0);
    }
}

TEST(Asep, CurrentDecompositionMatchesBondCounting)
{
    // Replays the same rings and counts crossings of bond (x, x+1) directly;
    // the height function adds the initial particles between 0 and x.
    const ASEPConfig c = ASEPConfig::with_window(1.0, 0.4, 0.5, 6.0, {-7, -1, 0, 2, 9});
    for (int r = 0; r < 30; ++r) {
        const NoiseField f = NoiseField(4).replicate(r);
        const ASEPState s = asep_simulate(c, f);
        std::vector<std::uint8_t> occ = detail::initial_occupation(c, f);
        const std::vector<std::uint8_t> init = occ;
        const detail::EventStream events(c, f);
        std::map<long, long> crossings;
        long left;
        bool right;
        for (std::uint64_t k = 0; k < events.count(); ++k) {
            events.ring(k, left, right);
            const auto a = static_cast<std::size_t>(left - c.lo);
            const bool moves = right ? (occ[a] && !occ[a + 1]) : (occ[a + 1] && !occ[a]);
            detail::apply_ring(occ, c.lo, left, right);
            if (moves)
                crossings[left] += right ? 1 : -1;
        }
        EXPECT_EQ(occ, s.occ);
        for (long x : c.observe) {
            long h = crossings[x];
            for (long j = 1; j <= x; ++j)
                h -= init[static_cast<std::size_t>(j - c.lo)];
            for (long j = x + 1; j <= 0; ++j)
                h += init[static_cast<std::size_t>(j - c.lo)];
            EXPECT_EQ(s.current(x), h) << x;
        }
    }
}

TEST(Asep, RingCountIsPoisson)
{
    const ASEPConfig c = ASEPConfig::with_window(0.7, 0.3, 0.5, 0.5);
    const double mean = (c.L + c.R) * static_cast<double>(c.hi - c.lo) * c.T;
    std::vector<double> counts;
    for (int r = 0; r < 4000; ++r)
        counts.push_back(static_cast<double>(detail::EventStream(c, NoiseField(5).replicate(r)).count()));
    const auto e = stats::mean_estimate(counts);
    EXPECT_NEAR(e.mean, mean, 4 * std::sqrt(mean / 4000));
    EXPECT_NEAR(e.variance / mean, 1.0, 0.1);
}

TEST(Asep, StationaryMeanCurrent)
{
    const double L = 1.0, R = 0.3, b = 0.5, T = 5.0;
    const ASEPConfig c = ASEPConfig::with_window(L, R, b, T);
    std::vector<long> js;
    for (int r = 0; r < 20000; ++r)
        js.push_back(asep_simulate(c, NoiseField(6).replicate(r)).J0);
    const auto e = stats::mean_estimate(js);
    EXPECT_NEAR(e.mean, b * (1 - b) * T * (R - L), 3 * e.stderr_mean);
}

TEST(Asep, BernoulliIsInvariant)
{
    const ASEPConfig c = ASEPConfig::with_window(1.0, 0.2, 0.3, 3.0);
    double ones = 0, total = 0;
    for (int r = 0; r < 200; ++r) {
        const ASEPState s = asep_simulate(c, NoiseField(7).replicate(r));
        for (long j = -10; j <= 10; ++j) {
            ones += s.at(j);
            total += 1;
        }
    }
    EXPECT_GT(stats::chi_square_gof({total - ones, ones}, {0.7, 0.3}).p_value, 1e-3);
}

TEST(Asep, AttractivityUnderSharedClocks)
{
    const ASEPConfig c = ASEPConfig::with_window(1.0, 0.3, 0.6, 5.0);
    long violations = 0;
    for (int r = 0; r < 1000; ++r) {
        const CoupledASEP out = asep_coupled(c, 0.3, NoiseField(8).replicate(r));
        violations += out.violations;
        for (std::size_t k = 0; k < out.dense.occ.size(); ++k)
            violations += out.sparse.occ[k] > out.dense.occ[k];
    }
    EXPECT_EQ(violations, 0);
    EXPECT_THROW(asep_coupled(c, 0.7, NoiseField(1)), std::invalid_argument);
}

TEST(AsepSecondClass, SymmetricRatesAtHalfDensity)
{
    const ASEPConfig c = ASEPConfig::with_window(0.5, 0.5, 0.5, 10.0);
    std::vector<long> qs;
    long violations = 0;
    for (int r = 0; r < 20000; ++r) {
        const SecondClassASEP s = asep_second_class(c, NoiseField(10).replicate(r));
        qs.push_back(s.Q);
        violations += s.violations;
    }
    const auto e = stats::mean_estimate(qs);
    EXPECT_NEAR(e.mean, 0.0, 3 * e.stderr_mean);
    EXPECT_EQ(violations, 0);
}

TEST(AsepSecondClass, FreeParticleDrift)
{
    const double L = 1.0, R = 0.4, T = 8.0;
    const ASEPConfig c = ASEPConfig::with_window(L, R, 0.0, T);
    std::vector<long> qs;
    for (int r = 0; r < 20000; ++r)
        qs.push_back(asep_second_class(c, NoiseField(11).replicate(r)).Q);
    const auto e = stats::mean_estimate(qs);
    EXPECT_NEAR(e.mean, (R - L) * T, 3 * e.stderr_mean);
    EXPECT_NEAR(e.variance / ((L + R) * T), 1.0, 0.05);
}

TEST(AsepSecondClass, TailDecays)
{
    const double L = 1.0, R = 0.0, b = 0.5, T = 20.0;
    const ASEPConfig c = ASEPConfig::with_window(L, R, b, T);
    std::vector<double> dev;
    for (int r = 0; r < 20000; ++r)
        dev.push_back(std::abs(static_cast<double>(asep_second_class(c, NoiseField(12).replicate(r)).Q) -
                               (L - R) * (2 * b - 1) * T));
    const stats::TailCurve t = stats::estimate_tail(dev, {0, 2, 4, 6, 8, 10, 12});
    EXPECT_TRUE(t.monotone());
    EXPECT_LT(t.points.back().p_hat, t.points.front().p_hat);
}

TEST(Degeneration, Reproducible)
{
    const DegenerationSample a = degeneration_run(0.1, 1.0, 0.3, 0.5, 5.0, 2, NoiseField(13));
    const DegenerationSample b = degeneration_run(0.1, 1.0, 0.3, 0.5, 5.0, 2, NoiseField(13));
    EXPECT_EQ(a.H, b.H);
    EXPECT_EQ(a.q, b.q);
    EXPECT_EQ(a.rows, 50);
}

TEST(Degeneration, MeanHeightNearAsepCurrent)
{
    const double eps = 0.05, L = 1.0, R = 0.3, b = 0.5, t = 5.0;
    const long x = 1;
    const ModelParams p = derive_params(eps * L, eps * R);
    const double b1 = stationary_pair(b, p);
    const int rows = static_cast<int>(std::floor(t / eps));
    const double exact = expected_height(b1, b, static_cast<double>(x + rows), rows);
    const double asep = b * (1 - b) * t * (R - L) - b * x;
    EXPECT_LE(std::abs(exact - asep), eps * t);
    std::vector<long> hs;
    for (int r = 0; r < 4000; ++r)
        hs.push_back(degeneration_run(eps, L, R, b, t, x, NoiseField(14).replicate(r)).H);
    const auto e = stats::mean_estimate(hs);
    EXPECT_NEAR(e.mean, exact, 3 * e.stderr_mean);
    EXPECT_NEAR(e.mean, asep, 3 * e.stderr_mean + eps * t);
}

TEST(Degeneration, RejectsLargeEpsilon)
{
    EXPECT_THROW(degeneration_run(1.5, 1.0, 0.3, 0.5, 5.0, 0, NoiseField(1)), std::domain_error);
}
