#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytics.hpp"
#include "boundary.hpp"
#include "noise.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "sampler.hpp"
#include "stats.hpp"

namespace s6v {

// Monte Carlo experiments. Replicate r of an experiment seeded with `seed`
// uses NoiseField(seed).replicate(r).

struct StationarityReport {
    std::vector<double> marginal_p;  // one per family edge
    std::vector<double> pair_p;      // neighbouring pairs along the family
    double min_p = 1.0;
    double threshold = 0.0;  // per-test level after Bonferroni
    bool passed = false;
};

/// Chi-square tests of the product-Bernoulli law of the edges entering the
/// vertices along the down-right path through corner (cx, cy): h(cx, i) for
/// i >= cy and v(i, cy) for i >= cx, within the box.
inline StationarityReport test_stationarity(const ModelParams& params, double b1, double b2, Dims dims, int cx,
                                            int cy, std::size_t N, std::uint64_t seed, double family_alpha = 1e-3,
                                            unsigned workers = 1)
{
    if (cx < 1 || cy < 1 || cx > dims.x + 1 || cy > dims.y + 1)
        throw std::out_of_range("test_stationarity: corner outside the box");
    struct Edge {
        bool horizontal;
        int i, j;
    };
    std::vector<Edge> fam;
    for (int i = dims.y; i >= cy; --i)
        fam.push_back({true, cx, i});
    for (int i = cx; i <= dims.x; ++i)
        fam.push_back({false, i, cy});
    if (fam.empty())
        throw std::invalid_argument("test_stationarity: empty family");
    const NoiseField root(seed);
    const BoundarySpec law = BoundarySpec::bernoulli(b1, b2);
    auto bits = parallel_map(N, workers, [&](std::size_t r) {
        const PathEnsemble e = sample_ensemble(params, law, dims, root.replicate(r));
        std::vector<std::uint8_t> out(fam.size());
        for (std::size_t k = 0; k < fam.size(); ++k)
            out[k] = fam[k].horizontal ? e.h(fam[k].i, fam[k].j) : e.v(fam[k].i, fam[k].j);
        return out;
    });
    StationarityReport rep;
    const std::size_t m = fam.size();
    for (std::size_t k = 0; k < m; ++k) {
        double ones = 0;
        for (const auto& b : bits)
            ones += b[k];
        const double p = fam[k].horizontal ? b1 : b2;
        rep.marginal_p.push_back(stats::chi_square_gof({static_cast<double>(N) - ones, ones}, {1 - p, p}).p_value);
    }
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double pa = fam[k].horizontal ? b1 : b2, pb = fam[k + 1].horizontal ? b1 : b2;
        std::vector<double> obs(4, 0.0);
        for (const auto& b : bits)
            obs[2 * b[k] + b[k + 1]] += 1;
        rep.pair_p.push_back(stats::chi_square_gof(obs, {(1 - pa) * (1 - pb), (1 - pa) * pb, pa * (1 - pb), pa * pb})
                                 .p_value);
    }
    rep.threshold = stats::bonferroni(family_alpha, rep.marginal_p.size() + rep.pair_p.size());
    for (double p : rep.marginal_p)
        rep.min_p = std::min(rep.min_p, p);
    for (double p : rep.pair_p)
        rep.min_p = std::min(rep.min_p, p);
    rep.passed = rep.min_p > rep.threshold;
    return rep;
}

/// Samples H(x, y) under the given law, one replicate per entry.
inline std::vector<long> sample_heights(const ModelParams& params, const BoundarySpec& law, int x, int y,
                                        std::size_t N, std::uint64_t seed, unsigned workers = 1)
{
    const NoiseField root(seed);
    return parallel_map(N, workers, [&](std::size_t r) { return sample_height(params, law, x, y, root.replicate(r)); });
}

struct ScalingFit {
    std::vector<double> abscissae;  // y(1 - kappa)
    std::vector<int> rows;
    std::vector<int> columns;       // characteristic x0(y), rounded
    std::vector<double> variances;
    std::vector<double> variance_stderr;
    stats::LinearFit fit;           // log Var against log y(1 - kappa)
};

/// Var H(x0(y), y) for stationary data along the characteristic direction and
/// the log-log slope against y(1 - kappa).
inline ScalingFit fit_variance_scaling(const ModelParams& params, double b2, const std::vector<int>& ys,
                                       std::size_t N, std::uint64_t seed, unsigned workers = 1)
{
    if (ys.size() < 4)
        throw std::invalid_argument("fit_variance_scaling: needs at least 4 abscissae");
    require_strictly_ordered(params, "fit_variance_scaling");
    const double b1 = stationary_pair(b2, params);
    const double beta1 = b1 / (1 - b1);
    const BoundarySpec law = BoundarySpec::bernoulli(b1, b2);
    ScalingFit out;
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const int y = ys[k];
        const int x = static_cast<int>(std::lround(x0_of_y(y, beta1, params.kappa)));
        const auto hs = sample_heights(params, law, x, y, N, seed + 0x9e37ULL * (k + 1), workers);
        const auto v = stats::jackknife_variance(hs);
        out.rows.push_back(y);
        out.columns.push_back(x);
        out.abscissae.push_back(y * (1 - params.kappa));
        out.variances.push_back(v.variance);
        out.variance_stderr.push_back(v.stderr_var);
        lx.push_back(std::log(out.abscissae.back()));
        ly.push_back(std::log(v.variance));
    }
    out.fit = stats::ols(lx, ly);
    return out;
}

struct TwoPointEstimate {
    double direct = 0.0;        // Cov(v(x, y+1), v(1, 1))
    double direct_stderr = 0.0;
    double laplacian = 0.0;     // (Var H(x) - 2 Var H(x-1) + Var H(x-2)) / 2 along row y
    double laplacian_stderr = 0.0;
    double difference_stderr = 0.0;
    double z = 0.0;             // (direct - laplacian) / difference_stderr
    std::size_t N = 0;
};

/// Two estimates of the two-point function from the same samples, with errors
/// from batch means so the correlation between them is accounted for.
inline TwoPointEstimate two_point_estimate(const ModelParams& params, double b1, double b2, int x, int y,
                                           std::size_t N, std::uint64_t seed, std::size_t batches = 100,
                                           unsigned workers = 1)
{
    if (x < 2)
        throw std::invalid_argument("two_point_estimate: requires x - 1 >= 1");
    if (N < 2 * batches)
        throw std::invalid_argument("two_point_estimate: too few samples for the batch count");
    const NoiseField root(seed);
    const BoundarySpec law = BoundarySpec::bernoulli(b1, b2);
    struct Row {
        long hm, h0, hp;
        std::uint8_t top, first;
    };
    const auto rows = parallel_map(N, workers, [&](std::size_t r) {
        const BoxBoundary box = sample_box_boundary(params, law, {x, y}, root.replicate(r));
        return Row{box.height_on_top(x - 2), box.height_on_top(x - 1), box.height_on_top(x), box.north[x],
                   box.south[1]};
    });
    auto estimates = [&](std::size_t lo, std::size_t hi, double& direct, double& lap) {
        long double n = static_cast<long double>(hi - lo);
        long double st = 0, sf = 0, stf = 0, m[3] = {0, 0, 0}, q[3] = {0, 0, 0};
        for (std::size_t k = lo; k < hi; ++k) {
            const Row& w = rows[k];
            st += w.top;
            sf += w.first;
            stf += w.top * w.first;
            const long h[3] = {w.hm, w.h0, w.hp};
            for (int d = 0; d < 3; ++d) {
                m[d] += h[d];
                q[d] += static_cast<long double>(h[d]) * h[d];
            }
        }
        direct = static_cast<double>((stf - st * sf / n) / (n - 1));
        long double var[3];
        for (int d = 0; d < 3; ++d)
            var[d] = (q[d] - m[d] * m[d] / n) / (n - 1);
        lap = static_cast<double>(0.5L * (var[2] - 2 * var[1] + var[0]));
    };
    TwoPointEstimate out;
    out.N = N;
    estimates(0, N, out.direct, out.laplacian);
    std::vector<double> bd(batches), bl(batches), bdiff(batches);
    for (std::size_t g = 0; g < batches; ++g) {
        estimates(g * N / batches, (g + 1) * N / batches, bd[g], bl[g]);
        bdiff[g] = bd[g] - bl[g];
    }
    auto se = [&](const std::vector<double>& v) { return stats::mean_estimate(v).stderr_mean; };
    out.direct_stderr = se(bd);
    out.laplacian_stderr = se(bl);
    out.difference_stderr = se(bdiff);
    out.z = out.difference_stderr > 0 ? (out.direct - out.laplacian) / out.difference_stderr : 0.0;
    return out;
}

/// exp(-(4/3) u^{3/2} + C u^2 / (y(1-kappa))^{1/3}).
inline double step_tail_template(double u, double C, double y_one_minus_kappa)
{
    return std::min(1.0, std::exp(-4.0 / 3.0 * std::pow(u, 1.5) + C * u * u / std::cbrt(y_one_minus_kappa)));
}

struct StepTailReport {
    StepConstants constants;
    stats::TailCurve curve;  // of (H - H_script) / sigma
    double C = 0.0;
    std::vector<double> bound;
    std::vector<bool> holds;
    bool all = true;
};

/// Empirical upper tail of the standardized step-data height against the
/// template with the given C. A point holds when its lower CI end is at or
/// below the template.
inline StepTailReport step_tail_check(const ModelParams& params, int x, int y, const std::vector<double>& us,
                                      std::size_t N, std::uint64_t seed, double C, double z = 3.0,
                                      unsigned workers = 1)
{
    StepTailReport rep;
    rep.constants = step_constants(x, y, params);
    if (!(rep.constants.sigma > 0))
        throw std::domain_error("step_tail_check: direction on the edge of the cone (sigma = 0)");
    const auto hs = sample_heights(params, BoundarySpec::step(), x, y, N, seed, workers);
    std::vector<double> zs;
    zs.reserve(hs.size());
    for (long h : hs)
        zs.push_back((h - rep.constants.H_script) / rep.constants.sigma);
    rep.curve = stats::estimate_tail(zs, us, "step_height", z, seed, seed);
    rep.C = C;
    const double s = y * (1 - params.kappa);
    for (const auto& p : rep.curve.points) {
        const double b = step_tail_template(p.u, C, s);
        rep.bound.push_back(b);
        rep.holds.push_back(p.ci_lo <= b);
        rep.all = rep.all && rep.holds.back();
    }
    return rep;
}

/// Smallest C >= 0 for which the template covers every point estimate.
inline double fit_step_tail_C(const stats::TailCurve& curve, double y_one_minus_kappa)
{
    double C = 0.0;
    for (const auto& p : curve.points) {
        if (p.u <= 0 || p.hits == 0)
            continue;
        const double need = (std::log(p.p_hat) + 4.0 / 3.0 * std::pow(p.u, 1.5)) * std::cbrt(y_one_minus_kappa) /
                            (p.u * p.u);
        C = std::max(C, need);
    }
    return C;
}

/// 2 exp(-k (1 + log(k / (n delta1)))), the large-deviation bound on
/// P[|H(n,n)| > k] for k >= 10 n delta1.
inline double large_deviation_bound(double k, int n, double delta1)
{
    return std::min(1.0, 2.0 * std::exp(-k * (1.0 + std::log(k / (n * delta1)))));
}

}  // namespace s6v
