#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace s6v::stats {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes in n trials at z standard errors.
inline Interval wilson(std::uint64_t k, std::uint64_t n, double z = 3.0)
{
    if (n == 0)
        throw std::invalid_argument("wilson: empty sample");
    const double nn = static_cast<double>(n), p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double den = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / den;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// z such that a two-sided normal test has level alpha.
inline double z_for(double alpha)
{
    return boost::math::quantile(boost::math::complement(boost::math::normal(), alpha / 2.0));
}

inline double bonferroni(double family_alpha, std::size_t tests)
{
    return tests == 0 ? family_alpha : family_alpha / static_cast<double>(tests);
}

struct MeanEstimate {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double stderr_mean = 0.0;
    std::size_t n = 0;
};

template <class T>
MeanEstimate mean_estimate(const std::vector<T>& xs)
{
    if (xs.size() < 2)
        throw std::invalid_argument("mean_estimate: need at least two samples");
    MeanEstimate e;
    e.n = xs.size();
    long double s = 0;
    for (const auto& x : xs)
        s += static_cast<long double>(x);
    const long double m = s / e.n;
    long double q = 0;
    for (const auto& x : xs)
        q += (x - m) * (x - m);
    e.mean = static_cast<double>(m);
    e.variance = static_cast<double>(q / (e.n - 1));
    e.stderr_mean = std::sqrt(e.variance / static_cast<double>(e.n));
    return e;
}

/// Unbiased variance with a grouped (delete-one-group) jackknife error.
struct VarianceEstimate {
    double variance = 0.0;
    double stderr_var = 0.0;
    std::size_t n = 0;
};

template <class T>
VarianceEstimate jackknife_variance(const std::vector<T>& xs, std::size_t groups = 50)
{
    const std::size_t n = xs.size();
    if (n < 4)
        throw std::invalid_argument("jackknife_variance: need at least four samples");
    groups = std::clamp<std::size_t>(groups, 2, n);
    long double s1 = 0, s2 = 0;
    for (const auto& x : xs) {
        s1 += x;
        s2 += static_cast<long double>(x) * x;
    }
    auto var_of = [](long double a1, long double a2, long double m) { return (a2 - a1 * a1 / m) / (m - 1); };
    VarianceEstimate out;
    out.n = n;
    out.variance = static_cast<double>(var_of(s1, s2, n));
    std::vector<long double> g1(groups, 0), g2(groups, 0);
    std::vector<std::size_t> gn(groups, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t g = k * groups / n;
        g1[g] += xs[k];
        g2[g] += static_cast<long double>(xs[k]) * xs[k];
        ++gn[g];
    }
    std::vector<long double> leave(groups);
    long double lm = 0;
    for (std::size_t g = 0; g < groups; ++g) {
        leave[g] = var_of(s1 - g1[g], s2 - g2[g], static_cast<long double>(n - gn[g]));
        lm += leave[g];
    }
    lm /= groups;
    long double acc = 0;
    for (auto v : leave)
        acc += (v - lm) * (v - lm);
    out.stderr_var = static_cast<double>(std::sqrt(acc * (groups - 1) / groups));
    return out;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope x.
inline LinearFit ols(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n != y.size() || n < 2)
        throw std::invalid_argument("ols: need at least two paired points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("ols: abscissae are all equal");
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - f.intercept - f.slope * x[k];
        sse += r * r;
    }
    f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
    f.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
    return f;
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int bins = 0;
};

namespace detail {

inline double chi2_sf(double stat, int dof)
{
    if (dof <= 0)
        return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), stat));
}

}  // namespace detail

/// Goodness of fit of counts against probabilities. Adjacent bins are merged
/// in order until every merged bin expects at least `min_expected` counts.
inline ChiSquareResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs,
                                      double min_expected = 5.0)
{
    if (observed.size() != probs.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
    if (n <= 0)
        throw std::invalid_argument("chi_square_gof: empty sample");
    std::vector<double> mo, me;
    double co = 0, ce = 0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        co += observed[k];
        ce += probs[k] * n;
        if (ce >= min_expected) {
            mo.push_back(co);
            me.push_back(ce);
            co = ce = 0;
        }
    }
    if (co > 0 || ce > 0) {
        if (me.empty()) {
            mo.push_back(co);
            me.push_back(ce);
        } else {
            mo.back() += co;
            me.back() += ce;
        }
    }
    ChiSquareResult r;
    r.bins = static_cast<int>(mo.size());
    for (std::size_t k = 0; k < mo.size(); ++k) {
        if (me[k] <= 0) {
            if (mo[k] > 0)
                r.statistic = INFINITY;
            continue;
        }
        r.statistic += (mo[k] - me[k]) * (mo[k] - me[k]) / me[k];
    }
    r.dof = r.bins - 1;
    r.p_value = std::isinf(r.statistic) ? 0.0 : detail::chi2_sf(r.statistic, r.dof);
    return r;
}

/// Two-sample homogeneity test on aligned bins, merging adjacent bins until
/// each merged bin holds at least `min_count` pooled observations.
inline ChiSquareResult chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                                             double min_count = 10.0)
{
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("chi_square_two_sample: size mismatch");
    const double na = std::accumulate(a.begin(), a.end(), 0.0);
    const double nb = std::accumulate(b.begin(), b.end(), 0.0);
    if (na <= 0 || nb <= 0)
        throw std::invalid_argument("chi_square_two_sample: empty sample");
    std::vector<double> ma, mb;
    double ca = 0, cb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ca += a[k];
        cb += b[k];
        if (ca + cb >= min_count) {
            ma.push_back(ca);
            mb.push_back(cb);
            ca = cb = 0;
        }
    }
    if (ca + cb > 0) {
        if (ma.empty()) {
            ma.push_back(ca);
            mb.push_back(cb);
        } else {
            ma.back() += ca;
            mb.back() += cb;
        }
    }
    const double k1 = std::sqrt(nb / na), k2 = std::sqrt(na / nb);
    ChiSquareResult r;
    r.bins = static_cast<int>(ma.size());
    for (std::size_t k = 0; k < ma.size(); ++k) {
        const double d = k1 * ma[k] - k2 * mb[k];
        r.statistic += d * d / (ma[k] + mb[k]);
    }
    r.dof = r.bins - 1;
    r.p_value = detail::chi2_sf(r.statistic, r.dof);
    return r;
}

/// Histogram of integer samples over the union of both supports.
template <class T>
std::pair<std::vector<double>, std::vector<double>> aligned_counts(const std::vector<T>& a, const std::vector<T>& b)
{
    std::map<T, std::pair<double, double>> m;
    for (const auto& v : a)
        m[v].first += 1;
    for (const auto& v : b)
        m[v].second += 1;
    std::vector<double> ca, cb;
    for (const auto& [k, c] : m) {
        ca.push_back(c.first);
        cb.push_back(c.second);
    }
    return {ca, cb};
}

/// sup |F_n(u) - u| of a sample against U[0,1).
inline double ks_uniform_statistic(std::vector<double> xs)
{
    if (xs.empty())
        throw std::invalid_argument("ks_uniform_statistic: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        d = std::max(d, (k + 1) / n - xs[k]);
        d = std::max(d, xs[k] - k / n);
    }
    return d;
}

/// Critical value of sqrt(n) D at level alpha from the leading term of the
/// Kolmogorov tail, P[sqrt(n) D > c] ~ 2 exp(-2 c^2). 1.9495 at alpha = 1e-3.
inline double ks_critical_sqrt_n(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }

/// sup |F_a - F_b| between two empirical laws.
template <class T>
double ks_distance(std::vector<T> a, std::vector<T> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const T v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v)
            ++i;
        while (j < b.size() && b[j] == v)
            ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

/// Wasserstein-1 distance between two empirical laws on the line.
template <class T>
double wasserstein1(std::vector<T> a, std::vector<T> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("wasserstein1: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> pts;
    pts.reserve(a.size() + b.size());
    for (const auto& v : a)
        pts.push_back(static_cast<double>(v));
    for (const auto& v : b)
        pts.push_back(static_cast<double>(v));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double w = 0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        while (i < a.size() && static_cast<double>(a[i]) <= pts[k])
            ++i;
        while (j < b.size() && static_cast<double>(b[j]) <= pts[k])
            ++j;
        w += std::abs(i / na - j / nb) * (pts[k + 1] - pts[k]);
    }
    return w;
}

struct TailPoint {
    double u = 0.0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    std::uint64_t hits = 0;
};

/// Empirical P[X > u] over a threshold grid.
struct TailCurve {
    std::string observable;
    std::vector<TailPoint> points;
    std::uint64_t N = 0;
    std::uint64_t seed_lo = 0;
    std::uint64_t seed_hi = 0;

    /// Point estimates non-increasing in u.
    bool monotone() const
    {
        for (std::size_t k = 1; k < points.size(); ++k)
            if (points[k].p_hat > points[k - 1].p_hat)
                return false;
        return true;
    }
};

template <class T>
TailCurve estimate_tail(const std::vector<T>& samples, std::vector<double> thresholds, std::string observable = "",
                        double z = 3.0, std::uint64_t seed_lo = 0, std::uint64_t seed_hi = 0)
{
    if (samples.empty())
        throw std::invalid_argument("estimate_tail: empty sample set");
    std::sort(thresholds.begin(), thresholds.end());
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    TailCurve c{std::move(observable), {}, samples.size(), seed_lo, seed_hi};
    for (double u : thresholds) {
        const auto hits = static_cast<std::uint64_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), u));
        const Interval ci = wilson(hits, c.N, z);
        c.points.push_back({u, static_cast<double>(hits) / c.N, ci.lo, ci.hi, hits});
    }
    return c;
}

/// Shapes g(u) of the bound C exp(-c g(u)).
enum class BoundShape { ThreeHalves, Linear, Quadratic, Cubic };

struct BoundTemplate {
    BoundShape shape = BoundShape::ThreeHalves;
    double scale = 1.0;  // y(1-kappa) for ThreeHalves, T(L-R) for Cubic, 1/variance for Quadratic
    double C = 1.0;
    double c = 1.0;

    double g(double u) const
    {
        switch (shape) {
        case BoundShape::ThreeHalves: return std::pow(u, 1.5) / std::sqrt(scale);
        case BoundShape::Linear: return u;
        case BoundShape::Quadratic: return u * u * scale;
        case BoundShape::Cubic: return u * u * u / (scale * scale);
        }
        return u;
    }
    double bound(double u) const { return std::min(1.0, C * std::exp(-c * g(u))); }
};

inline const char* shape_name(BoundShape s)
{
    switch (s) {
    case BoundShape::ThreeHalves: return "u^{3/2}/sqrt(scale)";
    case BoundShape::Linear: return "u";
    case BoundShape::Quadratic: return "u^2*scale";
    case BoundShape::Cubic: return "u^3/scale^2";
    }
    return "?";
}

struct BoundCheck {
    BoundTemplate used;
    std::vector<bool> holds;  // per threshold: lower CI end at or below the bound
    bool all = true;
    std::string mode;  // "fitted" or "supplied"
};

inline BoundCheck compare_bound(const TailCurve& curve, const BoundTemplate& t, std::string mode = "supplied")
{
    BoundCheck r{t, {}, true, std::move(mode)};
    for (const auto& p : curve.points) {
        const bool ok = p.ci_lo <= t.bound(p.u);
        r.holds.push_back(ok);
        r.all = r.all && ok;
    }
    return r;
}

/// Fits c by least squares of log p against g(u) over points with hits, then
/// takes the smallest C for which the bound covers every training estimate.
inline BoundTemplate fit_bound(const TailCurve& training, BoundTemplate shape)
{
    std::vector<double> gx, ly;
    for (const auto& p : training.points)
        if (p.hits > 0 && p.u > 0) {
            gx.push_back(shape.g(p.u));
            ly.push_back(std::log(p.p_hat));
        }
    if (gx.size() < 2)
        throw std::invalid_argument("fit_bound: fewer than two usable training points");
    const LinearFit f = ols(gx, ly);
    shape.c = std::max(0.0, -f.slope);
    double logC = -INFINITY;
    for (std::size_t k = 0; k < gx.size(); ++k)
        logC = std::max(logC, ly[k] + shape.c * gx[k]);
    shape.C = std::exp(logC);
    return shape;
}

inline void write_tail_csv_header(std::ostream& os) { os << "observable,u,p_hat,ci_lo,ci_hi,N,seed_range\n"; }

inline void write_tail_csv(std::ostream& os, const TailCurve& c, bool header = true)
{
    if (header)
        write_tail_csv_header(os);
    for (const auto& p : c.points)
        os << c.observable << ',' << p.u << ',' << p.p_hat << ',' << p.ci_lo << ',' << p.ci_hi << ',' << c.N << ','
           << c.seed_lo << '-' << c.seed_hi << '\n';
}

}  // namespace s6v::stats
