#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "params.hpp"

namespace s6v {

/// A probability together with its odds.
struct OddsPair {
    double b = 0.0;
    double beta = 0.0;  // b / (1 - b)

    static OddsPair from_probability(double b)
    {
        if (!(b >= 0.0 && b < 1.0))
            throw std::invalid_argument("OddsPair: probability must lie in [0,1)");
        return {b, b / (1.0 - b)};
    }
    static OddsPair from_odds(double beta)
    {
        if (!(beta >= 0.0) || std::isinf(beta))
            throw std::invalid_argument("OddsPair: odds must be finite and nonnegative");
        return {beta / (1.0 + beta), beta};
    }
};

/// West density b1 that makes (b1, b2) translation invariant: beta1 = kappa * beta2.
inline double stationary_pair(double b2, const ModelParams& params)
{
    if (!(b2 > 0.0 && b2 < 1.0))
        throw std::invalid_argument("stationary_pair: b2 must lie in (0,1)");
    if (!(params.kappa > 0.0) || std::isinf(params.kappa))
        throw std::domain_error("stationary_pair: kappa must lie in (0,inf)");
    const double beta1 = params.kappa * (b2 / (1.0 - b2));
    return beta1 / (1.0 + beta1);
}

struct MgfValue {
    double epsilon = 0.0;
    double log_mgf = 0.0;
};

/// log E[exp(eps H(x,y))] under Bernoulli(a1, a2) boundary data, where eps is
/// the unique exponent for which the identity closes: e^eps = kappa alpha2 / alpha1.
inline MgfValue rains_ejs_mgf(double a1, double a2, const ModelParams& params, long x, long y)
{
    auto open = [](double p) { return p > 0.0 && p < 1.0; };
    if (!open(a1) || !open(a2))
        throw std::invalid_argument("rains_ejs_mgf: a1 and a2 must lie in (0,1)");
    if (!open(params.delta1) || !open(params.delta2))
        throw std::domain_error("rains_ejs_mgf: delta1 and delta2 must lie in (0,1)");
    if (x < 0 || y < 0)
        throw std::invalid_argument("rains_ejs_mgf: negative coordinates");
    const double log_alpha1 = std::log(a1) - std::log1p(-a1);
    const double log_alpha2 = std::log(a2) - std::log1p(-a2);
    const double eps = std::log(params.kappa) + log_alpha2 - log_alpha1;
    const double lm = static_cast<double>(y) * std::log1p(a1 * std::expm1(eps)) +
                      static_cast<double>(x) * std::log1p(a2 * std::expm1(-eps));
    return {eps, lm};
}

/// E[H(x,y)] for a stationary pair.
inline double expected_height(double b1, double b2, double x, double y) { return y * b1 - x * b2; }

namespace detail {

inline void require_kappa_below_one(double kappa, const char* where)
{
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::domain_error(std::string(where) + ": requires 0 < kappa < 1");
}

inline double x0_ratio(double beta, double kappa)
{
    const double r = (1.0 + beta / kappa) / (1.0 + beta);
    return kappa * r * r;
}

}  // namespace detail

/// Characteristic column x0 for row y and west odds beta1.
inline double x0_of_y(double y, double beta1, double kappa)
{
    if (!(kappa > 0.0))
        throw std::domain_error("x0_of_y: requires kappa > 0");
    if (!(beta1 >= 0.0))
        throw std::invalid_argument("x0_of_y: odds must be nonnegative");
    return y * detail::x0_ratio(beta1, kappa);
}

/// Characteristic row y0 for column x and south odds beta2.
inline double y0_of_x(double x, double beta2, double kappa)
{
    if (!(kappa > 0.0))
        throw std::domain_error("y0_of_x: requires kappa > 0");
    if (!(beta2 >= 0.0))
        throw std::invalid_argument("y0_of_x: odds must be nonnegative");
    const double r = (1.0 + kappa * beta2) / (1.0 + beta2);
    return x / kappa * r * r;
}

/// The odds beta with x0_of_y(y, beta, kappa) = x1, for y kappa < x1 < y / kappa.
inline double invert_beta(double x1, double y, double kappa)
{
    detail::require_kappa_below_one(kappa, "invert_beta");
    if (!(y > 0.0))
        throw std::invalid_argument("invert_beta: y must be positive");
    const double lo_x = y * kappa, hi_x = y / kappa;
    if (!(x1 > lo_x && x1 < hi_x))
        throw std::domain_error("invert_beta: target outside (y kappa, y / kappa)");
    const double sx = std::sqrt(x1);
    double beta = (sx - std::sqrt(y * kappa)) / (std::sqrt(y / kappa) - sx);
    auto residual = [&](double b) { return y * detail::x0_ratio(b, kappa) - x1; };
    if (std::isfinite(beta) && beta > 0.0 && std::abs(residual(beta)) <= 1e-12 * x1)
        return beta;
    // x0 increases in beta from y kappa to y / kappa; bisect on log-odds.
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 400 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(std::exp(mid)) < 0.0 ? lo : hi) = mid;
    }
    beta = std::exp(0.5 * (lo + hi));
    return beta;
}

enum class CharacteristicMode { X0OfY, Y0OfX, InvertBeta };

/// Single entry point for the three characteristic-direction queries.
/// `value` is y for X0OfY and InvertBeta's row, x for Y0OfX; `target` is the
/// column to invert for InvertBeta.
inline double characteristic_point(CharacteristicMode mode, double value, OddsPair odds, const ModelParams& params,
                                   std::optional<double> target = {})
{
    detail::require_kappa_below_one(params.kappa, "characteristic_point");
    if (!(odds.beta > 0.0))
        throw std::invalid_argument("characteristic_point: odds must be positive");
    switch (mode) {
    case CharacteristicMode::X0OfY: return x0_of_y(value, odds.beta, params.kappa);
    case CharacteristicMode::Y0OfX: return y0_of_x(value, odds.beta, params.kappa);
    case CharacteristicMode::InvertBeta:
        if (!target)
            throw std::invalid_argument("characteristic_point: invert_beta needs a target column");
        return invert_beta(*target, value, params.kappa);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Centering and scale of the step-data height (S6V) or current (ASEP).
struct StepConstants {
    double H_script = 0.0;
    double sigma = 0.0;
    double sigma_cubed = 0.0;
    double J_script = 0.0;
    double nu = 0.0;
    double nu_cubed = 0.0;
};

/// Limit shape and fluctuation scale of H under step data, for directions in
/// the closed cone kappa <= y/x <= 1/kappa (narrowed by frak_a when set).
inline StepConstants step_constants(double x, double y, const ModelParams& params)
{
    require_strictly_ordered(params, "step_constants");
    if (!(x > 0.0 && y > 0.0))
        throw std::domain_error("step_constants: x and y must be positive");
    const double k = params.kappa, d1 = params.delta1, d2 = params.delta2;
    const double a = params.frak_a.value_or(0.0);
    const double ratio = y / x;
    const double lo = k + a * (1.0 - k), hi = (1.0 - (1.0 - k) * a) / k;
    const double slack = 1e-12;
    if (ratio < lo * (1.0 - slack) || ratio > hi * (1.0 + slack))
        throw std::domain_error("step_constants: direction y/x outside the admissible cone");
    StepConstants c;
    const double gap = std::sqrt(y * (1.0 - d1)) - std::sqrt(x * (1.0 - d2));
    c.H_script = -gap * gap / (d1 - d2);
    const double s = 1.0 / std::sqrt(k) - std::sqrt(k);
    const double f1 = 1.0 - std::sqrt(std::min(1.0, y * k / x));
    const double f2 = 1.0 - std::sqrt(std::min(1.0, x * k / y));
    c.sigma_cubed = std::sqrt(x * y) / (k * s * s * s) * f1 * f1 * f2 * f2;
    c.sigma = std::cbrt(c.sigma_cubed);
    return c;
}

/// Step-data current constants of ASEP with leftward rate L > R, |x| <= (L-R)t.
inline StepConstants asep_step_constants(double x, double t, double L, double R)
{
    if (!(L > R && R >= 0.0))
        throw std::domain_error("asep_step_constants: requires L > R >= 0");
    if (!(t > 0.0))
        throw std::domain_error("asep_step_constants: t must be positive");
    const double v = L - R;
    if (std::abs(x) > v * t * (1.0 + 1e-12))
        throw std::domain_error("asep_step_constants: |x| exceeds (L-R)t");
    StepConstants c;
    const double d = x / t - v;
    c.J_script = -t / (4.0 * v) * d * d;
    const double w = v * v - (x * x) / (t * t);
    c.nu_cubed = t / (16.0 * v * v * v) * w * w;
    c.nu = std::cbrt(c.nu_cubed);
    return c;
}

}  // namespace s6v
