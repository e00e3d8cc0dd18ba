#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace s6v {

/// The three items of the quantitative parameter assumption used by the tail
/// theorems, each evaluated from (delta1, delta2, a) alone.
struct AssumptionFlags {
    bool theta_at_least_a = false;   // theta >= a
    bool delta1_bounded = false;     // 1 - delta1 >= a
    bool kappa_comparable = false;   // a*delta1 <= 1 - kappa <= delta1 / a

    bool all() const { return theta_at_least_a && delta1_bounded && kappa_comparable; }
};

/// Vertex probabilities of the stochastic six vertex model.
///
/// delta1 is the probability that a lone vertical arrow continues vertically,
/// delta2 the probability that a lone horizontal arrow continues horizontally.
struct ModelParams {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double kappa = 1.0;  // (1 - delta1) / (1 - delta2)
    double theta = 0.0;  // (min(delta1, 1/2) - delta2) / (min(delta1, 1/2) + delta2)
    std::optional<double> frak_a;
    std::optional<AssumptionFlags> flags;

    /// 0 < delta2 < delta1 < 1, the regime required by every closed form.
    bool strictly_ordered() const { return 0.0 < delta2 && delta2 < delta1 && delta1 < 1.0; }
};

inline double theta_of(double delta1, double delta2)
{
    const double d = std::min(delta1, 0.5);
    const double den = d + delta2;
    return den > 0.0 ? (d - delta2) / den : 0.0;
}

inline AssumptionFlags evaluate_assumption(double delta1, double delta2, double a)
{
    const double kappa = (1.0 - delta1) / (1.0 - delta2);
    AssumptionFlags f;
    f.theta_at_least_a = theta_of(delta1, delta2) >= a;
    f.delta1_bounded = 1.0 - delta1 >= a;
    f.kappa_comparable = a * delta1 <= 1.0 - kappa && 1.0 - kappa <= delta1 / a;
    return f;
}

/// Builds ModelParams. Probabilities outside [0,1] are rejected; everything
/// else is accepted and downstream operations check the regime they need.
inline ModelParams derive_params(double delta1, double delta2, std::optional<double> frak_a = {})
{
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(delta1) || !in_unit(delta2))
        throw std::invalid_argument("derive_params: delta1 and delta2 must lie in [0,1]");
    if (frak_a && !(*frak_a > 0.0))
        throw std::invalid_argument("derive_params: frak_a must be positive");

    ModelParams p;
    p.delta1 = delta1;
    p.delta2 = delta2;
    p.kappa = delta2 < 1.0 ? (1.0 - delta1) / (1.0 - delta2)
                           : std::numeric_limits<double>::quiet_NaN();
    p.theta = theta_of(delta1, delta2);
    p.frak_a = frak_a;
    if (frak_a)
        p.flags = evaluate_assumption(delta1, delta2, *frak_a);
    return p;
}

inline void require_strictly_ordered(const ModelParams& p, const char* where)
{
    if (!p.strictly_ordered())
        throw std::domain_error(std::string(where) + ": requires 0 < delta2 < delta1 < 1");
}

}  // namespace s6v
