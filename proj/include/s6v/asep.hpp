#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/poisson.hpp>

#include "analytics.hpp"
#include "boundary.hpp"
#include "noise.hpp"
#include "params.hpp"
#include "sampler.hpp"

namespace s6v {

/// ASEP on the window [lo, hi]. L is the rate of leftward jumps, R of
/// rightward ones. Jumps that would leave the window are suppressed.
struct ASEPConfig {
    double L = 1.0;
    double R = 0.0;
    double b = 0.5;
    double T = 1.0;
    long lo = 0;
    long hi = 0;
    std::vector<long> observe{0};

    /// Padding needed around `reach` so that the horizon-T influence cone stays
    /// inside the window: reach + 4(L+R)T + margin.
    static long padding(long reach, double L, double R, double T, long margin = 64)
    {
        return reach + static_cast<long>(std::ceil(4.0 * (L + R) * T)) + margin;
    }

    static ASEPConfig with_window(double L, double R, double b, double T, std::vector<long> observe = {0},
                                  long margin = 64)
    {
        long reach = 0;
        for (long x : observe)
            reach = std::max(reach, std::labs(x));
        const long pad = padding(reach, L, R, T, margin);
        ASEPConfig c{L, R, b, T, -pad, pad, std::move(observe)};
        c.validate();
        return c;
    }

    void validate() const
    {
        if (!(L >= 0.0 && R >= 0.0) || !std::isfinite(L + R))
            throw std::invalid_argument("ASEPConfig: rates must be finite and nonnegative");
        if (!(b >= 0.0 && b <= 1.0))
            throw std::invalid_argument("ASEPConfig: density outside [0,1]");
        if (!(T >= 0.0) || !std::isfinite(T))
            throw std::invalid_argument("ASEPConfig: horizon must be finite and nonnegative");
        long reach = 0;
        for (long x : observe)
            reach = std::max(reach, std::labs(x));
        const long need = padding(reach, L, R, T, 0);
        if (lo > -need || hi < need)
            throw std::invalid_argument("ASEPConfig: window too small for the requested horizon");
    }

    std::size_t sites() const { return static_cast<std::size_t>(hi - lo + 1); }
};

struct ASEPState {
    long lo = 0;
    long hi = 0;
    std::vector<std::uint8_t> occ;  // occ[j - lo]
    double time = 0.0;
    long J0 = 0;  // net rightward crossings of the bond (0, 1)

    bool at(long j) const { return j >= lo && j <= hi && occ[static_cast<std::size_t>(j - lo)]; }

    /// J_t(x) = J_t(0) - sum_{j=1}^{x} eta_j for x >= 0, and
    /// J_t(0) + sum_{j=x+1}^{0} eta_j for x < 0.
    long current(long x) const
    {
        long j = J0;
        if (x >= 0)
            for (long s = 1; s <= x; ++s)
                j -= at(s);
        else
            for (long s = x + 1; s <= 0; ++s)
                j += at(s);
        return j;
    }

    long particles() const
    {
        long n = 0;
        for (auto o : occ)
            n += o;
        return n;
    }
};

namespace detail {

/// Occupation of site j at time 0, read from the boundary channels with the
/// S6V slot of that site: j >= 1 is south slot j, j <= 0 is west slot 1 - j.
inline bool initial_site(long j, double b, const NoiseField& noise)
{
    const double u = j >= 1 ? noise.uniform(Channel::BoundarySouth, 0, j)
                            : noise.uniform(Channel::BoundaryWest, 0, 1 - j);
    return bernoulli(u, b);
}

/// The superposed clock stream of all directed edges. The number of rings up
/// to T is Poisson(total rate * T), drawn by inversion from the asep-time
/// channel; ring k picks its edge and direction from the asep-edge channel.
class EventStream {
  public:
    EventStream(const ASEPConfig& c, const NoiseField& noise)
        : L_(c.L), R_(c.R), lo_(c.lo), edges_(c.hi - c.lo), edge_key_(noise.channel(Channel::AsepEdge))
    {
        const double rate = (c.L + c.R) * static_cast<double>(edges_);
        const double mean = rate * c.T;
        if (mean > 0.0) {
            const double u = noise.uniform(Channel::AsepTime, 0);
            if (u > 0.0) {
                using namespace boost::math::policies;
                using Pol = policy<discrete_quantile<integer_round_up>>;
                const boost::math::poisson_distribution<double, Pol> pois(mean);
                count_ = static_cast<std::uint64_t>(boost::math::quantile(pois, u));
            }
        }
    }

    std::uint64_t count() const { return count_; }

    /// Ring k: left site of the bond and whether it is a rightward attempt.
    void ring(std::uint64_t k, long& left, bool& rightward) const
    {
        const double s = edge_key_.uniform(k) * (L_ + R_) * static_cast<double>(edges_);
        long e = static_cast<long>(s / (L_ + R_));
        if (e >= edges_)
            e = edges_ - 1;
        const double rem = s - static_cast<double>(e) * (L_ + R_);
        left = lo_ + e;
        rightward = rem < R_;
    }

  private:
    double L_, R_;
    long lo_;
    long edges_;
    ChannelKey edge_key_;
    std::uint64_t count_ = 0;
};

/// Applies one ring to an occupation array; returns +1/-1 for a crossing of
/// bond (0,1) and 0 otherwise.
inline int apply_ring(std::vector<std::uint8_t>& occ, long lo, long left, bool rightward)
{
    const auto a = static_cast<std::size_t>(left - lo), b = a + 1;
    const unsigned source = rightward ? occ[a] : occ[b];
    const unsigned move = (occ[a] ^ occ[b]) & source;
    occ[a] ^= static_cast<std::uint8_t>(move);
    occ[b] ^= static_cast<std::uint8_t>(move);
    return static_cast<int>(move & (left == 0)) * (rightward ? 1 : -1);
}

inline std::vector<std::uint8_t> initial_occupation(const ASEPConfig& c, const NoiseField& noise)
{
    std::vector<std::uint8_t> occ(c.sites(), 0);
    for (long j = c.lo; j <= c.hi; ++j)
        occ[static_cast<std::size_t>(j - c.lo)] = initial_site(j, c.b, noise);
    return occ;
}

}  // namespace detail

/// Graphical construction up to time T. Deterministic in (config, noise).
inline ASEPState asep_simulate(const ASEPConfig& config, const NoiseField& noise)
{
    config.validate();
    ASEPState s{config.lo, config.hi, detail::initial_occupation(config, noise), config.T, 0};
    const detail::EventStream events(config, noise);
    long left;
    bool right;
    for (std::uint64_t k = 0; k < events.count(); ++k) {
        events.ring(k, left, right);
        s.J0 += detail::apply_ring(s.occ, s.lo, left, right);
    }
    return s;
}

/// Two systems with densities b_sparse <= b_dense started from the same
/// uniforms and driven by the same rings. Counts rings after which the
/// sparse configuration is not below the dense one at the touched sites.
struct CoupledASEP {
    ASEPState dense;
    ASEPState sparse;
    long violations = 0;
};

inline CoupledASEP asep_coupled(const ASEPConfig& config, double b_sparse, const NoiseField& noise)
{
    config.validate();
    if (!(b_sparse >= 0.0 && b_sparse <= config.b))
        throw std::invalid_argument("asep_coupled: requires 0 <= b_sparse <= b");
    ASEPConfig sparse_cfg = config;
    sparse_cfg.b = b_sparse;
    CoupledASEP out{{config.lo, config.hi, detail::initial_occupation(config, noise), config.T, 0},
                    {config.lo, config.hi, detail::initial_occupation(sparse_cfg, noise), config.T, 0},
                    0};
    for (std::size_t k = 0; k < out.dense.occ.size(); ++k)
        if (out.sparse.occ[k] > out.dense.occ[k])
            ++out.violations;
    const detail::EventStream events(config, noise);
    long left;
    bool right;
    for (std::uint64_t k = 0; k < events.count(); ++k) {
        events.ring(k, left, right);
        out.dense.J0 += detail::apply_ring(out.dense.occ, config.lo, left, right);
        out.sparse.J0 += detail::apply_ring(out.sparse.occ, config.lo, left, right);
        const auto a = static_cast<std::size_t>(left - config.lo);
        if (out.sparse.occ[a] > out.dense.occ[a] || out.sparse.occ[a + 1] > out.dense.occ[a + 1])
            ++out.violations;
    }
    return out;
}

struct SecondClassASEP {
    long Q = 0;           // position of the discrepancy at time T
    long violations = 0;  // rings after which eta <= zeta failed
};

/// eta has the origin vacated, zeta = eta plus a particle at the origin; the
/// discrepancy between them is the second-class particle.
inline SecondClassASEP asep_second_class(const ASEPConfig& config, const NoiseField& noise)
{
    config.validate();
    if (config.lo > 0 || config.hi < 0)
        throw std::invalid_argument("asep_second_class: window must contain the origin");
    std::vector<std::uint8_t> eta = detail::initial_occupation(config, noise);
    const auto origin = static_cast<std::size_t>(-config.lo);
    eta[origin] = 0;
    // zeta is eta with one extra particle at q; only eta is stored.
    SecondClassASEP out;
    long q = 0;
    const detail::EventStream events(config, noise);
    long left;
    bool right;
    for (std::uint64_t k = 0; k < events.count(); ++k) {
        events.ring(k, left, right);
        if (left != q && left + 1 != q) {
            detail::apply_ring(eta, config.lo, left, right);
            continue;
        }
        const auto a = static_cast<std::size_t>(left - config.lo);
        std::uint8_t z[2] = {static_cast<std::uint8_t>(eta[a] | (left == q)),
                             static_cast<std::uint8_t>(eta[a + 1] | (left + 1 == q))};
        detail::apply_ring(eta, config.lo, left, right);
        std::vector<std::uint8_t> pair(z, z + 2);
        detail::apply_ring(pair, left, left, right);
        if (eta[a] > pair[0] || eta[a + 1] > pair[1])
            ++out.violations;
        if (pair[0] != eta[a])
            q = left;
        else if (pair[1] != eta[a + 1])
            q = left + 1;
    }
    out.Q = q;
    return out;
}

/// Result of one degeneration run: the S6V height in the moving frame and the
/// frame positions of the particles on the top row.
struct DegenerationSample {
    long H = 0;
    int rows = 0;
    std::vector<long> q;
};

/// S6V with delta1 = eps L, delta2 = eps R and stationary densities
/// (b1, b) run for floor(t / eps) rows; returns H(x + rows, rows).
inline DegenerationSample degeneration_run(double eps, double L, double R, double b, double t, long x,
                                           const NoiseField& noise)
{
    const double d1 = eps * L, d2 = eps * R;
    if (!(eps > 0.0) || !(d1 < 1.0) || !(d2 < 1.0))
        throw std::domain_error("degeneration_run: eps too large (eps L and eps R must lie in (0,1))");
    const ModelParams params = derive_params(d1, d2);
    const double b1 = stationary_pair(b, params);
    const int rows = static_cast<int>(std::floor(t / eps));
    if (rows < 1)
        throw std::domain_error("degeneration_run: t / eps must be at least 1");
    const long width = x + rows;
    if (width < 1)
        throw std::domain_error("degeneration_run: x + rows must be positive");
    const BoxBoundary box =
        sample_box_boundary(params, BoundarySpec::bernoulli(b1, b), {static_cast<int>(width), rows}, noise);
    DegenerationSample out;
    out.rows = rows;
    out.H = box.height_on_top(static_cast<int>(width));
    for (int i = 1; i <= box.width(); ++i)
        if (box.north[i])
            out.q.push_back(i - rows);
    return out;
}

}  // namespace s6v
