#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "noise.hpp"

namespace s6v {

// Environments c(x, n) for the label walk. A value of 1 marks a vertex where
// paths x and x+1 meet at time n; two neighbouring marks are impossible.

struct EmptyEnvironment {
    bool operator()(long, long) const { return false; }
};

/// c(x, n) = 1 iff x + n is even.
struct CheckerboardEnvironment {
    bool operator()(long x, long n) const { return ((x + n) & 1) == 0; }
};

/// c(x, n) = 1 iff x is even, at every time.
struct AlternatingEnvironment {
    bool operator()(long x, long) const { return (x & 1) == 0; }
};

/// Random hard-core field: at each time a random parity is chosen and marks of
/// that parity are kept independently with probability `density`.
struct RandomHardcoreEnvironment {
    NoiseField noise;
    double density = 0.5;

    bool operator()(long x, long n) const
    {
        const ChannelKey key = noise.channel(Channel::Walk);
        const long parity = key.uniform(1, n) < 0.5 ? 0 : 1;
        if (((x + parity) & 1) != 0)
            return false;
        return key.uniform(2, x, n) < density;
    }
};

/// Z(0..steps) of the walk driven by `env`: at time n from position x it
/// moves right w.p. delta1 if c(x,n)=1, left w.p. delta2 if c(x-1,n)=1.
template <class Env>
std::vector<long> biased_walk(const Env& env, double delta1, double delta2, int steps, const NoiseField& noise)
{
    if (steps < 0)
        throw std::invalid_argument("biased_walk: negative step count");
    const ChannelKey key = noise.channel(Channel::Walk);
    std::vector<long> z(static_cast<std::size_t>(steps) + 1, 0);
    long x = 0;
    for (int n = 0; n < steps; ++n) {
        const bool right = env(x, n);
        const bool left = env(x - 1, n);
        if (right && left)
            throw std::invalid_argument("biased_walk: environment marks two neighbouring sites");
        if (right || left) {
            const double u = key.uniform(0, n);
            if (right && u < delta1)
                ++x;
            else if (left && u < delta2)
                --x;
        }
        z[static_cast<std::size_t>(n) + 1] = x;
    }
    return z;
}

/// Z(steps) only; same draws as biased_walk.
template <class Env>
long biased_walk_endpoint(const Env& env, double delta1, double delta2, int steps, const NoiseField& noise)
{
    return biased_walk(env, delta1, delta2, steps, noise).back();
}

}  // namespace s6v
