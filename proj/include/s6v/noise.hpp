#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace s6v {

/// Version tag of the keyed generator. Bump whenever the mixing changes; it is
/// written into every manifest so golden values stay attributable.
inline constexpr std::string_view kNoiseVersion = "s6v-noise/2 splitmix64-absorb";

/// Independent randomness channels. Coupled copies of a model read the same
/// channel at the same coordinates and therefore see the same uniform.
enum class Channel : std::uint32_t {
    VertexH = 1,
    VertexV = 2,
    BoundaryWest = 3,
    BoundarySouth = 4,
    Walk = 5,
    AsepEdge = 6,
    AsepTime = 7,
};

constexpr std::string_view channel_name(Channel c)
{
    switch (c) {
    case Channel::VertexH: return "vertex-h";
    case Channel::VertexV: return "vertex-v";
    case Channel::BoundaryWest: return "boundary-west";
    case Channel::BoundarySouth: return "boundary-south";
    case Channel::Walk: return "walk";
    case Channel::AsepEdge: return "asep-edge";
    case Channel::AsepTime: return "asep-time";
    }
    return "unknown";
}

namespace detail {

// SplitMix64 finalizer; a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t absorb(std::uint64_t state, std::uint64_t word)
{
    return mix64((state ^ word) + kGolden);
}

constexpr double to_unit(std::uint64_t bits)
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Key for one (seed, channel) pair. Precomputing it keeps per-draw cost at
/// one mixing round per coordinate.
class ChannelKey {
  public:
    constexpr ChannelKey(std::uint64_t seed, Channel channel)
        : key_(detail::absorb(detail::mix64(seed + detail::kGolden),
                              static_cast<std::uint64_t>(channel) * 0xd6e8feb86659fd93ULL))
    {
    }

    /// Uniform in [0,1) for the coordinate tuple and counter.
    template <class... Coords>
    constexpr double uniform(std::uint64_t counter, Coords... coords) const
    {
        std::uint64_t s = key_;
        ((s = detail::absorb(s, static_cast<std::uint64_t>(static_cast<std::int64_t>(coords)))), ...);
        s = detail::absorb(s, counter ^ 0x5851f42d4c957f2dULL);
        return detail::to_unit(s);
    }

    constexpr double uniform_list(std::initializer_list<std::int64_t> coords,
                                  std::uint64_t counter) const
    {
        std::uint64_t s = key_;
        for (auto c : coords)
            s = detail::absorb(s, static_cast<std::uint64_t>(c));
        s = detail::absorb(s, counter ^ 0x5851f42d4c957f2dULL);
        return detail::to_unit(s);
    }

    /// Key with leading coordinates already absorbed:
    /// prefix(a).uniform(c, b) == uniform(c, a, b).
    template <class... Coords>
    constexpr ChannelKey prefix(Coords... coords) const
    {
        std::uint64_t s = key_;
        ((s = detail::absorb(s, static_cast<std::uint64_t>(static_cast<std::int64_t>(coords)))), ...);
        return ChannelKey(s);
    }

  private:
    constexpr explicit ChannelKey(std::uint64_t raw) : key_(raw) {}

    std::uint64_t key_;
};

/// Stateless, counter-based source of uniforms. A value type: copying it
/// copies only the seed.
class NoiseField {
  public:
    constexpr explicit NoiseField(std::uint64_t seed) : seed_(seed) {}

    constexpr std::uint64_t seed() const { return seed_; }

    constexpr ChannelKey channel(Channel c) const { return ChannelKey(seed_, c); }

    /// Field for replicate `index` derived from this seed. The seed is mixed
    /// before the index is absorbed, so replicate sets of different seeds do
    /// not overlap.
    constexpr NoiseField replicate(std::uint64_t index) const
    {
        return NoiseField(detail::mix64(detail::absorb(detail::mix64(seed_ ^ 0x3c6ef372fe94f82aULL), index)));
    }

    template <class... Coords>
    constexpr double uniform(Channel c, std::uint64_t counter, Coords... coords) const
    {
        return channel(c).uniform(counter, coords...);
    }

  private:
    std::uint64_t seed_;
};

/// Pure function of (seed, channel, coordinates, counter).
inline double uniform_at(const NoiseField& field, Channel channel,
                         std::initializer_list<std::int64_t> coords, std::uint64_t counter = 0)
{
    return field.channel(channel).uniform_list(coords, counter);
}

/// Monotone Bernoulli coupling: for p <= q, bernoulli(u, p) implies bernoulli(u, q).
constexpr bool bernoulli(double u, double p) { return u < p; }

}  // namespace s6v
