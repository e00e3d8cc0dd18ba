#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "boundary.hpp"
#include "ensemble.hpp"
#include "noise.hpp"
#include "params.hpp"

namespace s6v {

namespace detail {

/// Update of one vertex from its incoming arrows. Only a vertex with a single
/// incoming arrow is random: a lone vertical arrow continues vertically when
/// its vertex-v uniform is below delta1, a lone horizontal arrow continues
/// horizontally when its vertex-h uniform is below delta2. Vertex uniforms are
/// keyed by (row, column).
class VertexRule {
  public:
    VertexRule(const ModelParams& p, const NoiseField& noise)
        : d1_(p.delta1), d2_(p.delta2), vkey_(noise.channel(Channel::VertexV)),
          hkey_(noise.channel(Channel::VertexH))
    {
    }

    bool vertical_through(int i, int j) const { return bernoulli(vkey_.uniform(0, j, i), d1_); }
    bool horizontal_through(int i, int j) const { return bernoulli(hkey_.uniform(0, j, i), d2_); }

    /// Keys of one row, for the sweep's inner loop.
    struct Row {
        ChannelKey v;
        ChannelKey h;
    };
    Row row(int j) const { return {vkey_.prefix(j), hkey_.prefix(j)}; }

    double delta1() const { return d1_; }
    double delta2() const { return d2_; }

  private:
    double d1_;
    double d2_;
    ChannelKey vkey_;
    ChannelKey hkey_;
};

/// Row-major sweep over the box. Each vertex needs only its south and west
/// neighbours, so this order samples the same law as the antidiagonal one.
template <class Recorder>
void sweep(const ModelParams& params, const BoundarySpec& boundary, Dims dims, const NoiseField& noise,
           Recorder& rec)
{
    if (dims.x < 1 || dims.y < 1)
        throw std::invalid_argument("sample: dimensions must be positive");
    const VertexRule rule(params, noise);
    const double d1 = rule.delta1(), d2 = rule.delta2();
    std::vector<std::uint8_t> column(static_cast<std::size_t>(dims.x) + 1, 0);
    for (int i = 1; i <= dims.x; ++i) {
        column[i] = boundary.draw(south_slot(i), noise);
        rec.south(i, column[i]);
    }
    for (int j = 1; j <= dims.y; ++j) {
        unsigned h = boundary.draw(west_slot(j), noise);
        rec.west(j, h);
        const VertexRule::Row keys = rule.row(j);
        for (int i = 1; i <= dims.x; ++i) {
            // Branch-free: the uniform of the lone arrow's channel is always
            // drawn and ignored when the vertex is deterministic.
            const unsigned vin = column[i];
            const ChannelKey& key = vin ? keys.v : keys.h;
            const double threshold = vin ? d1 : d2;
            const unsigned through = key.uniform(0, i) < threshold;
            const unsigned single = vin ^ h;
            const unsigned vout = single ? static_cast<unsigned>(vin == through) : vin;
            const unsigned hout = vin + h - vout;
            if constexpr (requires { rec.vertex(i, j, vout, hout); })
                rec.vertex(i, j, vout, hout);
            column[i] = static_cast<std::uint8_t>(vout);
            h = hout;
        }
        rec.east(j, h);
    }
    for (int i = 1; i <= dims.x; ++i)
        rec.north(i, column[i]);
}

struct EnsembleRecorder {
    PathEnsemble& ens;
    void south(int i, bool on) { ens.set_v(i, 1, on); }
    void west(int j, bool on) { ens.set_h(1, j, on); }
    void vertex(int i, int j, bool vout, bool hout)
    {
        ens.set_v(i, j + 1, vout);
        ens.set_h(i + 1, j, hout);
    }
    void east(int, bool) {}
    void north(int, bool) {}
};

}  // namespace detail

/// Samples every edge of the box. Fully determined by the arguments.
inline PathEnsemble sample_ensemble(const ModelParams& params, const BoundarySpec& boundary, Dims dims,
                                    const NoiseField& noise)
{
    PathEnsemble ens(dims);
    detail::EnsembleRecorder rec{ens};
    detail::sweep(params, boundary, dims, noise, rec);
    return ens;
}

/// The four sides of a sampled box without the interior. Entries are 1-based;
/// index 0 is unused.
struct BoxBoundary {
    std::vector<std::uint8_t> west, south, east, north;

    int width() const { return static_cast<int>(south.size()) - 1; }
    int height() const { return static_cast<int>(west.size()) - 1; }

    /// H(x, height()) for any 0 <= x <= width(), as W - N.
    long height_on_top(int x) const
    {
        long w = std::accumulate(west.begin() + 1, west.end(), 0L);
        long n = std::accumulate(north.begin() + 1, north.begin() + 1 + x, 0L);
        return w - n;
    }

    /// H(width(), y) for any 0 <= y <= height(), as E - S.
    long height_on_right(int y) const
    {
        long e = std::accumulate(east.begin() + 1, east.begin() + 1 + y, 0L);
        long s = std::accumulate(south.begin() + 1, south.end(), 0L);
        return e - s;
    }
};

/// Streaming sampler: same sweep and noise as sample_ensemble, O(x) memory.
inline BoxBoundary sample_box_boundary(const ModelParams& params, const BoundarySpec& boundary, Dims dims,
                                       const NoiseField& noise)
{
    struct Recorder {
        BoxBoundary& b;
        void south(int i, bool on) { b.south[i] = on; }
        void west(int j, bool on) { b.west[j] = on; }
        void east(int j, bool on) { b.east[j] = on; }
        void north(int i, bool on) { b.north[i] = on; }
    };
    BoxBoundary out;
    out.west.assign(static_cast<std::size_t>(dims.y) + 1, 0);
    out.east.assign(static_cast<std::size_t>(dims.y) + 1, 0);
    out.south.assign(static_cast<std::size_t>(dims.x) + 1, 0);
    out.north.assign(static_cast<std::size_t>(dims.x) + 1, 0);
    Recorder rec{out};
    detail::sweep(params, boundary, dims, noise, rec);
    return out;
}

/// H(x, y) of a fresh sample on the box Δ_{xy}.
inline long sample_height(const ModelParams& params, const BoundarySpec& boundary, int x, int y,
                          const NoiseField& noise)
{
    return sample_box_boundary(params, boundary, {x, y}, noise).height_on_top(x);
}

}  // namespace s6v
