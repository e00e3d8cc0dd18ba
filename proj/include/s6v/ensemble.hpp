#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "boundary.hpp"

namespace s6v {

/// Dense 2-D bit array, row-major, 64 bits per word.
class BitPlane {
  public:
    BitPlane() = default;
    BitPlane(int width, int height) : width_(width), height_(height)
    {
        if (width < 0 || height < 0)
            throw std::length_error("BitPlane: negative extent");
        const auto bits = static_cast<unsigned long long>(width) * static_cast<unsigned long long>(height);
        if (bits > kMaxBits)
            throw std::length_error("BitPlane: " + std::to_string(width) + "x" + std::to_string(height) +
                                    " exceeds the bit-plane capacity");
        words_.assign(static_cast<std::size_t>((bits + 63) / 64), 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool get(int col, int row) const
    {
        const auto k = index(col, row);
        return (words_[k >> 6] >> (k & 63)) & 1u;
    }

    void set(int col, int row, bool value)
    {
        const auto k = index(col, row);
        const std::uint64_t mask = std::uint64_t{1} << (k & 63);
        if (value)
            words_[k >> 6] |= mask;
        else
            words_[k >> 6] &= ~mask;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    friend bool operator==(const BitPlane&, const BitPlane&) = default;

    static constexpr unsigned long long kMaxBits = 1ULL << 36;

  private:
    std::size_t index(int col, int row) const
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint64_t> words_;
};

/// The six admissible vertex configurations, named by (incoming -> outgoing).
enum class VertexConfig {
    Empty,              // nothing in, nothing out
    VerticalThrough,    // v in, v out             (weight delta1)
    VerticalTurn,       // v in, h out             (weight 1 - delta1)
    HorizontalThrough,  // h in, h out             (weight delta2)
    HorizontalTurn,     // h in, v out             (weight 1 - delta2)
    Full,               // both in, both out       (weight 1)
};

/// Occupancy of every edge of a finite box, including the edges leaving it.
///
/// h(i, j) = 1 iff an arrow enters vertex (i, j) horizontally, for
/// 1 <= i <= x+1, 1 <= j <= y; column x+1 is the east exit plane.
/// v(i, j) = 1 iff an arrow enters (i, j) vertically, for 1 <= i <= x,
/// 1 <= j <= y+1; row y+1 is the north exit plane.
class PathEnsemble {
  public:
    PathEnsemble() = default;
    explicit PathEnsemble(Dims dims) : dims_(check(dims)), h_(dims.x + 1, dims.y), v_(dims.x, dims.y + 1) {}

    Dims dims() const { return dims_; }

    bool h(int i, int j) const { return h_.get(i - 1, j - 1); }
    bool v(int i, int j) const { return v_.get(i - 1, j - 1); }
    void set_h(int i, int j, bool on) { h_.set(i - 1, j - 1, on); }
    void set_v(int i, int j, bool on) { v_.set(i - 1, j - 1, on); }

    const BitPlane& h_plane() const { return h_; }
    const BitPlane& v_plane() const { return v_; }
    BitPlane& h_plane() { return h_; }
    BitPlane& v_plane() { return v_; }

    /// Classification of the vertex, or nullopt when arrows are not conserved.
    std::optional<VertexConfig> config(int i, int j) const
    {
        const bool vi = v(i, j), hi = h(i, j), vo = v(i, j + 1), ho = h(i + 1, j);
        if (vi + hi != vo + ho)
            return std::nullopt;
        if (!vi && !hi)
            return VertexConfig::Empty;
        if (vi && hi)
            return VertexConfig::Full;
        if (vi)
            return vo ? VertexConfig::VerticalThrough : VertexConfig::VerticalTurn;
        return ho ? VertexConfig::HorizontalThrough : VertexConfig::HorizontalTurn;
    }

    /// Every vertex conserves arrows (and hence is one of the six configurations).
    bool valid() const
    {
        for (int j = 1; j <= dims_.y; ++j)
            for (int i = 1; i <= dims_.x; ++i)
                if (!config(i, j))
                    return false;
        return true;
    }

    bool boundary_arrow(BoundaryVertex slot) const
    {
        return slot.side == Side::West ? h(1, slot.index) : v(slot.index, 1);
    }

    /// Every edge of `other` is an edge of this ensemble.
    bool dominates(const PathEnsemble& other) const
    {
        if (other.dims_ != dims_)
            return false;
        auto covers = [](const BitPlane& a, const BitPlane& b) {
            for (std::size_t k = 0; k < a.words().size(); ++k)
                if ((b.words()[k] & ~a.words()[k]) != 0)
                    return false;
            return true;
        };
        return covers(h_, other.h_) && covers(v_, other.v_);
    }

    friend bool operator==(const PathEnsemble&, const PathEnsemble&) = default;

  private:
    static Dims check(Dims d)
    {
        if (d.x < 1 || d.y < 1)
            throw std::invalid_argument("PathEnsemble: dimensions must be positive");
        if (d.x >= std::numeric_limits<int>::max() - 1 || d.y >= std::numeric_limits<int>::max() - 1)
            throw std::length_error("PathEnsemble: dimensions overflow");
        return d;
    }

    Dims dims_{};
    BitPlane h_;
    BitPlane v_;
};

/// Boundary crossing counts of the box of columns 1..x and rows 1..y.
struct HeightDecomposition {
    long W = 0;  // entering through the west side
    long N = 0;  // leaving through the north side
    long E = 0;  // leaving through the east side
    long S = 0;  // entering through the south side
    long H = 0;  // E - S == W - N

    friend bool operator==(const HeightDecomposition&, const HeightDecomposition&) = default;
};

inline void check_point(const PathEnsemble& ens, int x, int y)
{
    const Dims d = ens.dims();
    if (x < 0 || y < 0 || x > d.x || y > d.y)
        throw std::out_of_range("point (" + std::to_string(x) + "," + std::to_string(y) +
                                ") outside the ensemble box");
}

inline HeightDecomposition boundary_counts(const PathEnsemble& ens, int x, int y)
{
    check_point(ens, x, y);
    HeightDecomposition c;
    for (int j = 1; j <= y; ++j) {
        c.W += ens.h(1, j);
        c.E += ens.h(x + 1, j);
    }
    for (int i = 1; i <= x; ++i) {
        c.S += ens.v(i, 1);
        c.N += ens.v(i, y + 1);
    }
    c.H = c.E - c.S;
    return c;
}

/// Net flux of arrows across the segment from (0,0) to (x,y), in the E - S form.
inline long height_flux(const PathEnsemble& ens, int x, int y)
{
    check_point(ens, x, y);
    long e = 0, s = 0;
    for (int j = 1; j <= y; ++j)
        e += ens.h(x + 1, j);
    for (int i = 1; i <= x; ++i)
        s += ens.v(i, 1);
    return e - s;
}

}  // namespace s6v
