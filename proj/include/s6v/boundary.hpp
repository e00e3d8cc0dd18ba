#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "noise.hpp"

namespace s6v {

/// Lattice vertex (i, j); bulk vertices have i, j >= 1.
struct Vertex {
    int i = 0;
    int j = 0;
    friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Dims {
    int x = 0;  // columns 1..x
    int y = 0;  // rows 1..y
    friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Side { West, South };

/// A boundary slot. West slot k is the vertex (0, k), whose arrow enters (1, k)
/// horizontally; south slot k is (k, 0), whose arrow enters (k, 1) vertically.
struct BoundaryVertex {
    Side side = Side::South;
    int index = 1;

    Vertex position() const { return side == Side::West ? Vertex{0, index} : Vertex{index, 0}; }
    /// First bulk vertex reached from this slot.
    Vertex entry() const { return side == Side::West ? Vertex{1, index} : Vertex{index, 1}; }
    friend bool operator==(const BoundaryVertex&, const BoundaryVertex&) = default;
};

inline BoundaryVertex west_slot(int row) { return {Side::West, row}; }
inline BoundaryVertex south_slot(int col) { return {Side::South, col}; }

/// Parses "(1,0)" / "(0,1)" style coordinates, or "south:3" / "west:2".
inline BoundaryVertex parse_boundary_vertex(const std::string& text)
{
    auto fail = [&] { throw std::invalid_argument("bad boundary vertex '" + text + "'"); };
    if (text.rfind("south:", 0) == 0)
        return south_slot(std::stoi(text.substr(6)));
    if (text.rfind("west:", 0) == 0)
        return west_slot(std::stoi(text.substr(5)));
    std::string s;
    for (char c : text)
        if (c != '(' && c != ')' && c != ' ')
            s.push_back(c);
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        fail();
    const int i = std::stoi(s.substr(0, comma));
    const int j = std::stoi(s.substr(comma + 1));
    if (i == 0 && j > 0)
        return west_slot(j);
    if (j == 0 && i > 0)
        return south_slot(i);
    fail();
    return {};
}

/// Per-slot arrow probability along one axis: piecewise constant segments
/// over a default. Later segments win where they overlap.
class EntryLaw {
  public:
    struct Segment {
        int first;
        int last;  // inclusive
        double p;
    };

    EntryLaw() = default;
    explicit EntryLaw(double default_p) : default_p_(check(default_p)) {}

    EntryLaw& segment(int first, int last, double p)
    {
        if (first < 1 || last < first)
            throw std::invalid_argument("EntryLaw: segment must satisfy 1 <= first <= last");
        segments_.push_back({first, last, check(p)});
        return *this;
    }

    double probability(int k) const
    {
        for (auto it = segments_.rbegin(); it != segments_.rend(); ++it)
            if (k >= it->first && k <= it->last)
                return it->p;
        return default_p_;
    }

    double default_probability() const { return default_p_; }
    const std::vector<Segment>& segments() const { return segments_; }

  private:
    static double check(double p)
    {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("EntryLaw: probability outside [0,1]");
        return p;
    }

    double default_p_ = 0.0;
    std::vector<Segment> segments_;
};

/// Law of the incoming arrows on the two axes plus forced slots.
struct BoundarySpec {
    EntryLaw west;
    EntryLaw south;
    std::vector<std::pair<BoundaryVertex, bool>> overrides;

    static BoundarySpec bernoulli(double b1, double b2) { return {EntryLaw(b1), EntryLaw(b2), {}}; }
    /// Every south slot occupied, every west slot empty.
    static BoundarySpec step() { return {EntryLaw(0.0), EntryLaw(1.0), {}}; }
    static BoundarySpec empty() { return {EntryLaw(0.0), EntryLaw(0.0), {}}; }

    BoundarySpec with(BoundaryVertex slot, bool present) const
    {
        BoundarySpec out = *this;
        std::erase_if(out.overrides, [&](const auto& o) { return o.first == slot; });
        out.overrides.emplace_back(slot, present);
        return out;
    }

    /// Effective probability of an arrow at the slot; overrides are 0 or 1.
    double probability(BoundaryVertex slot) const
    {
        for (const auto& [where, present] : overrides)
            if (where == slot)
                return present ? 1.0 : 0.0;
        return slot.side == Side::West ? west.probability(slot.index) : south.probability(slot.index);
    }

    /// Arrow present iff the slot's boundary uniform is below its probability,
    /// so raising a probability can only add arrows.
    bool draw(BoundaryVertex slot, const NoiseField& noise) const
    {
        const Channel ch = slot.side == Side::West ? Channel::BoundaryWest : Channel::BoundarySouth;
        return s6v::bernoulli(noise.uniform(ch, 0, slot.index), probability(slot));
    }
};

/// True when every slot of `dense` within the box is at least as likely as in `sparse`.
inline bool dominates(const BoundarySpec& dense, const BoundarySpec& sparse, Dims dims)
{
    for (int j = 1; j <= dims.y; ++j)
        if (dense.probability(west_slot(j)) < sparse.probability(west_slot(j)))
            return false;
    for (int i = 1; i <= dims.x; ++i)
        if (dense.probability(south_slot(i)) < sparse.probability(south_slot(i)))
            return false;
    return true;
}

}  // namespace s6v
