#pragma once

#include <algorithm>
#include <climits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "boundary.hpp"
#include "ensemble.hpp"
#include "noise.hpp"
#include "params.hpp"
#include "sampler.hpp"

namespace s6v {

/// Two ensembles driven by the same vertex and boundary uniforms.
struct CoupledEnsembles {
    PathEnsemble xi;   // denser
    PathEnsemble eta;  // sparser
    std::uint64_t seed = 0;
};

/// Samples both boundary laws with shared noise. Domination of the laws
/// propagates to every edge of the box.
inline CoupledEnsembles basic_couple(const ModelParams& params, const BoundarySpec& dense,
                                     const BoundarySpec& sparse, Dims dims, const NoiseField& noise)
{
    if (!dominates(dense, sparse, dims))
        throw std::invalid_argument("basic_couple: dense boundary law does not dominate the sparse one");
    return {sample_ensemble(params, dense, dims, noise), sample_ensemble(params, sparse, dims, noise),
            noise.seed()};
}

/// One discrepancy path, from its boundary slot to the first vertex outside
/// the box.
struct GreyPath {
    int label = 0;
    BoundaryVertex start;
    std::vector<Vertex> vertices;  // start position first, exit vertex last
};

/// Decomposition of the edges of xi that are absent from eta.
///
/// Paths are ordered northwest to southeast. The path through the reference
/// slot carries label 0, paths to its northwest negative labels.
class GreyPathSet {
  public:
    static constexpr int kNoLabel = INT_MIN;

    GreyPathSet() = default;
    explicit GreyPathSet(Dims dims)
        : dims_(dims), h_label_(static_cast<std::size_t>(dims.x + 1) * dims.y, kNoLabel),
          v_label_(static_cast<std::size_t>(dims.x) * (dims.y + 1), kNoLabel)
    {
    }

    Dims dims() const { return dims_; }
    const std::vector<GreyPath>& paths() const { return paths_; }
    bool empty() const { return paths_.empty(); }

    /// Label of the grey edge entering (i, j) horizontally / vertically.
    int h_label(int i, int j) const { return h_label_[hidx(i, j)]; }
    int v_label(int i, int j) const { return v_label_[vidx(i, j)]; }
    bool grey_h(int i, int j) const { return h_label(i, j) != kNoLabel; }
    bool grey_v(int i, int j) const { return v_label(i, j) != kNoLabel; }

    const GreyPath* find(int label) const
    {
        for (const auto& p : paths_)
            if (p.label == label)
                return &p;
        return nullptr;
    }

    /// Net grey flux across the segment (0,0)-(x,y), computed from the paths
    /// rather than the edge planes.
    long flux(int x, int y) const
    {
        long total = 0;
        for (const auto& p : paths_) {
            if (p.start.side == Side::South && p.start.index <= x)
                --total;
            for (std::size_t k = 1; k < p.vertices.size(); ++k) {
                const Vertex a = p.vertices[k - 1], b = p.vertices[k];
                if (a.i == x && b.i == x + 1 && a.j >= 1 && a.j <= y)
                    ++total;
            }
        }
        return total;
    }

  private:
    friend GreyPathSet grey_discrepancies(const CoupledEnsembles&, std::optional<BoundaryVertex>);

    std::size_t hidx(int i, int j) const { return static_cast<std::size_t>(j - 1) * (dims_.x + 1) + (i - 1); }
    std::size_t vidx(int i, int j) const { return static_cast<std::size_t>(j - 1) * dims_.x + (i - 1); }

    Dims dims_{};
    std::vector<GreyPath> paths_;
    std::vector<int> h_label_;
    std::vector<int> v_label_;
};

/// Splits xi - eta into non-crossing up-right paths. Where two grey arrows
/// meet, the one from the south leaves east and the one from the west leaves
/// north, which makes the decomposition unique.
inline GreyPathSet grey_discrepancies(const CoupledEnsembles& pair, std::optional<BoundaryVertex> reference = {})
{
    const PathEnsemble& xi = pair.xi;
    const PathEnsemble& eta = pair.eta;
    if (!xi.dominates(eta))
        throw std::logic_error("grey_discrepancies: coupled pair violates domination");
    const Dims d = xi.dims();
    auto gh = [&](int i, int j) { return xi.h(i, j) && !eta.h(i, j); };
    auto gv = [&](int i, int j) { return xi.v(i, j) && !eta.v(i, j); };

    GreyPathSet set(d);
    std::vector<BoundaryVertex> starts;
    for (int j = d.y; j >= 1; --j)
        if (gh(1, j))
            starts.push_back(west_slot(j));
    for (int i = 1; i <= d.x; ++i)
        if (gv(i, 1))
            starts.push_back(south_slot(i));

    int offset = 0;
    if (reference) {
        const auto it = std::find(starts.begin(), starts.end(), *reference);
        if (it != starts.end())
            offset = static_cast<int>(it - starts.begin());
    }

    for (std::size_t rank = 0; rank < starts.size(); ++rank) {
        GreyPath path;
        path.label = static_cast<int>(rank) - offset;
        path.start = starts[rank];
        path.vertices.push_back(path.start.position());
        Vertex at = path.start.entry();
        bool from_south = path.start.side == Side::South;
        if (from_south)
            set.v_label_[set.vidx(at.i, at.j)] = path.label;
        else
            set.h_label_[set.hidx(at.i, at.j)] = path.label;
        while (at.i <= d.x && at.j <= d.y) {
            path.vertices.push_back(at);
            const bool two_in = gh(at.i, at.j) && gv(at.i, at.j);
            bool go_east;
            if (two_in)
                go_east = from_south;
            else
                go_east = gh(at.i + 1, at.j);
            if (go_east) {
                at = {at.i + 1, at.j};
                set.h_label_[set.hidx(at.i, at.j)] = path.label;
            } else {
                at = {at.i, at.j + 1};
                set.v_label_[set.vidx(at.i, at.j)] = path.label;
            }
            from_south = !go_east;
        }
        path.vertices.push_back(at);
        set.paths_.push_back(std::move(path));
    }
    return set;
}

/// Grey flux computed directly from the edge planes; equals H_xi - H_eta.
inline long height_difference(const CoupledEnsembles& pair, int x, int y)
{
    return height_flux(pair.xi, x, y) - height_flux(pair.eta, x, y);
}

}  // namespace s6v
