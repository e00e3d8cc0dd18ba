#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boundary.hpp"
#include "couplings.hpp"
#include "ensemble.hpp"
#include "noise.hpp"
#include "params.hpp"
#include "sampler.hpp"

namespace s6v {

enum class ExitSide { North, East };

inline const char* exit_side_name(ExitSide s) { return s == ExitSide::North ? "north" : "east"; }

/// North exits carry the column X of the crossing of j = y+1/2, east exits
/// the row Y of the crossing of i = x+1/2.
struct ExitRecord {
    ExitSide side = ExitSide::North;
    int coordinate = 0;
    friend bool operator==(const ExitRecord&, const ExitRecord&) = default;
};

/// Up-right path of one second-class particle, one vertex per antidiagonal.
/// vertices[0] is the boundary slot; the last vertex lies outside the box.
/// labels[k] is the grey-path label of the edge into vertices[k+1] when the
/// construction knows it, and is empty otherwise.
struct SecondClassTrace {
    BoundaryVertex start;
    std::vector<Vertex> vertices;
    std::vector<int> labels;

    int antidiagonal(std::size_t k) const { return vertices[k].i + vertices[k].j; }

    /// Vertex on antidiagonal n, if the trace visits it.
    std::optional<Vertex> at_antidiagonal(int n) const
    {
        if (vertices.empty())
            return std::nullopt;
        const long k = static_cast<long>(n) - antidiagonal(0);
        if (k < 0 || k >= static_cast<long>(vertices.size()))
            return std::nullopt;
        return vertices[static_cast<std::size_t>(k)];
    }

    friend bool operator==(const SecondClassTrace&, const SecondClassTrace&) = default;
};

inline ExitRecord exit_point(const SecondClassTrace& trace, Dims dims)
{
    if (trace.vertices.size() < 2)
        throw std::invalid_argument("exit_point: truncated trace");
    for (std::size_t k = 1; k < trace.vertices.size(); ++k) {
        const Vertex a = trace.vertices[k - 1], b = trace.vertices[k];
        const bool east = b.i == a.i + 1 && b.j == a.j;
        const bool north = b.i == a.i && b.j == a.j + 1;
        if (!east && !north)
            throw std::invalid_argument("exit_point: trace is not an up-right lattice path");
    }
    const Vertex last = trace.vertices.back();
    const Vertex prev = trace.vertices[trace.vertices.size() - 2];
    const bool prev_inside = prev.i <= dims.x && prev.j <= dims.y;
    if (prev_inside && last.j == dims.y + 1 && last.i <= dims.x)
        return {ExitSide::North, last.i};
    if (prev_inside && last.i == dims.x + 1 && last.j <= dims.y)
        return {ExitSide::East, last.j};
    throw std::invalid_argument("exit_point: trace does not end on the box exit");
}

namespace detail {

inline void check_slot(BoundaryVertex v0, Dims dims)
{
    const int limit = v0.side == Side::West ? dims.y : dims.x;
    if (v0.index < 1 || v0.index > limit)
        throw std::out_of_range("second-class start slot outside the box");
}

inline bool inside(Vertex v, Dims d) { return v.i >= 1 && v.j >= 1 && v.i <= d.x && v.j <= d.y; }

inline Vertex step(Vertex v, bool east) { return east ? Vertex{v.i + 1, v.j} : Vertex{v.i, v.j + 1}; }

}  // namespace detail

/// Grey particle added to eta at v0, moved by the vertex uniforms of eta's
/// own sample. Alone at a vertex it goes straight with the vertex weight of
/// its direction; next to a black arrow it takes the free outgoing edge.
inline SecondClassTrace second_class_direct(const ModelParams& params, const PathEnsemble& eta, BoundaryVertex v0,
                                            const NoiseField& noise)
{
    const Dims d = eta.dims();
    detail::check_slot(v0, d);
    if (eta.boundary_arrow(v0))
        throw std::invalid_argument("second_class_direct: v0 is occupied in eta");
    const detail::VertexRule rule(params, noise);
    SecondClassTrace t{v0, {v0.position()}, {}};
    Vertex at = v0.entry();
    bool from_south = v0.side == Side::South;
    while (detail::inside(at, d)) {
        t.vertices.push_back(at);
        const bool other = from_south ? eta.h(at.i, at.j) : eta.v(at.i, at.j);
        bool east;
        if (other)
            east = eta.v(at.i, at.j + 1);
        else if (from_south)
            east = !rule.vertical_through(at.i, at.j);
        else
            east = rule.horizontal_through(at.i, at.j);
        at = detail::step(at, east);
        from_south = !east;
    }
    t.vertices.push_back(at);
    return t;
}

/// Walk along the black arrows of xi_plus starting on the arrow through v0.
/// At a vertex holding two arrows it leaves east w.p. delta1 when it came
/// from the west and north w.p. delta2 when it came from the south.
inline SecondClassTrace antiparticle_walk(const ModelParams& params, const PathEnsemble& xi_plus, BoundaryVertex v0,
                                          const NoiseField& noise, std::uint64_t walker = 0)
{
    const Dims d = xi_plus.dims();
    detail::check_slot(v0, d);
    if (!xi_plus.boundary_arrow(v0))
        throw std::invalid_argument("antiparticle_walk: v0 is empty in xi_plus");
    const ChannelKey walk = noise.channel(Channel::Walk);
    SecondClassTrace t{v0, {v0.position()}, {}};
    Vertex at = v0.entry();
    bool from_south = v0.side == Side::South;
    while (detail::inside(at, d)) {
        t.vertices.push_back(at);
        const bool other = from_south ? xi_plus.h(at.i, at.j) : xi_plus.v(at.i, at.j);
        bool east;
        if (other) {
            const double u = walk.uniform(0, at.i + at.j, walker);
            east = from_south ? !bernoulli(u, params.delta2) : bernoulli(u, params.delta1);
        } else {
            east = xi_plus.h(at.i + 1, at.j);
        }
        at = detail::step(at, east);
        from_south = !east;
    }
    t.vertices.push_back(at);
    return t;
}

/// Output of the concavity coupling. `a` is the second-class particle of the
/// denser system, `b` that of the sparser one.
struct ConcavityResult {
    SecondClassTrace a;
    SecondClassTrace b;
    CoupledEnsembles pair;
};

/// Joint construction of the second-class particles of xi0_minus + v0 and
/// eta0 + v0. Both walkers move on the grey paths of the coupled pair and
/// switch paths only where two grey paths meet; labels satisfy a(n) >= b(n).
inline ConcavityResult concavity_couple(const ModelParams& params, const BoundarySpec& xi0_minus,
                                        const BoundarySpec& eta0, BoundaryVertex v0, Dims dims,
                                        const NoiseField& noise)
{
    const double d1 = params.delta1, d2 = params.delta2;
    if (!(d1 < 1.0 && d1 > d2 && d2 >= 0.0))
        throw std::domain_error("concavity_couple: requires 1 > delta1 > delta2 >= 0");
    if (d2 > 0.5)
        throw std::domain_error("concavity_couple: requires delta2 <= 1/2");
    detail::check_slot(v0, dims);
    if (xi0_minus.probability(v0) != 0.0 || eta0.probability(v0) != 0.0)
        throw std::invalid_argument("concavity_couple: boundary laws must leave v0 empty");
    if (!dominates(xi0_minus, eta0, dims))
        throw std::invalid_argument("concavity_couple: xi0_minus does not dominate eta0");

    ConcavityResult out;
    out.pair = basic_couple(params, xi0_minus.with(v0, true), eta0, dims, noise);
    const GreyPathSet grey = grey_discrepancies(out.pair, v0);
    const ChannelKey walk = noise.channel(Channel::Walk);

    struct Walker {
        Vertex at;
        bool from_south;
        bool done = false;
        SecondClassTrace trace;
    };
    auto init = [&] {
        Walker w{v0.entry(), v0.side == Side::South, false, {v0, {v0.position()}, {0}}};
        return w;
    };
    Walker a = init(), b = init();

    auto label_in = [&](Vertex v, bool from_south) {
        return from_south ? grey.v_label(v.i, v.j) : grey.h_label(v.i, v.j);
    };
    auto advance = [&](Walker& w, bool east) {
        w.trace.vertices.push_back(w.at);
        w.at = detail::step(w.at, east);
        w.from_south = !east;
        w.trace.labels.push_back(label_in(w.at, w.from_south));
    };
    // With one grey arrow at the vertex its path has a single grey way out.
    auto forced = [&](Vertex v) { return grey.grey_h(v.i + 1, v.j); };
    auto two_grey = [&](Vertex v) { return grey.grey_h(v.i, v.j) && grey.grey_v(v.i, v.j); };
    auto single = [&](Walker& w, double from_west_east, double from_south_north, std::uint64_t id) {
        const Vertex v = w.at;
        bool east;
        if (two_grey(v)) {
            const double u = walk.uniform(0, v.i + v.j, id);
            east = w.from_south ? !bernoulli(u, from_south_north) : bernoulli(u, from_west_east);
        } else {
            east = forced(v);
        }
        advance(w, east);
    };

    while (true) {
        a.done = !detail::inside(a.at, dims);
        b.done = !detail::inside(b.at, dims);
        if (a.done && b.done)
            break;
        if (!a.done && !b.done && a.at == b.at && two_grey(a.at)) {
            const Vertex v = a.at;
            const double u = walk.uniform(0, v.i + v.j, 2);
            bool a_east, b_east;
            if (!a.from_south && !b.from_south) {
                a_east = u >= 1.0 - d1;
                b_east = u >= 1.0 - d2;
            } else if (a.from_south && b.from_south) {
                a_east = u >= d2;
                b_east = u >= d1;
            } else if (a.from_south && !b.from_south) {
                a_east = u >= d2;
                b_east = u >= 1.0 - d2;
            } else {
                throw std::logic_error("concavity_couple: walker ordering violated");
            }
            advance(a, a_east);
            advance(b, b_east);
            continue;
        }
        if (!a.done)
            single(a, d1, d2, 0);
        if (!b.done)
            single(b, d2, d1, 1);
    }
    a.trace.vertices.push_back(a.at);
    b.trace.vertices.push_back(b.at);
    out.a = std::move(a.trace);
    out.b = std::move(b.trace);
    return out;
}

/// a is weakly southeast of b on every common antidiagonal and carries the
/// larger (or equal) label there.
inline bool southeast_ordered(const SecondClassTrace& a, const SecondClassTrace& b)
{
    const std::size_t n = std::min(a.vertices.size(), b.vertices.size());
    for (std::size_t k = 0; k < n; ++k)
        if (a.vertices[k].i < b.vertices[k].i)
            return false;
    const std::size_t m = std::min(a.labels.size(), b.labels.size());
    for (std::size_t k = 0; k < m; ++k)
        if (a.labels[k] < b.labels[k])
            return false;
    return true;
}

inline void write_trace_csv(std::ostream& os, const SecondClassTrace& t, bool header = true)
{
    if (header)
        os << "n,i,j,label\n";
    for (std::size_t k = 0; k < t.vertices.size(); ++k) {
        os << t.antidiagonal(k) << ',' << t.vertices[k].i << ',' << t.vertices[k].j << ',';
        if (k == 0)
            os << (t.labels.empty() ? "" : "0");
        else if (k - 1 < t.labels.size())
            os << t.labels[k - 1];
        os << '\n';
    }
}

inline void write_exit_csv(std::ostream& os, const std::vector<std::pair<std::uint64_t, ExitRecord>>& exits)
{
    os << "seed,side,coordinate\n";
    for (const auto& [seed, e] : exits)
        os << seed << ',' << exit_side_name(e.side) << ',' << e.coordinate << '\n';
}

}  // namespace s6v
