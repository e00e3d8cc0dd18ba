#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "analytics.hpp"
#include "boundary.hpp"
#include "couplings.hpp"
#include "ensemble.hpp"
#include "params.hpp"
#include "second_class.hpp"

namespace s6v {

inline constexpr int kOracleCap = 16;  // largest x*y the oracle accepts

struct BoundaryTuple {
    int W = 0, N = 0, E = 0, S = 0;
    friend auto operator<=>(const BoundaryTuple&, const BoundaryTuple&) = default;
};

/// Exact law of H(x,y) and optionally of the boundary counts (W,N,E,S).
struct ExactDistribution {
    std::map<long, long double> pmf;
    std::map<BoundaryTuple, long double> joint;

    long double total() const
    {
        long double s = 0;
        for (const auto& [h, p] : pmf)
            s += p;
        return s;
    }
    long double mean() const
    {
        long double m = 0;
        for (const auto& [h, p] : pmf)
            m += p * h;
        return m;
    }
    long double variance() const
    {
        const long double m = mean();
        long double v = 0;
        for (const auto& [h, p] : pmf)
            v += p * (h - m) * (h - m);
        return v;
    }
    long double probability(long h) const
    {
        const auto it = pmf.find(h);
        return it == pmf.end() ? 0.0L : it->second;
    }
};

namespace detail {

inline void check_cap(int x, int y, const char* where)
{
    if (x < 1 || y < 1)
        throw std::invalid_argument(std::string(where) + ": dimensions must be positive");
    if (static_cast<long>(x) * y > kOracleCap)
        throw std::length_error(std::string(where) + ": x*y exceeds the enumeration cap of " +
                                std::to_string(kOracleCap));
}

/// Row-major dynamic program over the same schedule as the sampler. Branches
/// that reach an identical frontier are merged, so the work is bounded by the
/// number of distinct frontiers rather than the number of outcomes.
///
/// Frontier: column bits (incoming vertical arrows of the current row, or the
/// outgoing ones for columns already processed), horizontal carry, the
/// south bit of column 1, and the running W, E, S counts.
struct Frontier {
    static constexpr int kCarry = 16, kFirstSouth = 17, kW = 18, kE = 24, kS = 30;

    static std::uint64_t cols(std::uint64_t k) { return k & 0xffffu; }
    static bool bit(std::uint64_t k, int b) { return (k >> b) & 1u; }
    static int count(std::uint64_t k, int at) { return static_cast<int>((k >> at) & 0x3fu); }
    static std::uint64_t with_bit(std::uint64_t k, int b, bool on)
    {
        return on ? (k | (std::uint64_t{1} << b)) : (k & ~(std::uint64_t{1} << b));
    }
    static std::uint64_t bump(std::uint64_t k, int at) { return k + (std::uint64_t{1} << at); }
};

using FrontierMap = std::unordered_map<std::uint64_t, long double>;

inline FrontierMap run_frontier(const ModelParams& params, const BoundarySpec& boundary, int x, int y)
{
    using F = Frontier;
    if (x > 16)
        throw std::length_error("oracle: at most 16 columns");
    const long double d1 = params.delta1, d2 = params.delta2;
    FrontierMap cur{{0, 1.0L}}, next;
    auto add = [&](std::uint64_t k, long double p) {
        if (p > 0)
            next[k] += p;
    };
    for (int i = 1; i <= x; ++i) {
        const long double p = boundary.probability(south_slot(i));
        next.clear();
        for (const auto& [k, w] : cur) {
            std::uint64_t on = F::bump(F::with_bit(k, i - 1, true), F::kS);
            if (i == 1)
                on = F::with_bit(on, F::kFirstSouth, true);
            add(on, w * p);
            add(k, w * (1 - p));
        }
        cur.swap(next);
    }
    for (int j = 1; j <= y; ++j) {
        const long double p = boundary.probability(west_slot(j));
        next.clear();
        for (const auto& [k, w] : cur) {
            add(F::bump(F::with_bit(k, F::kCarry, true), F::kW), w * p);
            add(F::with_bit(k, F::kCarry, false), w * (1 - p));
        }
        cur.swap(next);
        for (int i = 1; i <= x; ++i) {
            next.clear();
            for (const auto& [k, w] : cur) {
                const bool vin = F::bit(k, i - 1), hin = F::bit(k, F::kCarry);
                if (vin == hin) {
                    add(k, w);
                    continue;
                }
                const std::uint64_t vert = F::with_bit(F::with_bit(k, i - 1, true), F::kCarry, false);
                const std::uint64_t horz = F::with_bit(F::with_bit(k, i - 1, false), F::kCarry, true);
                if (vin) {
                    add(vert, w * d1);
                    add(horz, w * (1 - d1));
                } else {
                    add(horz, w * d2);
                    add(vert, w * (1 - d2));
                }
            }
            cur.swap(next);
        }
        next.clear();
        for (const auto& [k, w] : cur)
            add(F::bit(k, F::kCarry) ? F::bump(k, F::kE) : k, w);
        cur.swap(next);
    }
    return cur;
}

}  // namespace detail

/// Exact law of H(x,y) by summing over every boundary outcome and every
/// vertex branch with its stochastic weight.
inline ExactDistribution exact_height_dist(const ModelParams& params, const BoundarySpec& boundary, int x, int y,
                                           bool with_joint = false)
{
    using F = detail::Frontier;
    detail::check_cap(x, y, "exact_height_dist");
    const auto frontier = detail::run_frontier(params, boundary, x, y);
    ExactDistribution out;
    for (const auto& [k, w] : frontier) {
        const int n = std::popcount(F::cols(k));
        BoundaryTuple t{F::count(k, F::kW), n, F::count(k, F::kE), F::count(k, F::kS)};
        if (t.W - t.N != t.E - t.S)
            throw std::logic_error("exact_height_dist: conservation failed");
        out.pmf[t.E - t.S] += w;
        if (with_joint)
            out.joint[t] += w;
    }
    return out;
}

/// E[exp(eps H)] of an exact law.
inline long double exact_mgf(const ExactDistribution& dist, long double eps)
{
    long double m = 0;
    for (const auto& [h, p] : dist.pmf)
        m += p * std::exp(eps * h);
    return m;
}

/// Every ensemble on the box with its probability, visited depth first in
/// the sampler's row-major order.
inline void for_each_outcome(const ModelParams& params, const BoundarySpec& boundary, Dims dims,
                             const std::function<void(const PathEnsemble&, long double)>& visit)
{
    detail::check_cap(dims.x, dims.y, "for_each_outcome");
    PathEnsemble ens(dims);
    const long double d1 = params.delta1, d2 = params.delta2;
    const int total = dims.x + dims.y * (dims.x + 1);
    std::function<void(int, long double)> rec = [&](int step, long double w) {
        if (w <= 0)
            return;
        if (step == total) {
            visit(ens, w);
            return;
        }
        if (step < dims.x) {
            const int i = step + 1;
            const long double p = boundary.probability(south_slot(i));
            ens.set_v(i, 1, true);
            rec(step + 1, w * p);
            ens.set_v(i, 1, false);
            rec(step + 1, w * (1 - p));
            return;
        }
        const int r = step - dims.x;
        const int j = r / (dims.x + 1) + 1, c = r % (dims.x + 1);
        if (c == 0) {
            const long double p = boundary.probability(west_slot(j));
            ens.set_h(1, j, true);
            rec(step + 1, w * p);
            ens.set_h(1, j, false);
            rec(step + 1, w * (1 - p));
            return;
        }
        const int i = c;
        const bool vin = ens.v(i, j), hin = ens.h(i, j);
        auto put = [&](bool vo, bool ho, long double pw) {
            ens.set_v(i, j + 1, vo);
            ens.set_h(i + 1, j, ho);
            rec(step + 1, w * pw);
        };
        if (vin == hin)
            put(vin, hin, 1);
        else if (vin) {
            put(true, false, d1);
            put(false, true, 1 - d1);
        } else {
            put(false, true, d2);
            put(true, false, 1 - d2);
        }
        ens.set_v(i, j + 1, false);
        ens.set_h(i + 1, j, false);
    };
    rec(0, 1.0L);
}

/// Every basic-coupled pair with its probability. Boundary slots share one
/// uniform; each vertex shares its vertical and horizontal uniforms.
inline void for_each_coupled_outcome(const ModelParams& params, const BoundarySpec& dense,
                                     const BoundarySpec& sparse, Dims dims,
                                     const std::function<void(const CoupledEnsembles&, long double)>& visit)
{
    detail::check_cap(dims.x, dims.y, "for_each_coupled_outcome");
    if (!dominates(dense, sparse, dims))
        throw std::invalid_argument("for_each_coupled_outcome: dense does not dominate sparse");
    CoupledEnsembles pair{PathEnsemble(dims), PathEnsemble(dims), 0};
    const long double d1 = params.delta1, d2 = params.delta2;
    const int total = dims.x + dims.y * (dims.x + 1);
    std::function<void(int, long double)> rec = [&](int step, long double w) {
        if (w <= 0)
            return;
        if (step == total) {
            visit(pair, w);
            return;
        }
        auto slot_branch = [&](BoundaryVertex slot, auto set) {
            const long double pd = dense.probability(slot), ps = sparse.probability(slot);
            set(true, true);
            rec(step + 1, w * ps);
            set(true, false);
            rec(step + 1, w * (pd - ps));
            set(false, false);
            rec(step + 1, w * (1 - pd));
        };
        if (step < dims.x) {
            const int i = step + 1;
            slot_branch(south_slot(i), [&](bool a, bool b) {
                pair.xi.set_v(i, 1, a);
                pair.eta.set_v(i, 1, b);
            });
            return;
        }
        const int r = step - dims.x;
        const int j = r / (dims.x + 1) + 1, c = r % (dims.x + 1);
        if (c == 0) {
            slot_branch(west_slot(j), [&](bool a, bool b) {
                pair.xi.set_h(1, j, a);
                pair.eta.set_h(1, j, b);
            });
            return;
        }
        const int i = c;
        // Branch over the two vertex events {U_v < delta1} and {U_h < delta2}.
        for (int vb = 0; vb < 2; ++vb)
            for (int hb = 0; hb < 2; ++hb) {
                const long double pw = (vb ? d1 : 1 - d1) * (hb ? d2 : 1 - d2);
                if (pw <= 0)
                    continue;
                for (PathEnsemble* e : {&pair.xi, &pair.eta}) {
                    const bool vin = e->v(i, j), hin = e->h(i, j);
                    bool vo = vin, ho = hin;
                    if (vin != hin) {
                        vo = vin ? vb == 1 : hb == 0;
                        ho = !vo;
                    }
                    e->set_v(i, j + 1, vo);
                    e->set_h(i + 1, j, ho);
                }
                rec(step + 1, w * pw);
            }
    };
    rec(0, 1.0L);
}

/// Exact exit law of the second-class particle started at v0 on top of the
/// boundary law `base` (which must leave v0 empty).
inline std::map<std::pair<int, int>, long double> exact_second_class_exit(const ModelParams& params,
                                                                          const BoundarySpec& base,
                                                                          BoundaryVertex v0, Dims dims)
{
    if (base.probability(v0) != 0.0)
        throw std::invalid_argument("exact_second_class_exit: base law must leave v0 empty");
    std::map<std::pair<int, int>, long double> law;
    for_each_coupled_outcome(params, base.with(v0, true), base, dims,
                             [&](const CoupledEnsembles& pair, long double w) {
                                 const GreyPathSet grey = grey_discrepancies(pair, v0);
                                 const GreyPath* p = grey.find(0);
                                 SecondClassTrace t{v0, p->vertices, {}};
                                 const ExitRecord e = exit_point(t, dims);
                                 law[{static_cast<int>(e.side), e.coordinate}] += w;
                             });
    return law;
}

/// Deviations of the exact law from the product-Bernoulli statement along
/// every down-right corner of the box.
struct StationarityCheck {
    long double max_marginal_error = 0;       // |P(edge) - b|
    long double max_factorization_error = 0;  // |P(all family edges) - product| over all patterns
    long double max_pairwise_error = 0;       // |P(e and f) - P(e)P(f)|
    int corners = 0;
};

/// For each corner (cx, cy) the family {h(cx, i) : i >= cy} and
/// {v(i, cy) : i >= cx} inside the box.
inline StationarityCheck exact_stationarity_check(const ModelParams& params, double b1, double b2, Dims dims)
{
    detail::check_cap(dims.x, dims.y, "exact_stationarity_check");
    struct Edge {
        bool horizontal;
        int i, j;
    };
    std::vector<std::vector<Edge>> families;
    for (int cx = 1; cx <= dims.x + 1; ++cx)
        for (int cy = 1; cy <= dims.y + 1; ++cy) {
            std::vector<Edge> fam;
            for (int i = cy; i <= dims.y; ++i)
                fam.push_back({true, cx, i});
            for (int i = cx; i <= dims.x; ++i)
                fam.push_back({false, i, cy});
            if (!fam.empty())
                families.push_back(std::move(fam));
        }
    std::vector<std::vector<long double>> pattern(families.size());
    for (std::size_t f = 0; f < families.size(); ++f)
        pattern[f].assign(std::size_t{1} << families[f].size(), 0.0L);

    for_each_outcome(params, BoundarySpec::bernoulli(b1, b2), dims, [&](const PathEnsemble& e, long double w) {
        for (std::size_t f = 0; f < families.size(); ++f) {
            std::size_t code = 0;
            for (std::size_t k = 0; k < families[f].size(); ++k) {
                const Edge& ed = families[f][k];
                if (ed.horizontal ? e.h(ed.i, ed.j) : e.v(ed.i, ed.j))
                    code |= std::size_t{1} << k;
            }
            pattern[f][code] += w;
        }
    });

    StationarityCheck out;
    out.corners = static_cast<int>(families.size());
    for (std::size_t f = 0; f < families.size(); ++f) {
        const auto& fam = families[f];
        const std::size_t m = fam.size();
        std::vector<long double> marg(m, 0.0L);
        for (std::size_t code = 0; code < pattern[f].size(); ++code)
            for (std::size_t k = 0; k < m; ++k)
                if (code >> k & 1u)
                    marg[k] += pattern[f][code];
        for (std::size_t k = 0; k < m; ++k) {
            const long double b = fam[k].horizontal ? b1 : b2;
            out.max_marginal_error = std::max(out.max_marginal_error, std::fabs(marg[k] - b));
        }
        for (std::size_t code = 0; code < pattern[f].size(); ++code) {
            long double prod = 1;
            for (std::size_t k = 0; k < m; ++k) {
                const long double b = fam[k].horizontal ? b1 : b2;
                prod *= (code >> k & 1u) ? b : 1 - b;
            }
            out.max_factorization_error =
                std::max(out.max_factorization_error, std::fabs(pattern[f][code] - prod));
        }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t c = a + 1; c < m; ++c) {
                long double both = 0;
                for (std::size_t code = 0; code < pattern[f].size(); ++code)
                    if ((code >> a & 1u) && (code >> c & 1u))
                        both += pattern[f][code];
                out.max_pairwise_error = std::max(out.max_pairwise_error, std::fabs(both - marg[a] * marg[c]));
            }
    }
    return out;
}

/// Both sides of the two-point identity, computed exactly.
struct TwoPointExact {
    long double S = 0;          // Cov(v(x, y+1), v(1, 1))
    long double laplacian = 0;  // Var H(x,y) - 2 Var H(x-1,y) + Var H(x-2,y)
    long double residual() const { return laplacian - 2 * S; }
};

/// Runs the dynamic program on the x by y box, which carries H(x-2,y),
/// H(x-1,y), H(x,y) and both indicators of the covariance.
inline TwoPointExact exact_two_point(const ModelParams& params, double b1, double b2, int x, int y)
{
    using F = detail::Frontier;
    if (x < 2)
        throw std::invalid_argument("exact_two_point: requires x - 1 >= 1");
    detail::check_cap(x, y, "exact_two_point");
    const bool degenerate = b2 <= 0.0 || b2 >= 1.0;
    if (!degenerate) {
        const double beta1 = b1 / (1.0 - b1), beta2 = b2 / (1.0 - b2);
        if (std::fabs(beta1 - params.kappa * beta2) > 1e-12 * std::max(1.0, beta1))
            throw std::domain_error("exact_two_point: (b1, b2) is not a stationary pair");
    }
    const auto frontier = detail::run_frontier(params, BoundarySpec::bernoulli(b1, b2), x, y);
    long double m[3] = {0, 0, 0}, s2[3] = {0, 0, 0};
    long double p_top = 0, p_first = 0, p_both = 0;
    for (const auto& [k, w] : frontier) {
        const std::uint64_t cols = F::cols(k);
        const long W = F::count(k, F::kW);
        for (int d = 0; d < 3; ++d) {
            const int cx = x - 2 + d;
            const long n = std::popcount(cols & ((std::uint64_t{1} << cx) - 1));
            const long h = W - n;
            m[d] += w * h;
            s2[d] += w * h * h;
        }
        const bool top = (cols >> (x - 1)) & 1u;
        const bool first = F::bit(k, F::kFirstSouth);
        p_top += top ? w : 0;
        p_first += first ? w : 0;
        p_both += (top && first) ? w : 0;
    }
    TwoPointExact out;
    long double var[3];
    for (int d = 0; d < 3; ++d)
        var[d] = s2[d] - m[d] * m[d];
    out.laplacian = var[2] - 2 * var[1] + var[0];
    out.S = p_both - p_top * p_first;
    return out;
}

}  // namespace s6v
