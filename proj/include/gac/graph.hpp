#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geom.hpp"
#include "rng.hpp"

namespace gac {

// one neighbor slot of a vertex fan; the fan assigns each neighbor the
// arc [omega, omega + dphi] bounded by bisectors of consecutive directions
struct FanEntry {
    std::uint32_t nb = 0; // neighbor vertex index
    double phi = 0.0;     // edge direction in [0, 2*pi)
    double dist = 0.0;    // euclidean distance, > 0
    double dphi = 0.0;    // arc width (neighbor angle)
    double omega = 0.0;   // arc start angle; may lie outside [0, 2*pi)
};

using NeighborFan = std::span<const FanEntry>;

// fills dphi/omega for a fan sorted by (phi, dist, nb). groups of equal phi
// collapse to one arc owned by the nearest member; the rest get zero-width
// arcs at the group's right boundary so the arcs still chain around 2*pi.
inline void complete_fan(std::span<FanEntry> fan) {
    const std::size_t n = fan.size();
    if (n == 0) return;

    std::size_t groups = 1;
    for (std::size_t i = 1; i < n; ++i)
        if (fan[i].phi != fan[i - 1].phi) ++groups;

    if (groups == 1) { // single direction: the whole circle, centered on phi
        fan[0].dphi = two_pi;
        fan[0].omega = fan[0].phi - pi;
        for (std::size_t i = 1; i < n; ++i) {
            fan[i].dphi = 0.0;
            fan[i].omega = fan[0].phi + pi;
        }
        return;
    }

    std::vector<std::size_t> start; // first index of each direction group
    start.reserve(groups);
    start.push_back(0);
    for (std::size_t i = 1; i < n; ++i)
        if (fan[i].phi != fan[i - 1].phi) start.push_back(i);

    const std::size_t g = start.size();
    auto angle = [&](std::size_t j) { return fan[start[j]].phi; };
    for (std::size_t j = 0; j < g; ++j) {
        const double prev = (j == 0) ? angle(g - 1) - two_pi : angle(j - 1);
        const double next = (j + 1 == g) ? angle(0) + two_pi : angle(j + 1);
        const double om = 0.5 * (angle(j) + prev);
        const double dp = 0.5 * (next - prev);
        const std::size_t lo = start[j];
        const std::size_t hi = (j + 1 == g) ? n : start[j + 1];
        fan[lo].dphi = dp;
        fan[lo].omega = om;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            fan[i].dphi = 0.0;
            fan[i].omega = om + dp;
        }
    }
}

// immutable planar graph with per-vertex neighbor fans in CSR layout.
// neighbors are ordered by ascending direction angle (ties: distance, index).
class SpatialGraph {
public:
    SpatialGraph() = default;

    // adjacency must be symmetric and irreflexive; positions distinct
    SpatialGraph(std::vector<Point2> pts, const std::vector<std::vector<std::uint32_t>>& adj)
        : pts_(std::move(pts)), id_(next_id()) {
        const std::size_t n = pts_.size();
        if (adj.size() != n)
            throw std::invalid_argument("SpatialGraph: adjacency size mismatch");
        check_distinct_positions();

        off_.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) off_[v + 1] = off_[v] + adj[v].size();
        fan_.resize(off_[n]);

        for (std::size_t v = 0; v < n; ++v) {
            FanEntry* f = fan_.data() + off_[v];
            std::size_t k = 0;
            for (std::uint32_t w : adj[v]) {
                if (w >= n || w == v)
                    throw std::invalid_argument("SpatialGraph: bad neighbor index");
                double phi = std::atan2(pts_[w].y - pts_[v].y, pts_[w].x - pts_[v].x);
                if (phi < 0.0) phi += two_pi;
                if (phi >= two_pi) phi = 0.0;
                f[k++] = FanEntry{w, phi, dist(pts_[v], pts_[w]), 0.0, 0.0};
            }
            std::sort(f, f + k, [](const FanEntry& a, const FanEntry& b) {
                if (a.phi != b.phi) return a.phi < b.phi;
                if (a.dist != b.dist) return a.dist < b.dist;
                return a.nb < b.nb;
            });
            complete_fan({f, k});
        }
        check_symmetric();
    }

    std::size_t size() const { return pts_.size(); }
    const Point2& pos(std::size_t v) const { return pts_[v]; }
    const std::vector<Point2>& points() const { return pts_; }
    std::size_t degree(std::size_t v) const { return off_[v + 1] - off_[v]; }
    NeighborFan fan(std::size_t v) const { return {fan_.data() + off_[v], degree(v)}; }
    std::uint64_t id() const { return id_; }
    std::size_t edge_count() const { return fan_.size() / 2; }

    // undirected edge list, src < dst, lexicographically sorted
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        out.reserve(edge_count());
        for (std::uint32_t v = 0; v < pts_.size(); ++v)
            for (const FanEntry& e : fan(v))
                if (v < e.nb) out.emplace_back(v, e.nb);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::uint8_t> isolated_mask() const {
        std::vector<std::uint8_t> m(size());
        for (std::size_t v = 0; v < size(); ++v) m[v] = degree(v) == 0 ? 1 : 0;
        return m;
    }

private:
    static std::uint64_t next_id() {
        static std::atomic<std::uint64_t> counter{1};
        return counter.fetch_add(1);
    }

    void check_distinct_positions() const {
        const std::size_t n = pts_.size();
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (pts_[a].x != pts_[b].x) return pts_[a].x < pts_[b].x;
            if (pts_[a].y != pts_[b].y) return pts_[a].y < pts_[b].y;
            return a < b;
        });
        for (std::size_t i = 1; i < n; ++i) {
            const std::uint32_t a = order[i - 1], b = order[i];
            if (pts_[a].x == pts_[b].x && pts_[a].y == pts_[b].y)
                throw std::invalid_argument(
                    "SpatialGraph: duplicate points at indices " +
                    std::to_string(std::min(a, b)) + " and " + std::to_string(std::max(a, b)));
        }
    }

    void check_symmetric() const {
        for (std::uint32_t v = 0; v < pts_.size(); ++v)
            for (const FanEntry& e : fan(v)) {
                const NeighborFan back = fan(e.nb);
                const bool found = std::any_of(back.begin(), back.end(),
                                               [&](const FanEntry& r) { return r.nb == v; });
                if (!found)
                    throw std::invalid_argument("SpatialGraph: adjacency not symmetric");
            }
    }

    std::vector<Point2> pts_;
    std::vector<std::size_t> off_;
    std::vector<FanEntry> fan_;
    std::uint64_t id_ = 0;
};

inline double rgg_radius(std::size_t n, double C) {
    if (n < 1) throw std::invalid_argument("rgg_radius: n must be at least 1");
    if (!(C > 0.0)) throw std::invalid_argument("rgg_radius: C must be positive");
    return C * std::pow(double(n), -1.0 / 3.0);
}

inline std::vector<Point2> sample_uniform_points(std::size_t n, const Rect& domain,
                                                 std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample_uniform_points: empty input, n must be >= 1");
    domain.require_positive_area("sample_uniform_points");
    Rng rng(seed);
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
        p.x = rng.uniform(domain.x0, domain.x1);
        p.y = rng.uniform(domain.y0, domain.y1);
    }
    return pts;
}

namespace detail {

// uniform grid over the bounding box; cell size >= radius keeps any
// within-radius pair inside a 3x3 cell neighborhood
struct PointGrid {
    double minx = 0.0, miny = 0.0, cell = 1.0;
    int nx = 1, ny = 1;
    std::vector<std::vector<std::uint32_t>> buckets;

    PointGrid(const std::vector<Point2>& pts, double cell_size) {
        minx = miny = 0.0;
        double maxx = 0.0, maxy = 0.0;
        if (!pts.empty()) {
            minx = maxx = pts[0].x;
            miny = maxy = pts[0].y;
            for (const auto& p : pts) {
                minx = std::min(minx, p.x);
                maxx = std::max(maxx, p.x);
                miny = std::min(miny, p.y);
                maxy = std::max(maxy, p.y);
            }
        }
        // cap the grid size so degenerate radii cannot blow up memory
        const double cap = std::sqrt(4.0 * double(pts.size()) + 64.0);
        cell = std::max({cell_size, (maxx - minx) / cap, (maxy - miny) / cap});
        if (!(cell > 0.0)) cell = 1.0;
        nx = int((maxx - minx) / cell) + 1;
        ny = int((maxy - miny) / cell) + 1;
        buckets.resize(std::size_t(nx) * std::size_t(ny));
        for (std::uint32_t i = 0; i < pts.size(); ++i)
            buckets[index_of(pts[i])].push_back(i);
    }

    std::size_t index_of(const Point2& p) const {
        int ix = int((p.x - minx) / cell);
        int iy = int((p.y - miny) / cell);
        ix = std::clamp(ix, 0, nx - 1);
        iy = std::clamp(iy, 0, ny - 1);
        return std::size_t(iy) * nx + ix;
    }

    // visits buckets of the 3x3 neighborhood in a fixed row-major order
    template <class Fn>
    void for_each_near(const Point2& p, Fn&& fn) const {
        int ix = std::clamp(int((p.x - minx) / cell), 0, nx - 1);
        int iy = std::clamp(int((p.y - miny) / cell), 0, ny - 1);
        for (int dy = -1; dy <= 1; ++dy) {
            const int y = iy + dy;
            if (y < 0 || y >= ny) continue;
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = ix + dx;
                if (x < 0 || x >= nx) continue;
                for (std::uint32_t w : buckets[std::size_t(y) * nx + x]) fn(w);
            }
        }
    }
};

} // namespace detail

// random geometric graph: edge iff 0 < d(v,w) <= radius (boundary inclusive)
inline SpatialGraph build_rgg(std::vector<Point2> pts, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("build_rgg: radius must be positive");
    const std::size_t n = pts.size();
    std::vector<std::vector<std::uint32_t>> adj(n);
    if (n > 1) {
        detail::PointGrid grid(pts, radius);
        const double r2 = radius * radius;
        for (std::uint32_t v = 0; v < n; ++v) {
            grid.for_each_near(pts[v], [&](std::uint32_t w) {
                if (w == v) return;
                if (dist2(pts[v], pts[w]) <= r2) adj[v].push_back(w);
            });
        }
    }
    return SpatialGraph(std::move(pts), adj);
}

// graph from an explicit undirected edge list; repeated edges collapse
inline SpatialGraph build_from_edges(std::vector<Point2> pts,
                                     const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    const std::size_t n = pts.size();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : edges) {
        if (a >= n || b >= n)
            throw std::invalid_argument("build_from_edges: vertex index out of range");
        if (a == b)
            throw std::invalid_argument("build_from_edges: self loop at vertex " + std::to_string(a));
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return SpatialGraph(std::move(pts), adj);
}

// connected components of the subgraph induced by mask; returns per-vertex
// component id (-1 outside the mask) and the component count
inline std::pair<std::vector<int>, int> connected_components(const SpatialGraph& g,
                                                             const std::vector<std::uint8_t>& mask) {
    const std::size_t n = g.size();
    if (mask.size() != n)
        throw std::invalid_argument("connected_components: mask size mismatch");
    std::vector<int> comp(n, -1);
    int count = 0;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (!mask[s] || comp[s] != -1) continue;
        comp[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (const FanEntry& e : g.fan(v)) {
                if (mask[e.nb] && comp[e.nb] == -1) {
                    comp[e.nb] = count;
                    stack.push_back(e.nb);
                }
            }
        }
        ++count;
    }
    return {std::move(comp), count};
}

} // namespace gac
