#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace gac {

namespace detail {

inline long double orient2d(const Point2& a, const Point2& b, const Point2& c) {
    const long double abx = (long double)b.x - a.x;
    const long double aby = (long double)b.y - a.y;
    const long double acx = (long double)c.x - a.x;
    const long double acy = (long double)c.y - a.y;
    return abx * acy - aby * acx;
}

// strict incircle test for a CCW triangle (a, b, c); extended precision
// keeps the Bowyer-Watson cascade stable on near-cocircular inputs
inline bool in_circumcircle(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
    const long double adx = (long double)a.x - p.x, ady = (long double)a.y - p.y;
    const long double bdx = (long double)b.x - p.x, bdy = (long double)b.y - p.y;
    const long double cdx = (long double)c.x - p.x, cdy = (long double)c.y - p.y;
    const long double ad = adx * adx + ady * ady;
    const long double bd = bdx * bdx + bdy * bdy;
    const long double cd = cdx * cdx + cdy * cdy;
    const long double det = adx * (bdy * cd - bd * cdy) -
                            ady * (bdx * cd - bd * cdx) +
                            ad * (bdx * cdy - bdy * cdx);
    return det > 0.0L;
}

struct Tri {
    std::uint32_t a, b, c;
};

} // namespace detail

// Delaunay triangulation via Bowyer-Watson with a super triangle far outside
// the input bounding box; points are inserted in index order so cocircular
// configurations resolve deterministically. triangles_out, when given,
// receives the final triangle list for property checks.
inline SpatialGraph build_delaunay(std::vector<Point2> pts,
                                   std::vector<std::array<std::uint32_t, 3>>* triangles_out =
                                       nullptr) {
    using detail::Tri;
    const std::size_t n = pts.size();
    if (n < 3) throw std::invalid_argument("build_delaunay: need at least 3 points");

    bool non_collinear = false;
    for (std::size_t i = 2; i < n && !non_collinear; ++i)
        if (detail::orient2d(pts[0], pts[1], pts[i]) != 0.0L) non_collinear = true;
    // first two points coincident would also trip the duplicate check later;
    // scan other anchor pairs before declaring the input degenerate
    if (!non_collinear) {
        for (std::size_t i = 1; i < n && !non_collinear; ++i)
            for (std::size_t j = i + 1; j < n && !non_collinear; ++j)
                if (detail::orient2d(pts[0], pts[i], pts[j]) != 0.0L) non_collinear = true;
    }
    if (!non_collinear)
        throw std::invalid_argument("build_delaunay: degenerate input, all points collinear");

    double minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
    for (const auto& p : pts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double cx = 0.5 * (minx + maxx);
    const double cy = 0.5 * (miny + maxy);
    const double span = 64.0 * std::max({maxx - minx, maxy - miny, 1e-6});

    std::vector<Point2> ext = pts;
    const std::uint32_t s0 = std::uint32_t(n), s1 = s0 + 1, s2 = s0 + 2;
    ext.push_back({cx - 2.0 * span, cy - span});
    ext.push_back({cx + 2.0 * span, cy - span});
    ext.push_back({cx, cy + 2.0 * span});

    auto ccw = [&](Tri& t) {
        if (detail::orient2d(ext[t.a], ext[t.b], ext[t.c]) < 0.0L) std::swap(t.b, t.c);
    };

    std::vector<Tri> tris;
    tris.push_back({s0, s1, s2});
    ccw(tris.back());

    std::vector<Tri> keep;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> hole; // boundary edges
    for (std::uint32_t i = 0; i < n; ++i) {
        keep.clear();
        hole.clear();
        std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_uses;
        for (const Tri& t : tris) {
            if (detail::in_circumcircle(ext[t.a], ext[t.b], ext[t.c], ext[i])) {
                auto add = [&](std::uint32_t u, std::uint32_t v) {
                    edge_uses[{std::min(u, v), std::max(u, v)}]++;
                };
                add(t.a, t.b);
                add(t.b, t.c);
                add(t.c, t.a);
            } else {
                keep.push_back(t);
            }
        }
        for (const auto& [e, uses] : edge_uses)
            if (uses == 1) hole.push_back(e);
        tris.swap(keep);
        for (const auto& [u, v] : hole) {
            Tri t{u, v, i};
            if (detail::orient2d(ext[t.a], ext[t.b], ext[t.c]) == 0.0L) continue; // sliver on the hull
            ccw(t);
            tris.push_back(t);
        }
    }

    std::vector<std::vector<std::uint32_t>> adj(n);
    auto link = [&](std::uint32_t u, std::uint32_t v) {
        if (u >= n || v >= n) return; // edge into the super triangle
        adj[u].push_back(v);
        adj[v].push_back(u);
    };
    if (triangles_out) triangles_out->clear();
    for (const Tri& t : tris) {
        link(t.a, t.b);
        link(t.b, t.c);
        link(t.c, t.a);
        if (triangles_out && t.a < n && t.b < n && t.c < n)
            triangles_out->push_back({t.a, t.b, t.c});
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return SpatialGraph(std::move(pts), adj);
}

} // namespace gac
