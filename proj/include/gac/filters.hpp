#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "parallel.hpp"

namespace gac {

enum class FilterKind { average, median };

namespace detail {

// median of the raw values; even count takes the mean of the two middle ones
inline double median_of(std::vector<double>& buf) {
    std::sort(buf.begin(), buf.end());
    const std::size_t k = buf.size();
    const double lo = buf[(k - 1) / 2];
    const double hi = buf[k / 2];
    return 0.5 * (lo + hi);
}

template <class Get>
inline void neighborhood_filter(const SpatialGraph& g, FilterKind kind, Get&& get,
                                std::vector<double>& out) {
    parallel_chunks(g.size(), [&](std::size_t b, std::size_t e) {
        std::vector<double> buf;
        for (std::size_t v = b; v < e; ++v) {
            const NeighborFan f = g.fan(v);
            if (f.empty()) {
                out[v] = get(v);
                continue;
            }
            if (kind == FilterKind::average) {
                double s = get(v);
                for (const FanEntry& en : f) s += get(en.nb);
                out[v] = s / double(f.size() + 1);
            } else {
                buf.clear();
                buf.push_back(get(v));
                for (const FanEntry& en : f) buf.push_back(get(en.nb));
                out[v] = median_of(buf);
            }
        }
    });
}

} // namespace detail

// mean over the vertex itself and its neighbors; identity on isolated vertices
inline ScalarField filter_average(const SpatialGraph& g, const ScalarField& u) {
    require_aligned(g, u, "filter_average");
    ScalarField out = make_scalar(g);
    detail::neighborhood_filter(g, FilterKind::average, [&](std::size_t i) { return u.v[i]; }, out.v);
    return out;
}

// median over the vertex itself and its neighbors; identity on isolated vertices
inline ScalarField filter_median(const SpatialGraph& g, const ScalarField& u) {
    require_aligned(g, u, "filter_median");
    ScalarField out = make_scalar(g);
    detail::neighborhood_filter(g, FilterKind::median, [&](std::size_t i) { return u.v[i]; }, out.v);
    return out;
}

inline ScalarField filter_scalar(const SpatialGraph& g, const ScalarField& u, FilterKind kind) {
    return kind == FilterKind::average ? filter_average(g, u) : filter_median(g, u);
}

// scalar filter applied to each vector component separately
inline VectorField filter_vector(const SpatialGraph& g, const VectorField& F, FilterKind kind) {
    require_aligned(g, F, "filter_vector");
    VectorField out = make_vector(g);
    detail::neighborhood_filter(g, kind, [&](std::size_t i) { return F.x[i]; }, out.x);
    detail::neighborhood_filter(g, kind, [&](std::size_t i) { return F.y[i]; }, out.y);
    return out;
}

struct GaussianParams {
    double sigma = 0.02;
    double cutoff_mult = 4.0; // truncate the kernel support at cutoff_mult * sigma

    void validate(const char* op) const {
        if (!(sigma > 0.0))
            throw std::invalid_argument(std::string(op) + ": sigma must be positive");
        if (!(cutoff_mult >= 2.0))
            throw std::invalid_argument(std::string(op) + ": cutoff_mult must be at least 2");
    }
};

namespace detail {

inline double gauss_weight(double r2, double sigma) {
    return std::exp(-r2 / (2.0 * sigma * sigma)) / (two_pi * sigma * sigma);
}

// accumulates kernel sums over all vertices within the truncation radius,
// visiting buckets in a fixed order so parallel runs stay deterministic
template <class Accum>
inline void gaussian_scan(const SpatialGraph& g, const GaussianParams& p, Accum&& accum) {
    const double cutoff = p.cutoff_mult * p.sigma;
    const detail::PointGrid grid(g.points(), cutoff);
    const double c2 = cutoff * cutoff;
    parallel_for(g.size(), [&](std::size_t v) {
        const Point2 pv = g.pos(v);
        grid.for_each_near(pv, [&](std::uint32_t w) {
            const double r2 = dist2(pv, g.pos(w));
            if (r2 <= c2) accum(v, w, r2);
        });
    });
}

} // namespace detail

// plain kernel sum: sum_w u(w) * G_sigma(v - w); not normalized, so constants
// are not preserved on irregular graphs
inline ScalarField gaussian_simple(const SpatialGraph& g, const ScalarField& u,
                                   const GaussianParams& p) {
    require_aligned(g, u, "gaussian_simple");
    p.validate("gaussian_simple");
    ScalarField out = make_scalar(g);
    detail::gaussian_scan(g, p, [&](std::size_t v, std::uint32_t w, double r2) {
        out.v[v] += u.v[w] * detail::gauss_weight(r2, p.sigma);
    });
    return out;
}

// untruncated double loop kept as the reference implementation
inline ScalarField gaussian_simple_brute(const SpatialGraph& g, const ScalarField& u, double sigma) {
    require_aligned(g, u, "gaussian_simple_brute");
    ScalarField out = make_scalar(g);
    for (std::size_t v = 0; v < g.size(); ++v) {
        double s = 0.0;
        for (std::size_t w = 0; w < g.size(); ++w)
            s += u.v[w] * detail::gauss_weight(dist2(g.pos(v), g.pos(w)), sigma);
        out.v[v] = s;
    }
    return out;
}

// kernel sum divided by the kernel mass at v; preserves constants exactly
inline ScalarField gaussian_normalized(const SpatialGraph& g, const ScalarField& u,
                                       const GaussianParams& p) {
    require_aligned(g, u, "gaussian_normalized");
    p.validate("gaussian_normalized");
    ScalarField out = make_scalar(g);
    std::vector<double> wsum(g.size(), 0.0);
    detail::gaussian_scan(g, p, [&](std::size_t v, std::uint32_t w, double r2) {
        const double gw = detail::gauss_weight(r2, p.sigma);
        out.v[v] += u.v[w] * gw;
        wsum[v] += gw;
    });
    for (std::size_t v = 0; v < g.size(); ++v)
        out.v[v] = wsum[v] < 1e-300 ? u.v[v] : out.v[v] / wsum[v];
    return out;
}

inline ScalarField gaussian_normalized_brute(const SpatialGraph& g, const ScalarField& u,
                                             double sigma) {
    require_aligned(g, u, "gaussian_normalized_brute");
    ScalarField out = make_scalar(g);
    for (std::size_t v = 0; v < g.size(); ++v) {
        double num = 0.0, den = 0.0;
        for (std::size_t w = 0; w < g.size(); ++w) {
            const double gw = detail::gauss_weight(dist2(g.pos(v), g.pos(w)), sigma);
            num += u.v[w] * gw;
            den += gw;
        }
        out.v[v] = den < 1e-300 ? u.v[v] : num / den;
    }
    return out;
}

namespace detail {

// one smoothed-derivative component: difference of the two per-half-plane
// normalized expectations weighted by |coordinate offset| * kernel.
// values are accumulated relative to the center vertex so the center value
// cancels identically (constant fields map to exact zero); if either half
// has no weight, the component degenerates to zero.
struct HalfPlaneAcc {
    double num_hi = 0.0, den_hi = 0.0;
    double num_lo = 0.0, den_lo = 0.0;

    void add(double delta, double gw, double uw_rel) {
        const double q = std::abs(delta) * gw;
        if (delta >= 0.0) {
            num_hi += q * uw_rel;
            den_hi += q;
        } else {
            num_lo += q * uw_rel;
            den_lo += q;
        }
    }

    double finish() const {
        if (den_hi < 1e-300 || den_lo < 1e-300) return 0.0;
        return num_hi / den_hi - num_lo / den_lo;
    }
};

} // namespace detail

// smoothed gradient via per-half-plane normalized derivative kernels; the
// x component splits the plane at w.x >= v.x, the y component at w.y >= v.y
inline VectorField gaussian_derivative_normalized(const SpatialGraph& g, const ScalarField& u,
                                                  const GaussianParams& p) {
    require_aligned(g, u, "gaussian_derivative_normalized");
    p.validate("gaussian_derivative_normalized");
    VectorField out = make_vector(g);
    const double cutoff = p.cutoff_mult * p.sigma;
    const detail::PointGrid grid(g.points(), cutoff);
    const double c2 = cutoff * cutoff;
    parallel_for(g.size(), [&](std::size_t v) {
        const Point2 pv = g.pos(v);
        detail::HalfPlaneAcc ax, ay;
        grid.for_each_near(pv, [&](std::uint32_t w) {
            const double r2 = dist2(pv, g.pos(w));
            if (r2 > c2) return;
            const double gw = detail::gauss_weight(r2, p.sigma);
            ax.add(g.pos(w).x - pv.x, gw, u.v[w] - u.v[v]);
            ay.add(g.pos(w).y - pv.y, gw, u.v[w] - u.v[v]);
        });
        out.x[v] = ax.finish();
        out.y[v] = ay.finish();
    });
    return out;
}

inline VectorField gaussian_derivative_normalized_brute(const SpatialGraph& g,
                                                        const ScalarField& u, double sigma) {
    require_aligned(g, u, "gaussian_derivative_normalized_brute");
    VectorField out = make_vector(g);
    for (std::size_t v = 0; v < g.size(); ++v) {
        detail::HalfPlaneAcc ax, ay;
        for (std::size_t w = 0; w < g.size(); ++w) {
            const double gw = detail::gauss_weight(dist2(g.pos(v), g.pos(w)), sigma);
            ax.add(g.pos(w).x - g.pos(v).x, gw, u.v[w] - u.v[v]);
            ay.add(g.pos(w).y - g.pos(v).y, gw, u.v[w] - u.v[v]);
        }
        out.x[v] = ax.finish();
        out.y[v] = ay.finish();
    }
    return out;
}

// edge indicator g = 1 / (1 + (m / lambda)^2), mapping gradient magnitude
// into (0, 1] with g(0) = 1 and g(lambda) = 1/2
inline ScalarField stopping_function(const ScalarField& gradmag, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("stopping_function: lambda must be positive");
    ScalarField out{gradmag.graph_id, std::vector<double>(gradmag.v.size(), 0.0)};
    for (std::size_t v = 0; v < gradmag.v.size(); ++v) {
        const double t = gradmag.v[v] / lambda; // ratio form keeps g(lambda) = 1/2 exact
        out.v[v] = 1.0 / (1.0 + t * t);
    }
    return out;
}

} // namespace gac
