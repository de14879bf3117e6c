#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "field.hpp"
#include "parallel.hpp"

namespace gac {

inline constexpr double unit_eps = 1e-12;

// fan-weighted gradient: (1/pi) * sum_i [(u(w_i) - u(v)) / d_i] * e_i * dphi_i
inline VectorField gradient_geometric(const SpatialGraph& g, const ScalarField& u) {
    require_aligned(g, u, "gradient_geometric");
    VectorField out = make_vector(g);
    parallel_for(g.size(), [&](std::size_t v) {
        double gx = 0.0, gy = 0.0;
        for (const FanEntry& e : g.fan(v)) {
            const double q = (u.v[e.nb] - u.v[v]) / e.dist * e.dphi;
            gx += q * std::cos(e.phi);
            gy += q * std::sin(e.phi);
        }
        out.x[v] = gx / pi;
        out.y[v] = gy / pi;
    });
    return out;
}

// plain neighbor average of difference quotients: (1/N) * sum_i [(u(w_i) - u(v)) / d_i] * e_i
inline VectorField gradient_weighted_sum(const SpatialGraph& g, const ScalarField& u) {
    require_aligned(g, u, "gradient_weighted_sum");
    VectorField out = make_vector(g);
    parallel_for(g.size(), [&](std::size_t v) {
        const NeighborFan f = g.fan(v);
        if (f.empty()) return;
        double gx = 0.0, gy = 0.0;
        for (const FanEntry& e : f) {
            const double q = (u.v[e.nb] - u.v[v]) / e.dist;
            gx += q * std::cos(e.phi);
            gy += q * std::sin(e.phi);
        }
        out.x[v] = gx / double(f.size());
        out.y[v] = gy / double(f.size());
    });
    return out;
}

// gradient magnitude proxy: max over neighbors of |u(w) - u(v)|
inline ScalarField gradient_magnitude_maxdiff(const SpatialGraph& g, const ScalarField& u) {
    require_aligned(g, u, "gradient_magnitude_maxdiff");
    ScalarField out = make_scalar(g);
    parallel_for(g.size(), [&](std::size_t v) {
        double m = 0.0;
        for (const FanEntry& e : g.fan(v)) m = std::max(m, std::abs(u.v[e.nb] - u.v[v]));
        out.v[v] = m;
    });
    return out;
}

// normalizes each vector; zero vector where the norm is at or below eps
inline VectorField unit_field(const VectorField& f, double eps = unit_eps) {
    VectorField out{f.graph_id, std::vector<double>(f.x.size(), 0.0),
                    std::vector<double>(f.y.size(), 0.0)};
    parallel_for(f.x.size(), [&](std::size_t v) {
        const double n = std::hypot(f.x[v], f.y[v]);
        if (n > eps) {
            out.x[v] = f.x[v] / n;
            out.y[v] = f.y[v] / n;
        }
    });
    return out;
}

// divergence of F as outward flux through the fan's sector boundary divided
// by the sector-union area |S(v)| = sum_i (dphi_i / 2) * d_i^2. per neighbor,
// the arc carries F(w_i); the radial segment to the next arc carries the
// normalized mean of the two endpoint vectors (plain mean if it degenerates).
inline ScalarField curvature_geometric(const SpatialGraph& g, const VectorField& F,
                                       std::vector<std::uint8_t>* zero_flag = nullptr) {
    require_aligned(g, F, "curvature_geometric");
    ScalarField out = make_scalar(g);
    if (zero_flag) zero_flag->assign(g.size(), 0);
    parallel_for(g.size(), [&](std::size_t v) {
        const NeighborFan f = g.fan(v);
        if (f.empty()) return;
        if (std::hypot(F.x[v], F.y[v]) <= unit_eps) {
            if (zero_flag) (*zero_flag)[v] = 1;
            return;
        }
        const std::size_t n = f.size();
        double area = 0.0, flux = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const FanEntry& e = f[i];
            const FanEntry& e1 = f[(i + 1) % n];
            const double om = e.omega;
            const double om1 = e.omega + e.dphi; // bisector toward the next neighbor
            area += 0.5 * e.dphi * e.dist * e.dist;

            const double fx = F.x[e.nb], fy = F.y[e.nb];
            flux += e.dist * (fx * (std::sin(om1) - std::sin(om)) +
                              fy * (std::cos(om) - std::cos(om1)));

            double mx = fx + F.x[e1.nb];
            double my = fy + F.y[e1.nb];
            const double mn = std::hypot(mx, my);
            if (mn > unit_eps) {
                mx /= mn;
                my /= mn;
            } else {
                mx *= 0.5;
                my *= 0.5;
            }
            flux += (e1.dist - e.dist) * (mx * std::sin(om1) - my * std::cos(om1));
        }
        out.v[v] = flux / area;
    });
    return out;
}

// divergence via the component gradients: x part of grad(F1) plus y part of grad(F2)
inline ScalarField curvature_gradient_based(const SpatialGraph& g, const VectorField& F) {
    require_aligned(g, F, "curvature_gradient_based");
    ScalarField out = make_scalar(g);
    parallel_for(g.size(), [&](std::size_t v) {
        double acc = 0.0;
        for (const FanEntry& e : g.fan(v)) {
            acc += (F.x[e.nb] - F.x[v]) / e.dist * std::cos(e.phi) * e.dphi;
            acc += (F.y[e.nb] - F.y[v]) / e.dist * std::sin(e.phi) * e.dphi;
        }
        out.v[v] = acc / pi;
    });
    return out;
}

} // namespace gac
