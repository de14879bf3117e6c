#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "calculus.hpp"
#include "filters.hpp"

namespace gac {

struct ErrorRow {
    std::size_t n = 0;
    int trial = 0;
    std::string op;
    std::string filter;
    double e_r = 0.0;
};

using ErrorTable = std::vector<ErrorRow>;

// error energy over signal energy, summed over included vertices
inline double relative_error(const ScalarField& approx, const ScalarField& exact,
                             const std::vector<std::uint8_t>& include) {
    if (approx.v.size() != exact.v.size() || include.size() != exact.v.size())
        throw std::invalid_argument("relative_error: field sizes differ");
    double num = 0.0, den = 0.0;
    for (std::size_t v = 0; v < exact.v.size(); ++v) {
        if (!include[v]) continue;
        const double d = approx.v[v] - exact.v[v];
        num += d * d;
        den += exact.v[v] * exact.v[v];
    }
    if (den == 0.0) throw std::invalid_argument("relative_error: exact field has zero energy");
    return num / den;
}

inline double relative_error(const VectorField& approx, const VectorField& exact,
                             const std::vector<std::uint8_t>& include) {
    if (approx.x.size() != exact.x.size() || include.size() != exact.x.size())
        throw std::invalid_argument("relative_error: field sizes differ");
    double num = 0.0, den = 0.0;
    for (std::size_t v = 0; v < exact.x.size(); ++v) {
        if (!include[v]) continue;
        const double dx = approx.x[v] - exact.x[v];
        const double dy = approx.y[v] - exact.y[v];
        num += dx * dx + dy * dy;
        den += exact.x[v] * exact.x[v] + exact.y[v] * exact.y[v];
    }
    if (den == 0.0) throw std::invalid_argument("relative_error: exact field has zero energy");
    return num / den;
}

namespace detail {

inline std::vector<std::uint8_t> include_mask(const SpatialGraph& g) {
    std::vector<std::uint8_t> m(g.size(), 1);
    for (std::size_t v = 0; v < g.size(); ++v)
        if (g.degree(v) == 0) m[v] = 0; // isolated vertices carry no estimate
    return m;
}

inline ScalarField sample_values(const SpatialGraph& g, const AnalyticField& f) {
    ScalarField u = make_scalar(g);
    for (std::size_t v = 0; v < g.size(); ++v) u.v[v] = f.value(g.pos(v));
    return u;
}

inline VectorField sample_gradient(const SpatialGraph& g, const AnalyticField& f) {
    VectorField e = make_vector(g);
    for (std::size_t v = 0; v < g.size(); ++v) {
        const Vec2 gr = f.gradient(g.pos(v));
        e.x[v] = gr.x;
        e.y[v] = gr.y;
    }
    return e;
}

inline ScalarField sample_curvature(const SpatialGraph& g, const AnalyticField& f) {
    ScalarField e = make_scalar(g);
    for (std::size_t v = 0; v < g.size(); ++v) e.v[v] = f.level_curvature(g.pos(v));
    return e;
}

// one fresh RGG per (size, trial); the stream depends only on (seed, n, trial)
// so trials can run in any order and still reproduce
inline SpatialGraph trial_graph(std::size_t n, double C, std::uint64_t seed, int trial) {
    Rng rng(seed, std::uint64_t(n), std::uint64_t(trial));
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
        p.x = rng.uniform();
        p.y = rng.uniform();
    }
    return build_rgg(std::move(pts), rgg_radius(n, C));
}

} // namespace detail

// raw, average-filtered, and median-filtered fan gradients against the
// analytic gradient, one fresh RGG per (size, trial)
inline ErrorTable gradient_convergence_experiment(const AnalyticField& field,
                                                  const std::vector<std::size_t>& sizes,
                                                  int trials, double C, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("gradient_convergence_experiment: trials < 1");
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw std::invalid_argument("gradient_convergence_experiment: sizes must ascend");
    ErrorTable table;
    for (const std::size_t n : sizes) {
        for (int t = 0; t < trials; ++t) {
            const SpatialGraph g = detail::trial_graph(n, C, seed, t);
            const auto include = detail::include_mask(g);
            const ScalarField u = detail::sample_values(g, field);
            const VectorField exact = detail::sample_gradient(g, field);
            const VectorField grad = gradient_geometric(g, u);
            table.push_back({n, t, "gradient-geometric", "raw",
                             relative_error(grad, exact, include)});
            table.push_back({n, t, "gradient-geometric", "average",
                             relative_error(filter_vector(g, grad, FilterKind::average), exact,
                                            include)});
            table.push_back({n, t, "gradient-geometric", "median",
                             relative_error(filter_vector(g, grad, FilterKind::median), exact,
                                            include)});
        }
    }
    return table;
}

// both curvature operators under both filters; the filter chosen for the
// curvature output is also applied to the input gradient first
inline ErrorTable curvature_convergence_experiment(const AnalyticField& field,
                                                   const std::vector<std::size_t>& sizes,
                                                   int trials, double C, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("curvature_convergence_experiment: trials < 1");
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw std::invalid_argument("curvature_convergence_experiment: sizes must ascend");
    ErrorTable table;
    for (const std::size_t n : sizes) {
        for (int t = 0; t < trials; ++t) {
            const SpatialGraph g = detail::trial_graph(n, C, seed, t);
            const auto include = detail::include_mask(g);
            const ScalarField u = detail::sample_values(g, field);
            const ScalarField exact = detail::sample_curvature(g, field);
            const VectorField grad = gradient_geometric(g, u);
            for (const FilterKind kind : {FilterKind::average, FilterKind::median}) {
                const char* fname = kind == FilterKind::average ? "average" : "median";
                const VectorField F = unit_field(filter_vector(g, grad, kind));
                const ScalarField kg = curvature_geometric(g, F);
                const ScalarField kd = curvature_gradient_based(g, F);
                table.push_back({n, t, "curvature-geometric", fname,
                                 relative_error(filter_scalar(g, kg, kind), exact, include)});
                table.push_back({n, t, "curvature-gradient", fname,
                                 relative_error(filter_scalar(g, kd, kind), exact, include)});
            }
        }
    }
    return table;
}

// summaries over trials for one (n, op, filter) cell
struct ErrorSummary {
    double median = 0.0;
    double mean = 0.0;
    int count = 0;
};

inline ErrorSummary summarize(const ErrorTable& table, std::size_t n, const std::string& op,
                              const std::string& filter) {
    std::vector<double> vals;
    for (const ErrorRow& r : table)
        if (r.n == n && r.op == op && r.filter == filter) vals.push_back(r.e_r);
    ErrorSummary s;
    s.count = int(vals.size());
    if (vals.empty()) return s;
    std::sort(vals.begin(), vals.end());
    s.median = 0.5 * (vals[(vals.size() - 1) / 2] + vals[vals.size() / 2]);
    for (const double v : vals) s.mean += v;
    s.mean /= double(vals.size());
    return s;
}

// least-squares slope of log(median e_r) against log(n)
inline double error_exponent_fit(const ErrorTable& table, const std::string& op,
                                 const std::string& filter) {
    std::vector<std::size_t> sizes;
    for (const ErrorRow& r : table)
        if (r.op == op && r.filter == filter) sizes.push_back(r.n);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < 3)
        throw std::invalid_argument("error_exponent_fit: need at least 3 sizes");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const std::size_t n : sizes) {
        const double x = std::log(double(n));
        const double y = std::log(summarize(table, n, op, filter).median);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = double(sizes.size());
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// quadrature check of the directional-derivative identity: averaging the
// directional derivative times the direction over the circle recovers the
// gradient after dividing by pi
inline Vec2 riemann_gradient_oracle(const Vec2& grad, std::size_t partitions) {
    if (partitions < 8) throw std::invalid_argument("riemann_gradient_oracle: partitions < 8");
    double ax = 0.0, ay = 0.0;
    for (std::size_t k = 0; k < partitions; ++k) {
        const double phi = two_pi * double(k) / double(partitions);
        const double cx = std::cos(phi), sy = std::sin(phi);
        const double d = grad.x * cx + grad.y * sy;
        ax += d * cx;
        ay += d * sy;
    }
    const double scale = two_pi / double(partitions) / pi;
    return {ax * scale, ay * scale};
}

inline Vec2 riemann_gradient_oracle(const AnalyticField& field, const Point2& p,
                                    std::size_t partitions) {
    return riemann_gradient_oracle(field.gradient(p), partitions);
}

} // namespace gac
