#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "calculus.hpp"
#include "filters.hpp"

namespace gac {

enum class Smoothing { normalized_gaussian, gaussian_derivative };
enum class CurvatureKind { geometric, gradient_based };

inline const char* to_string(Smoothing s) {
    return s == Smoothing::normalized_gaussian ? "normalized-gaussian" : "gaussian-derivative";
}

inline const char* to_string(CurvatureKind c) {
    return c == CurvatureKind::geometric ? "geometric" : "gradient-based";
}

inline Smoothing parse_smoothing(const std::string& s) {
    if (s == "normalized-gaussian") return Smoothing::normalized_gaussian;
    if (s == "gaussian-derivative") return Smoothing::gaussian_derivative;
    throw std::invalid_argument("unknown smoothing variant '" + s + "'");
}

inline CurvatureKind parse_curvature(const std::string& s) {
    if (s == "geometric") return CurvatureKind::geometric;
    if (s == "gradient-based") return CurvatureKind::gradient_based;
    throw std::invalid_argument("unknown curvature variant '" + s + "'");
}

struct GacConfig {
    double dt = 0.005;        // time step
    double c = 20.0;          // balloon constant
    double sigma = 0.02;      // smoothing scale for the stopping function
    double lambda = 0.05;     // edge sensitivity
    Smoothing smoothing_variant = Smoothing::normalized_gaussian;
    CurvatureKind curvature_variant = CurvatureKind::geometric;
    int max_iters = 2000;
    double flip_fraction = 0.001; // convergence threshold on the sign-flip share
    int patience = 20;            // consecutive quiet iterations required; 0 disables
    double gauss_cutoff = 4.0;    // kernel truncation multiplier

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("GacConfig: dt must be positive");
        if (!(c >= 0.0)) throw std::invalid_argument("GacConfig: c must be nonnegative");
        if (!(sigma > 0.0)) throw std::invalid_argument("GacConfig: sigma must be positive");
        if (!(lambda > 0.0)) throw std::invalid_argument("GacConfig: lambda must be positive");
        if (!(flip_fraction > 0.0 && flip_fraction < 1.0))
            throw std::invalid_argument("GacConfig: flip_fraction must be in (0, 1)");
        if (max_iters < 1) throw std::invalid_argument("GacConfig: max_iters must be at least 1");
        if (patience < 0) throw std::invalid_argument("GacConfig: patience must be nonnegative");
        if (!(gauss_cutoff >= 2.0))
            throw std::invalid_argument("GacConfig: gauss_cutoff must be at least 2");
    }
};

struct GacState {
    int iteration = 0;
    ScalarField u;
    std::vector<double> flip_history; // most recent flip fractions, length <= patience
};

struct RunSummary {
    int iterations = 0;
    double final_flip_fraction = 0.0;
    std::size_t interior_count = 0;
    double wall_ms = 0.0;
    bool converged = false;
    std::string warning;
    GacConfig config;
};

struct StoppingField {
    ScalarField g;
    VectorField grad_g;
};

// signed euclidean distance to the opposite side of the seed set:
// positive inside, negative outside
inline ScalarField init_embedding(const SpatialGraph& g, const std::vector<std::uint8_t>& inside) {
    if (inside.size() != g.size())
        throw std::invalid_argument("init_embedding: seed mask size mismatch");
    std::size_t in_count = 0;
    for (const auto b : inside) in_count += b ? 1 : 0;
    if (in_count == 0) throw std::invalid_argument("init_embedding: seed set is empty");
    if (in_count == g.size())
        throw std::invalid_argument("init_embedding: seed set covers every vertex");

    std::vector<std::uint32_t> ins, outs;
    ins.reserve(in_count);
    outs.reserve(g.size() - in_count);
    for (std::uint32_t v = 0; v < g.size(); ++v) (inside[v] ? ins : outs).push_back(v);

    ScalarField u = make_scalar(g);
    parallel_for(g.size(), [&](std::size_t v) {
        const auto& opposite = inside[v] ? outs : ins;
        double best = std::numeric_limits<double>::infinity();
        for (const std::uint32_t w : opposite) best = std::min(best, dist2(g.pos(v), g.pos(w)));
        u.v[v] = (inside[v] ? 1.0 : -1.0) * std::sqrt(best);
    });
    return u;
}

// edge indicator and its gradient from the smoothed intensity field:
// magnitude of the smoothed gradient, median filtered, pushed through the
// stopping function; grad g combines the fan-gradient direction with the
// max-difference magnitude and is computed once per run
inline StoppingField precompute_stopping(const SpatialGraph& g, const ScalarField& I,
                                         const GacConfig& cfg) {
    cfg.validate();
    require_aligned(g, I, "precompute_stopping");
    const GaussianParams gp{cfg.sigma, cfg.gauss_cutoff};

    ScalarField mag = make_scalar(g);
    if (cfg.smoothing_variant == Smoothing::normalized_gaussian) {
        const ScalarField smooth = gaussian_normalized(g, I, gp);
        mag = gradient_magnitude_maxdiff(g, smooth);
    } else {
        const VectorField dsm = gaussian_derivative_normalized(g, I, gp);
        for (std::size_t v = 0; v < g.size(); ++v) mag.v[v] = std::hypot(dsm.x[v], dsm.y[v]);
    }
    mag = filter_median(g, mag);

    StoppingField out{stopping_function(mag, cfg.lambda), make_vector(g)};
    const VectorField dir = unit_field(gradient_geometric(g, out.g));
    const ScalarField gmag = gradient_magnitude_maxdiff(g, out.g);
    for (std::size_t v = 0; v < g.size(); ++v) {
        out.grad_g.x[v] = gmag.v[v] * dir.x[v];
        out.grad_g.y[v] = gmag.v[v] * dir.y[v];
    }
    return out;
}

// one synchronous update before the trailing median filter:
// u + dt ((kappa - c) |grad u| g + grad_g . grad u), with the gradient
// direction from the fan gradient, magnitude from max difference, and the
// curvature of the filtered unit gradient field
inline ScalarField evolve_update(const SpatialGraph& g, const ScalarField& u,
                                 const StoppingField& stop, const GacConfig& cfg) {
    require_aligned(g, u, "evolve_update");
    const VectorField gradf = filter_vector(g, gradient_geometric(g, u), FilterKind::median);
    const ScalarField magf = filter_median(g, gradient_magnitude_maxdiff(g, u));
    const VectorField F = unit_field(gradf);
    ScalarField kappa = cfg.curvature_variant == CurvatureKind::geometric
                            ? curvature_geometric(g, F)
                            : curvature_gradient_based(g, F);
    kappa = filter_median(g, kappa);

    ScalarField out = make_scalar(g);
    parallel_for(g.size(), [&](std::size_t v) {
        const double transport = stop.grad_g.x[v] * magf.v[v] * F.x[v] +
                                 stop.grad_g.y[v] * magf.v[v] * F.y[v];
        out.v[v] = u.v[v] +
                   cfg.dt * ((kappa.v[v] - cfg.c) * magf.v[v] * stop.g.v[v] + transport);
    });
    return out;
}

// advances the state by one iteration; returns the sign-flip fraction
// measured after the trailing median filter
inline double evolve_step(const SpatialGraph& g, GacState& state, const StoppingField& stop,
                          const GacConfig& cfg) {
    ScalarField next = filter_median(g, evolve_update(g, state.u, stop, cfg));
    const int iter = state.iteration + 1;
    std::size_t flips = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!std::isfinite(next.v[v]))
            throw std::runtime_error("gac evolution diverged at iteration " + std::to_string(iter));
        if ((next.v[v] > 0.0) != (state.u.v[v] > 0.0)) ++flips;
    }
    state.u = std::move(next);
    state.iteration = iter;
    const double frac = g.size() ? double(flips) / double(g.size()) : 0.0;
    state.flip_history.push_back(frac);
    const std::size_t cap = std::size_t(std::max(cfg.patience, 1));
    if (state.flip_history.size() > cap)
        state.flip_history.erase(state.flip_history.begin(),
                                 state.flip_history.end() - cap);
    return frac;
}

using IterationCallback = std::function<void(const GacState&)>;

// full pipeline: stopping field, signed-distance seed, evolve until the flip
// fraction stays under the threshold for `patience` iterations or max_iters
inline std::pair<std::vector<std::uint8_t>, RunSummary> run(
    const SpatialGraph& g, const ScalarField& I, const std::vector<std::uint8_t>& inside,
    const GacConfig& cfg, const IterationCallback& on_iteration = nullptr) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const StoppingField stop = precompute_stopping(g, I, cfg);

    GacState state;
    state.u = init_embedding(g, inside);

    double flip = 0.0;
    bool converged = false;
    int streak = 0;
    for (int r = 0; r < cfg.max_iters; ++r) {
        flip = evolve_step(g, state, stop, cfg);
        if (on_iteration) on_iteration(state);
        if (cfg.patience > 0) {
            streak = flip < cfg.flip_fraction ? streak + 1 : 0;
            if (streak >= cfg.patience) {
                converged = true;
                break;
            }
        }
    }

    std::vector<std::uint8_t> labels(g.size(), 0);
    std::size_t interior = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        labels[v] = state.u.v[v] > 0.0 ? 1 : 0;
        interior += labels[v];
    }

    RunSummary sum;
    sum.iterations = state.iteration;
    sum.final_flip_fraction = flip;
    sum.interior_count = interior;
    sum.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    sum.converged = converged;
    if (!converged && cfg.patience > 0)
        sum.warning = "did not converge within max_iters";
    sum.config = cfg;
    return {std::move(labels), sum};
}

} // namespace gac
