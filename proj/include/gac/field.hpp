#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace gac {

// per-vertex scalar values tagged with the graph they belong to
struct ScalarField {
    std::uint64_t graph_id = 0;
    std::vector<double> v;
};

// per-vertex 2-vectors, components stored separately
struct VectorField {
    std::uint64_t graph_id = 0;
    std::vector<double> x, y;
};

inline ScalarField make_scalar(const SpatialGraph& g, double fill = 0.0) {
    return ScalarField{g.id(), std::vector<double>(g.size(), fill)};
}

inline VectorField make_vector(const SpatialGraph& g) {
    return VectorField{g.id(), std::vector<double>(g.size(), 0.0),
                       std::vector<double>(g.size(), 0.0)};
}

inline void require_aligned(const SpatialGraph& g, const ScalarField& f, const char* op) {
    if (f.graph_id != g.id() || f.v.size() != g.size())
        throw std::invalid_argument(std::string(op) + ": scalar field not aligned with graph");
}

inline void require_aligned(const SpatialGraph& g, const VectorField& f, const char* op) {
    if (f.graph_id != g.id() || f.x.size() != g.size() || f.y.size() != g.size())
        throw std::invalid_argument(std::string(op) + ": vector field not aligned with graph");
}

} // namespace gac
