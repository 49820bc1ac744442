#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "routelab/graph.hpp"

namespace routelab {

struct Route {
    std::vector<int> nodes;
    double total_weight = 0.0;

    int hops() const { return static_cast<int>(nodes.size()) - 1; }
};

class NoPathError : public std::runtime_error {
public:
    NoPathError(int s, int d)
        : std::runtime_error("no path from " + std::to_string(s) + " to " + std::to_string(d)) {}
};

struct SearchStats {
    size_t expanded = 0;  // nodes settled by the priority-queue search
};

// Minimal-weight route; among equal-weight optima, the lexicographically
// smallest node sequence. Throws NoPathError when d is unreachable.
Route dijkstra(const RoadGraph& g, int s, int d, SearchStats* stats = nullptr);

// Same contract as dijkstra; best-first with the Euclidean heuristic
// h(n) = straight-line distance from n to d. The heuristic is admissible
// because edge weights are the Euclidean endpoint distances.
Route astar(const RoadGraph& g, int s, int d, SearchStats* stats = nullptr);

// Shortest-path distances from src to every node (unreachable -> +inf).
// Plain Dijkstra; used as the value oracle by evaluation and tests.
std::vector<double> shortest_path_distances(const RoadGraph& g, int src);

// Checks the Route invariants against g: consecutive adjacency, simplicity,
// and weight consistency. Returns an empty string when valid, otherwise a
// description of the first violation.
std::string validate_route(const RoadGraph& g, const Route& r);

}  // namespace routelab
