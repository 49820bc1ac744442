#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "routelab/dataset.hpp"
#include "routelab/graph.hpp"
#include "routelab/search.hpp"

namespace routelab {

struct QConfig {
    double alpha = 0.5;           // learning rate, in (0,1)
    int iterations_per_path = 1000;
    double epsilon = 0.1;         // exploration probability during training
    int max_hops = 100;           // episode / rollout cap
    uint64_t seed = 0;

    void validate() const;
};

// Per-node table of estimated remaining transit time: Q^x(d, y) for each
// neighbor y of x and destination d. Stored densely per node as
// [d * deg(x) + neighbor_index].
class QTable {
public:
    explicit QTable(const RoadGraph& g);

    const RoadGraph& graph() const { return *g_; }

    double get(int x, int d, int y) const;
    // Eq-style blend at a single entry; b is the transit cost of the hop.
    // Returns the new value. Throws if y is not adjacent to x.
    double update(int x, int d, int y, double b, double alpha);

    // min over neighbors z of Q^y(d, z); defined as 0 when y == d.
    double min_over_next(int y, int d) const;
    // Neighbor of x minimizing Q^x(d, .); ties go to the smallest node id.
    int greedy_neighbor(int x, int d) const;

    void save_csv(const std::string& file) const;
    // Loads values into a table shaped by g; rejects entries for
    // non-adjacent (x, y).
    static QTable load_csv(const std::string& file, const RoadGraph& g);

private:
    int neighbor_index(int x, int y) const;

    const RoadGraph* g_;
    std::vector<std::vector<double>> q_;  // q_[x][d * deg(x) + yi]
};

// Episodic ε-greedy walks over the training pairs, updating the table at
// every traversed hop with b = weight of the edge taken.
QTable train_qrouting(const RoadGraph& g, const RouteDataset& ds, const QConfig& cfg);

// Follow argmin Q^x(d, .) from s; returns the walk as a Route when d is
// reached within max_hops, std::nullopt otherwise.
std::optional<Route> greedy_rollout(const QTable& t, const RoadGraph& g, int s, int d,
                                    int max_hops);

}  // namespace routelab
