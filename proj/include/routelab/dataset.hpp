#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "routelab/search.hpp"

namespace routelab {

// A* shortest-route corpus with a 67/33 train-test split.
struct RouteDataset {
    struct Entry {
        Route route;
        int s = 0;
        int d = 0;
        bool train = true;
    };

    std::vector<Entry> entries;
    uint64_t seed = 0;
    std::string graph_hash;  // content hash of the graph files
    std::string graph_ref;   // graph directory recorded at generation time

    size_t train_count() const;
    size_t test_count() const { return entries.size() - train_count(); }
};

// n_routes A* routes between uniformly sampled distinct node pairs. Each
// route index draws from its own RNG substream, so results are independent
// of generation order. Requires a connected graph with >= 2 nodes.
RouteDataset generate_dataset(const RoadGraph& g, int n_routes, uint64_t seed);

struct HopHistogram {
    std::map<int, size_t> counts;  // hop count -> frequency
    double mean = 0.0;
};

// Hops of a route = edge count = |nodes| - 1.
HopHistogram hop_histogram(const RouteDataset& ds);

void save_dataset(const RouteDataset& ds, const std::string& file);
// Parses routes and split tags; route weights are left at 0 until
// attach_weights is called with the source graph.
RouteDataset load_dataset(const std::string& file);
// Recomputes each route's total weight from g and validates adjacency.
void attach_weights(RouteDataset& ds, const RoadGraph& g);

void save_histogram_csv(const HopHistogram& h, const std::string& file);

}  // namespace routelab
