#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace routelab {

struct BoundingBox {
    double lon_min = 0.0;
    double lon_max = 0.0;
    double lat_min = 0.0;
    double lat_max = 0.0;

    bool contains(double lon, double lat) const {
        return lon >= lon_min && lon <= lon_max && lat >= lat_min && lat <= lat_max;
    }
};

// Parses "lon_min,lon_max,lat_min,lat_max". Throws on malformed input or
// inverted ranges.
BoundingBox parse_bbox(const std::string& spec);

// Undirected road graph. Node ids are dense 0..N-1; edge weights are the
// planar Euclidean distance between the endpoint coordinates (degree units).
// Immutable after construction.
class RoadGraph {
public:
    RoadGraph() = default;

    // nodes: (lon, lat) per node; edges: undirected (u, v) with u != v, no
    // duplicates. Weights are computed here. Throws on invalid input.
    RoadGraph(std::vector<std::pair<double, double>> coords,
              const std::vector<std::pair<int, int>>& edges);

    int node_count() const { return static_cast<int>(lon_.size()); }
    size_t edge_count() const { return edge_count_; }

    double lon(int u) const { return lon_[u]; }
    double lat(int u) const { return lat_[u]; }

    // Neighbors of u, sorted by node id.
    const std::vector<std::pair<int, double>>& neighbors(int u) const { return adj_[u]; }

    bool has_edge(int u, int v) const;
    // Weight of edge (u, v); throws if absent.
    double edge_weight(int u, int v) const;

    double euclidean(int u, int v) const;

    // Undirected edge list with u < v, sorted.
    std::vector<std::pair<int, int>> edges() const;

private:
    std::vector<double> lon_, lat_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    size_t edge_count_ = 0;
};

struct FilterResult {
    RoadGraph graph;
    std::vector<int> kept_old_ids;  // new id -> old id
};

// Induced subgraph on nodes inside the (closed) box; ids re-densified.
FilterResult filter_bbox(const RoadGraph& g, const BoundingBox& box);

// Induced subgraph on the largest connected component. Ties are broken by
// the component containing the smallest node id. Throws on an empty graph.
FilterResult largest_component(const RoadGraph& g);

// Connectivity check used by tests and dataset generation.
bool is_connected(const RoadGraph& g);

// --- file formats ---------------------------------------------------------

// Node CSV: header "id,lon,lat". Edge CSV: header "u,v", u < v per row.
RoadGraph load_graph_csv(const std::string& node_file, const std::string& edge_file);
void save_graph_csv(const RoadGraph& g, const std::string& node_file,
                    const std::string& edge_file);

// Reads a graph directory containing nodes.csv and edges.csv.
RoadGraph load_graph_dir(const std::string& dir);
void save_graph_dir(const RoadGraph& g, const std::string& dir);
void save_id_map(const std::vector<int>& kept_old_ids, const std::string& file);

// MatrixMarket coordinate adjacency plus a coordinate table ("lon,lat" header,
// row i = node i in matrix order). Converts to the in-memory graph; use
// save_graph_csv to emit the CSV pair.
RoadGraph import_matrix_market(const std::string& mtx_file, const std::string& coords_file);

// FNV-1a over the bytes of nodes.csv then edges.csv, as written by
// save_graph_csv. Hex string.
std::string graph_content_hash(const std::string& dir);

uint64_t fnv1a(const std::string& bytes, uint64_t h = 14695981039346656037ULL);

}  // namespace routelab
