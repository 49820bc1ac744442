#include "routelab/search.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace routelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack for recognizing "same shortest distance" when float sums
// arrive via different edge orders.
constexpr double kTieTol = 1e-12;

bool on_shortest(double dist_u, double w, double dist_v) {
    const double lhs = dist_u + w;
    return std::abs(lhs - dist_v) <= kTieTol * std::max(1.0, std::abs(dist_v));
}

// Best-first search from s with an optional heuristic toward d. Settles every
// node whose key is within tolerance of the optimal cost so that all tied
// shortest paths are recoverable. Returns exact distances for settled nodes.
std::vector<double> guided_search(const RoadGraph& g, int s, int d, bool use_heuristic,
                                  SearchStats* stats) {
    const int n = g.node_count();
    std::vector<double> dist(n, kInf);
    std::vector<char> settled(n, 0);
    std::vector<double> h(n, 0.0);
    if (use_heuristic)
        for (int u = 0; u < n; ++u) h[u] = g.euclidean(u, d);

    using Entry = std::pair<double, int>;  // (key, node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    dist[s] = 0.0;
    pq.emplace(h[s], s);
    double bound = kInf;
    size_t expanded = 0;

    while (!pq.empty()) {
        auto [key, u] = pq.top();
        pq.pop();
        if (settled[u]) continue;  // stale entry
        if (key > bound) break;
        settled[u] = 1;
        ++expanded;
        if (u == d) bound = key * (1.0 + kTieTol);
        for (const auto& [v, w] : g.neighbors(u)) {
            const double nd = dist[u] + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd + h[v], v);
            }
        }
    }
    if (stats) stats->expanded = expanded;
    return dist;
}

// Among all minimum-weight s->d paths implied by dist (shortest-path DAG),
// reconstructs the lexicographically smallest node sequence.
Route reconstruct_lex_smallest(const RoadGraph& g, int s, int d, const std::vector<double>& dist) {
    // Nodes that can reach d inside the DAG, via reverse BFS.
    std::vector<char> reaches(g.node_count(), 0);
    std::vector<int> stack{d};
    reaches[d] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& [u, w] : g.neighbors(v)) {
            if (!reaches[u] && dist[u] < kInf && on_shortest(dist[u], w, dist[v])) {
                reaches[u] = 1;
                stack.push_back(u);
            }
        }
    }

    Route r;
    r.nodes.push_back(s);
    int u = s;
    while (u != d) {
        int next = -1;
        double wnext = 0.0;
        for (const auto& [v, w] : g.neighbors(u)) {  // neighbors sorted by id
            if (reaches[v] && on_shortest(dist[u], w, dist[v])) {
                next = v;
                wnext = w;
                break;
            }
        }
        if (next < 0) throw std::logic_error("shortest-path reconstruction lost the DAG");
        r.nodes.push_back(next);
        r.total_weight += wnext;
        u = next;
    }
    return r;
}

Route search_route(const RoadGraph& g, int s, int d, bool use_heuristic, SearchStats* stats) {
    const int n = g.node_count();
    if (s < 0 || s >= n || d < 0 || d >= n)
        throw std::out_of_range("node id out of range");
    if (s == d) {
        if (stats) stats->expanded = 0;
        return Route{{s}, 0.0};
    }
    std::vector<double> dist = guided_search(g, s, d, use_heuristic, stats);
    if (dist[d] == kInf) throw NoPathError(s, d);
    return reconstruct_lex_smallest(g, s, d, dist);
}

}  // namespace

Route dijkstra(const RoadGraph& g, int s, int d, SearchStats* stats) {
    return search_route(g, s, d, false, stats);
}

Route astar(const RoadGraph& g, int s, int d, SearchStats* stats) {
    return search_route(g, s, d, true, stats);
}

std::vector<double> shortest_path_distances(const RoadGraph& g, int src) {
    const int n = g.node_count();
    std::vector<double> dist(n, kInf);
    std::vector<char> settled(n, 0);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        for (const auto& [v, w] : g.neighbors(u)) {
            const double nd = du + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    return dist;
}

std::string validate_route(const RoadGraph& g, const Route& r) {
    if (r.nodes.empty()) return "route has no nodes";
    std::vector<char> seen(g.node_count(), 0);
    double sum = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i) {
        int u = r.nodes[i];
        if (u < 0 || u >= g.node_count()) return "node id out of range";
        if (seen[u]) return "repeated node " + std::to_string(u);
        seen[u] = 1;
        if (i > 0) {
            if (!g.has_edge(r.nodes[i - 1], u))
                return "non-adjacent hop " + std::to_string(r.nodes[i - 1]) + "->" + std::to_string(u);
            sum += g.edge_weight(r.nodes[i - 1], u);
        }
    }
    const double err = std::abs(sum - r.total_weight);
    if (err > 1e-12 * std::max(1.0, std::abs(sum))) return "total_weight inconsistent with edges";
    return "";
}

}  // namespace routelab
