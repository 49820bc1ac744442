#include "routelab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace routelab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad number '" + s + "' in " + ctx);
    }
}

long parse_long(const std::string& s, const std::string& ctx) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad integer '" + s + "' in " + ctx);
    }
}

// Full-precision, locale-independent double formatting (round-trips).
std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

BoundingBox parse_bbox(const std::string& spec) {
    auto parts = split_csv(spec);
    if (parts.size() != 4) throw std::runtime_error("bbox must be lon_min,lon_max,lat_min,lat_max");
    BoundingBox b;
    b.lon_min = parse_double(parts[0], "bbox");
    b.lon_max = parse_double(parts[1], "bbox");
    b.lat_min = parse_double(parts[2], "bbox");
    b.lat_max = parse_double(parts[3], "bbox");
    if (!(b.lon_min < b.lon_max) || !(b.lat_min < b.lat_max))
        throw std::runtime_error("bbox ranges must satisfy lon_min < lon_max and lat_min < lat_max");
    return b;
}

RoadGraph::RoadGraph(std::vector<std::pair<double, double>> coords,
                     const std::vector<std::pair<int, int>>& edges) {
    const int n = static_cast<int>(coords.size());
    lon_.resize(n);
    lat_.resize(n);
    for (int i = 0; i < n; ++i) {
        lon_[i] = coords[i].first;
        lat_[i] = coords[i].second;
        if (!std::isfinite(lon_[i]) || !std::isfinite(lat_[i]))
            throw std::runtime_error("non-finite coordinate for node " + std::to_string(i));
    }
    adj_.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::runtime_error("edge references missing node " +
                                     std::to_string(u < 0 || u >= n ? u : v));
        if (u == v) throw std::runtime_error("self-loop at node " + std::to_string(u));
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            throw std::runtime_error("duplicate edge (" + std::to_string(key.first) + "," +
                                     std::to_string(key.second) + ")");
        const double w = euclidean(u, v);
        if (!(w > 0.0))
            throw std::runtime_error("zero-length edge (" + std::to_string(u) + "," +
                                     std::to_string(v) + "): endpoints share coordinates");
        adj_[u].emplace_back(v, w);
        adj_[v].emplace_back(u, w);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    edge_count_ = seen.size();
}

bool RoadGraph::has_edge(int u, int v) const {
    const auto& nb = adj_[u];
    auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(v, -1.0));
    return it != nb.end() && it->first == v;
}

double RoadGraph::edge_weight(int u, int v) const {
    const auto& nb = adj_[u];
    auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(v, -1.0));
    if (it == nb.end() || it->first != v)
        throw std::runtime_error("no edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    return it->second;
}

double RoadGraph::euclidean(int u, int v) const {
    return std::hypot(lon_[u] - lon_[v], lat_[u] - lat_[v]);
}

std::vector<std::pair<int, int>> RoadGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < node_count(); ++u)
        for (const auto& [v, w] : adj_[u])
            if (u < v) out.emplace_back(u, v);
    std::sort(out.begin(), out.end());
    return out;
}

FilterResult filter_bbox(const RoadGraph& g, const BoundingBox& box) {
    std::vector<int> kept;
    std::vector<int> new_id(g.node_count(), -1);
    for (int u = 0; u < g.node_count(); ++u) {
        if (box.contains(g.lon(u), g.lat(u))) {
            new_id[u] = static_cast<int>(kept.size());
            kept.push_back(u);
        }
    }
    std::vector<std::pair<double, double>> coords;
    coords.reserve(kept.size());
    for (int old : kept) coords.emplace_back(g.lon(old), g.lat(old));
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges())
        if (new_id[u] >= 0 && new_id[v] >= 0) edges.emplace_back(new_id[u], new_id[v]);
    return {RoadGraph(std::move(coords), edges), std::move(kept)};
}

namespace {

std::vector<int> component_labels(const RoadGraph& g, std::vector<int>& sizes) {
    std::vector<int> label(g.node_count(), -1);
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.node_count(); ++s) {
        if (label[s] >= 0) continue;
        int count = 0;
        stack.push_back(s);
        label[s] = next;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            ++count;
            for (const auto& [v, w] : g.neighbors(u)) {
                if (label[v] < 0) {
                    label[v] = next;
                    stack.push_back(v);
                }
            }
        }
        sizes.push_back(count);
        ++next;
    }
    return label;
}

}  // namespace

FilterResult largest_component(const RoadGraph& g) {
    if (g.node_count() == 0) throw std::runtime_error("largest_component: empty graph");
    std::vector<int> sizes;
    std::vector<int> label = component_labels(g, sizes);
    // Components are discovered in order of their smallest node id, so the
    // first maximal one realizes the tie-break.
    int best = 0;
    for (size_t c = 1; c < sizes.size(); ++c)
        if (sizes[c] > sizes[best]) best = static_cast<int>(c);

    std::vector<int> kept;
    std::vector<int> new_id(g.node_count(), -1);
    for (int u = 0; u < g.node_count(); ++u) {
        if (label[u] == best) {
            new_id[u] = static_cast<int>(kept.size());
            kept.push_back(u);
        }
    }
    std::vector<std::pair<double, double>> coords;
    coords.reserve(kept.size());
    for (int old : kept) coords.emplace_back(g.lon(old), g.lat(old));
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges())
        if (new_id[u] >= 0 && new_id[v] >= 0) edges.emplace_back(new_id[u], new_id[v]);
    return {RoadGraph(std::move(coords), edges), std::move(kept)};
}

bool is_connected(const RoadGraph& g) {
    if (g.node_count() == 0) return true;
    std::vector<int> sizes;
    component_labels(g, sizes);
    return sizes.size() == 1;
}

RoadGraph load_graph_csv(const std::string& node_file, const std::string& edge_file) {
    std::ifstream nf(node_file);
    if (!nf) throw std::runtime_error("cannot open node file " + node_file);
    std::string line;
    if (!std::getline(nf, line) || trim(line) != "id,lon,lat")
        throw std::runtime_error("node file " + node_file + ": expected header id,lon,lat");
    std::vector<std::pair<double, double>> coords;
    long expect = 0;
    while (std::getline(nf, line)) {
        if (trim(line).empty()) continue;
        auto parts = split_csv(line);
        if (parts.size() != 3) throw std::runtime_error("node file: bad row '" + line + "'");
        long id = parse_long(parts[0], "node file");
        if (id != expect)
            throw std::runtime_error("node file: ids must be dense 0..N-1, got " + parts[0] +
                                     " where " + std::to_string(expect) + " was expected");
        ++expect;
        coords.emplace_back(parse_double(parts[1], "node file"), parse_double(parts[2], "node file"));
    }

    std::ifstream ef(edge_file);
    if (!ef) throw std::runtime_error("cannot open edge file " + edge_file);
    if (!std::getline(ef, line) || trim(line) != "u,v")
        throw std::runtime_error("edge file " + edge_file + ": expected header u,v");
    std::vector<std::pair<int, int>> edges;
    while (std::getline(ef, line)) {
        if (trim(line).empty()) continue;
        auto parts = split_csv(line);
        if (parts.size() != 2) throw std::runtime_error("edge file: bad row '" + line + "'");
        long u = parse_long(parts[0], "edge file");
        long v = parse_long(parts[1], "edge file");
        if (u >= v) throw std::runtime_error("edge file: rows must satisfy u < v, got '" + line + "'");
        if (u < 0 || v >= static_cast<long>(coords.size()))
            throw std::runtime_error("edge file: edge (" + parts[0] + "," + parts[1] +
                                     ") references missing node " +
                                     std::to_string(v >= static_cast<long>(coords.size()) ? v : u));
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    return RoadGraph(std::move(coords), edges);
}

void save_graph_csv(const RoadGraph& g, const std::string& node_file,
                    const std::string& edge_file) {
    std::ofstream nf(node_file);
    if (!nf) throw std::runtime_error("cannot write " + node_file);
    nf << "id,lon,lat\n";
    for (int u = 0; u < g.node_count(); ++u)
        nf << u << ',' << fmt_double(g.lon(u)) << ',' << fmt_double(g.lat(u)) << '\n';
    std::ofstream ef(edge_file);
    if (!ef) throw std::runtime_error("cannot write " + edge_file);
    ef << "u,v\n";
    for (auto [u, v] : g.edges()) ef << u << ',' << v << '\n';
}

RoadGraph load_graph_dir(const std::string& dir) {
    return load_graph_csv(dir + "/nodes.csv", dir + "/edges.csv");
}

void save_graph_dir(const RoadGraph& g, const std::string& dir) {
    save_graph_csv(g, dir + "/nodes.csv", dir + "/edges.csv");
}

void save_id_map(const std::vector<int>& kept_old_ids, const std::string& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write " + file);
    f << "new_id,old_id\n";
    for (size_t i = 0; i < kept_old_ids.size(); ++i) f << i << ',' << kept_old_ids[i] << '\n';
}

RoadGraph import_matrix_market(const std::string& mtx_file, const std::string& coords_file) {
    std::ifstream mf(mtx_file);
    if (!mf) throw std::runtime_error("cannot open " + mtx_file);
    std::string line;
    if (!std::getline(mf, line) || line.rfind("%%MatrixMarket matrix coordinate", 0) != 0)
        throw std::runtime_error(mtx_file + ": expected '%%MatrixMarket matrix coordinate' header");
    long rows = -1, cols = -1, entries = -1;
    while (std::getline(mf, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        std::stringstream ss(t);
        if (!(ss >> rows >> cols >> entries))
            throw std::runtime_error(mtx_file + ": bad size line '" + line + "'");
        break;
    }
    if (rows < 0 || rows != cols)
        throw std::runtime_error(mtx_file + ": adjacency matrix must be square");

    std::set<std::pair<int, int>> edge_set;
    long seen = 0;
    while (std::getline(mf, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        std::stringstream ss(t);
        long i = 0, j = 0;
        double val = 1.0;
        if (!(ss >> i >> j)) throw std::runtime_error(mtx_file + ": bad entry '" + line + "'");
        ss >> val;  // optional for pattern matrices
        ++seen;
        if (i < 1 || i > rows || j < 1 || j > rows)
            throw std::runtime_error(mtx_file + ": entry out of range '" + line + "'");
        if (i == j) continue;  // ignore any diagonal entries
        int u = static_cast<int>(std::min(i, j)) - 1;
        int v = static_cast<int>(std::max(i, j)) - 1;
        edge_set.emplace(u, v);
    }
    if (seen != entries)
        throw std::runtime_error(mtx_file + ": entry count mismatch (header says " +
                                 std::to_string(entries) + ", file has " + std::to_string(seen) + ")");

    std::ifstream cf(coords_file);
    if (!cf) throw std::runtime_error("cannot open " + coords_file);
    if (!std::getline(cf, line) || trim(line) != "lon,lat")
        throw std::runtime_error(coords_file + ": expected header lon,lat");
    std::vector<std::pair<double, double>> coords;
    while (std::getline(cf, line)) {
        if (trim(line).empty()) continue;
        auto parts = split_csv(line);
        if (parts.size() != 2) throw std::runtime_error(coords_file + ": bad row '" + line + "'");
        coords.emplace_back(parse_double(parts[0], coords_file), parse_double(parts[1], coords_file));
    }
    if (static_cast<long>(coords.size()) != rows)
        throw std::runtime_error("coordinate table has " + std::to_string(coords.size()) +
                                 " rows but adjacency is " + std::to_string(rows) + "x" +
                                 std::to_string(rows));
    std::vector<std::pair<int, int>> edges(edge_set.begin(), edge_set.end());
    return RoadGraph(std::move(coords), edges);
}

uint64_t fnv1a(const std::string& bytes, uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string graph_content_hash(const std::string& dir) {
    uint64_t h = 14695981039346656037ULL;
    for (const char* name : {"/nodes.csv", "/edges.csv"}) {
        std::ifstream f(dir + name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + dir + name);
        std::stringstream ss;
        ss << f.rdbuf();
        h = fnv1a(ss.str(), h);
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace routelab
