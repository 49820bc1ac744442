#include "routelab/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "routelab/rng.hpp"

namespace routelab {

size_t RouteDataset::train_count() const {
    size_t n = 0;
    for (const auto& e : entries) n += e.train ? 1 : 0;
    return n;
}

RouteDataset generate_dataset(const RoadGraph& g, int n_routes, uint64_t seed) {
    const int n = g.node_count();
    if (n < 2) throw std::runtime_error("generate_dataset: graph needs at least 2 nodes");
    if (n_routes < 1) throw std::runtime_error("generate_dataset: n_routes must be >= 1");

    RouteDataset ds;
    ds.seed = seed;
    ds.entries.resize(n_routes);
    for (int i = 0; i < n_routes; ++i) {
        Rng rng(mix_seed(seed, static_cast<uint64_t>(i)));
        int s = rng.below_int(n);
        int d = rng.below_int(n);
        while (d == s) d = rng.below_int(n);
        auto& e = ds.entries[i];
        e.s = s;
        e.d = d;
        e.route = astar(g, s, d);
    }

    // 67/33 split by shuffled route index.
    std::vector<int> order(n_routes);
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(mix_seed(seed, 0x8000000000000000ULL));
    split_rng.shuffle(order);
    const int n_train = static_cast<int>(std::llround(0.67 * n_routes));
    for (int k = 0; k < n_routes; ++k) ds.entries[order[k]].train = k < n_train;
    return ds;
}

HopHistogram hop_histogram(const RouteDataset& ds) {
    if (ds.entries.empty()) throw std::runtime_error("hop_histogram: empty dataset");
    HopHistogram h;
    double sum = 0.0;
    for (const auto& e : ds.entries) {
        const int hops = e.route.hops();
        h.counts[hops]++;
        sum += hops;
    }
    h.mean = sum / static_cast<double>(ds.entries.size());
    return h;
}

void save_dataset(const RouteDataset& ds, const std::string& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write " + file);
    f << "# routelab dataset v1\n";
    f << "# seed " << ds.seed << '\n';
    f << "# graph_hash " << ds.graph_hash << '\n';
    if (!ds.graph_ref.empty()) f << "# graph " << ds.graph_ref << '\n';
    f << "# routes " << ds.entries.size() << '\n';
    for (const auto& e : ds.entries) {
        f << (e.train ? "train" : "test") << " (" << e.s << ',' << e.d << ')';
        for (int u : e.route.nodes) f << ' ' << u;
        f << '\n';
    }
}

RouteDataset load_dataset(const std::string& file) {
    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot open dataset " + file);
    RouteDataset ds;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream ss(line);
            std::string hash_mark, key;
            ss >> hash_mark >> key;
            if (key == "seed") ss >> ds.seed;
            else if (key == "graph_hash") ss >> ds.graph_hash;
            else if (key == "graph") ss >> ds.graph_ref;
            continue;
        }
        std::stringstream ss(line);
        std::string tag, pair;
        if (!(ss >> tag >> pair)) throw std::runtime_error("bad dataset line: " + line);
        RouteDataset::Entry e;
        if (tag == "train") e.train = true;
        else if (tag == "test") e.train = false;
        else throw std::runtime_error("bad split tag '" + tag + "' in dataset line");
        if (pair.size() < 5 || pair.front() != '(' || pair.back() != ')')
            throw std::runtime_error("bad pair field '" + pair + "' in dataset line");
        const auto comma = pair.find(',');
        if (comma == std::string::npos) throw std::runtime_error("bad pair field '" + pair + "'");
        e.s = std::stoi(pair.substr(1, comma - 1));
        e.d = std::stoi(pair.substr(comma + 1, pair.size() - comma - 2));
        int u;
        while (ss >> u) e.route.nodes.push_back(u);
        if (e.route.nodes.empty() || e.route.nodes.front() != e.s || e.route.nodes.back() != e.d)
            throw std::runtime_error("route endpoints disagree with pair in line: " + line);
        ds.entries.push_back(std::move(e));
    }
    if (ds.entries.empty()) throw std::runtime_error("dataset " + file + " has no routes");
    return ds;
}

void attach_weights(RouteDataset& ds, const RoadGraph& g) {
    for (auto& e : ds.entries) {
        double sum = 0.0;
        for (size_t i = 1; i < e.route.nodes.size(); ++i)
            sum += g.edge_weight(e.route.nodes[i - 1], e.route.nodes[i]);
        e.route.total_weight = sum;
    }
}

void save_histogram_csv(const HopHistogram& h, const std::string& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write " + file);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", h.mean);
    f << "# mean " << buf << '\n';
    f << "hops,count\n";
    for (const auto& [hops, count] : h.counts) f << hops << ',' << count << '\n';
}

}  // namespace routelab
