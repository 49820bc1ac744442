#include "routelab/qrouting.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "routelab/rng.hpp"

namespace routelab {

void QConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::runtime_error("QConfig: alpha must be in (0,1)");
    if (epsilon < 0.0 || epsilon > 1.0) throw std::runtime_error("QConfig: epsilon must be in [0,1]");
    if (max_hops < 1) throw std::runtime_error("QConfig: max_hops must be >= 1");
    if (iterations_per_path < 1) throw std::runtime_error("QConfig: iterations_per_path must be >= 1");
}

QTable::QTable(const RoadGraph& g) : g_(&g) {
    const int n = g.node_count();
    q_.resize(n);
    for (int x = 0; x < n; ++x)
        q_[x].assign(g.neighbors(x).size() * static_cast<size_t>(n), 0.0);
}

int QTable::neighbor_index(int x, int y) const {
    const auto& nb = g_->neighbors(x);
    auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(y, -1.0));
    if (it == nb.end() || it->first != y)
        throw std::runtime_error("q-table access: node " + std::to_string(y) +
                                 " is not adjacent to " + std::to_string(x));
    return static_cast<int>(it - nb.begin());
}

double QTable::get(int x, int d, int y) const {
    return q_[x][static_cast<size_t>(d) * g_->neighbors(x).size() + neighbor_index(x, y)];
}

double QTable::min_over_next(int y, int d) const {
    if (y == d) return 0.0;  // destination absorbs
    const auto& row = q_[y];
    const size_t deg = g_->neighbors(y).size();
    if (deg == 0) return 0.0;
    const double* p = row.data() + static_cast<size_t>(d) * deg;
    double m = p[0];
    for (size_t i = 1; i < deg; ++i) m = std::min(m, p[i]);
    return m;
}

double QTable::update(int x, int d, int y, double b, double alpha) {
    const size_t deg = g_->neighbors(x).size();
    double& slot = q_[x][static_cast<size_t>(d) * deg + neighbor_index(x, y)];
    slot = (1.0 - alpha) * slot + alpha * (b + min_over_next(y, d));
    return slot;
}

int QTable::greedy_neighbor(int x, int d) const {
    const auto& nb = g_->neighbors(x);
    if (nb.empty()) return -1;
    const double* p = q_[x].data() + static_cast<size_t>(d) * nb.size();
    int best = 0;
    for (size_t i = 1; i < nb.size(); ++i)
        if (p[i] < p[best]) best = static_cast<int>(i);
    return nb[best].first;  // neighbors sorted by id, so first minimum wins ties
}

QTable train_qrouting(const RoadGraph& g, const RouteDataset& ds, const QConfig& cfg) {
    cfg.validate();
    QTable table(g);
    Rng rng(cfg.seed);
    bool any_train = false;
    for (const auto& e : ds.entries) {
        if (!e.train) continue;
        any_train = true;
        for (int it = 0; it < cfg.iterations_per_path; ++it) {
            int x = e.s;
            for (int hop = 0; hop < cfg.max_hops && x != e.d; ++hop) {
                const auto& nb = g.neighbors(x);
                int y;
                if (rng.uniform() < cfg.epsilon) {
                    y = nb[rng.below(nb.size())].first;
                } else {
                    y = table.greedy_neighbor(x, e.d);
                }
                const double b = g.edge_weight(x, y);
                table.update(x, e.d, y, b, cfg.alpha);
                x = y;
            }
        }
    }
    if (!any_train) throw std::runtime_error("train_qrouting: dataset has no training routes");
    return table;
}

std::optional<Route> greedy_rollout(const QTable& t, const RoadGraph& g, int s, int d,
                                    int max_hops) {
    Route r;
    r.nodes.push_back(s);
    int x = s;
    for (int hop = 0; hop < max_hops && x != d; ++hop) {
        const int y = t.greedy_neighbor(x, d);
        if (y < 0) return std::nullopt;  // isolated node
        r.total_weight += g.edge_weight(x, y);
        r.nodes.push_back(y);
        x = y;
    }
    if (x != d) return std::nullopt;
    return r;
}

void QTable::save_csv(const std::string& file) const {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write " + file);
    f << "x,d,y,value\n";
    const int n = g_->node_count();
    char buf[40];
    for (int x = 0; x < n; ++x) {
        const auto& nb = g_->neighbors(x);
        for (int d = 0; d < n; ++d) {
            for (size_t yi = 0; yi < nb.size(); ++yi) {
                std::snprintf(buf, sizeof(buf), "%.17g",
                              q_[x][static_cast<size_t>(d) * nb.size() + yi]);
                f << x << ',' << d << ',' << nb[yi].first << ',' << buf << '\n';
            }
        }
    }
}

QTable QTable::load_csv(const std::string& file, const RoadGraph& g) {
    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot open q-table " + file);
    std::string line;
    if (!std::getline(f, line) || line != "x,d,y,value")
        throw std::runtime_error(file + ": expected header x,d,y,value");
    QTable t(g);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        int x, d, y;
        double value;
        char c1, c2, c3;
        if (!(ss >> x >> c1 >> d >> c2 >> y >> c3 >> value) || c1 != ',' || c2 != ',' || c3 != ',')
            throw std::runtime_error(file + ": bad row '" + line + "'");
        const size_t deg = g.neighbors(x).size();
        t.q_[x][static_cast<size_t>(d) * deg + t.neighbor_index(x, y)] = value;
    }
    return t;
}

}  // namespace routelab
