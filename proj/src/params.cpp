#include "routelab/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace routelab {

std::vector<size_t> block_sizes(const std::vector<ParamView>& views) {
    std::vector<size_t> out;
    out.reserve(views.size());
    for (const auto& v : views) out.push_back(v.len);
    return out;
}

std::vector<std::vector<double>> finite_diff_grad(const std::function<double()>& cost,
                                                  const std::vector<ParamView>& views,
                                                  double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be > 0");
    std::vector<std::vector<double>> grads;
    grads.reserve(views.size());
    for (const auto& v : views) {
        std::vector<double> g(v.len, 0.0);
        for (size_t i = 0; i < v.len; ++i) {
            const double saved = v.data[i];
            v.data[i] = saved + h;
            const double up = cost();
            v.data[i] = saved - h;
            const double down = cost();
            v.data[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw std::runtime_error("finite_diff_grad: non-finite cost at " + v.name + "[" +
                                         std::to_string(i) + "]");
            g[i] = (up - down) / (2.0 * h);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

const Checkpoint::Block& Checkpoint::require(const std::string& name, int rows, int cols) const {
    for (const auto& b : blocks) {
        if (b.name == name) {
            if (b.rows != rows || b.cols != cols)
                throw std::runtime_error("checkpoint block " + name + " has shape " +
                                         std::to_string(b.rows) + "x" + std::to_string(b.cols) +
                                         ", expected " + std::to_string(rows) + "x" +
                                         std::to_string(cols));
            return b;
        }
    }
    throw std::runtime_error("checkpoint is missing block " + name);
}

void save_checkpoint(const std::vector<ParamView>& views,
                     const std::map<std::string, std::string>& meta, const std::string& file) {
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write " + file);
    f << "routelab-params v1\n";
    for (const auto& [k, v] : meta) f << "meta " << k << ' ' << v << '\n';
    char buf[40];
    for (const auto& v : views) {
        f << "block " << v.name << ' ' << v.rows << ' ' << v.cols << '\n';
        for (size_t i = 0; i < v.len; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", v.data[i]);
            f << buf << ((i + 1) % 8 == 0 || i + 1 == v.len ? '\n' : ' ');
        }
        if (v.len == 0) f << '\n';
    }
}

Checkpoint load_checkpoint(const std::string& file) {
    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot open checkpoint " + file);
    std::string line;
    if (!std::getline(f, line) || line != "routelab-params v1")
        throw std::runtime_error(file + ": bad checkpoint header");
    Checkpoint ck;
    std::string word;
    while (f >> word) {
        if (word == "meta") {
            std::string key;
            f >> key;
            std::getline(f, line);
            size_t a = line.find_first_not_of(' ');
            ck.meta[key] = a == std::string::npos ? "" : line.substr(a);
        } else if (word == "block") {
            Checkpoint::Block b;
            if (!(f >> b.name >> b.rows >> b.cols))
                throw std::runtime_error(file + ": truncated block header");
            const size_t n = static_cast<size_t>(b.rows) * b.cols;
            b.values.resize(n);
            for (size_t i = 0; i < n; ++i)
                if (!(f >> b.values[i]))
                    throw std::runtime_error(file + ": truncated block " + b.name);
            ck.blocks.push_back(std::move(b));
        } else {
            throw std::runtime_error(file + ": unexpected token '" + word + "'");
        }
    }
    return ck;
}

void restore_params(const Checkpoint& ck, const std::vector<ParamView>& views) {
    for (const auto& v : views) {
        const auto& b = ck.require(v.name, v.rows, v.cols);
        std::copy(b.values.begin(), b.values.end(), v.data);
    }
}

}  // namespace routelab
