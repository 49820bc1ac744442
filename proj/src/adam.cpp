#include "routelab/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace routelab {

AdamState::AdamState(AdamConfig cfg, const std::vector<size_t>& block_sizes) : cfg_(cfg) {
    m_.reserve(block_sizes.size());
    v_.reserve(block_sizes.size());
    for (size_t n : block_sizes) {
        m_.emplace_back(n, 0.0);
        v_.emplace_back(n, 0.0);
    }
}

void AdamState::step(const std::vector<std::pair<double*, const double*>>& blocks) {
    if (blocks.size() != m_.size())
        throw std::runtime_error("adam: block count mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (size_t k = 0; k < blocks.size(); ++k) {
        auto [p, g] = blocks[k];
        auto& m = m_[k];
        auto& v = v_[k];
        const size_t n = m.size();
        for (size_t i = 0; i < n; ++i) {
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon_hat);
        }
    }
}

}  // namespace routelab
