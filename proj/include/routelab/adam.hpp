#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "routelab/tensor.hpp"

namespace routelab {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon_hat = 1e-8;
};

// Bias-corrected Adam over a fixed list of parameter blocks.
class AdamState {
public:
    AdamState(AdamConfig cfg, const std::vector<size_t>& block_sizes);

    // blocks[i] = (parameter data, gradient data), both of the size declared
    // at construction. Applies one update and increments the step counter.
    void step(const std::vector<std::pair<double*, const double*>>& blocks);

    uint64_t steps() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    uint64_t t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

}  // namespace routelab
