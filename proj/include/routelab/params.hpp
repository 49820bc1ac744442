#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "routelab/tensor.hpp"

namespace routelab {

// Named view into one parameter block of a model. rows/cols carry the shape
// for checkpointing; vectors use rows = 1.
struct ParamView {
    std::string name;
    double* data = nullptr;
    size_t len = 0;
    int rows = 0;
    int cols = 0;
};

inline ParamView view(const std::string& name, Tensor2& t) {
    return {name, t.v.data(), t.v.size(), t.rows, t.cols};
}
inline ParamView view(const std::string& name, Tensor1& t) {
    return {name, t.data(), t.size(), 1, static_cast<int>(t.size())};
}

std::vector<size_t> block_sizes(const std::vector<ParamView>& views);

// Central finite differences of `cost` with respect to every coordinate of
// `views`, perturbing the parameters in place and restoring them. Throws if
// the cost comes back non-finite, naming the block and coordinate.
std::vector<std::vector<double>> finite_diff_grad(const std::function<double()>& cost,
                                                  const std::vector<ParamView>& views,
                                                  double h);

// --- checkpoint format -----------------------------------------------------
//
//   routelab-params v1
//   meta <key> <value...>
//   block <name> <rows> <cols>
//   <rows*cols whitespace-separated values>
//
// Values are written with %.17g, so the round trip is lossless.

struct Checkpoint {
    std::map<std::string, std::string> meta;
    struct Block {
        std::string name;
        int rows = 0;
        int cols = 0;
        std::vector<double> values;
    };
    std::vector<Block> blocks;

    const Block& require(const std::string& name, int rows, int cols) const;
};

void save_checkpoint(const std::vector<ParamView>& views,
                     const std::map<std::string, std::string>& meta, const std::string& file);
Checkpoint load_checkpoint(const std::string& file);
// Copies matching blocks from ck into views; every view must be present with
// the exact shape.
void restore_params(const Checkpoint& ck, const std::vector<ParamView>& views);

}  // namespace routelab
