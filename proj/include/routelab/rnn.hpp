#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "routelab/adam.hpp"
#include "routelab/dataset.hpp"
#include "routelab/params.hpp"
#include "routelab/tensor.hpp"

namespace routelab {

struct TrainConfig {
    int hidden = 256;
    int epochs = 200;
    AdamConfig adam;  // lr 1e-3, beta1 0.9, beta2 0.999
    uint64_t seed = 0;
    int max_decode_len = 100;

    void validate() const;
};

// Next-node recurrent model: the input is the one-hot of the current node
// only, so the network is not conditioned on the destination.
//
//   h(t) = tanh(w_in x(t) + w_rec h(t-1) + b_hidden),  h(0) = h_init
//   output(t) = log_softmax(w_out h(t) + b_out)
struct RnnParams {
    int in_dim = 0;
    int hidden = 0;
    int out_dim = 0;

    Tensor2 w_in;       // hidden x in_dim
    Tensor2 w_rec;      // hidden x hidden
    Tensor1 b_hidden;   // hidden
    Tensor2 w_out;      // out_dim x hidden
    Tensor1 b_out;      // out_dim
    Tensor1 h_init;     // hidden; trained

    std::vector<ParamView> param_views();
};

struct RnnGrads {
    Tensor2 w_in, w_rec, w_out;
    Tensor1 b_hidden, b_out, h_init;

    explicit RnnGrads(const RnnParams& p);
    void zero();
    std::vector<ParamView> views();
};

// Uniform [-1/sqrt(fan_in), 1/sqrt(fan_in)] weights, zero biases and h_init.
RnnParams rnn_init(int in_dim, int hidden, int out_dim, uint64_t seed);

// One step; token is the input node id. Returns the new hidden state and the
// log-probabilities over the next token.
std::pair<Tensor1, Tensor1> rnn_step(const RnnParams& p, int token, const Tensor1& h_prev);

// Teacher-forced negative log-likelihood of the token sequence (targets are
// tokens[1..]); accumulates gradients into g scaled by `scale`. Returns the
// summed NLL over the route's steps.
double rnn_route_loss_grad(const RnnParams& p, const std::vector<int>& tokens, RnnGrads& g,
                           double scale);
// Loss only (no gradient); used by the finite-difference checks.
double rnn_route_loss(const RnnParams& p, const std::vector<int>& tokens);

struct RnnTrainResult {
    RnnParams params;
    std::vector<double> epoch_loss;  // mean NLL per step, one entry per epoch
};

// Adam updates route by route (batch of one) over shuffled epochs.
RnnTrainResult rnn_train(const RouteDataset& ds, int node_count, const TrainConfig& cfg);

struct Rollout {
    std::vector<int> tokens;  // emitted sequence, starting with `start`
    bool reached = false;
};

// Greedy argmax decoding from `start` until `stop` is emitted or max_len
// tokens have been produced.
Rollout rnn_rollout(const RnnParams& p, int start, int stop, int max_len);

// Minimum-weight valid splice of a forward walk from s and a backward walk
// from d at a shared node. Ties prefer the lexicographically smallest
// (forward index, backward index).
std::optional<Route> intersect_paths(const std::vector<int>& forward,
                                     const std::vector<int>& backward, const RoadGraph& g);

void save_rnn_checkpoint(RnnParams& p, const std::map<std::string, std::string>& extra_meta,
                         const std::string& file);
RnnParams load_rnn_checkpoint(const std::string& file);

}  // namespace routelab
