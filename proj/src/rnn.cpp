#include "routelab/rnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "routelab/rng.hpp"

namespace routelab {

void TrainConfig::validate() const {
    if (hidden < 1 || epochs < 1 || max_decode_len < 1)
        throw std::runtime_error("TrainConfig: hidden, epochs and max_decode_len must be positive");
    if (!(adam.learning_rate > 0.0)) throw std::runtime_error("TrainConfig: learning rate must be > 0");
}

std::vector<ParamView> RnnParams::param_views() {
    return {view("input_weight", w_in),   view("recurrent_weight", w_rec),
            view("hidden_bias", b_hidden), view("output_weight", w_out),
            view("output_bias", b_out),    view("initial_hidden", h_init)};
}

RnnGrads::RnnGrads(const RnnParams& p)
    : w_in(p.hidden, p.in_dim),
      w_rec(p.hidden, p.hidden),
      w_out(p.out_dim, p.hidden),
      b_hidden(p.hidden, 0.0),
      b_out(p.out_dim, 0.0),
      h_init(p.hidden, 0.0) {}

void RnnGrads::zero() {
    w_in.fill(0.0);
    w_rec.fill(0.0);
    w_out.fill(0.0);
    std::fill(b_hidden.begin(), b_hidden.end(), 0.0);
    std::fill(b_out.begin(), b_out.end(), 0.0);
    std::fill(h_init.begin(), h_init.end(), 0.0);
}

std::vector<ParamView> RnnGrads::views() {
    return {view("input_weight", w_in),   view("recurrent_weight", w_rec),
            view("hidden_bias", b_hidden), view("output_weight", w_out),
            view("output_bias", b_out),    view("initial_hidden", h_init)};
}

namespace {

void init_uniform(Tensor2& t, int fan_in, Rng& rng) {
    const double k = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& x : t.v) x = rng.uniform(-k, k);
}

}  // namespace

RnnParams rnn_init(int in_dim, int hidden, int out_dim, uint64_t seed) {
    RnnParams p;
    p.in_dim = in_dim;
    p.hidden = hidden;
    p.out_dim = out_dim;
    p.w_in = Tensor2(hidden, in_dim);
    p.w_rec = Tensor2(hidden, hidden);
    p.b_hidden.assign(hidden, 0.0);
    p.w_out = Tensor2(out_dim, hidden);
    p.b_out.assign(out_dim, 0.0);
    p.h_init.assign(hidden, 0.0);
    Rng rng(seed);
    init_uniform(p.w_in, in_dim, rng);
    init_uniform(p.w_rec, hidden, rng);
    init_uniform(p.w_out, hidden, rng);
    return p;
}

namespace {

// z = w_in[:, token] + w_rec h_prev + b
void cell_preactivation(const RnnParams& p, int token, const double* h_prev, double* z) {
    gemv(p.w_rec, h_prev, z, false);
    for (int i = 0; i < p.hidden; ++i) z[i] += p.w_in(i, token) + p.b_hidden[i];
}

}  // namespace

std::pair<Tensor1, Tensor1> rnn_step(const RnnParams& p, int token, const Tensor1& h_prev) {
    if (token < 0 || token >= p.in_dim) throw std::out_of_range("rnn_step: token id out of range");
    if (static_cast<int>(h_prev.size()) != p.hidden)
        throw std::runtime_error("rnn_step: hidden state size mismatch");
    Tensor1 h(p.hidden);
    cell_preactivation(p, token, h_prev.data(), h.data());
    for (double& x : h) x = std::tanh(x);
    Tensor1 out(p.out_dim);
    gemv(p.w_out, h.data(), out.data(), false);
    for (int i = 0; i < p.out_dim; ++i) out[i] += p.b_out[i];
    log_softmax_inplace(out.data(), p.out_dim);
    return {std::move(h), std::move(out)};
}

double rnn_route_loss_grad(const RnnParams& p, const std::vector<int>& tokens, RnnGrads& g,
                           double scale) {
    const int steps = static_cast<int>(tokens.size()) - 1;
    if (steps < 1) return 0.0;
    const int H = p.hidden, O = p.out_dim;

    Tensor2 states(steps, H);       // h(1..steps)
    Tensor2 prev_states(steps, H);  // h(0..steps-1)
    std::copy(p.h_init.begin(), p.h_init.end(), prev_states.row(0));
    for (int t = 0; t < steps; ++t) {
        double* h = states.row(t);
        cell_preactivation(p, tokens[t], prev_states.row(t), h);
        for (int i = 0; i < H; ++i) h[i] = std::tanh(h[i]);
        if (t + 1 < steps) std::copy(h, h + H, prev_states.row(t + 1));
    }

    // Output layer, batched over steps.
    Tensor2 dzy(steps, O);
    gemm_rows(p.w_out, states, dzy);
    double loss = 0.0;
    for (int t = 0; t < steps; ++t) {
        double* row = dzy.row(t);
        for (int i = 0; i < O; ++i) row[i] += p.b_out[i];
        log_softmax_inplace(row, O);
        loss -= row[tokens[t + 1]];
        for (int i = 0; i < O; ++i) row[i] = std::exp(row[i]);  // softmax
        row[tokens[t + 1]] -= 1.0;                              // dNLL/dz_y
        for (int i = 0; i < O; ++i) {
            row[i] *= scale;
            g.b_out[i] += row[i];
        }
    }
    accumulate_outer_rows(g.w_out, dzy, states, 0, steps);

    Tensor2 dzh(steps, H);
    gemm_rows_t(p.w_out, dzy, dzh);  // dzh[t] = w_out^T dzy[t] (dh so far)
    Tensor1 carry(H, 0.0);
    for (int t = steps - 1; t >= 0; --t) {
        double* row = dzh.row(t);
        const double* h = states.row(t);
        for (int i = 0; i < H; ++i) row[i] = (row[i] + carry[i]) * (1.0 - h[i] * h[i]);
        std::fill(carry.begin(), carry.end(), 0.0);
        gemv_t(p.w_rec, row, carry.data());  // flows to h(t-1)
        for (int i = 0; i < H; ++i) {
            g.w_in(i, tokens[t]) += row[i];
            g.b_hidden[i] += row[i];
        }
    }
    accumulate_outer_rows(g.w_rec, dzh, prev_states, 0, steps);
    for (int i = 0; i < H; ++i) g.h_init[i] += carry[i];  // carry now holds d h(0)
    return loss;
}

double rnn_route_loss(const RnnParams& p, const std::vector<int>& tokens) {
    const int steps = static_cast<int>(tokens.size()) - 1;
    if (steps < 1) return 0.0;
    Tensor1 h = p.h_init;
    double loss = 0.0;
    for (int t = 0; t < steps; ++t) {
        auto [h_next, logp] = rnn_step(p, tokens[t], h);
        h = std::move(h_next);
        loss -= logp[tokens[t + 1]];
    }
    return loss;
}

RnnTrainResult rnn_train(const RouteDataset& ds, int node_count, const TrainConfig& cfg) {
    cfg.validate();
    std::vector<const std::vector<int>*> train;
    for (const auto& e : ds.entries)
        if (e.train) train.push_back(&e.route.nodes);
    if (train.empty()) throw std::runtime_error("rnn_train: dataset has no training routes");

    RnnTrainResult res;
    res.params = rnn_init(node_count, cfg.hidden, node_count, cfg.seed);
    RnnGrads grads(res.params);
    auto pviews = res.params.param_views();
    AdamState adam(cfg.adam, block_sizes(pviews));
    Rng shuffle_rng(mix_seed(cfg.seed, 1));

    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double nll = 0.0;
        size_t steps = 0;
        for (size_t idx : order) {
            const auto& tokens = *train[idx];
            grads.zero();
            nll += rnn_route_loss_grad(res.params, tokens, grads, 1.0);
            steps += tokens.size() - 1;
            auto gviews = grads.views();
            std::vector<std::pair<double*, const double*>> blocks;
            blocks.reserve(pviews.size());
            for (size_t k = 0; k < pviews.size(); ++k)
                blocks.emplace_back(pviews[k].data, gviews[k].data);
            adam.step(blocks);
        }
        res.epoch_loss.push_back(nll / static_cast<double>(steps));
    }
    return res;
}

Rollout rnn_rollout(const RnnParams& p, int start, int stop, int max_len) {
    Rollout r;
    r.tokens.push_back(start);
    if (start == stop) {
        r.reached = true;
        return r;
    }
    Tensor1 h = p.h_init;
    int token = start;
    while (static_cast<int>(r.tokens.size()) < max_len) {
        auto [h_next, logp] = rnn_step(p, token, h);
        h = std::move(h_next);
        token = static_cast<int>(std::max_element(logp.begin(), logp.end()) - logp.begin());
        r.tokens.push_back(token);
        if (token == stop) {
            r.reached = true;
            break;
        }
    }
    return r;
}

std::optional<Route> intersect_paths(const std::vector<int>& forward,
                                     const std::vector<int>& backward, const RoadGraph& g) {
    if (forward.empty() || backward.empty()) return std::nullopt;

    // Longest valid walk prefix of each sequence, with cumulative weights.
    auto prefix_weights = [&g](const std::vector<int>& seq, std::vector<double>& w) {
        w.assign(1, 0.0);
        for (size_t i = 1; i < seq.size(); ++i) {
            if (seq[i - 1] == seq[i] || !g.has_edge(seq[i - 1], seq[i])) break;
            w.push_back(w.back() + g.edge_weight(seq[i - 1], seq[i]));
        }
        return w.size();  // number of usable positions
    };
    std::vector<double> wf, wb;
    const size_t nf = prefix_weights(forward, wf);
    const size_t nb = prefix_weights(backward, wb);

    size_t best_i = 0, best_j = 0;
    double best = -1.0;
    for (size_t i = 0; i < nf; ++i) {
        for (size_t j = 0; j < nb; ++j) {
            if (forward[i] != backward[j]) continue;
            const double w = wf[i] + wb[j];
            if (best < 0.0 || w < best) {
                best = w;
                best_i = i;
                best_j = j;
            }
        }
    }
    if (best < 0.0) return std::nullopt;

    Route r;
    r.total_weight = best;
    r.nodes.assign(forward.begin(), forward.begin() + best_i + 1);
    for (size_t j = best_j; j-- > 0;) r.nodes.push_back(backward[j]);
    return r;
}

void save_rnn_checkpoint(RnnParams& p, const std::map<std::string, std::string>& extra_meta,
                         const std::string& file) {
    auto meta = extra_meta;
    meta["in_dim"] = std::to_string(p.in_dim);
    meta["hidden"] = std::to_string(p.hidden);
    meta["out_dim"] = std::to_string(p.out_dim);
    save_checkpoint(p.param_views(), meta, file);
}

RnnParams load_rnn_checkpoint(const std::string& file) {
    Checkpoint ck = load_checkpoint(file);
    RnnParams p;
    p.in_dim = std::stoi(ck.meta.at("in_dim"));
    p.hidden = std::stoi(ck.meta.at("hidden"));
    p.out_dim = std::stoi(ck.meta.at("out_dim"));
    p.w_in = Tensor2(p.hidden, p.in_dim);
    p.w_rec = Tensor2(p.hidden, p.hidden);
    p.b_hidden.assign(p.hidden, 0.0);
    p.w_out = Tensor2(p.out_dim, p.hidden);
    p.b_out.assign(p.out_dim, 0.0);
    p.h_init.assign(p.hidden, 0.0);
    restore_params(ck, p.param_views());
    return p;
}

}  // namespace routelab
