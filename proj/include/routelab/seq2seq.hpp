#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "routelab/dataset.hpp"
#include "routelab/params.hpp"
#include "routelab/rnn.hpp"
#include "routelab/tensor.hpp"

namespace routelab {

enum class DecoderCell { Rnn, Gru };

std::string to_string(DecoderCell c);
DecoderCell decoder_cell_from_string(const std::string& s);

// Encoder-decoder route model. The encoder is a vanilla RNN over the two-token
// sequence [source, destination]; its final hidden state is the context that
// seeds the decoder. Tokens live in [0, vocab); vocab-1 is the end-of-sequence
// marker, never a node.
struct Seq2SeqParams {
    int vocab = 0;
    int hidden = 0;
    int align = 64;
    DecoderCell cell = DecoderCell::Gru;
    bool attention = false;

    // encoder
    Tensor2 enc_w_tok, enc_w_rec;
    Tensor1 enc_b, enc_h_init;

    // decoder, RNN cell (used when cell == Rnn)
    Tensor2 dec_w_tok, dec_w_rec, dec_w_ctx;
    Tensor1 dec_b;

    // decoder, GRU cell (used when cell == Gru); Cho-style update/reset gates:
    //   update = sigmoid(..), reset = sigmoid(..),
    //   cand   = tanh(W_tok x + W_ctx ctx + W_rec (reset o h_prev) + b)
    //   h      = update o h_prev + (1 - update) o cand
    Tensor2 gru_w_tok_update, gru_w_rec_update, gru_w_ctx_update;
    Tensor1 gru_b_update;
    Tensor2 gru_w_tok_reset, gru_w_rec_reset, gru_w_ctx_reset;
    Tensor1 gru_b_reset;
    Tensor2 gru_w_tok_cand, gru_w_rec_cand, gru_w_ctx_cand;
    Tensor1 gru_b_cand;

    // additive attention over the two encoder states
    Tensor2 attn_w_query, attn_w_key;  // align x hidden
    Tensor1 attn_v;                    // align

    // shared output layer
    Tensor2 out_w;  // vocab x hidden
    Tensor1 out_b;

    int eos() const { return vocab - 1; }
    std::vector<ParamView> param_views();
};

struct Seq2SeqGrads {
    Seq2SeqParams g;  // same shapes, gradient values
    explicit Seq2SeqGrads(const Seq2SeqParams& p);
    void zero();
    std::vector<ParamView> views() { return g.param_views(); }
};

Seq2SeqParams seq2seq_init(int node_count, int hidden, DecoderCell cell, bool attention,
                           uint64_t seed, int align = 64);

struct EncoderOutput {
    Tensor2 states;   // 2 x hidden, one row per input token
    Tensor1 context;  // final state
};

// Runs the encoder over [s, d].
EncoderOutput seq2seq_encode(const Seq2SeqParams& p, int s, int d);

// Greedy decoding for the pair (from, to): encodes [from, to] and emits until
// EOS or until the sequence holds max_len tokens. The returned token list
// starts with `from`; EOS is not included.
struct DecodeResult {
    std::vector<int> tokens;
    bool ended_with_eos = false;
    std::vector<Tensor1> attention_weights;  // per emitted step, 2 weights each
};
DecodeResult seq2seq_decode(const Seq2SeqParams& p, int from, int to, int max_len);

// Teacher-forced NLL of a route (nodes[0..k]); targets are nodes[1..k] then
// EOS. Gradients accumulate into g scaled by `scale`; returns summed NLL.
double seq2seq_route_loss_grad(const Seq2SeqParams& p, const std::vector<int>& route,
                               Seq2SeqGrads& g, double scale);
double seq2seq_route_loss(const Seq2SeqParams& p, const std::vector<int>& route);

struct Seq2SeqTrainResult {
    Seq2SeqParams params;
    std::vector<double> epoch_loss;  // mean NLL per decoded step
};

Seq2SeqTrainResult seq2seq_train(const RouteDataset& ds, int node_count, const TrainConfig& cfg,
                                 DecoderCell cell, bool attention);

void save_seq2seq_checkpoint(Seq2SeqParams& p, const std::map<std::string, std::string>& extra_meta,
                             const std::string& file);
Seq2SeqParams load_seq2seq_checkpoint(const std::string& file);

}  // namespace routelab
