#include "routelab/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "routelab/rng.hpp"

namespace routelab {

std::string to_string(DecoderCell c) { return c == DecoderCell::Rnn ? "rnn" : "gru"; }

DecoderCell decoder_cell_from_string(const std::string& s) {
    if (s == "rnn") return DecoderCell::Rnn;
    if (s == "gru") return DecoderCell::Gru;
    throw std::runtime_error("unknown decoder cell '" + s + "' (expected rnn or gru)");
}

namespace {

inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

void init_uniform(Tensor2& t, int fan_in, Rng& rng) {
    const double k = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& x : t.v) x = rng.uniform(-k, k);
}

void init_uniform(Tensor1& t, int fan_in, Rng& rng) {
    const double k = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& x : t) x = rng.uniform(-k, k);
}

}  // namespace

std::vector<ParamView> Seq2SeqParams::param_views() {
    std::vector<ParamView> v{view("enc_token_weight", enc_w_tok),
                             view("enc_recurrent_weight", enc_w_rec),
                             view("enc_bias", enc_b),
                             view("enc_initial_hidden", enc_h_init)};
    if (cell == DecoderCell::Rnn) {
        v.push_back(view("dec_token_weight", dec_w_tok));
        v.push_back(view("dec_recurrent_weight", dec_w_rec));
        v.push_back(view("dec_bias", dec_b));
        if (attention) v.push_back(view("dec_context_weight", dec_w_ctx));
    } else {
        v.push_back(view("gru_update_token_weight", gru_w_tok_update));
        v.push_back(view("gru_update_recurrent_weight", gru_w_rec_update));
        v.push_back(view("gru_update_bias", gru_b_update));
        v.push_back(view("gru_reset_token_weight", gru_w_tok_reset));
        v.push_back(view("gru_reset_recurrent_weight", gru_w_rec_reset));
        v.push_back(view("gru_reset_bias", gru_b_reset));
        v.push_back(view("gru_cand_token_weight", gru_w_tok_cand));
        v.push_back(view("gru_cand_recurrent_weight", gru_w_rec_cand));
        v.push_back(view("gru_cand_bias", gru_b_cand));
        if (attention) {
            v.push_back(view("gru_update_context_weight", gru_w_ctx_update));
            v.push_back(view("gru_reset_context_weight", gru_w_ctx_reset));
            v.push_back(view("gru_cand_context_weight", gru_w_ctx_cand));
        }
    }
    if (attention) {
        v.push_back(view("attn_query_weight", attn_w_query));
        v.push_back(view("attn_key_weight", attn_w_key));
        v.push_back(view("attn_align", attn_v));
    }
    v.push_back(view("output_weight", out_w));
    v.push_back(view("output_bias", out_b));
    return v;
}

Seq2SeqGrads::Seq2SeqGrads(const Seq2SeqParams& p) : g(p) {
    zero();
}

void Seq2SeqGrads::zero() {
    for (auto& view : g.param_views()) std::fill(view.data, view.data + view.len, 0.0);
}

Seq2SeqParams seq2seq_init(int node_count, int hidden, DecoderCell cell, bool attention,
                           uint64_t seed, int align) {
    Seq2SeqParams p;
    p.vocab = node_count + 1;
    p.hidden = hidden;
    p.align = align;
    p.cell = cell;
    p.attention = attention;
    const int V = p.vocab, H = hidden;

    p.enc_w_tok = Tensor2(H, V);
    p.enc_w_rec = Tensor2(H, H);
    p.enc_b.assign(H, 0.0);
    p.enc_h_init.assign(H, 0.0);

    if (cell == DecoderCell::Rnn) {
        p.dec_w_tok = Tensor2(H, V);
        p.dec_w_rec = Tensor2(H, H);
        p.dec_b.assign(H, 0.0);
        if (attention) p.dec_w_ctx = Tensor2(H, H);
    } else {
        for (Tensor2* t : {&p.gru_w_tok_update, &p.gru_w_tok_reset, &p.gru_w_tok_cand})
            *t = Tensor2(H, V);
        for (Tensor2* t : {&p.gru_w_rec_update, &p.gru_w_rec_reset, &p.gru_w_rec_cand})
            *t = Tensor2(H, H);
        if (attention)
            for (Tensor2* t : {&p.gru_w_ctx_update, &p.gru_w_ctx_reset, &p.gru_w_ctx_cand})
                *t = Tensor2(H, H);
        p.gru_b_update.assign(H, 0.0);
        p.gru_b_reset.assign(H, 0.0);
        p.gru_b_cand.assign(H, 0.0);
    }
    if (attention) {
        p.attn_w_query = Tensor2(align, H);
        p.attn_w_key = Tensor2(align, H);
        p.attn_v.assign(align, 0.0);
    }
    p.out_w = Tensor2(V, H);
    p.out_b.assign(V, 0.0);

    Rng rng(seed);
    init_uniform(p.enc_w_tok, V, rng);
    init_uniform(p.enc_w_rec, H, rng);
    if (cell == DecoderCell::Rnn) {
        init_uniform(p.dec_w_tok, V, rng);
        init_uniform(p.dec_w_rec, H, rng);
        if (attention) init_uniform(p.dec_w_ctx, H, rng);
    } else {
        init_uniform(p.gru_w_tok_update, V, rng);
        init_uniform(p.gru_w_rec_update, H, rng);
        init_uniform(p.gru_w_tok_reset, V, rng);
        init_uniform(p.gru_w_rec_reset, H, rng);
        init_uniform(p.gru_w_tok_cand, V, rng);
        init_uniform(p.gru_w_rec_cand, H, rng);
        if (attention) {
            init_uniform(p.gru_w_ctx_update, H, rng);
            init_uniform(p.gru_w_ctx_reset, H, rng);
            init_uniform(p.gru_w_ctx_cand, H, rng);
        }
    }
    if (attention) {
        init_uniform(p.attn_w_query, H, rng);
        init_uniform(p.attn_w_key, H, rng);
        init_uniform(p.attn_v, align, rng);
    }
    init_uniform(p.out_w, H, rng);
    return p;
}

namespace {

// --- encoder ---------------------------------------------------------------

void encoder_forward(const Seq2SeqParams& p, int s, int d, Tensor2& states) {
    const int H = p.hidden;
    const int toks[2] = {s, d};
    const double* h_prev = p.enc_h_init.data();
    for (int t = 0; t < 2; ++t) {
        double* h = states.row(t);
        gemv(p.enc_w_rec, h_prev, h, false);
        for (int i = 0; i < H; ++i) h[i] = std::tanh(h[i] + p.enc_w_tok(i, toks[t]) + p.enc_b[i]);
        h_prev = h;
    }
}

// dstates carries dL/dE_k on entry; adds encoder parameter grads (scaled
// already) and the initial-hidden grad.
void encoder_backward(const Seq2SeqParams& p, int s, int d, const Tensor2& states,
                      Tensor2& dstates, Seq2SeqParams& g) {
    const int H = p.hidden;
    const int toks[2] = {s, d};
    Tensor1 carry(H, 0.0);
    for (int t = 1; t >= 0; --t) {
        double* dz = dstates.row(t);
        const double* h = states.row(t);
        for (int i = 0; i < H; ++i) dz[i] = (dz[i] + carry[i]) * (1.0 - h[i] * h[i]);
        const double* h_prev = t == 0 ? p.enc_h_init.data() : states.row(t - 1);
        add_outer(g.enc_w_rec, dz, h_prev);
        for (int i = 0; i < H; ++i) {
            g.enc_w_tok(i, toks[t]) += dz[i];
            g.enc_b[i] += dz[i];
        }
        std::fill(carry.begin(), carry.end(), 0.0);
        gemv_t(p.enc_w_rec, dz, carry.data());
    }
    for (int i = 0; i < H; ++i) g.enc_h_init[i] += carry[i];
}

// --- attention ---------------------------------------------------------------

struct AttnStep {
    double alpha[2] = {0.0, 0.0};
    Tensor1 tanh_u;  // 2 * align, tanh of the per-key alignment vector
};

void attention_forward(const Seq2SeqParams& p, const Tensor2& enc_states,
                       const Tensor2& pre_keys, const double* h_prev, AttnStep& st,
                       double* ctx) {
    const int A = p.align, H = p.hidden;
    Tensor1 q(A, 0.0);
    gemv(p.attn_w_query, h_prev, q.data(), false);
    st.tanh_u.assign(2 * A, 0.0);
    double score[2];
    for (int k = 0; k < 2; ++k) {
        double* tu = st.tanh_u.data() + k * A;
        const double* pk = pre_keys.row(k);
        double acc = 0.0;
        for (int a = 0; a < A; ++a) {
            tu[a] = std::tanh(q[a] + pk[a]);
            acc += p.attn_v[a] * tu[a];
        }
        score[k] = acc;
    }
    const double m = std::max(score[0], score[1]);
    const double e0 = std::exp(score[0] - m), e1 = std::exp(score[1] - m);
    st.alpha[0] = e0 / (e0 + e1);
    st.alpha[1] = e1 / (e0 + e1);
    for (int i = 0; i < H; ++i)
        ctx[i] = st.alpha[0] * enc_states(0, i) + st.alpha[1] * enc_states(1, i);
}

// Backward for one attention step. Adds into dh_prev, denc_states and grads.
void attention_backward(const Seq2SeqParams& p, const Tensor2& enc_states, const AttnStep& st,
                        const double* h_prev, const double* dctx, double* dh_prev,
                        Tensor2& denc_states, Seq2SeqParams& g) {
    const int A = p.align, H = p.hidden;
    double dalpha[2];
    for (int k = 0; k < 2; ++k) {
        double acc = 0.0;
        const double* ek = enc_states.row(k);
        for (int i = 0; i < H; ++i) {
            acc += dctx[i] * ek[i];
            // dE_k from the convex combination
        }
        dalpha[k] = acc;
        double* dek = denc_states.row(k);
        for (int i = 0; i < H; ++i) dek[i] += st.alpha[k] * dctx[i];
    }
    const double dot = st.alpha[0] * dalpha[0] + st.alpha[1] * dalpha[1];
    Tensor1 da(A, 0.0);  // accumulated d(pre-tanh alignment) via both keys
    for (int k = 0; k < 2; ++k) {
        const double dscore = st.alpha[k] * (dalpha[k] - dot);
        const double* tu = st.tanh_u.data() + k * A;
        Tensor1 duk(A);
        for (int a = 0; a < A; ++a) {
            g.attn_v[a] += dscore * tu[a];
            duk[a] = dscore * p.attn_v[a] * (1.0 - tu[a] * tu[a]);
            da[a] += duk[a];
        }
        add_outer(g.attn_w_key, duk.data(), enc_states.row(k));
        gemv_t(p.attn_w_key, duk.data(), denc_states.row(k));
    }
    add_outer(g.attn_w_query, da.data(), h_prev);
    gemv_t(p.attn_w_query, da.data(), dh_prev);
}

// --- decoder cells -----------------------------------------------------------

// Saved forward values for one decoded step.
struct DecoderTrace {
    int steps = 0;
    Tensor2 h_prev, h;            // T x H
    Tensor2 ctx;                  // T x H (attention only)
    std::vector<AttnStep> attn;   // T entries (attention only)
    Tensor2 update, reset, cand, reset_h;  // T x H (GRU only)
};

void decoder_step_forward(const Seq2SeqParams& p, int tok, const double* h_prev,
                          const double* ctx, DecoderTrace* trace, int t, double* h_out) {
    const int H = p.hidden;
    if (p.cell == DecoderCell::Rnn) {
        gemv(p.dec_w_rec, h_prev, h_out, false);
        if (p.attention) gemv(p.dec_w_ctx, ctx, h_out, true);
        for (int i = 0; i < H; ++i)
            h_out[i] = std::tanh(h_out[i] + p.dec_w_tok(i, tok) + p.dec_b[i]);
        return;
    }
    Tensor1 zg(H), rg(H), rh(H), ng(H);
    gemv(p.gru_w_rec_update, h_prev, zg.data(), false);
    gemv(p.gru_w_rec_reset, h_prev, rg.data(), false);
    if (p.attention) {
        gemv(p.gru_w_ctx_update, ctx, zg.data(), true);
        gemv(p.gru_w_ctx_reset, ctx, rg.data(), true);
    }
    for (int i = 0; i < H; ++i) {
        zg[i] = sigmoid(zg[i] + p.gru_w_tok_update(i, tok) + p.gru_b_update[i]);
        rg[i] = sigmoid(rg[i] + p.gru_w_tok_reset(i, tok) + p.gru_b_reset[i]);
        rh[i] = rg[i] * h_prev[i];
    }
    gemv(p.gru_w_rec_cand, rh.data(), ng.data(), false);
    if (p.attention) gemv(p.gru_w_ctx_cand, ctx, ng.data(), true);
    for (int i = 0; i < H; ++i) {
        ng[i] = std::tanh(ng[i] + p.gru_w_tok_cand(i, tok) + p.gru_b_cand[i]);
        h_out[i] = zg[i] * h_prev[i] + (1.0 - zg[i]) * ng[i];
    }
    if (trace) {
        std::copy(zg.begin(), zg.end(), trace->update.row(t));
        std::copy(rg.begin(), rg.end(), trace->reset.row(t));
        std::copy(ng.begin(), ng.end(), trace->cand.row(t));
        std::copy(rh.begin(), rh.end(), trace->reset_h.row(t));
    }
}

}  // namespace

EncoderOutput seq2seq_encode(const Seq2SeqParams& p, int s, int d) {
    if (s < 0 || s >= p.vocab - 1 || d < 0 || d >= p.vocab - 1)
        throw std::out_of_range("seq2seq_encode: node id out of range");
    EncoderOutput out;
    out.states = Tensor2(2, p.hidden);
    encoder_forward(p, s, d, out.states);
    out.context.assign(out.states.row(1), out.states.row(1) + p.hidden);
    return out;
}

DecodeResult seq2seq_decode(const Seq2SeqParams& p, int from, int to, int max_len) {
    DecodeResult res;
    res.tokens.push_back(from);
    if (from == to) {
        res.ended_with_eos = true;
        return res;
    }
    EncoderOutput enc = seq2seq_encode(p, from, to);
    Tensor2 pre_keys(2, p.align);
    if (p.attention) {
        gemv(p.attn_w_key, enc.states.row(0), pre_keys.row(0), false);
        gemv(p.attn_w_key, enc.states.row(1), pre_keys.row(1), false);
    }
    Tensor1 h = enc.context;
    Tensor1 h_next(p.hidden), ctx(p.hidden, 0.0), zy(p.vocab);
    int tok = from;
    while (static_cast<int>(res.tokens.size()) < max_len) {
        AttnStep st;
        if (p.attention) {
            attention_forward(p, enc.states, pre_keys, h.data(), st, ctx.data());
            res.attention_weights.push_back({st.alpha[0], st.alpha[1]});
        }
        decoder_step_forward(p, tok, h.data(), ctx.data(), nullptr, 0, h_next.data());
        std::swap(h, h_next);
        gemv(p.out_w, h.data(), zy.data(), false);
        for (int i = 0; i < p.vocab; ++i) zy[i] += p.out_b[i];
        const int arg = static_cast<int>(std::max_element(zy.begin(), zy.end()) - zy.begin());
        if (arg == p.eos()) {
            res.ended_with_eos = true;
            break;
        }
        res.tokens.push_back(arg);
        tok = arg;
        if (arg == to) break;
    }
    return res;
}

double seq2seq_route_loss_grad(const Seq2SeqParams& p, const std::vector<int>& route,
                               Seq2SeqGrads& grads, double scale) {
    const int steps = static_cast<int>(route.size());
    if (steps < 1) return 0.0;
    const int H = p.hidden, V = p.vocab;
    const int s = route.front(), d = route.back();

    Tensor2 enc_states(2, H);
    encoder_forward(p, s, d, enc_states);
    Tensor2 pre_keys(2, p.align);
    if (p.attention) {
        gemv(p.attn_w_key, enc_states.row(0), pre_keys.row(0), false);
        gemv(p.attn_w_key, enc_states.row(1), pre_keys.row(1), false);
    }

    DecoderTrace tr;
    tr.steps = steps;
    tr.h_prev = Tensor2(steps, H);
    tr.h = Tensor2(steps, H);
    if (p.attention) {
        tr.ctx = Tensor2(steps, H);
        tr.attn.resize(steps);
    }
    if (p.cell == DecoderCell::Gru) {
        tr.update = Tensor2(steps, H);
        tr.reset = Tensor2(steps, H);
        tr.cand = Tensor2(steps, H);
        tr.reset_h = Tensor2(steps, H);
    }

    // Teacher-forced forward pass; input t is route[t], target is route[t+1]
    // (EOS for the final step).
    std::copy(enc_states.row(1), enc_states.row(1) + H, tr.h_prev.row(0));
    for (int t = 0; t < steps; ++t) {
        if (t > 0) std::copy(tr.h.row(t - 1), tr.h.row(t - 1) + H, tr.h_prev.row(t));
        const double* ctx = nullptr;
        if (p.attention) {
            attention_forward(p, enc_states, pre_keys, tr.h_prev.row(t), tr.attn[t],
                              tr.ctx.row(t));
            ctx = tr.ctx.row(t);
        }
        decoder_step_forward(p, route[t], tr.h_prev.row(t), ctx, &tr, t, tr.h.row(t));
    }

    // Output layer, batched over steps.
    Tensor2 dzy(steps, V);
    gemm_rows(p.out_w, tr.h, dzy);
    double loss = 0.0;
    for (int t = 0; t < steps; ++t) {
        double* row = dzy.row(t);
        for (int i = 0; i < V; ++i) row[i] += p.out_b[i];
        log_softmax_inplace(row, V);
        const int target = t + 1 < steps ? route[t + 1] : p.eos();
        loss -= row[target];
        for (int i = 0; i < V; ++i) row[i] = std::exp(row[i]);
        row[target] -= 1.0;
        for (int i = 0; i < V; ++i) {
            row[i] *= scale;
            grads.g.out_b[i] += row[i];
        }
    }
    accumulate_outer_rows(grads.g.out_w, dzy, tr.h, 0, steps);

    Tensor2 dh(steps, H);
    gemm_rows_t(p.out_w, dzy, dh);  // dL/dh(t) from the output layer

    Tensor2 denc(2, H);  // gradient wrt encoder states
    Tensor2 dzraw(steps, H);  // RNN cell: pre-tanh grads | GRU: cand pre-tanh grads
    Tensor2 dupd_raw, drst_raw;
    if (p.cell == DecoderCell::Gru) {
        dupd_raw = Tensor2(steps, H);
        drst_raw = Tensor2(steps, H);
    }
    Tensor1 carry(H, 0.0);  // gradient flowing into h_prev of the current step
    Tensor1 dctx(H);
    for (int t = steps - 1; t >= 0; --t) {
        double* dht = dh.row(t);
        for (int i = 0; i < H; ++i) dht[i] += carry[i];
        std::fill(carry.begin(), carry.end(), 0.0);
        std::fill(dctx.begin(), dctx.end(), 0.0);
        const double* h_prev = tr.h_prev.row(t);

        if (p.cell == DecoderCell::Rnn) {
            double* dz = dzraw.row(t);
            const double* h = tr.h.row(t);
            for (int i = 0; i < H; ++i) dz[i] = dht[i] * (1.0 - h[i] * h[i]);
            gemv_t(p.dec_w_rec, dz, carry.data());
            if (p.attention) gemv_t(p.dec_w_ctx, dz, dctx.data());
            for (int i = 0; i < H; ++i) {
                grads.g.dec_w_tok(i, route[t]) += dz[i];
                grads.g.dec_b[i] += dz[i];
            }
        } else {
            const double* zg = tr.update.row(t);
            const double* rg = tr.reset.row(t);
            const double* ng = tr.cand.row(t);
            double* dzg = dupd_raw.row(t);
            double* drg = drst_raw.row(t);
            double* dng = dzraw.row(t);
            for (int i = 0; i < H; ++i) {
                const double dh_i = dht[i];
                dzg[i] = dh_i * (h_prev[i] - ng[i]) * zg[i] * (1.0 - zg[i]);
                dng[i] = dh_i * (1.0 - zg[i]) * (1.0 - ng[i] * ng[i]);
                carry[i] += dh_i * zg[i];
            }
            Tensor1 drh(H, 0.0);
            gemv_t(p.gru_w_rec_cand, dng, drh.data());
            for (int i = 0; i < H; ++i) {
                drg[i] = drh[i] * h_prev[i] * rg[i] * (1.0 - rg[i]);
                carry[i] += drh[i] * rg[i];
            }
            gemv_t(p.gru_w_rec_update, dzg, carry.data());
            gemv_t(p.gru_w_rec_reset, drg, carry.data());
            if (p.attention) {
                gemv_t(p.gru_w_ctx_update, dzg, dctx.data());
                gemv_t(p.gru_w_ctx_reset, drg, dctx.data());
                gemv_t(p.gru_w_ctx_cand, dng, dctx.data());
            }
            for (int i = 0; i < H; ++i) {
                grads.g.gru_w_tok_update(i, route[t]) += dzg[i];
                grads.g.gru_w_tok_reset(i, route[t]) += drg[i];
                grads.g.gru_w_tok_cand(i, route[t]) += dng[i];
                grads.g.gru_b_update[i] += dzg[i];
                grads.g.gru_b_reset[i] += drg[i];
                grads.g.gru_b_cand[i] += dng[i];
            }
        }
        if (p.attention)
            attention_backward(p, enc_states, tr.attn[t], h_prev, dctx.data(), carry.data(),
                               denc, grads.g);
    }

    // Batched weight accumulations over all steps.
    if (p.cell == DecoderCell::Rnn) {
        accumulate_outer_rows(grads.g.dec_w_rec, dzraw, tr.h_prev, 0, steps);
        if (p.attention) accumulate_outer_rows(grads.g.dec_w_ctx, dzraw, tr.ctx, 0, steps);
    } else {
        accumulate_outer_rows(grads.g.gru_w_rec_update, dupd_raw, tr.h_prev, 0, steps);
        accumulate_outer_rows(grads.g.gru_w_rec_reset, drst_raw, tr.h_prev, 0, steps);
        accumulate_outer_rows(grads.g.gru_w_rec_cand, dzraw, tr.reset_h, 0, steps);
        if (p.attention) {
            accumulate_outer_rows(grads.g.gru_w_ctx_update, dupd_raw, tr.ctx, 0, steps);
            accumulate_outer_rows(grads.g.gru_w_ctx_reset, drst_raw, tr.ctx, 0, steps);
            accumulate_outer_rows(grads.g.gru_w_ctx_cand, dzraw, tr.ctx, 0, steps);
        }
    }

    // carry now holds dL/d h_dec(0) = dL/d context = dL/d enc_state(1).
    for (int i = 0; i < H; ++i) denc(1, i) += carry[i];
    encoder_backward(p, s, d, enc_states, denc, grads.g);
    return loss;
}

double seq2seq_route_loss(const Seq2SeqParams& p, const std::vector<int>& route) {
    const int steps = static_cast<int>(route.size());
    if (steps < 1) return 0.0;
    const int H = p.hidden, V = p.vocab;
    Tensor2 enc_states(2, H);
    encoder_forward(p, route.front(), route.back(), enc_states);
    Tensor2 pre_keys(2, p.align);
    if (p.attention) {
        gemv(p.attn_w_key, enc_states.row(0), pre_keys.row(0), false);
        gemv(p.attn_w_key, enc_states.row(1), pre_keys.row(1), false);
    }
    Tensor1 h(enc_states.row(1), enc_states.row(1) + H);
    Tensor1 h_next(H), ctx(H, 0.0), zy(V);
    double loss = 0.0;
    for (int t = 0; t < steps; ++t) {
        AttnStep st;
        if (p.attention) attention_forward(p, enc_states, pre_keys, h.data(), st, ctx.data());
        decoder_step_forward(p, route[t], h.data(), ctx.data(), nullptr, 0, h_next.data());
        std::swap(h, h_next);
        gemv(p.out_w, h.data(), zy.data(), false);
        for (int i = 0; i < V; ++i) zy[i] += p.out_b[i];
        log_softmax_inplace(zy.data(), V);
        loss -= zy[t + 1 < steps ? route[t + 1] : p.eos()];
    }
    return loss;
}

Seq2SeqTrainResult seq2seq_train(const RouteDataset& ds, int node_count, const TrainConfig& cfg,
                                 DecoderCell cell, bool attention) {
    cfg.validate();
    std::vector<const std::vector<int>*> train;
    for (const auto& e : ds.entries)
        if (e.train) train.push_back(&e.route.nodes);
    if (train.empty()) throw std::runtime_error("seq2seq_train: dataset has no training routes");

    Seq2SeqTrainResult res;
    res.params = seq2seq_init(node_count, cfg.hidden, cell, attention, cfg.seed);
    Seq2SeqGrads grads(res.params);
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
            const auto& route = *train[idx];
            grads.zero();
            nll += seq2seq_route_loss_grad(res.params, route, grads, 1.0);
            steps += route.size();
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

void save_seq2seq_checkpoint(Seq2SeqParams& p, const std::map<std::string, std::string>& extra_meta,
                             const std::string& file) {
    auto meta = extra_meta;
    meta["vocab"] = std::to_string(p.vocab);
    meta["hidden"] = std::to_string(p.hidden);
    meta["align"] = std::to_string(p.align);
    meta["cell"] = to_string(p.cell);
    meta["attention"] = p.attention ? "1" : "0";
    save_checkpoint(p.param_views(), meta, file);
}

Seq2SeqParams load_seq2seq_checkpoint(const std::string& file) {
    Checkpoint ck = load_checkpoint(file);
    const int vocab = std::stoi(ck.meta.at("vocab"));
    const int hidden = std::stoi(ck.meta.at("hidden"));
    const int align = std::stoi(ck.meta.at("align"));
    Seq2SeqParams p = seq2seq_init(vocab - 1, hidden,
                                   decoder_cell_from_string(ck.meta.at("cell")),
                                   ck.meta.at("attention") == "1", 0, align);
    restore_params(ck, p.param_views());
    return p;
}

}  // namespace routelab
