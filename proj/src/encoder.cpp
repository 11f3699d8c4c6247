#include "halludet/encoder.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "halludet/errors.hpp"

namespace halludet {

namespace {

constexpr float kNegInf = -1e9f;

// y[m,n] += x[m,k] @ w[k,n]
void matmul(const float* x, const float* w, float* y, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const float* xi = x + static_cast<size_t>(i) * k;
        float* yi = y + static_cast<size_t>(i) * n;
        for (int p = 0; p < k; ++p) {
            const float xv = xi[p];
            if (xv == 0.0f) continue;
            const float* wp = w + static_cast<size_t>(p) * n;
            for (int j = 0; j < n; ++j) yi[j] += xv * wp[j];
        }
    }
}

// dx[m,k] += dy[m,n] @ w[k,n]^T
void matmul_dx(const float* dy, const float* w, float* dx, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const float* dyi = dy + static_cast<size_t>(i) * n;
        float* dxi = dx + static_cast<size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const float* wp = w + static_cast<size_t>(p) * n;
            float acc = 0.0f;
            for (int j = 0; j < n; ++j) acc += dyi[j] * wp[j];
            dxi[p] += acc;
        }
    }
}

// dw[k,n] += x[m,k]^T @ dy[m,n]
void matmul_dw(const float* x, const float* dy, float* dw, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const float* xi = x + static_cast<size_t>(i) * k;
        const float* dyi = dy + static_cast<size_t>(i) * n;
        for (int p = 0; p < k; ++p) {
            const float xv = xi[p];
            if (xv == 0.0f) continue;
            float* dwp = dw + static_cast<size_t>(p) * n;
            for (int j = 0; j < n; ++j) dwp[j] += xv * dyi[j];
        }
    }
}

void add_bias(float* y, const float* b, int m, int n) {
    for (int i = 0; i < m; ++i) {
        float* yi = y + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) yi[j] += b[j];
    }
}

void bias_grad(const float* dy, float* db, int m, int n) {
    for (int i = 0; i < m; ++i) {
        const float* dyi = dy + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) db[j] += dyi[j];
    }
}

constexpr float kGeluC = 0.7978845608028654f;  // sqrt(2/pi)

float gelu(float x) {
    const float u = kGeluC * (x + 0.044715f * x * x * x);
    return 0.5f * x * (1.0f + std::tanh(u));
}

float gelu_grad(float x) {
    const float u = kGeluC * (x + 0.044715f * x * x * x);
    const float t = std::tanh(u);
    const float du = kGeluC * (1.0f + 3.0f * 0.044715f * x * x);
    return 0.5f * (1.0f + t) + 0.5f * x * (1.0f - t * t) * du;
}

// y = (x - mean) * rstd * g + b, rowwise over dim n
void layer_norm_fwd(const float* x, const float* g, const float* b, float* y, float* mean_out,
                    float* rstd_out, int m, int n) {
    for (int i = 0; i < m; ++i) {
        const float* xi = x + static_cast<size_t>(i) * n;
        float* yi = y + static_cast<size_t>(i) * n;
        float mu = 0.0f;
        for (int j = 0; j < n; ++j) mu += xi[j];
        mu /= static_cast<float>(n);
        float var = 0.0f;
        for (int j = 0; j < n; ++j) {
            const float d = xi[j] - mu;
            var += d * d;
        }
        var /= static_cast<float>(n);
        const float rstd = 1.0f / std::sqrt(var + 1e-5f);
        for (int j = 0; j < n; ++j) yi[j] = (xi[j] - mu) * rstd * g[j] + b[j];
        mean_out[i] = mu;
        rstd_out[i] = rstd;
    }
}

void layer_norm_bwd(const float* x, const float* g, const float* mean, const float* rstd,
                    const float* dy, float* dx, float* dg, float* db, int m, int n) {
    for (int i = 0; i < m; ++i) {
        const float* xi = x + static_cast<size_t>(i) * n;
        const float* dyi = dy + static_cast<size_t>(i) * n;
        float* dxi = dx + static_cast<size_t>(i) * n;
        const float mu = mean[i];
        const float rs = rstd[i];
        float sum_dxhat = 0.0f;
        float sum_dxhat_xhat = 0.0f;
        for (int j = 0; j < n; ++j) {
            const float xhat = (xi[j] - mu) * rs;
            const float dxhat = dyi[j] * g[j];
            sum_dxhat += dxhat;
            sum_dxhat_xhat += dxhat * xhat;
            dg[j] += dyi[j] * xhat;
            db[j] += dyi[j];
        }
        const float inv_n = 1.0f / static_cast<float>(n);
        for (int j = 0; j < n; ++j) {
            const float xhat = (xi[j] - mu) * rs;
            const float dxhat = dyi[j] * g[j];
            dxi[j] += rs * (dxhat - inv_n * sum_dxhat - xhat * inv_n * sum_dxhat_xhat);
        }
    }
}

}  // namespace

void EncoderSpec::validate() const {
    if (n_layers < 1) throw DataError("encoder spec: n_layers must be >= 1");
    if (n_heads < 1) throw DataError("encoder spec: n_heads must be >= 1");
    if (hidden_dim < 1 || hidden_dim % n_heads != 0) {
        throw DataError("encoder spec: hidden_dim must be a positive multiple of n_heads");
    }
    if (max_seq_len < 1) throw DataError("encoder spec: max_seq_len must be >= 1");
    if (vocab_size < 260) throw DataError("encoder spec: vocab_size must cover reserved ids");
}

void ClassifierHead::validate() const {
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw DataError("classifier head: dropout_rate must be in [0,1)");
    }
    if (output_classes != 2) throw DataError("classifier head: output_classes must be 2");
}

TinyEncoder::TinyEncoder(EncoderSpec spec, ClassifierHead head)
    : spec_(std::move(spec)), head_(head) {
    spec_.validate();
    head_.validate();
    const int h = spec_.hidden_dim;
    const int f = 4 * h;
    tok_emb_.init("tok_emb", spec_.vocab_size, h);
    pos_emb_.init("pos_emb", spec_.max_seq_len, h);
    blocks_.resize(static_cast<size_t>(spec_.n_layers));
    for (int l = 0; l < spec_.n_layers; ++l) {
        Block& blk = blocks_[static_cast<size_t>(l)];
        const std::string p = "block" + std::to_string(l) + ".";
        blk.ln1_g.init(p + "ln1_g", 1, h);
        blk.ln1_b.init(p + "ln1_b", 1, h);
        blk.wq.init(p + "wq", h, h);
        blk.bq.init(p + "bq", 1, h);
        blk.wk.init(p + "wk", h, h);
        blk.bk.init(p + "bk", 1, h);
        blk.wv.init(p + "wv", h, h);
        blk.bv.init(p + "bv", 1, h);
        blk.wo.init(p + "wo", h, h);
        blk.bo.init(p + "bo", 1, h);
        blk.ln2_g.init(p + "ln2_g", 1, h);
        blk.ln2_b.init(p + "ln2_b", 1, h);
        blk.w1.init(p + "w1", h, f);
        blk.b1.init(p + "b1", 1, f);
        blk.w2.init(p + "w2", f, h);
        blk.b2.init(p + "b2", 1, h);
    }
    lnf_g_.init("lnf_g", 1, h);
    lnf_b_.init("lnf_b", 1, h);
    head_w_.init("head_w", h, 2);
    head_b_.init("head_b", 1, 2);
}

void TinyEncoder::init_params(Rng& rng) {
    constexpr float kStd = 0.02f;
    for (Tensor* t : parameters()) {
        if (t->rows == 1) {
            // biases and layer-norm parameters; gains start at one
            const bool ln_gain =
                t->name.find("ln") != std::string::npos && t->name.ends_with("_g");
            std::fill(t->w.begin(), t->w.end(), ln_gain ? 1.0f : 0.0f);
        } else {
            for (float& v : t->w) v = static_cast<float>(rng.normal()) * kStd;
        }
    }
}

std::vector<Tensor*> TinyEncoder::parameters() {
    std::vector<Tensor*> out{&tok_emb_, &pos_emb_};
    for (Block& blk : blocks_) {
        for (Tensor* t : {&blk.ln1_g, &blk.ln1_b, &blk.wq, &blk.bq, &blk.wk, &blk.bk, &blk.wv,
                          &blk.bv, &blk.wo, &blk.bo, &blk.ln2_g, &blk.ln2_b, &blk.w1, &blk.b1,
                          &blk.w2, &blk.b2}) {
            out.push_back(t);
        }
    }
    out.push_back(&lnf_g_);
    out.push_back(&lnf_b_);
    out.push_back(&head_w_);
    out.push_back(&head_b_);
    return out;
}

std::size_t TinyEncoder::parameter_count() const {
    std::size_t n = 0;
    n += tok_emb_.w.size() + pos_emb_.w.size() + lnf_g_.w.size() + lnf_b_.w.size() +
         head_w_.w.size() + head_b_.w.size();
    for (const Block& blk : blocks_) {
        n += blk.ln1_g.w.size() + blk.ln1_b.w.size() + blk.wq.w.size() + blk.bq.w.size() +
             blk.wk.w.size() + blk.bk.w.size() + blk.wv.w.size() + blk.bv.w.size() +
             blk.wo.w.size() + blk.bo.w.size() + blk.ln2_g.w.size() + blk.ln2_b.w.size() +
             blk.w1.w.size() + blk.b1.w.size() + blk.w2.w.size() + blk.b2.w.size();
    }
    return n;
}

void TinyEncoder::zero_grad() {
    for (Tensor* t : parameters()) std::fill(t->g.begin(), t->g.end(), 0.0f);
}

std::vector<std::array<float, 2>> TinyEncoder::forward(
    const std::vector<std::vector<int32_t>>& batch, bool train, Rng* rng) {
    const int b = static_cast<int>(batch.size());
    if (b == 0) return {};
    int t_max = 1;
    for (const auto& row : batch) {
        if (static_cast<int>(row.size()) > t_max) t_max = static_cast<int>(row.size());
    }
    if (t_max > spec_.max_seq_len) {
        throw DataError("forward: sequence length " + std::to_string(t_max) +
                        " exceeds max_seq_len " + std::to_string(spec_.max_seq_len));
    }
    const int h = spec_.hidden_dim;
    const int f = 4 * h;
    const int heads = spec_.n_heads;
    const int hd = h / heads;
    const int bt = b * t_max;
    const float scale = 1.0f / std::sqrt(static_cast<float>(hd));

    Cache& c = cache_;
    c.batch = b;
    c.seq = t_max;
    c.train = train;
    c.ids.assign(static_cast<size_t>(bt), 2 /* pad */);
    c.key_mask.assign(static_cast<size_t>(bt), 0.0f);
    for (int i = 0; i < b; ++i) {
        for (int t = 0; t < static_cast<int>(batch[static_cast<size_t>(i)].size()); ++t) {
            const int32_t id = batch[static_cast<size_t>(i)][static_cast<size_t>(t)];
            if (id < 0 || id >= spec_.vocab_size) {
                throw DataError("forward: token id " + std::to_string(id) +
                                " outside vocabulary of size " + std::to_string(spec_.vocab_size));
            }
            c.ids[static_cast<size_t>(i) * t_max + t] = id;
            c.key_mask[static_cast<size_t>(i) * t_max + t] = 1.0f;
        }
    }

    // embeddings
    std::vector<float> x(static_cast<size_t>(bt) * h);
    for (int i = 0; i < b; ++i) {
        for (int t = 0; t < t_max; ++t) {
            const size_t row = static_cast<size_t>(i) * t_max + t;
            const float* te = &tok_emb_.w[static_cast<size_t>(c.ids[row]) * h];
            const float* pe = &pos_emb_.w[static_cast<size_t>(t) * h];
            float* xr = &x[row * h];
            for (int j = 0; j < h; ++j) xr[j] = te[j] + pe[j];
        }
    }

    c.layers.assign(static_cast<size_t>(spec_.n_layers), LayerCache{});
    for (int l = 0; l < spec_.n_layers; ++l) {
        Block& blk = blocks_[static_cast<size_t>(l)];
        LayerCache& lc = c.layers[static_cast<size_t>(l)];
        lc.x_in = x;

        lc.ln1_out.assign(static_cast<size_t>(bt) * h, 0.0f);
        lc.ln1_mean.assign(static_cast<size_t>(bt), 0.0f);
        lc.ln1_rstd.assign(static_cast<size_t>(bt), 0.0f);
        layer_norm_fwd(lc.x_in.data(), blk.ln1_g.w.data(), blk.ln1_b.w.data(), lc.ln1_out.data(),
                       lc.ln1_mean.data(), lc.ln1_rstd.data(), bt, h);

        lc.q.assign(static_cast<size_t>(bt) * h, 0.0f);
        lc.k.assign(static_cast<size_t>(bt) * h, 0.0f);
        lc.v.assign(static_cast<size_t>(bt) * h, 0.0f);
        matmul(lc.ln1_out.data(), blk.wq.w.data(), lc.q.data(), bt, h, h);
        add_bias(lc.q.data(), blk.bq.w.data(), bt, h);
        matmul(lc.ln1_out.data(), blk.wk.w.data(), lc.k.data(), bt, h, h);
        add_bias(lc.k.data(), blk.bk.w.data(), bt, h);
        matmul(lc.ln1_out.data(), blk.wv.w.data(), lc.v.data(), bt, h, h);
        add_bias(lc.v.data(), blk.bv.w.data(), bt, h);

        lc.att.assign(static_cast<size_t>(b) * heads * t_max * t_max, 0.0f);
        lc.ctx.assign(static_cast<size_t>(bt) * h, 0.0f);
        for (int i = 0; i < b; ++i) {
            for (int hh = 0; hh < heads; ++hh) {
                for (int tq = 0; tq < t_max; ++tq) {
                    const float* qv = &lc.q[(static_cast<size_t>(i) * t_max + tq) * h + hh * hd];
                    float* att_row =
                        &lc.att[((static_cast<size_t>(i) * heads + hh) * t_max + tq) * t_max];
                    float max_score = -1e30f;
                    for (int tk = 0; tk < t_max; ++tk) {
                        const float* kv =
                            &lc.k[(static_cast<size_t>(i) * t_max + tk) * h + hh * hd];
                        float s = 0.0f;
                        for (int d = 0; d < hd; ++d) s += qv[d] * kv[d];
                        s *= scale;
                        if (c.key_mask[static_cast<size_t>(i) * t_max + tk] == 0.0f) s = kNegInf;
                        att_row[tk] = s;
                        if (s > max_score) max_score = s;
                    }
                    float denom = 0.0f;
                    for (int tk = 0; tk < t_max; ++tk) {
                        const float e = std::exp(att_row[tk] - max_score);
                        att_row[tk] = e;
                        denom += e;
                    }
                    const float inv = 1.0f / denom;
                    for (int tk = 0; tk < t_max; ++tk) att_row[tk] *= inv;

                    float* ctx =
                        &lc.ctx[(static_cast<size_t>(i) * t_max + tq) * h + hh * hd];
                    for (int tk = 0; tk < t_max; ++tk) {
                        const float a = att_row[tk];
                        if (a == 0.0f) continue;
                        const float* vv =
                            &lc.v[(static_cast<size_t>(i) * t_max + tk) * h + hh * hd];
                        for (int d = 0; d < hd; ++d) ctx[d] += a * vv[d];
                    }
                }
            }
        }

        std::vector<float> attn_out(static_cast<size_t>(bt) * h, 0.0f);
        matmul(lc.ctx.data(), blk.wo.w.data(), attn_out.data(), bt, h, h);
        add_bias(attn_out.data(), blk.bo.w.data(), bt, h);
        for (size_t idx = 0; idx < x.size(); ++idx) x[idx] = lc.x_in[idx] + attn_out[idx];
        lc.x_mid = x;

        lc.ln2_out.assign(static_cast<size_t>(bt) * h, 0.0f);
        lc.ln2_mean.assign(static_cast<size_t>(bt), 0.0f);
        lc.ln2_rstd.assign(static_cast<size_t>(bt), 0.0f);
        layer_norm_fwd(lc.x_mid.data(), blk.ln2_g.w.data(), blk.ln2_b.w.data(), lc.ln2_out.data(),
                       lc.ln2_mean.data(), lc.ln2_rstd.data(), bt, h);

        lc.ff_pre.assign(static_cast<size_t>(bt) * f, 0.0f);
        matmul(lc.ln2_out.data(), blk.w1.w.data(), lc.ff_pre.data(), bt, h, f);
        add_bias(lc.ff_pre.data(), blk.b1.w.data(), bt, f);
        lc.ff_act.resize(lc.ff_pre.size());
        for (size_t idx = 0; idx < lc.ff_pre.size(); ++idx) lc.ff_act[idx] = gelu(lc.ff_pre[idx]);

        std::vector<float> ff_out(static_cast<size_t>(bt) * h, 0.0f);
        matmul(lc.ff_act.data(), blk.w2.w.data(), ff_out.data(), bt, f, h);
        add_bias(ff_out.data(), blk.b2.w.data(), bt, h);
        for (size_t idx = 0; idx < x.size(); ++idx) x[idx] = lc.x_mid[idx] + ff_out[idx];
    }

    c.x_final = x;
    c.lnf_out.assign(static_cast<size_t>(bt) * h, 0.0f);
    c.lnf_mean.assign(static_cast<size_t>(bt), 0.0f);
    c.lnf_rstd.assign(static_cast<size_t>(bt), 0.0f);
    layer_norm_fwd(c.x_final.data(), lnf_g_.w.data(), lnf_b_.w.data(), c.lnf_out.data(),
                   c.lnf_mean.data(), c.lnf_rstd.data(), bt, h);

    // sequence-start pooling + head dropout
    c.cls.assign(static_cast<size_t>(b) * h, 0.0f);
    c.drop_mask.assign(static_cast<size_t>(b) * h, 1.0f);
    const float keep = 1.0f - static_cast<float>(head_.dropout_rate);
    for (int i = 0; i < b; ++i) {
        const float* row = &c.lnf_out[static_cast<size_t>(i) * t_max * h];
        float* cls = &c.cls[static_cast<size_t>(i) * h];
        for (int j = 0; j < h; ++j) {
            float m = 1.0f;
            if (train && head_.dropout_rate > 0.0) {
                if (!rng) throw StageError("forward: training mode requires an RNG for dropout");
                m = rng->uniform() < head_.dropout_rate ? 0.0f : 1.0f / keep;
            }
            c.drop_mask[static_cast<size_t>(i) * h + j] = m;
            cls[j] = row[j] * m;
        }
    }

    std::vector<std::array<float, 2>> logits(static_cast<size_t>(b));
    for (int i = 0; i < b; ++i) {
        const float* cls = &c.cls[static_cast<size_t>(i) * h];
        for (int o = 0; o < 2; ++o) {
            float acc = head_b_.w[static_cast<size_t>(o)];
            for (int j = 0; j < h; ++j) acc += cls[j] * head_w_.w[static_cast<size_t>(j) * 2 + o];
            logits[static_cast<size_t>(i)][static_cast<size_t>(o)] = acc;
        }
    }
    for (const auto& row : logits) {
        if (!std::isfinite(row[0]) || !std::isfinite(row[1])) {
            throw StageError("forward produced non-finite logits");
        }
    }
    return logits;
}

void TinyEncoder::backward(const std::vector<std::array<float, 2>>& dlogits) {
    const Cache& c = cache_;
    const int b = c.batch;
    const int t_max = c.seq;
    if (b == 0 || static_cast<int>(dlogits.size()) != b) {
        throw StageError("backward: no cached forward pass for this batch");
    }
    const int h = spec_.hidden_dim;
    const int f = 4 * h;
    const int heads = spec_.n_heads;
    const int hd = h / heads;
    const int bt = b * t_max;
    const float scale = 1.0f / std::sqrt(static_cast<float>(hd));

    // head
    std::vector<float> dcls(static_cast<size_t>(b) * h, 0.0f);
    for (int i = 0; i < b; ++i) {
        const float* cls = &c.cls[static_cast<size_t>(i) * h];
        for (int o = 0; o < 2; ++o) {
            const float d = dlogits[static_cast<size_t>(i)][static_cast<size_t>(o)];
            head_b_.g[static_cast<size_t>(o)] += d;
            for (int j = 0; j < h; ++j) {
                head_w_.g[static_cast<size_t>(j) * 2 + o] += cls[j] * d;
                dcls[static_cast<size_t>(i) * h + j] += head_w_.w[static_cast<size_t>(j) * 2 + o] * d;
            }
        }
    }
    for (size_t idx = 0; idx < dcls.size(); ++idx) dcls[idx] *= c.drop_mask[idx];

    // scatter into final-norm output positions (sequence start of each row)
    std::vector<float> dlnf(static_cast<size_t>(bt) * h, 0.0f);
    for (int i = 0; i < b; ++i) {
        std::memcpy(&dlnf[static_cast<size_t>(i) * t_max * h], &dcls[static_cast<size_t>(i) * h],
                    sizeof(float) * static_cast<size_t>(h));
    }

    std::vector<float> dx(static_cast<size_t>(bt) * h, 0.0f);
    layer_norm_bwd(c.x_final.data(), lnf_g_.w.data(), c.lnf_mean.data(), c.lnf_rstd.data(),
                   dlnf.data(), dx.data(), lnf_g_.g.data(), lnf_b_.g.data(), bt, h);

    for (int l = spec_.n_layers - 1; l >= 0; --l) {
        Block& blk = blocks_[static_cast<size_t>(l)];
        const LayerCache& lc = c.layers[static_cast<size_t>(l)];

        // feed-forward residual: dx flows to both x_mid and the ff path
        std::vector<float> dff_out = dx;  // gradient at ff_out
        std::vector<float> dff_act(static_cast<size_t>(bt) * f, 0.0f);
        matmul_dx(dff_out.data(), blk.w2.w.data(), dff_act.data(), bt, f, h);
        matmul_dw(lc.ff_act.data(), dff_out.data(), blk.w2.g.data(), bt, f, h);
        bias_grad(dff_out.data(), blk.b2.g.data(), bt, h);

        for (size_t idx = 0; idx < dff_act.size(); ++idx) {
            dff_act[idx] *= gelu_grad(lc.ff_pre[idx]);
        }
        std::vector<float> dln2(static_cast<size_t>(bt) * h, 0.0f);
        matmul_dx(dff_act.data(), blk.w1.w.data(), dln2.data(), bt, h, f);
        matmul_dw(lc.ln2_out.data(), dff_act.data(), blk.w1.g.data(), bt, h, f);
        bias_grad(dff_act.data(), blk.b1.g.data(), bt, f);

        // dx (at x_mid) = residual passthrough + layer-norm backprop
        layer_norm_bwd(lc.x_mid.data(), blk.ln2_g.w.data(), lc.ln2_mean.data(), lc.ln2_rstd.data(),
                       dln2.data(), dx.data(), blk.ln2_g.g.data(), blk.ln2_b.g.data(), bt, h);

        // attention residual
        std::vector<float> dattn_out = dx;
        std::vector<float> dctx(static_cast<size_t>(bt) * h, 0.0f);
        matmul_dx(dattn_out.data(), blk.wo.w.data(), dctx.data(), bt, h, h);
        matmul_dw(lc.ctx.data(), dattn_out.data(), blk.wo.g.data(), bt, h, h);
        bias_grad(dattn_out.data(), blk.bo.g.data(), bt, h);

        std::vector<float> dq(static_cast<size_t>(bt) * h, 0.0f);
        std::vector<float> dk(static_cast<size_t>(bt) * h, 0.0f);
        std::vector<float> dv(static_cast<size_t>(bt) * h, 0.0f);
        std::vector<float> datt(static_cast<size_t>(t_max), 0.0f);
        for (int i = 0; i < b; ++i) {
            for (int hh = 0; hh < heads; ++hh) {
                for (int tq = 0; tq < t_max; ++tq) {
                    const float* att_row =
                        &lc.att[((static_cast<size_t>(i) * heads + hh) * t_max + tq) * t_max];
                    const float* dctx_row =
                        &dctx[(static_cast<size_t>(i) * t_max + tq) * h + hh * hd];

                    // datt[tk] = dctx . v[tk];  dv[tk] += att[tk] * dctx
                    float dot = 0.0f;
                    for (int tk = 0; tk < t_max; ++tk) {
                        const float* vv =
                            &lc.v[(static_cast<size_t>(i) * t_max + tk) * h + hh * hd];
                        float acc = 0.0f;
                        for (int d = 0; d < hd; ++d) acc += dctx_row[d] * vv[d];
                        datt[static_cast<size_t>(tk)] = acc;
                        const float a = att_row[tk];
                        if (a != 0.0f) {
                            float* dvv =
                                &dv[(static_cast<size_t>(i) * t_max + tk) * h + hh * hd];
                            for (int d = 0; d < hd; ++d) dvv[d] += a * dctx_row[d];
                        }
                        dot += att_row[tk] * acc;
                    }
                    // softmax backward, then scores -> q, k
                    const float* qv = &lc.q[(static_cast<size_t>(i) * t_max + tq) * h + hh * hd];
                    float* dqv = &dq[(static_cast<size_t>(i) * t_max + tq) * h + hh * hd];
                    for (int tk = 0; tk < t_max; ++tk) {
                        const float a = att_row[tk];
                        if (a == 0.0f) continue;
                        const float dscore = a * (datt[static_cast<size_t>(tk)] - dot) * scale;
                        const float* kv =
                            &lc.k[(static_cast<size_t>(i) * t_max + tk) * h + hh * hd];
                        float* dkv = &dk[(static_cast<size_t>(i) * t_max + tk) * h + hh * hd];
                        for (int d = 0; d < hd; ++d) {
                            dqv[d] += dscore * kv[d];
                            dkv[d] += dscore * qv[d];
                        }
                    }
                }
            }
        }

        std::vector<float> dln1(static_cast<size_t>(bt) * h, 0.0f);
        matmul_dx(dq.data(), blk.wq.w.data(), dln1.data(), bt, h, h);
        matmul_dw(lc.ln1_out.data(), dq.data(), blk.wq.g.data(), bt, h, h);
        bias_grad(dq.data(), blk.bq.g.data(), bt, h);
        matmul_dx(dk.data(), blk.wk.w.data(), dln1.data(), bt, h, h);
        matmul_dw(lc.ln1_out.data(), dk.data(), blk.wk.g.data(), bt, h, h);
        bias_grad(dk.data(), blk.bk.g.data(), bt, h);
        matmul_dx(dv.data(), blk.wv.w.data(), dln1.data(), bt, h, h);
        matmul_dw(lc.ln1_out.data(), dv.data(), blk.wv.g.data(), bt, h, h);
        bias_grad(dv.data(), blk.bv.g.data(), bt, h);

        layer_norm_bwd(lc.x_in.data(), blk.ln1_g.w.data(), lc.ln1_mean.data(), lc.ln1_rstd.data(),
                       dln1.data(), dx.data(), blk.ln1_g.g.data(), blk.ln1_b.g.data(), bt, h);
    }

    // embeddings
    for (int i = 0; i < b; ++i) {
        for (int t = 0; t < t_max; ++t) {
            const size_t row = static_cast<size_t>(i) * t_max + t;
            const float* dxr = &dx[row * h];
            float* dte = &tok_emb_.g[static_cast<size_t>(c.ids[row]) * h];
            float* dpe = &pos_emb_.g[static_cast<size_t>(t) * h];
            for (int j = 0; j < h; ++j) {
                dte[j] += dxr[j];
                dpe[j] += dxr[j];
            }
        }
    }
}

void TinyEncoder::save_params(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write parameter blob: " + path.string());
    const char magic[8] = {'H', 'D', 'E', 'N', 'C', '0', '0', '1'};
    out.write(magic, sizeof(magic));
    auto* self = const_cast<TinyEncoder*>(this);
    const uint64_t count = self->parameters().size();
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (Tensor* t : self->parameters()) {
        const uint32_t rows = static_cast<uint32_t>(t->rows);
        const uint32_t cols = static_cast<uint32_t>(t->cols);
        out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
        out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
        out.write(reinterpret_cast<const char*>(t->w.data()),
                  static_cast<std::streamsize>(t->w.size() * sizeof(float)));
    }
    if (!out) throw DataError("write failure on parameter blob: " + path.string());
}

void TinyEncoder::load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open parameter blob: " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, "HDENC001", 8) != 0) {
        throw DataError("parameter blob has wrong magic: " + path.string());
    }
    uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    auto params = parameters();
    if (count != params.size()) {
        throw DataError("parameter blob tensor count mismatch: " + path.string());
    }
    for (Tensor* t : params) {
        uint32_t rows = 0;
        uint32_t cols = 0;
        in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
        in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
        if (rows != static_cast<uint32_t>(t->rows) || cols != static_cast<uint32_t>(t->cols)) {
            throw DataError("parameter blob shape mismatch for " + t->name);
        }
        in.read(reinterpret_cast<char*>(t->w.data()),
                static_cast<std::streamsize>(t->w.size() * sizeof(float)));
    }
    if (!in) throw DataError("parameter blob truncated: " + path.string());
}

}  // namespace halludet
