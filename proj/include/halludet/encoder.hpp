#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "halludet/rng.hpp"

namespace halludet {

/// Transformer encoder shape. The desk-scale default is a reduced instance
/// of the same shape family as the full-size configuration (24 layers, 16
/// heads, hidden 1024, sequence 256).
struct EncoderSpec {
    std::string name = "tiny";
    int n_layers = 2;
    int n_heads = 2;
    int hidden_dim = 48;
    int max_seq_len = 64;
    int vocab_size = 4096;

    void validate() const;  // hidden_dim % n_heads == 0, max_seq_len >= 1, ...
};

struct ClassifierHead {
    double dropout_rate = 0.1;
    int output_classes = 2;

    void validate() const;  // dropout in [0,1), exactly 2 classes
};

struct Tensor {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::vector<float> w;
    std::vector<float> g;

    void init(std::string n, int r, int c) {
        name = std::move(n);
        rows = r;
        cols = c;
        w.assign(static_cast<size_t>(r) * c, 0.0f);
        g.assign(w.size(), 0.0f);
    }
};

/// CPU transformer encoder + 2-class head with manual backprop. Pre-norm
/// blocks (self-attention, GELU feed-forward), learned positional
/// embeddings, classification from the sequence-start position. Dropout is
/// applied to the pooled representation only; evaluation mode is exactly
/// deterministic.
class TinyEncoder {
public:
    TinyEncoder(EncoderSpec spec, ClassifierHead head);

    void init_params(Rng& rng);

    /// batch: unpadded token id rows. Padding to the batch maximum and the
    /// attention mask are handled internally. In training mode activations
    /// are cached for backward and head dropout consumes from `rng`.
    std::vector<std::array<float, 2>> forward(const std::vector<std::vector<int32_t>>& batch,
                                              bool train = false, Rng* rng = nullptr);

    /// Accumulates parameter gradients for the cached forward pass.
    void backward(const std::vector<std::array<float, 2>>& dlogits);

    void zero_grad();
    std::vector<Tensor*> parameters();
    std::size_t parameter_count() const;

    const EncoderSpec& spec() const { return spec_; }
    const ClassifierHead& head() const { return head_; }

    void save_params(const std::filesystem::path& path) const;
    void load_params(const std::filesystem::path& path);

private:
    struct Block {
        Tensor ln1_g, ln1_b;
        Tensor wq, bq, wk, bk, wv, bv, wo, bo;
        Tensor ln2_g, ln2_b;
        Tensor w1, b1, w2, b2;
    };

    struct LayerCache {
        std::vector<float> x_in;       // residual stream entering the block
        std::vector<float> ln1_out, ln1_mean, ln1_rstd;
        std::vector<float> q, k, v;
        std::vector<float> att;        // [B, heads, T, T] softmax probabilities
        std::vector<float> ctx;
        std::vector<float> x_mid;      // after attention residual
        std::vector<float> ln2_out, ln2_mean, ln2_rstd;
        std::vector<float> ff_pre;     // before GELU
        std::vector<float> ff_act;     // after GELU
    };

    struct Cache {
        int batch = 0;
        int seq = 0;
        std::vector<int32_t> ids;      // padded [B*T]
        std::vector<float> key_mask;   // [B*T], 1 real / 0 pad
        std::vector<LayerCache> layers;
        std::vector<float> x_final;    // residual stream entering final norm
        std::vector<float> lnf_out, lnf_mean, lnf_rstd;
        std::vector<float> cls;        // [B, H] after dropout
        std::vector<float> drop_mask;  // [B, H]
        bool train = false;
    };

    EncoderSpec spec_;
    ClassifierHead head_;
    Tensor tok_emb_, pos_emb_;
    std::vector<Block> blocks_;
    Tensor lnf_g_, lnf_b_;
    Tensor head_w_, head_b_;
    Cache cache_;
};

}  // namespace halludet
