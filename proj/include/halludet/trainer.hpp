#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "halludet/corpus.hpp"
#include "halludet/encoder.hpp"
#include "halludet/tokenizer.hpp"

namespace halludet {

/// Fine-tuning recipe as data. Defaults are the full-scale recipe: 3 epochs,
/// batch 32, AdamW at 2e-5 with weight decay 0.01, linear warmup over 10% of
/// steps, class weights [1.50, 1.00] with the corrective weight on the
/// under-predicted `correct` class, checkpoints every 5000 steps.
struct TrainingConfig {
    int epochs = 3;
    int batch_size = 32;
    double learning_rate = 2e-5;
    double weight_decay = 0.01;
    double warmup_fraction = 0.10;
    std::array<double, 2> class_weights{1.50, 1.00};  // [correct, hallucinated]
    int checkpoint_interval = 5000;
    uint64_t seed = 42;
    double clip_norm = 1.0;                 // global-norm clip; <= 0 disables
    std::string schedule = "linear_decay";  // or "constant" after warmup
    double dropout_rate = 0.1;

    void validate() const;
    std::string config_hash() const;  // FNV-1a of the canonical key=value dump
    std::string dump() const;
    static TrainingConfig parse(const std::string& text);
    static TrainingConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

/// Weighted mean cross-entropy over a batch:
///   loss = sum_i w[y_i] * (-log softmax(z_i)[y_i]) / sum_i w[y_i]
/// Computed in double precision. With equal weights this reduces to the
/// plain mean cross-entropy. If dlogits is non-null the analytic gradient
/// w.r.t. the logits is written there.
double weighted_cross_entropy(const std::vector<std::array<float, 2>>& logits,
                              const std::vector<int>& labels,
                              const std::array<double, 2>& weights,
                              std::vector<std::array<float, 2>>* dlogits = nullptr);

/// Linear warmup to the base rate over round(warmup_fraction * total_steps)
/// steps, then linear decay to zero at total_steps (or constant, per config).
double lr_at(long step, const TrainingConfig& cfg, long total_steps);

class AdamW {
public:
    AdamW(std::vector<Tensor*> params, double weight_decay, double beta1 = 0.9,
          double beta2 = 0.999, double eps = 1e-8);

    /// Decoupled weight-decay update. Bias and layer-norm tensors (single
    /// row) are excluded from decay.
    void step(double lr);

    /// Global-norm gradient clipping; returns the pre-clip norm.
    double clip_gradients(double max_norm);

private:
    std::vector<Tensor*> params_;
    std::vector<std::vector<float>> m_;
    std::vector<std::vector<float>> v_;
    double weight_decay_;
    double beta1_, beta2_, eps_;
    long t_ = 0;
};

struct Checkpoint {
    std::filesystem::path dir;
    long step = 0;
    double val_macro_f1 = 0.0;
    std::string config_hash;
};

/// Index of the best (step, validation F1) entry: maximum F1, earliest step
/// on ties. This is the selection rule train() applies to its saves.
std::size_t best_checkpoint_index(const std::vector<std::pair<long, double>>& val_history);

struct TrainResult {
    Checkpoint best;
    long total_steps = 0;
    std::vector<double> losses;                        // one entry per optimizer step
    std::vector<std::pair<long, double>> val_history;  // (step, val macro F1) at each save
    std::filesystem::path log_path;
};

/// Runs the full recipe: epochs * ceil(N / batch) optimizer steps, a
/// checkpoint every checkpoint_interval steps plus one at the end,
/// validation macro F1 at every save, and returns the checkpoint with the
/// best validation score (earliest step wins ties). Reproducible for a
/// fixed seed.
TrainResult train(const TrainingConfig& cfg, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const EncoderSpec& spec,
                  const std::filesystem::path& outdir);

struct Prediction {
    Label label = Label::correct;
    double confidence = 0.0;  // softmax probability of the chosen class
};

struct LoadedModel {
    EncoderSpec spec;
    ClassifierHead head;
    TrainingConfig config;
    WordTokenizer tokenizer;
    TinyEncoder encoder;
    long step = 0;
    double val_macro_f1 = 0.0;
    std::string config_hash;
};

/// Loads a checkpoint directory; throws DataError if the stored config_hash
/// does not match the stored config (checkpoint/config mismatch).
LoadedModel load_checkpoint(const std::filesystem::path& dir);

std::vector<Prediction> predict(LoadedModel& model, const std::vector<std::string>& texts);
std::vector<Prediction> predict(const std::filesystem::path& checkpoint_dir,
                                const std::vector<std::string>& texts);

}  // namespace halludet
