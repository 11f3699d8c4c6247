#include "halludet/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "halludet/errors.hpp"
#include "halludet/metrics.hpp"
#include "halludet/rng.hpp"
#include "json.hpp"

namespace halludet {

namespace {

using json = nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void TrainingConfig::validate() const {
    if (epochs < 1) throw DataError("training config: epochs must be >= 1");
    if (batch_size < 1) throw DataError("training config: batch_size must be >= 1");
    if (learning_rate <= 0) throw DataError("training config: learning_rate must be positive");
    if (weight_decay < 0) throw DataError("training config: weight_decay must be >= 0");
    if (warmup_fraction < 0 || warmup_fraction >= 1) {
        throw DataError("training config: warmup_fraction must be in [0,1)");
    }
    if (class_weights[0] <= 0 || class_weights[1] <= 0) {
        throw DataError("training config: class_weights must be positive");
    }
    if (checkpoint_interval < 1) {
        throw DataError("training config: checkpoint_interval must be >= 1");
    }
    if (schedule != "linear_decay" && schedule != "constant") {
        throw DataError("training config: schedule must be linear_decay or constant");
    }
    if (dropout_rate < 0 || dropout_rate >= 1) {
        throw DataError("training config: dropout_rate must be in [0,1)");
    }
}

std::string TrainingConfig::dump() const {
    std::ostringstream os;
    os << "epochs=" << epochs << "\n";
    os << "batch_size=" << batch_size << "\n";
    os << "learning_rate=" << format_double(learning_rate) << "\n";
    os << "weight_decay=" << format_double(weight_decay) << "\n";
    os << "warmup_fraction=" << format_double(warmup_fraction) << "\n";
    os << "class_weight_correct=" << format_double(class_weights[0]) << "\n";
    os << "class_weight_hallucinated=" << format_double(class_weights[1]) << "\n";
    os << "checkpoint_interval=" << checkpoint_interval << "\n";
    os << "seed=" << seed << "\n";
    os << "clip_norm=" << format_double(clip_norm) << "\n";
    os << "schedule=" << schedule << "\n";
    os << "dropout_rate=" << format_double(dropout_rate) << "\n";
    return os.str();
}

std::string TrainingConfig::config_hash() const { return fnv1a_hex(dump()); }

TrainingConfig TrainingConfig::parse(const std::string& text) {
    TrainingConfig cfg;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError("training config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "epochs") cfg.epochs = std::stoi(value);
            else if (key == "batch_size") cfg.batch_size = std::stoi(value);
            else if (key == "learning_rate") cfg.learning_rate = std::stod(value);
            else if (key == "weight_decay") cfg.weight_decay = std::stod(value);
            else if (key == "warmup_fraction") cfg.warmup_fraction = std::stod(value);
            else if (key == "class_weight_correct") cfg.class_weights[0] = std::stod(value);
            else if (key == "class_weight_hallucinated") cfg.class_weights[1] = std::stod(value);
            else if (key == "checkpoint_interval") cfg.checkpoint_interval = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "clip_norm") cfg.clip_norm = std::stod(value);
            else if (key == "schedule") cfg.schedule = value;
            else if (key == "dropout_rate") cfg.dropout_rate = std::stod(value);
            else throw DataError("training config: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw DataError("training config: bad value for '" + key + "': '" + value + "'");
        } catch (const std::out_of_range&) {
            throw DataError("training config: value out of range for '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

TrainingConfig TrainingConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open training config: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void TrainingConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write training config: " + path.string());
    out << dump();
}

double weighted_cross_entropy(const std::vector<std::array<float, 2>>& logits,
                              const std::vector<int>& labels,
                              const std::array<double, 2>& weights,
                              std::vector<std::array<float, 2>>* dlogits) {
    if (logits.size() != labels.size()) {
        throw DataError("weighted_cross_entropy: logits/labels size mismatch");
    }
    if (logits.empty()) throw DataError("weighted_cross_entropy: empty batch");
    if (weights[0] <= 0 || weights[1] <= 0) {
        throw DataError("weighted_cross_entropy: weights must be positive");
    }
    double weight_sum = 0.0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw DataError("weighted_cross_entropy: labels must be 0 or 1");
        weight_sum += weights[static_cast<size_t>(y)];
    }
    if (dlogits) dlogits->assign(logits.size(), {0.0f, 0.0f});

    double loss_sum = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        const double z0 = logits[i][0];
        const double z1 = logits[i][1];
        if (!std::isfinite(z0) || !std::isfinite(z1)) {
            throw StageError("weighted_cross_entropy: non-finite logits at row " + std::to_string(i));
        }
        const int y = labels[i];
        const double m = std::max(z0, z1);
        const double e0 = std::exp(z0 - m);
        const double e1 = std::exp(z1 - m);
        const double lse = m + std::log(e0 + e1);
        const double nll = lse - (y == 0 ? z0 : z1);
        const double w = weights[static_cast<size_t>(y)];
        loss_sum += w * nll;
        if (dlogits) {
            const double p0 = e0 / (e0 + e1);
            const double p1 = e1 / (e0 + e1);
            const double coeff = w / weight_sum;
            (*dlogits)[i][0] = static_cast<float>(coeff * (p0 - (y == 0 ? 1.0 : 0.0)));
            (*dlogits)[i][1] = static_cast<float>(coeff * (p1 - (y == 1 ? 1.0 : 0.0)));
        }
    }
    return loss_sum / weight_sum;
}

double lr_at(long step, const TrainingConfig& cfg, long total_steps) {
    if (total_steps <= 0) throw DataError("lr_at: total_steps must be positive");
    if (step < 0 || step > total_steps) {
        throw DataError("lr_at: step " + std::to_string(step) + " outside [0," +
                        std::to_string(total_steps) + "]");
    }
    const long warmup_steps = std::lround(cfg.warmup_fraction * static_cast<double>(total_steps));
    if (warmup_steps > 0 && step < warmup_steps) {
        return cfg.learning_rate * static_cast<double>(step) / static_cast<double>(warmup_steps);
    }
    if (cfg.schedule == "constant") return cfg.learning_rate;
    if (total_steps == warmup_steps) return step < total_steps ? cfg.learning_rate : 0.0;
    return cfg.learning_rate * static_cast<double>(total_steps - step) /
           static_cast<double>(total_steps - warmup_steps);
}

AdamW::AdamW(std::vector<Tensor*> params, double weight_decay, double beta1, double beta2,
             double eps)
    : params_(std::move(params)), weight_decay_(weight_decay), beta1_(beta1), beta2_(beta2),
      eps_(eps) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (Tensor* t : params_) {
        m_.emplace_back(t->w.size(), 0.0f);
        v_.emplace_back(t->w.size(), 0.0f);
    }
}

double AdamW::clip_gradients(double max_norm) {
    double sq = 0.0;
    for (Tensor* t : params_) {
        for (float g : t->g) sq += static_cast<double>(g) * g;
    }
    const double norm = std::sqrt(sq);
    if (max_norm > 0 && norm > max_norm) {
        const float scale = static_cast<float>(max_norm / norm);
        for (Tensor* t : params_) {
            for (float& g : t->g) g *= scale;
        }
    }
    return norm;
}

void AdamW::step(double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t p = 0; p < params_.size(); ++p) {
        Tensor* t = params_[p];
        const bool decay = weight_decay_ > 0 && t->rows > 1;
        float* w = t->w.data();
        const float* g = t->g.data();
        float* m = m_[p].data();
        float* v = v_[p].data();
        for (size_t i = 0; i < t->w.size(); ++i) {
            m[i] = static_cast<float>(beta1_ * m[i] + (1.0 - beta1_) * g[i]);
            v[i] = static_cast<float>(beta2_ * v[i] + (1.0 - beta2_) * static_cast<double>(g[i]) * g[i]);
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            double update = mhat / (std::sqrt(vhat) + eps_);
            if (decay) update += weight_decay_ * w[i];
            w[i] = static_cast<float>(w[i] - lr * update);
        }
    }
}

namespace {

struct EncodedSet {
    std::vector<std::vector<int32_t>> ids;
    std::vector<int> labels;
};

EncodedSet encode_set(const std::vector<Sample>& samples, const WordTokenizer& tok, int max_len) {
    EncodedSet out;
    out.ids.reserve(samples.size());
    out.labels.reserve(samples.size());
    for (const Sample& s : samples) {
        out.ids.push_back(tok.encode(s.text, static_cast<size_t>(max_len)).ids);
        out.labels.push_back(s.label == Label::correct ? 0 : 1);
    }
    return out;
}

void require_both_classes(const std::vector<Sample>& set, const char* which) {
    bool has_correct = false;
    bool has_halluc = false;
    for (const Sample& s : set) {
        (s.label == Label::correct ? has_correct : has_halluc) = true;
    }
    if (set.empty() || !has_correct || !has_halluc) {
        throw DataError(std::string("train: ") + which +
                        " split must be non-empty with both classes present");
    }
}

double evaluate_macro_f1(TinyEncoder& model, const EncodedSet& set, int batch_size) {
    std::vector<int> preds;
    preds.reserve(set.ids.size());
    for (size_t off = 0; off < set.ids.size(); off += static_cast<size_t>(batch_size)) {
        const size_t end = std::min(set.ids.size(), off + static_cast<size_t>(batch_size));
        std::vector<std::vector<int32_t>> batch(set.ids.begin() + static_cast<ptrdiff_t>(off),
                                                set.ids.begin() + static_cast<ptrdiff_t>(end));
        auto logits = model.forward(batch, /*train=*/false, nullptr);
        for (const auto& row : logits) preds.push_back(row[1] > row[0] ? 1 : 0);
    }
    return macro_f1(confusion(preds, set.labels));
}

void save_checkpoint_dir(TinyEncoder& model, const WordTokenizer& tok, const TrainingConfig& cfg,
                         const std::filesystem::path& dir, long step, double val_f1) {
    std::filesystem::create_directories(dir);
    model.save_params(dir / "params.bin");
    tok.save(dir / "vocab.txt");
    cfg.save(dir / "config.txt");
    json enc;
    enc["name"] = model.spec().name;
    enc["n_layers"] = model.spec().n_layers;
    enc["n_heads"] = model.spec().n_heads;
    enc["hidden_dim"] = model.spec().hidden_dim;
    enc["max_seq_len"] = model.spec().max_seq_len;
    enc["vocab_size"] = model.spec().vocab_size;
    enc["dropout_rate"] = model.head().dropout_rate;
    enc["output_classes"] = model.head().output_classes;
    std::ofstream ef(dir / "encoder.json", std::ios::binary);
    ef << enc.dump(2) << "\n";
    json met;
    met["step"] = step;
    met["val_macro_f1"] = val_f1;
    met["config_hash"] = cfg.config_hash();
    std::ofstream mf(dir / "metrics.json", std::ios::binary);
    mf << met.dump(2) << "\n";
}

}  // namespace

std::size_t best_checkpoint_index(const std::vector<std::pair<long, double>>& val_history) {
    if (val_history.empty()) throw DataError("best_checkpoint_index: empty history");
    std::size_t best = 0;
    for (std::size_t i = 1; i < val_history.size(); ++i) {
        if (val_history[i].second > val_history[best].second) best = i;
    }
    return best;
}

TrainResult train(const TrainingConfig& cfg, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const EncoderSpec& spec,
                  const std::filesystem::path& outdir) {
    cfg.validate();
    spec.validate();
    require_both_classes(train_set, "train");
    require_both_classes(val_set, "validation");
    std::filesystem::create_directories(outdir);

    std::vector<std::string> texts;
    texts.reserve(train_set.size());
    for (const Sample& s : train_set) texts.push_back(s.text);
    WordTokenizer tok =
        WordTokenizer::build(texts, static_cast<size_t>(spec.vocab_size), /*min_freq=*/1);

    const EncodedSet train_enc = encode_set(train_set, tok, spec.max_seq_len);
    const EncodedSet val_enc = encode_set(val_set, tok, spec.max_seq_len);

    ClassifierHead head;
    head.dropout_rate = cfg.dropout_rate;
    TinyEncoder model(spec, head);
    Rng rng(cfg.seed);
    model.init_params(rng);
    AdamW opt(model.parameters(), cfg.weight_decay);

    const long n = static_cast<long>(train_set.size());
    const long steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
    const long total_steps = steps_per_epoch * cfg.epochs;

    TrainResult result;
    result.total_steps = total_steps;
    result.log_path = outdir / "train_log.jsonl";
    std::ofstream log(result.log_path, std::ios::binary);
    if (!log) throw DataError("cannot write training log: " + result.log_path.string());

    long step = 0;

    auto save_and_score = [&](long at_step) {
        const double val_f1 = evaluate_macro_f1(model, val_enc, cfg.batch_size);
        const std::filesystem::path dir = outdir / ("checkpoint-" + std::to_string(at_step));
        save_checkpoint_dir(model, tok, cfg, dir, at_step, val_f1);
        result.val_history.emplace_back(at_step, val_f1);
        json j;
        j["step"] = at_step;
        j["val_macro_f1"] = val_f1;
        log << j.dump() << "\n";
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<size_t> order(static_cast<size_t>(n));
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng shuffle_rng(derive_seed(cfg.seed, 0x5E0000 + static_cast<uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        for (long off = 0; off < n; off += cfg.batch_size) {
            const long end = std::min(n, off + cfg.batch_size);
            std::vector<std::vector<int32_t>> batch;
            std::vector<int> labels;
            batch.reserve(static_cast<size_t>(end - off));
            for (long i = off; i < end; ++i) {
                batch.push_back(train_enc.ids[order[static_cast<size_t>(i)]]);
                labels.push_back(train_enc.labels[order[static_cast<size_t>(i)]]);
            }

            auto logits = model.forward(batch, /*train=*/true, &rng);
            std::vector<std::array<float, 2>> dlogits;
            double loss = 0.0;
            try {
                loss = weighted_cross_entropy(logits, labels, cfg.class_weights, &dlogits);
            } catch (const StageError& e) {
                log << json{{"step", step}, {"abort", e.what()}}.dump() << "\n";
                throw StageError(std::string("training aborted at step ") + std::to_string(step) +
                                 ": " + e.what());
            }
            if (!std::isfinite(loss)) {
                log << json{{"step", step}, {"abort", "non-finite loss"}}.dump() << "\n";
                throw StageError("training aborted: non-finite loss at step " +
                                 std::to_string(step));
            }

            model.zero_grad();
            model.backward(dlogits);
            if (cfg.clip_norm > 0) opt.clip_gradients(cfg.clip_norm);
            const double lr = lr_at(step, cfg, total_steps);
            opt.step(lr);
            ++step;

            result.losses.push_back(loss);
            json j;
            j["step"] = step;
            j["loss"] = loss;
            j["lr"] = lr;
            log << j.dump() << "\n";

            if (cfg.checkpoint_interval > 0 && step % cfg.checkpoint_interval == 0 &&
                step < total_steps) {
                save_and_score(step);
            }
        }
    }
    save_and_score(step);  // end-of-training checkpoint

    const std::size_t best = best_checkpoint_index(result.val_history);
    result.best.step = result.val_history[best].first;
    result.best.val_macro_f1 = result.val_history[best].second;
    result.best.dir = outdir / ("checkpoint-" + std::to_string(result.best.step));
    result.best.config_hash = cfg.config_hash();
    return result;
}

LoadedModel load_checkpoint(const std::filesystem::path& dir) {
    const auto enc_path = dir / "encoder.json";
    std::ifstream ef(enc_path, std::ios::binary);
    if (!ef) throw DataError("cannot open checkpoint: " + enc_path.string());
    json enc;
    try {
        ef >> enc;
    } catch (const json::exception& e) {
        throw DataError("malformed encoder.json: " + std::string(e.what()));
    }
    EncoderSpec spec;
    spec.name = enc.value("name", std::string("tiny"));
    spec.n_layers = enc.at("n_layers").get<int>();
    spec.n_heads = enc.at("n_heads").get<int>();
    spec.hidden_dim = enc.at("hidden_dim").get<int>();
    spec.max_seq_len = enc.at("max_seq_len").get<int>();
    spec.vocab_size = enc.at("vocab_size").get<int>();
    ClassifierHead head;
    head.dropout_rate = enc.value("dropout_rate", 0.1);
    head.output_classes = enc.value("output_classes", 2);

    TrainingConfig cfg = TrainingConfig::load(dir / "config.txt");

    json met;
    std::ifstream mf(dir / "metrics.json", std::ios::binary);
    if (!mf) throw DataError("checkpoint missing metrics.json: " + dir.string());
    try {
        mf >> met;
    } catch (const json::exception& e) {
        throw DataError("malformed metrics.json: " + std::string(e.what()));
    }
    const std::string stored_hash = met.value("config_hash", std::string());
    if (stored_hash != cfg.config_hash()) {
        throw DataError("checkpoint/config mismatch: stored hash " + stored_hash +
                        " != config hash " + cfg.config_hash());
    }

    LoadedModel model{spec,
                      head,
                      cfg,
                      WordTokenizer::load(dir / "vocab.txt"),
                      TinyEncoder(spec, head),
                      met.value("step", 0L),
                      met.value("val_macro_f1", 0.0),
                      stored_hash};
    model.encoder.load_params(dir / "params.bin");
    return model;
}

std::vector<Prediction> predict(LoadedModel& model, const std::vector<std::string>& texts) {
    std::vector<Prediction> out;
    out.reserve(texts.size());
    constexpr size_t kBatch = 64;
    for (size_t off = 0; off < texts.size(); off += kBatch) {
        const size_t end = std::min(texts.size(), off + kBatch);
        std::vector<std::vector<int32_t>> batch;
        batch.reserve(end - off);
        for (size_t i = off; i < end; ++i) {
            batch.push_back(
                model.tokenizer.encode(texts[i], static_cast<size_t>(model.spec.max_seq_len)).ids);
        }
        auto logits = model.encoder.forward(batch, /*train=*/false, nullptr);
        for (const auto& row : logits) {
            const double z0 = row[0];
            const double z1 = row[1];
            const double m = std::max(z0, z1);
            const double e0 = std::exp(z0 - m);
            const double e1 = std::exp(z1 - m);
            Prediction p;
            p.label = z1 > z0 ? Label::hallucinated : Label::correct;
            p.confidence = (p.label == Label::hallucinated ? e1 : e0) / (e0 + e1);
            out.push_back(p);
        }
    }
    return out;
}

std::vector<Prediction> predict(const std::filesystem::path& checkpoint_dir,
                                const std::vector<std::string>& texts) {
    LoadedModel model = load_checkpoint(checkpoint_dir);
    return predict(model, texts);
}

}  // namespace halludet
