// halludet: data pipeline for multilingual hallucination detection.
// Subcommands chain into: ingest -> unify -> synth -> translate -> train ->
// predict -> evaluate -> report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "halludet/corpus.hpp"
#include "halludet/errors.hpp"
#include "halludet/ingest.hpp"
#include "halludet/metrics.hpp"
#include "halludet/report.hpp"
#include "halludet/synthetic.hpp"
#include "halludet/tokenizer.hpp"
#include "halludet/trainer.hpp"
#include "halludet/translate.hpp"
#include "halludet/unify.hpp"
#include "json.hpp"

namespace {

using namespace halludet;
namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitStage = 3;

struct IngestArgs {
    std::string descriptor;
    std::string input;
    std::string output;
    bool lenient = false;
};

int cmd_ingest(const IngestArgs& args) {
    const SourceDescriptor desc = load_descriptor(args.descriptor);
    auto [samples, summary] = ingest_source_to_vector(desc, args.input, !args.lenient);
    const std::string prov =
        provenance_json("ingest", {args.descriptor, args.input}, 0, std::string());
    write_corpus(samples, args.output, prov);
    std::cout << "ingested " << args.input << ": emitted=" << summary.emitted
              << " dropped=" << summary.dropped << " errored=" << summary.errored << "\n";
    return 0;
}

struct UnifyArgs {
    std::vector<std::string> sources;  // descriptor=input pairs
    std::string output;
    std::string stats_path;
    std::string quarantine_path;
    std::string stopword_dir;
    double threshold = 0.5;
    uint64_t seed = 42;
    bool skip_verify = false;
    bool skip_balance = false;
};

int cmd_unify(const UnifyArgs& args) {
    std::vector<Sample> all;
    std::vector<SourceRow> rows;
    std::vector<std::string> inputs;
    for (const std::string& pair : args.sources) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--source expects <descriptor>=<input>, got '" + pair + "'");
        }
        const std::string desc_path = pair.substr(0, eq);
        const std::string input_path = pair.substr(eq + 1);
        inputs.push_back(input_path);
        const SourceDescriptor desc = load_descriptor(desc_path);
        auto [samples, summary] = ingest_source_to_vector(desc, input_path);

        CorpusStats stats = corpus_stats(samples);
        SourceRow row;
        row.source = std::string(to_string(desc.name)) + ":" + fs::path(input_path).stem().string();
        row.samples = summary.emitted;
        row.domain = desc.domain;
        row.languages = stats.per_lang.size();
        const std::size_t correct =
            stats.per_label.count(Label::correct) ? stats.per_label.at(Label::correct) : 0;
        if (stats.total > 0) {
            const std::size_t pct = (correct * 100 + stats.total / 2) / stats.total;
            row.balance = std::to_string(pct) + "/" + std::to_string(100 - pct);
        } else {
            row.balance = "-";
        }
        rows.push_back(row);
        for (Sample& s : samples) all.push_back(std::move(s));
        std::cout << "ingested " << input_path << ": emitted=" << summary.emitted
                  << " dropped=" << summary.dropped << "\n";
    }

    for (Sample& s : all) s.text = normalize_text(s.text);

    DedupResult dedup = deduplicate(all);
    std::cout << "dedup: removed=" << dedup.removed
              << " cross-label conflicts=" << dedup.cross_label_conflicts.size() << "\n";

    std::vector<Sample> kept = std::move(dedup.samples);
    std::size_t quarantined = 0;
    if (!args.skip_verify) {
        if (args.stopword_dir.empty()) {
            throw UsageError("unify: --stopwords directory is required unless --skip-verify");
        }
        StopwordDetector detector = StopwordDetector::from_directory(args.stopword_dir);
        VerifyResult verify = verify_languages(kept, detector, args.threshold);
        quarantined = verify.quarantined.size();
        if (!args.quarantine_path.empty()) {
            std::vector<Sample> q = verify.quarantined;
            for (std::size_t i = 0; i < q.size(); ++i) q[i].meta["reason"] = verify.reasons[i];
            write_corpus(q, args.quarantine_path,
                         provenance_json("unify.quarantine", inputs, args.seed));
        }
        kept = std::move(verify.kept);
    }
    std::cout << "language verification: quarantined=" << quarantined << "\n";

    if (!args.skip_balance) {
        BalancePlan plan;
        plan.seed = args.seed;
        kept = balance(kept, plan);
    }

    const CorpusStats combined = corpus_stats(kept);
    const std::string prov = provenance_json("unify", inputs, args.seed);
    write_corpus(kept, args.output, prov);
    if (!args.stats_path.empty()) write_stats_file(args.stats_path, rows, combined, prov);
    std::cout << "unified corpus: " << combined.total
              << " samples, balance_ratio=" << combined.balance_ratio << "\n";
    return 0;
}

struct SynthArgs {
    std::string facts;
    std::string output;
    std::size_t pairs = 100;
    uint64_t seed = 42;
    std::string category_mix;
    std::string domain_mix;
};

std::map<std::string, double> parse_mix(const std::string& text) {
    std::map<std::string, double> mix;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("mix expects k=v[,k=v...], got '" + item + "'");
        }
        try {
            mix[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("bad mix fraction in '" + item + "'");
        }
    }
    return mix;
}

int cmd_synth(const SynthArgs& args) {
    const std::vector<FactRecord> facts = load_facts(args.facts);
    GenerationSpec spec;
    spec.n_pairs = args.pairs;
    spec.seed = args.seed;
    if (!args.category_mix.empty()) {
        for (const auto& [k, v] : parse_mix(args.category_mix)) {
            spec.category_mix[category_from_string(k)] = v;
        }
    }
    if (!args.domain_mix.empty()) spec.domain_mix = parse_mix(args.domain_mix);
    std::vector<Sample> samples = generate_corpus(spec, facts);
    write_corpus(samples, args.output, provenance_json("synth", {args.facts}, args.seed));
    std::cout << "generated " << samples.size() << " samples (" << spec.n_pairs << " pairs)\n";
    return 0;
}

struct TranslateArgs {
    std::string input;
    std::string output;
    std::string report_path;
    std::string direction = "en_to_targets";
    std::vector<std::string> targets;
    std::string backend = "prefix";
    std::string endpoint;
};

int cmd_translate(const TranslateArgs& args) {
    const std::vector<Sample> corpus = read_corpus(args.input);

    std::unique_ptr<Translator> translator;
    if (args.backend == "prefix") {
        translator = std::make_unique<PrefixTranslator>();
    } else if (args.backend == "http") {
        const auto colon = args.endpoint.rfind(':');
        if (args.endpoint.empty() || colon == std::string::npos) {
            throw UsageError("--backend http requires --endpoint host:port");
        }
        translator = std::make_unique<HttpTranslator>(args.endpoint.substr(0, colon),
                                                      std::stoi(args.endpoint.substr(colon + 1)));
        if (!translator->healthy()) {
            throw StageError("translation service failed its health probe: " + args.endpoint);
        }
    } else {
        throw UsageError("unknown translation backend '" + args.backend + "'");
    }

    if (args.direction != "all_to_en" && args.direction != "en_to_targets") {
        throw UsageError("--direction must be en_to_targets or all_to_en");
    }
    TranslationJob job;
    job.direction =
        args.direction == "all_to_en" ? Direction::all_to_en : Direction::en_to_targets;
    job.target_langs = args.targets;
    job.translator = translator.get();

    AugmentResult result = run_job(job, corpus);

    // Augmented samples land in their own file; the input corpus is never
    // rewritten, so augmentation stays easy to exclude.
    std::vector<Sample> new_samples(result.augmented.end() - static_cast<long>(result.new_count),
                                    result.augmented.end());
    write_corpus(new_samples, args.output, provenance_json("translate", {args.input}, 0));
    if (!args.report_path.empty()) {
        json report;
        report["attempted"] = result.report.attempted;
        report["succeeded"] = result.report.succeeded;
        json failures = json::array();
        for (const auto& f : result.report.failures) {
            failures.push_back({{"id", f.id}, {"target", f.target}, {"reason", f.reason}});
        }
        report["failures"] = failures;
        std::ofstream out(args.report_path, std::ios::binary);
        if (!out) throw DataError("cannot write job report: " + args.report_path);
        out << report.dump(2) << "\n";
    }
    std::cout << "translated: attempted=" << result.report.attempted
              << " succeeded=" << result.report.succeeded
              << " failed=" << result.report.failures.size() << "\n";
    return 0;
}

struct TrainArgs {
    std::string config;
    std::string train_corpus;
    std::string val_corpus;
    std::string outdir;
    std::string encoder_json;
    std::string axis;
};

EncoderSpec load_encoder_spec(const std::string& path) {
    EncoderSpec spec;
    if (path.empty()) return spec;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open encoder spec: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("malformed encoder spec " + path + ": " + e.what());
    }
    spec.name = j.value("name", std::string("tiny"));
    spec.n_layers = j.value("n_layers", spec.n_layers);
    spec.n_heads = j.value("n_heads", spec.n_heads);
    spec.hidden_dim = j.value("hidden_dim", spec.hidden_dim);
    spec.max_seq_len = j.value("max_seq_len", spec.max_seq_len);
    spec.vocab_size = j.value("vocab_size", spec.vocab_size);
    spec.validate();
    return spec;
}

std::vector<Sample> filter_axis(std::vector<Sample> samples, const std::string& axis) {
    if (axis.empty()) return samples;
    const Axis wanted = axis_from_string(axis);
    std::vector<Sample> out;
    for (Sample& s : samples) {
        if (!s.axis || *s.axis == wanted) out.push_back(std::move(s));
    }
    return out;
}

int cmd_train(const TrainArgs& args) {
    const TrainingConfig cfg = TrainingConfig::load(args.config);
    const std::vector<Sample> train_set = filter_axis(read_corpus(args.train_corpus), args.axis);
    const std::vector<Sample> val_set = filter_axis(read_corpus(args.val_corpus), args.axis);
    const EncoderSpec spec = load_encoder_spec(args.encoder_json);

    TrainResult result = train(cfg, train_set, val_set, spec, args.outdir);
    std::ofstream best(fs::path(args.outdir) / "best_checkpoint.txt", std::ios::binary);
    best << result.best.dir.string() << "\n";
    std::cout << "training finished: " << result.total_steps << " steps, best checkpoint "
              << result.best.dir.string() << " (val macro F1 " << result.best.val_macro_f1
              << " at step " << result.best.step << ")\n";
    return 0;
}

struct PredictArgs {
    std::string checkpoint;
    std::string input;
    std::string output;
    std::string default_axis = "factuality";
};

int cmd_predict(const PredictArgs& args) {
    const std::vector<Sample> corpus = read_corpus(args.input);
    LoadedModel model = load_checkpoint(args.checkpoint);
    std::vector<std::string> texts;
    texts.reserve(corpus.size());
    for (const Sample& s : corpus) texts.push_back(s.text);
    const std::vector<Prediction> preds = predict(model, texts);

    std::vector<PredRecord> records;
    records.reserve(preds.size());
    const Axis fallback = axis_from_string(args.default_axis);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        PredRecord r;
        r.id = corpus[i].id;
        r.axis = corpus[i].axis ? *corpus[i].axis : fallback;
        r.label = preds[i].label;
        r.confidence = preds[i].confidence;
        records.push_back(std::move(r));
    }
    write_predictions(records, args.output,
                      provenance_json("predict", {args.checkpoint, args.input}, model.config.seed,
                                      model.config_hash));
    std::cout << "wrote " << records.size() << " predictions\n";
    return 0;
}

struct EvaluateArgs {
    std::string preds;
    std::string gold;
    std::string output;
    std::string val_report;  // optional: compute the validation/test gap
    std::string corpus;      // optional: export misclassified samples
    std::string errors_out;
    std::size_t top_k = 20;
};

int cmd_evaluate(const EvaluateArgs& args) {
    EvalReport report = score_files(args.preds, args.gold);
    if (!args.val_report.empty()) {
        const EvalReport val = eval_report_from_file(args.val_report);
        report.gap = gap_report(val, report);
    }
    eval_report_to_file(report, args.output,
                        provenance_json("evaluate", {args.preds, args.gold}, 0));
    std::cout << "scored " << report.n << " items, macro F1 " << report.macro_f1 << "\n";

    if (!args.errors_out.empty()) {
        if (args.corpus.empty()) {
            throw UsageError("evaluate: --errors requires --corpus for sample texts");
        }
        const std::vector<Sample> corpus = read_corpus(args.corpus);
        std::map<std::string, const Sample*> by_id;
        for (const Sample& s : corpus) by_id[s.id] = &s;
        const std::vector<PredRecord> preds = read_predictions(args.preds);
        std::map<std::pair<std::string, Axis>, const PredRecord*> pred_by_key;
        for (const PredRecord& p : preds) pred_by_key[{p.id, p.axis}] = &p;

        std::vector<int> pred_labels;
        std::vector<int> gold_labels;
        std::vector<const Sample*> samples;
        std::vector<double> confidences;
        for (const GoldRecord& g : read_gold(args.gold)) {
            auto pit = pred_by_key.find({g.id, g.axis});
            auto sit = by_id.find(g.id);
            if (pit == pred_by_key.end() || sit == by_id.end()) continue;
            pred_labels.push_back(pit->second->label == Label::correct ? 0 : 1);
            gold_labels.push_back(g.label == Label::correct ? 0 : 1);
            samples.push_back(sit->second);
            confidences.push_back(pit->second->confidence);
        }
        const auto errors =
            export_errors(pred_labels, gold_labels, samples, confidences, args.top_k);
        std::ofstream out(args.errors_out, std::ios::binary);
        if (!out) throw DataError("cannot write error export: " + args.errors_out);
        out << "# " << provenance_json("evaluate.errors", {args.preds, args.gold}, 0) << "\n";
        out << render_errors(errors);
        std::cout << "exported " << errors.size() << " misclassified samples\n";
    }
    return 0;
}

struct ReportArgs {
    std::string stats;
    std::string eval;
    std::string ranks;
    std::string outdir = ".";
};

int cmd_report(const ReportArgs& args) {
    fs::create_directories(args.outdir);
    if (!args.stats.empty()) {
        // stats key/value file -> Source/Samples/Domain/Languages/Balance table
        std::ifstream in(args.stats, std::ios::binary);
        if (!in) throw DataError("cannot open stats file: " + args.stats);
        std::vector<std::string> source_order;
        std::map<std::string, std::map<std::string, std::string>> by_source;
        CorpusStats combined;
        std::size_t combined_langs = 0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            if (key.rfind("source.", 0) == 0) {
                const auto dot = key.rfind('.');
                const std::string name = key.substr(7, dot - 7);
                if (!by_source.count(name)) source_order.push_back(name);
                by_source[name][key.substr(dot + 1)] = value;
            } else if (key == "combined.samples") {
                combined.total = std::stoull(value);
            } else if (key == "combined.correct") {
                combined.per_label[Label::correct] = std::stoull(value);
            } else if (key == "combined.hallucinated") {
                combined.per_label[Label::hallucinated] = std::stoull(value);
            } else if (key == "combined.languages") {
                combined_langs = std::stoull(value);
            } else if (key == "combined.balance_ratio") {
                combined.balance_ratio = std::stod(value);
            }
        }
        for (std::size_t i = 0; i < combined_langs; ++i) {
            combined.per_lang["lang" + std::to_string(i)] = 0;  // only the count is rendered
        }
        std::vector<SourceRow> rows;
        for (const std::string& name : source_order) {
            const auto& kv = by_source[name];
            SourceRow row;
            row.source = name;
            if (kv.count("samples")) row.samples = std::stoull(kv.at("samples"));
            if (kv.count("domain")) row.domain = kv.at("domain");
            if (kv.count("languages")) row.languages = std::stoull(kv.at("languages"));
            if (kv.count("balance")) row.balance = kv.at("balance");
            rows.push_back(row);
        }
        const fs::path out_path = fs::path(args.outdir) / "stats_table.txt";
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw DataError("cannot write " + out_path.string());
        out << "# " << provenance_json("report", {args.stats}, 0) << "\n";
        out << render_stats_table(rows, combined);
        std::cout << "wrote " << out_path.string() << "\n";
    }
    if (!args.eval.empty()) {
        const EvalReport report = eval_report_from_file(args.eval);
        std::optional<std::map<std::string, int>> ranks;
        if (!args.ranks.empty()) {
            std::ifstream in(args.ranks, std::ios::binary);
            if (!in) throw DataError("cannot open ranks file: " + args.ranks);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw DataError("malformed ranks file: " + std::string(e.what()));
            }
            ranks = j.get<std::map<std::string, int>>();
        }
        const fs::path out_path = fs::path(args.outdir) / "results_table.txt";
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw DataError("cannot write " + out_path.string());
        out << "# " << provenance_json("report", {args.eval}, 0) << "\n";
        out << render_results_table(report, ranks ? &*ranks : nullptr);
        std::cout << "wrote " << out_path.string() << "\n";
        if (report.gap) {
            const fs::path gap_path = fs::path(args.outdir) / "gap.txt";
            std::ofstream gout(gap_path, std::ios::binary);
            gout << "# " << provenance_json("report.gap", {args.eval}, 0) << "\n";
            gout << render_gap(*report.gap);
            std::cout << "wrote " << gap_path.string() << "\n";
        }
    }
    if (args.stats.empty() && args.eval.empty()) {
        throw UsageError("report: nothing to render; pass --stats and/or --eval");
    }
    return 0;
}

struct StatsArgs {
    std::string input;
    std::string output;
};

int cmd_stats(const StatsArgs& args) {
    const std::vector<Sample> corpus = read_corpus(args.input);
    const CorpusStats stats = corpus_stats(corpus);
    std::ostringstream os;
    os << "total=" << stats.total << "\n";
    for (const auto& [label, n] : stats.per_label) {
        os << "label." << to_string(label) << "=" << n << "\n";
    }
    for (const auto& [lang, n] : stats.per_lang) os << "lang." << lang << "=" << n << "\n";
    for (const auto& [source, n] : stats.per_source) {
        os << "source." << to_string(source) << "=" << n << "\n";
    }
    std::ostringstream ratio;
    ratio << std::fixed << std::setprecision(4) << stats.balance_ratio;
    os << "balance_ratio=" << ratio.str() << "\n";
    if (args.output.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream out(args.output, std::ios::binary);
        if (!out) throw DataError("cannot write stats: " + args.output);
        out << "# " << provenance_json("stats", {args.input}, 0) << "\n" << os.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"halludet: multilingual hallucination-detection data pipeline"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Ingest one upstream dataset into unified form");
    ingest->set_config("--config");
    ingest->add_option("--descriptor", ingest_args.descriptor, "Source descriptor JSON")->required();
    ingest->add_option("--input", ingest_args.input, "Upstream dataset file")->required();
    ingest->add_option("--output", ingest_args.output, "Unified corpus output")->required();
    ingest->add_flag("--lenient", ingest_args.lenient, "Count malformed records instead of failing");

    UnifyArgs unify_args;
    auto* unify = app.add_subcommand("unify", "Run the full unification pipeline");
    unify->set_config("--config");
    unify->add_option("--source", unify_args.sources, "Repeatable <descriptor>=<input> pair")
        ->required();
    unify->add_option("--output", unify_args.output, "Unified corpus output")->required();
    unify->add_option("--stats", unify_args.stats_path, "Stats report output");
    unify->add_option("--quarantine", unify_args.quarantine_path, "Quarantine report output");
    unify->add_option("--stopwords", unify_args.stopword_dir, "Stopword list directory");
    unify->add_option("--threshold", unify_args.threshold, "Language verification threshold");
    unify->add_option("--seed", unify_args.seed, "Balancing seed");
    unify->add_flag("--skip-verify", unify_args.skip_verify, "Skip language verification");
    unify->add_flag("--skip-balance", unify_args.skip_balance, "Skip class balancing");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
    synth->set_config("--config");
    synth->add_option("--facts", synth_args.facts, "Fact table JSONL")->required();
    synth->add_option("--output", synth_args.output, "Corpus output")->required();
    synth->add_option("--pairs", synth_args.pairs, "Number of correct/hallucinated pairs");
    synth->add_option("--seed", synth_args.seed, "Generation seed");
    synth->add_option("--category-mix", synth_args.category_mix,
                      "e.g. subtle=0.5,factual_error=0.5");
    synth->add_option("--domain-mix", synth_args.domain_mix, "e.g. science=0.5,history=0.5");

    TranslateArgs translate_args;
    auto* translate = app.add_subcommand("translate", "Translation-based augmentation");
    translate->set_config("--config");
    translate->add_option("--input", translate_args.input, "Input corpus")->required();
    translate->add_option("--output", translate_args.output, "New-samples corpus output")
        ->required();
    translate->add_option("--report", translate_args.report_path, "Job report JSON output");
    translate->add_option("--direction", translate_args.direction, "en_to_targets or all_to_en");
    translate->add_option("--targets", translate_args.targets, "Target languages (direction 1)");
    translate->add_option("--backend", translate_args.backend, "prefix or http");
    translate->add_option("--endpoint", translate_args.endpoint, "host:port for http backend");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Fine-tune the classifier");
    train_cmd->set_config("--pipeline-config");
    train_cmd->add_option("--config", train_args.config, "Training config (key=value file)")
        ->required();
    train_cmd->add_option("--train", train_args.train_corpus, "Training corpus")->required();
    train_cmd->add_option("--val", train_args.val_corpus, "Validation corpus")->required();
    train_cmd->add_option("--outdir", train_args.outdir, "Checkpoint/log directory")->required();
    train_cmd->add_option("--encoder", train_args.encoder_json, "Encoder spec JSON");
    train_cmd->add_option("--axis", train_args.axis, "Train on one axis only");

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "Predict labels for a corpus");
    predict_cmd->set_config("--config");
    predict_cmd->add_option("--checkpoint", predict_args.checkpoint, "Checkpoint directory")
        ->required();
    predict_cmd->add_option("--input", predict_args.input, "Corpus to label")->required();
    predict_cmd->add_option("--output", predict_args.output, "Prediction file output")->required();
    predict_cmd->add_option("--axis", predict_args.default_axis,
                            "Axis for samples without one (factuality|fluency)");

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
    evaluate->set_config("--config");
    evaluate->add_option("--preds", eval_args.preds, "Prediction file")->required();
    evaluate->add_option("--gold", eval_args.gold, "Gold file")->required();
    evaluate->add_option("--output", eval_args.output, "Eval report JSON output")->required();
    evaluate->add_option("--val-report", eval_args.val_report,
                         "Validation report for gap analysis");
    evaluate->add_option("--corpus", eval_args.corpus, "Corpus with sample texts (for --errors)");
    evaluate->add_option("--errors", eval_args.errors_out, "Misclassification export output");
    evaluate->add_option("--top-k", eval_args.top_k, "Max errors to export");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Render tables from stored metrics");
    report->set_config("--config");
    report->add_option("--stats", report_args.stats, "Stats file from unify");
    report->add_option("--eval", report_args.eval, "Eval report JSON");
    report->add_option("--ranks", report_args.ranks, "External rank map JSON");
    report->add_option("--outdir", report_args.outdir, "Output directory");

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Corpus statistics");
    stats->set_config("--config");
    stats->add_option("--input", stats_args.input, "Corpus file")->required();
    stats->add_option("--output", stats_args.output, "Stats output (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*ingest) return cmd_ingest(ingest_args);
        if (*unify) return cmd_unify(unify_args);
        if (*synth) return cmd_synth(synth_args);
        if (*translate) return cmd_translate(translate_args);
        if (*train_cmd) return cmd_train(train_args);
        if (*predict_cmd) return cmd_predict(predict_args);
        if (*evaluate) return cmd_evaluate(eval_args);
        if (*report) return cmd_report(report_args);
        if (*stats) return cmd_stats(stats_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStage;
    }
    return 0;
}
