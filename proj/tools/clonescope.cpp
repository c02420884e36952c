// clonescope: command-line front end for the clone-detection pipeline.
//
//   extract   corpus directory -> methods, token bags, representations
//   detect    token bags -> overlap clone pairs
//   embed     representations -> sentence embeddings and distance pairs
//   filter    token bags -> labeling candidates and a random sample
//   serve     labeling service over the sample
//   evaluate  predicted pairs + ground truth -> confusion matrices, metrics
//   report    evaluation artifacts -> Markdown report
//   bench     timing sweep over a set of corpora

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "clonescope/clonescope.hpp"
#include "clonescope/labelsvc_http.hpp"
#include "clonescope/pipeline.hpp"

namespace fs = std::filesystem;
using namespace clonescope;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Options {
    std::string corpus;
    std::string out = "clonescope-out";
    std::optional<double> theta;
    std::optional<double> delta;
    int min_lines = 10;
    std::uint64_t seed = 42;
    int port = 8080;
    std::string repr = "both";

    // extract
    std::vector<std::string> extensions{".scala"};
    bool no_keywords = false;
    bool no_literals = false;
    bool no_operators = false;
    bool punctuation = false;

    // embed
    int dim = 50;
    int epochs = 20;
    int rae_epochs = 20;
    double learning_rate = 0.01;
    int min_count = 2;
    std::size_t max_sequence = 400;
    double percentile = 0.01;
    bool group_by_project = false;

    // filter
    std::size_t sample = 1000;

    // serve
    std::string host = "127.0.0.1";
    std::string ui;
    bool second_rater_first = false;

    // evaluate
    std::string truth;
    std::string confusion;
    std::string labels;

    // bench
    std::string corpora;
    std::vector<std::size_t> synthetic;
    bool bench_embed = false;
    std::size_t embed_limit = 1000;
};

void note(const std::string& msg) { std::cerr << "clonescope: " << msg << '\n'; }

void report_diagnostics(const Diagnostics& diags, const fs::path& file) {
    if (diags.empty()) return;
    std::string text;
    for (const auto& d : diags) text += d + "\n";
    write_text(file, text);
    note(std::to_string(diags.size()) + " diagnostics written to " + file.string());
}

fs::path out_dir(const Options& o) { return fs::path(o.out); }

fs::path require(const fs::path& p) {
    if (!fs::exists(p)) throw ArtifactError("missing input artifact: " + p.string());
    return p;
}

/// Merges this run's settings into manifest.json.
void update_manifest(const Options& o, const json& section, const std::string& name) {
    const auto path = out_dir(o) / "manifest.json";
    json m = fs::exists(path) ? read_json(path) : json::object();
    m["tool_version"] = kVersion;
    m[name] = section;
    write_json(path, m);
}

ExtractConfig extract_config(const Options& o) {
    ExtractConfig cfg;
    cfg.extensions = o.extensions;
    cfg.min_lines = o.min_lines;
    cfg.token_classes.keywords = !o.no_keywords;
    cfg.token_classes.literals = !o.no_literals;
    cfg.token_classes.operators = !o.no_operators;
    cfg.token_classes.punctuation = o.punctuation;
    return cfg;
}

int cmd_extract(const Options& o) {
    if (o.corpus.empty()) throw CorpusError("extract needs --corpus");
    if (o.min_lines < 1) throw DomainError("--min-lines must be at least 1");
    const auto cfg = extract_config(o);
    Diagnostics diags;
    const auto files = ingest_corpus(o.corpus, cfg.extensions, &diags);
    auto ex = extract_all(files, cfg);
    diags.insert(diags.end(), ex.diagnostics.begin(), ex.diagnostics.end());

    const auto dir = out_dir(o);
    write_jsonl(dir / "methods.jsonl", ex.methods);
    write_jsonl(dir / "bags.jsonl", ex.bags);
    write_jsonl(dir / "repr-identifier.jsonl", ex.identifier);
    write_jsonl(dir / "repr-ast.jsonl", ex.ast);
    std::string files_jsonl;
    for (const auto& f : files) files_jsonl += json{{"path", f.path}, {"loc", f.loc}}.dump() + "\n";
    write_text(dir / "files.jsonl", files_jsonl);
    report_diagnostics(diags, dir / "extract-diagnostics.txt");
    update_manifest(o,
                    {{"corpus", o.corpus},
                     {"extensions", cfg.extensions},
                     {"min_lines", cfg.min_lines},
                     {"token_classes",
                      {{"keywords", cfg.token_classes.keywords},
                       {"identifiers", cfg.token_classes.identifiers},
                       {"literals", cfg.token_classes.literals},
                       {"operators", cfg.token_classes.operators},
                       {"punctuation", cfg.token_classes.punctuation}}},
                     {"files", files.size()},
                     {"loc", ex.loc},
                     {"methods", ex.methods.size()}},
                    "extract");
    std::cout << "files " << files.size() << ", loc " << ex.loc << ", methods " << ex.methods.size() << '\n';
    return 0;
}

int cmd_detect(const Options& o) {
    const auto dir = out_dir(o);
    const double theta = o.theta.value_or(0.90);
    const auto bags = load_jsonl(require(dir / "bags.jsonl"), bag_from_json);
    auto run = run_overlap(bags, theta);
    const auto t = Threshold::from_double(theta);

    std::string lines;
    for (const auto& p : run.pairs) {
        auto j = to_json(p);
        j["theta"] = t.value();
        lines += j.dump() + "\n";
    }
    write_text(dir / "pairs-overlap.jsonl", lines);
    write_json(dir / "summary-overlap.json", {{"theta", t.value()},
                                              {"bags", run.stats.bags},
                                              {"pairs", run.stats.pairs},
                                              {"index_entries", run.stats.index_entries},
                                              {"candidates_verified", run.stats.candidates_verified},
                                              {"brute_force_comparisons", run.stats.brute_force_comparisons}});
    write_json(dir / "timing-overlap.json", {{"seconds", run.seconds}, {"bags", bags.size()}});
    update_manifest(o, {{"theta", t.value()}}, "detect");
    std::cout << run.pairs.size() << " clone pairs at theta " << t.value() << " in " << run.seconds << " s\n";
    return 0;
}

std::vector<ReprKind> repr_kinds(const std::string& repr) {
    if (repr == "both") return {ReprKind::Identifier, ReprKind::Ast};
    return {parse_repr_kind(repr)};
}

EmbeddingDetectConfig embedding_config(const Options& o) {
    EmbeddingDetectConfig c;
    c.embedding.words.dim = o.dim;
    c.embedding.words.epochs = o.epochs;
    c.embedding.words.learning_rate = o.learning_rate;
    c.embedding.words.seed = o.seed;
    c.embedding.rae.epochs = o.rae_epochs;
    c.embedding.rae.learning_rate = o.learning_rate;
    c.embedding.rae.seed = o.seed;
    c.embedding.min_count = o.min_count;
    c.embedding.max_sequence = o.max_sequence;
    c.delta = o.delta;
    c.percentile = o.percentile;
    c.group_by_project = o.group_by_project;
    return c;
}

int cmd_embed(const Options& o) {
    const auto dir = out_dir(o);
    const auto methods = load_jsonl(require(dir / "methods.jsonl"), method_from_json);
    const auto cfg = embedding_config(o);
    std::map<ReprKind, std::vector<ClonePair>> found;
    json manifest{{"dim", o.dim},
                  {"epochs", o.epochs},
                  {"rae_epochs", o.rae_epochs},
                  {"learning_rate", o.learning_rate},
                  {"min_count", o.min_count},
                  {"max_sequence", o.max_sequence},
                  {"seed", o.seed},
                  {"group_by_project", o.group_by_project}};
    for (auto kind : repr_kinds(o.repr)) {
        const std::string k(to_string(kind));
        const auto seqs = load_jsonl(require(dir / ("repr-" + k + ".jsonl")), sequence_from_json);
        auto det = run_embedding(seqs, methods, cfg);
        write_jsonl(dir / ("embeddings-" + k + ".jsonl"), det.run.embeddings);
        write_jsonl(dir / ("pairs-" + k + ".jsonl"), det.pairs);
        json errors = json::object();
        for (const auto& [id, why] : det.run.errors) errors[id] = why;
        write_json(dir / ("training-" + k + ".json"),
                   {{"vocab_size", det.run.vocab.size()},
                    {"word_embedding", {{"initial_loss", det.run.words.initial_loss},
                                        {"epoch_losses", det.run.words.epoch_losses},
                                        {"final_loss", det.run.words.final_loss}}},
                    {"rae", {{"initial_loss", det.run.rae.initial_loss},
                             {"epoch_losses", det.run.rae.epoch_losses},
                             {"final_loss", det.run.rae.final_loss}}},
                    {"delta", det.delta},
                    {"delta_calibrated", det.calibrated},
                    {"methods_without_embedding", errors}});
        report_diagnostics(det.run.diagnostics, dir / ("embed-" + k + "-diagnostics.txt"));
        manifest["delta_" + k] = det.delta;
        std::cout << k << ": " << det.run.embeddings.size() << " embeddings, delta " << det.delta << ", "
                  << det.pairs.size() << " pairs in " << det.seconds << " s\n";
        found.emplace(kind, std::move(det.pairs));
    }
    if (found.size() == 2) {
        const auto combined = combine(found[ReprKind::Identifier], found[ReprKind::Ast]);
        write_jsonl(dir / "pairs-combination.jsonl", combined);
        std::cout << "combination: " << combined.size() << " pairs\n";
    }
    update_manifest(o, manifest, "embed");
    return 0;
}

int cmd_filter(const Options& o) {
    const auto dir = out_dir(o);
    const double theta = o.theta.value_or(0.70);
    const auto bags = load_jsonl(require(dir / "bags.jsonl"), bag_from_json);
    const auto candidates = filter_candidates(bags, theta);
    Diagnostics diags;
    const auto sample = sample_pairs(candidates, o.sample, o.seed, &diags);
    write_jsonl(dir / "candidates.jsonl", candidates);
    write_jsonl(dir / "sample.jsonl", sample);
    for (const auto& d : diags) note(d);
    update_manifest(o, {{"theta", Threshold::from_double(theta).value()}, {"sample", o.sample}, {"seed", o.seed}},
                    "filter");
    std::cout << candidates.size() << " candidates, " << sample.size() << " sampled\n";
    return 0;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const Options& o) {
    const auto dir = out_dir(o);
    auto sample = load_jsonl(require(dir / "sample.jsonl"), candidate_from_json);
    const auto methods = load_jsonl(require(dir / "methods.jsonl"), method_from_json);
    const fs::path journal = o.labels.empty() ? dir / "labels.jsonl" : fs::path(o.labels);
    LabelService service(std::move(sample), methods, journal, {o.second_rater_first, o.seed});
    httplib::Server server;
    install_routes(server, service, o.ui);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
    });
    note("serving " + std::to_string(service.candidate_count()) + " pairs on http://" + o.host + ":" +
         std::to_string(o.port));
    if (!server.listen(o.host, o.port)) throw Error("cannot listen on " + o.host + ":" + std::to_string(o.port));
    write_jsonl(dir / "truth.jsonl", service.export_truth());
    return 0;
}

std::vector<GroundTruth> load_truth(const Options& o) {
    const auto dir = out_dir(o);
    const fs::path truth_path = o.truth.empty() ? dir / "truth.jsonl" : fs::path(o.truth);
    if (fs::exists(truth_path)) return load_jsonl(truth_path, truth_from_json);
    const fs::path labels = o.labels.empty() ? dir / "labels.jsonl" : fs::path(o.labels);
    if (!fs::exists(labels)) {
        throw ArtifactError("missing input artifact: " + truth_path.string() + " (or " + labels.string() + ")");
    }
    auto res = consensus_detail(label_records(read_label_journal(labels)));
    note(std::to_string(res.truth.size()) + " consensus pairs, " + std::to_string(res.unresolved) +
         " unresolved ties, " + std::to_string(res.insufficient) + " without agreement");
    write_jsonl(dir / "truth.jsonl", res.truth);
    return res.truth;
}

std::map<DetectorTag, ConfusionMatrix> read_confusion_input(const fs::path& p) {
    const auto j = read_json(require(p));
    std::map<DetectorTag, ConfusionMatrix> out;
    if (j.contains("tp")) {
        out.emplace(DetectorTag::Overlap, confusion_from_json(j));
        return out;
    }
    for (const auto& [name, m] : j.items()) out.emplace(parse_detector_tag(name), confusion_from_json(m));
    return out;
}

void write_evaluation(const Options& o, const std::map<DetectorTag, ConfusionMatrix>& matrices) {
    const auto dir = out_dir(o);
    json metrics = json::object();
    for (const auto& [tag, m] : matrices) {
        const std::string name(to_string(tag));
        write_json(dir / ("confusion-" + name + ".json"), to_json(m));
        auto entry = to_json(precision_recall(m));
        entry["confusion"] = to_json(m);
        metrics[name] = entry;
        std::cout << name << ": tp " << m.tp << " fp " << m.fp << " fn " << m.fn << " tn " << m.tn << '\n';
    }
    write_json(dir / "metrics.json", metrics);
}

int cmd_evaluate(const Options& o) {
    const auto dir = out_dir(o);
    fs::create_directories(dir);
    if (!o.confusion.empty()) {
        write_evaluation(o, read_confusion_input(o.confusion));
        return 0;
    }
    const auto truth = load_truth(o);
    if (truth.empty()) throw DomainError("ground truth is empty; nothing to evaluate");
    std::map<DetectorTag, ConfusionMatrix> matrices;
    for (auto tag : {DetectorTag::Overlap, DetectorTag::Identifier, DetectorTag::Ast, DetectorTag::Combination}) {
        const auto path = dir / ("pairs-" + std::string(to_string(tag)) + ".jsonl");
        if (!fs::exists(path)) continue;
        matrices.emplace(tag, confusion(load_jsonl(path, pair_from_json), truth));
    }
    if (matrices.empty()) throw ArtifactError("missing input artifact: no pairs-*.jsonl in " + dir.string());
    write_evaluation(o, matrices);
    write_json(dir / "type-distribution.json", to_json(type_distribution(truth)));
    return 0;
}

std::vector<TimingRun> read_timing_csv(const fs::path& p) {
    std::vector<TimingRun> rows;
    std::istringstream in(read_text(p));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) throw ArtifactError("malformed timing row: " + line);
        rows.push_back({cells[0], cells[1], std::stoull(cells[2]), std::stoull(cells[3]), std::stod(cells[4])});
    }
    return rows;
}

int cmd_report(const Options& o) {
    const auto dir = out_dir(o);
    ReportInput in;
    for (auto tag : {DetectorTag::Overlap, DetectorTag::Identifier, DetectorTag::Ast, DetectorTag::Combination}) {
        const auto path = dir / ("confusion-" + std::string(to_string(tag)) + ".json");
        if (fs::exists(path)) in.matrices.emplace(tag, confusion_from_json(read_json(path)));
    }
    const auto dist_path = dir / "type-distribution.json";
    if (fs::exists(dist_path)) {
        const auto j = read_json(dist_path);
        std::array<std::uint64_t, 5> counts{};
        for (auto l : kAllLabels) counts[static_cast<std::size_t>(l)] = j.at("counts").at(std::string(to_string(l)));
        in.distribution = type_distribution_from_counts(counts);
    }
    if (fs::exists(dir / "timing.csv")) in.timing = read_timing_csv(dir / "timing.csv");
    if (in.matrices.empty() && !in.distribution && in.timing.empty()) {
        throw ArtifactError("missing input artifact: confusion-*.json, type-distribution.json or timing.csv in " +
                            dir.string());
    }
    write_text(dir / "report.md", markdown_report(in));
    std::cout << "wrote " << (dir / "report.md").string() << '\n';
    return 0;
}

struct BenchCorpus {
    std::string name;
    std::vector<SourceFile> files;
};

int cmd_bench(const Options& o) {
    std::vector<BenchCorpus> corpora;
    if (!o.corpora.empty()) {
        std::vector<fs::path> roots;
        for (const auto& e : fs::directory_iterator(o.corpora)) {
            if (e.is_directory()) roots.push_back(e.path());
        }
        std::sort(roots.begin(), roots.end());
        for (const auto& r : roots) {
            Diagnostics d;
            corpora.push_back({r.filename().string(), ingest_corpus(r, o.extensions, &d)});
        }
    }
    for (auto n : o.synthetic) {
        synth::Config sc;
        sc.methods = n;
        sc.projects = std::max<std::size_t>(1, n / 500);
        sc.seed = o.seed + n;
        corpora.push_back({"synthetic-" + std::to_string(n), synth::generate(sc).files});
    }
    if (corpora.empty()) throw DomainError("bench needs --corpora or --synthetic");

    const double theta = o.theta.value_or(0.90);
    const auto ecfg = embedding_config(o);
    ExtractConfig xcfg = extract_config(o);
    std::vector<TimingRun> runs;
    json summary = json::array();
    for (const auto& c : corpora) {
        auto ex = extract_all(c.files, xcfg, o.bench_embed);
        const auto ov = run_overlap(ex.bags, theta);
        runs.push_back({c.name, "overlap", ex.loc, ex.methods.size(), ov.seconds});
        json row{{"corpus", c.name},
                 {"loc", ex.loc},
                 {"methods", ex.methods.size()},
                 {"overlap_seconds", ov.seconds},
                 {"overlap_pairs", ov.pairs.size()}};
        std::cout << c.name << ": " << ex.methods.size() << " methods, " << ex.loc << " loc, overlap "
                  << ov.seconds << " s";
        if (o.bench_embed && ex.methods.size() <= o.embed_limit) {
            Stopwatch sw;
            std::size_t pairs = 0;
            std::map<ReprKind, std::vector<ClonePair>> found;
            for (auto kind : repr_kinds(o.repr)) {
                auto det = run_embedding(kind == ReprKind::Identifier ? ex.identifier : ex.ast, ex.methods, ecfg);
                found.emplace(kind, std::move(det.pairs));
            }
            if (found.size() == 2) {
                pairs = combine(found[ReprKind::Identifier], found[ReprKind::Ast]).size();
            } else {
                pairs = found.begin()->second.size();
            }
            const double secs = sw.seconds();
            runs.push_back({c.name, "embedding", ex.loc, ex.methods.size(), secs});
            row["embedding_seconds"] = secs;
            row["embedding_pairs"] = pairs;
            std::cout << ", embedding " << secs << " s";
        }
        std::cout << '\n';
        summary.push_back(row);
    }
    const auto dir = out_dir(o);
    write_text(dir / "timing.csv", timing_report(runs));
    write_json(dir / "bench-summary.json", summary);
    std::cout << "wrote " << (dir / "timing.csv").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clone detection toolkit: token-bag overlap and embedding detectors with an evaluation harness"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--out", o.out, "Artifact directory")->envname("CLONESCOPE_OUT")->capture_default_str();
        sub->add_option("--seed", o.seed, "Random seed")->envname("CLONESCOPE_SEED")->capture_default_str();
    };

    auto* extract = app.add_subcommand("extract", "Extract methods, token bags and representations from a corpus");
    common(extract);
    extract->add_option("--corpus", o.corpus, "Corpus root directory")->envname("CLONESCOPE_CORPUS");
    extract->add_option("--min-lines", o.min_lines, "Minimum effective lines per method")
        ->envname("CLONESCOPE_MIN_LINES")
        ->capture_default_str();
    extract->add_option("--ext", o.extensions, "File extensions to ingest")->capture_default_str();
    extract->add_flag("--no-keywords", o.no_keywords, "Leave keywords out of token bags");
    extract->add_flag("--no-literals", o.no_literals, "Leave literals out of token bags");
    extract->add_flag("--no-operators", o.no_operators, "Leave operators out of token bags");
    extract->add_flag("--punctuation", o.punctuation, "Include punctuation in token bags");

    auto* detect_cmd = app.add_subcommand("detect", "Overlap clone detection over token bags");
    common(detect_cmd);
    detect_cmd->add_option("--theta", o.theta, "Similarity threshold (default 0.90)")->envname("CLONESCOPE_THETA");

    auto* embed = app.add_subcommand("embed", "Embedding clone detection over representation sequences");
    common(embed);
    embed->add_option("--repr", o.repr, "Representation: identifier, ast or both")
        ->envname("CLONESCOPE_REPR")
        ->check(CLI::IsMember({"identifier", "ast", "both"}))
        ->capture_default_str();
    embed->add_option("--delta", o.delta, "Distance threshold (calibrated when omitted)")->envname("CLONESCOPE_DELTA");
    embed->add_option("--percentile", o.percentile, "Calibration percentile of pairwise distances")
        ->capture_default_str();
    embed->add_option("--dim", o.dim, "Embedding width")->capture_default_str();
    embed->add_option("--epochs", o.epochs, "Word-embedding epochs")->capture_default_str();
    embed->add_option("--rae-epochs", o.rae_epochs, "Autoencoder epochs")->capture_default_str();
    embed->add_option("--learning-rate", o.learning_rate, "Initial learning rate")->capture_default_str();
    embed->add_option("--min-count", o.min_count, "Minimum token frequency for the vocabulary")->capture_default_str();
    embed->add_option("--max-sequence", o.max_sequence, "Sequence length cap")->capture_default_str();
    embed->add_flag("--group-by-project", o.group_by_project, "Only compare methods of the same project");

    auto* filter = app.add_subcommand("filter", "Candidate pairs for labeling and a random sample of them");
    common(filter);
    filter->add_option("--theta", o.theta, "Filtering threshold (default 0.70)")->envname("CLONESCOPE_THETA");
    filter->add_option("--sample", o.sample, "Number of pairs to sample")->capture_default_str();

    auto* serve = app.add_subcommand("serve", "Serve the labeling API over the sampled pairs");
    common(serve);
    serve->add_option("--port", o.port, "Listening port")->envname("CLONESCOPE_PORT")->capture_default_str();
    serve->add_option("--host", o.host, "Listening address")->capture_default_str();
    serve->add_option("--ui", o.ui, "Directory with the built labeling UI");
    serve->add_option("--labels", o.labels, "Label journal (default <out>/labels.jsonl)");
    serve->add_flag("--second-rater-first", o.second_rater_first, "Prefer pairs that have exactly one label");

    auto* evaluate = app.add_subcommand("evaluate", "Confusion matrices, precision/recall and type distribution");
    common(evaluate);
    evaluate->add_option("--truth", o.truth, "Ground truth (default <out>/truth.jsonl)");
    evaluate->add_option("--labels", o.labels, "Label journal used when no truth file exists");
    evaluate->add_option("--confusion", o.confusion, "Evaluate given confusion matrices instead of pair files");

    auto* report = app.add_subcommand("report", "Markdown report from evaluation artifacts");
    common(report);

    auto* bench = app.add_subcommand("bench", "Timing sweep of the detectors over several corpora");
    common(bench);
    bench->add_option("--corpora", o.corpora, "Directory whose subdirectories are corpora");
    bench->add_option("--synthetic", o.synthetic, "Generate synthetic corpora of these method counts")
        ->delimiter(',');
    bench->add_option("--theta", o.theta, "Overlap threshold (default 0.90)")->envname("CLONESCOPE_THETA");
    bench->add_option("--min-lines", o.min_lines, "Minimum effective lines per method")
        ->envname("CLONESCOPE_MIN_LINES")
        ->capture_default_str();
    bench->add_flag("--embed", o.bench_embed, "Also time the embedding pipeline");
    bench->add_option("--embed-limit", o.embed_limit, "Largest corpus (methods) to run the embedding pipeline on")
        ->capture_default_str();
    bench->add_option("--repr", o.repr, "Representations for the embedding pipeline")
        ->check(CLI::IsMember({"identifier", "ast", "both"}))
        ->capture_default_str();
    bench->add_option("--dim", o.dim, "Embedding width")->capture_default_str();
    bench->add_option("--epochs", o.epochs, "Word-embedding epochs")->capture_default_str();
    bench->add_option("--rae-epochs", o.rae_epochs, "Autoencoder epochs")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) return cmd_extract(o);
        if (*detect_cmd) return cmd_detect(o);
        if (*embed) return cmd_embed(o);
        if (*filter) return cmd_filter(o);
        if (*serve) return cmd_serve(o);
        if (*evaluate) return cmd_evaluate(o);
        if (*report) return cmd_report(o);
        if (*bench) return cmd_bench(o);
    } catch (const std::exception& e) {
        note(std::string("error: ") + e.what());
        return 1;
    }
    return 1;
}
