// Command-line front end for the round-trip mistranslation toolkit.
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <semmt/detect.hpp>
#include <semmt/nl2regex.hpp>
#include <semmt/regex_parser.hpp>
#include <semmt/rtt.hpp>
#include <semmt/similarity.hpp>

namespace {

using namespace semmt;

VagueMode parse_vague_mode(const std::string& s) {
    if (s == "over") return VagueMode::over;
    if (s == "under") return VagueMode::under;
    if (s == "context") return VagueMode::context;
    throw InvalidParameter("vague mode must be over, under, or context: " + s);
}

std::vector<Metric> parse_metrics(const std::vector<std::string>& names) {
    std::vector<Metric> out;
    for (const auto& n : names) {
        bool found = false;
        for (Metric m : {Metric::SemmtR, Metric::SemmtD, Metric::SemmtH, Metric::Leven, Metric::Bleu}) {
            if (metric_name(m) == n) {
                out.push_back(m);
                found = true;
            }
        }
        if (!found) throw InvalidParameter("unknown metric: " + n);
    }
    return out;
}

FaultKind parse_fault_kind(const std::string& s) {
    for (FaultKind k : {FaultKind::identity, FaultKind::quantifier_swap, FaultKind::negation_drop,
                        FaultKind::bound_shift, FaultKind::plural_drop, FaultKind::order_swap}) {
        if (fault_kind_name(k) == s) return k;
    }
    throw InvalidParameter("unknown fault kind: " + s);
}

Lexicon load_lexicon(const std::string& path) {
    if (path.empty()) return Lexicon::defaults();
    return Lexicon::load(path);
}

std::map<std::string, bool> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open labels: " + path);
    std::map<std::string, bool> truth;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw InvalidParameter("malformed label line: " + line);
        truth[line.substr(0, tab)] = line.substr(tab + 1) == "1";
    }
    return truth;
}

struct CommonOpts {
    std::string lexicon_path;
    std::string vague_mode = "over";
    int context_max = -1;
    double k = 0.5;
    double eps = 0.001;
    std::vector<std::string> metrics = {"semmt-d", "leven"};
};

int cmd_transform(const std::string& sentence, const std::string& dataset,
                  const CommonOpts& opts) {
    Lexicon lex = load_lexicon(opts.lexicon_path);
    auto alpha = standard_alphabet();
    VagueMode mode = parse_vague_mode(opts.vague_mode);
    std::optional<int> ctx;
    if (opts.context_max >= 0) ctx = opts.context_max;
    std::vector<std::string> sentences;
    if (!sentence.empty()) sentences.push_back(sentence);
    if (!dataset.empty())
        for (const auto& item : load_dataset(dataset)) sentences.push_back(item.sentence);
    if (sentences.empty()) throw InvalidParameter("provide --sentence or --dataset");
    int failures = 0;
    for (const auto& s : sentences) {
        try {
            RegexAst ast = sentence_to_regex(s, lex, *alpha, mode, ctx);
            std::cout << render_regex(ast, *alpha) << "\n";
        } catch (const std::exception& e) {
            std::cout << "ERROR: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == static_cast<int>(sentences.size()) && !sentences.empty() ? 1 : 0;
}

int cmd_score(const std::string& r1, const std::string& r2, const CommonOpts& opts) {
    auto alpha = standard_alphabet();
    RegexAst a = parse_regex(r1, *alpha);
    RegexAst b = parse_regex(r2, *alpha);
    DfaSimConfig cfg;
    cfg.eps_conv = opts.eps;
    for (Metric m : parse_metrics(opts.metrics)) {
        SimilarityScore s;
        switch (m) {
            case Metric::SemmtR: s = semmt_r(a, b, *alpha); break;
            case Metric::SemmtD: s = semmt_d(a, b, alpha, cfg); break;
            case Metric::SemmtH: s = semmt_h(a, b, alpha, opts.k, cfg); break;
            case Metric::Leven: s = leven_sim(r1, r2); break;
            case Metric::Bleu: s = bleu_sim(r1, r2); break;
            case Metric::External: continue;
        }
        std::cout << s.name() << "\t" << s.value;
        if (s.metric == Metric::SemmtD || s.metric == Metric::SemmtH)
            std::cout << "\tlambda=" << s.lambda_stop << "\tconverged=" << (s.converged ? "yes" : "no");
        std::cout << "\n";
    }
    return 0;
}

struct RunOpts {
    std::string dataset, out, cache_path;
    std::string translator = "mock";
    std::string src = "en", pivot = "xx";
    std::string fault_kind = "identity";
    std::string fault_trip = "forward";
    double fault_rate = 0.0;
    unsigned seed = 0;
    int jobs = 1;
};

int cmd_run(const RunOpts& run, const CommonOpts& opts) {
    if (run.translator != "mock")
        throw InvalidParameter("unknown translator: " + run.translator);
    std::vector<MockFaultSpec> faults;
    FaultKind kind = parse_fault_kind(run.fault_kind);
    if (kind != FaultKind::identity && run.fault_rate > 0.0) {
        Trip trip = run.fault_trip == "backward" ? Trip::backward : Trip::forward;
        faults.push_back({kind, run.fault_rate, run.seed, trip});
    }
    MockTranslator client(faults, run.src, run.pivot);
    std::optional<TranslationCache> cache;
    if (!run.cache_path.empty()) cache.emplace(run.cache_path);

    PipelineConfig cfg;
    cfg.metrics = parse_metrics(opts.metrics);
    cfg.k = opts.k;
    cfg.dfa.eps_conv = opts.eps;
    cfg.vague_mode = parse_vague_mode(opts.vague_mode);
    if (opts.context_max >= 0) cfg.context_max = opts.context_max;
    cfg.lexicon = load_lexicon(opts.lexicon_path);
    cfg.parallelism = run.jobs;

    std::vector<std::string> sentences;
    for (const auto& item : load_dataset(run.dataset)) sentences.push_back(item.sentence);
    auto records = run_pipeline(sentences, client, run.src, run.pivot, cfg,
                                cache ? &*cache : nullptr);
    if (!run.out.empty()) write_records_jsonl(records, run.out);
    else
        for (const auto& r : records) std::cout << nlohmann::json(r).dump() << "\n";
    std::cerr << records.size() << " records, " << client.calls() << " translator calls\n";
    return 0;
}

int cmd_sweep(const std::string& records_path, const std::string& labels_path,
              const std::string& metric, double step, double threshold) {
    auto records = read_records_jsonl(records_path);
    auto truth = load_labels(labels_path);
    auto verdicts = verdicts_for_metric(records, metric);
    if (threshold >= 0.0) {
        ConfusionCounts c = evaluate(apply_threshold(verdicts, threshold), truth);
        std::cout << "threshold\t" << threshold << "\nprecision\t" << c.precision() << "\nrecall\t"
                  << c.recall() << "\naccuracy\t" << c.accuracy() << "\nf-score\t" << c.f_score()
                  << "\n";
        return 0;
    }
    SweepResult res = sweep_thresholds(verdicts, truth, step);
    std::cout << "best-threshold\t" << res.best_threshold << "\nprecision\t"
              << res.best_counts.precision() << "\nrecall\t" << res.best_counts.recall()
              << "\naccuracy\t" << res.best_counts.accuracy() << "\nf-score\t" << res.best_f()
              << "\n";
    return 0;
}

int cmd_localize(const std::string& records_path, const std::string& refs_path) {
    auto records = read_records_jsonl(records_path);
    auto refs_records = read_records_jsonl(refs_path);
    std::map<std::string, ReferenceTranslation> refs;
    for (const auto& r : refs_records) refs[r.original] = {r.intermediate, r.back};
    TripCalibration calib = calibrate_trip_stats(refs_records, refs);
    for (const auto& r : records) {
        if (r.failed) continue;
        Trip t = localize_trip(trip_sims(r, refs), calib);
        std::cout << r.id << "\t" << (t == Trip::forward ? "forward" : "backward") << "\n";
    }
    return 0;
}

int cmd_report(const std::string& records_path) {
    auto records = read_records_jsonl(records_path);
    std::map<std::string, std::pair<double, int>> sums;
    int failed = 0, regex_errors = 0;
    for (const auto& r : records) {
        if (r.failed) ++failed;
        if (!r.regex_error_original.empty() || !r.regex_error_back.empty()) ++regex_errors;
        for (const auto& s : r.scores) {
            sums[s.name()].first += s.value;
            sums[s.name()].second += 1;
        }
    }
    std::cout << "records\t" << records.size() << "\nfailed-trips\t" << failed
              << "\nregex-errors\t" << regex_errors << "\n";
    for (const auto& [name, acc] : sums)
        std::cout << "mean-" << name << "\t" << acc.first / acc.second << "\t(n=" << acc.second
                  << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Round-trip translation mistranslation detector"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string sentence, dataset, r1, r2;
    RunOpts run;
    std::string records_path, labels_path, refs_path, metric = "semmt-d";
    double step = 0.01, threshold = -1.0;

    auto add_common = [&](CLI::App* c, bool with_metrics) {
        c->add_option("--lexicon", opts.lexicon_path, "lexicon TSV (default: built-in)");
        c->add_option("--vague-mode", opts.vague_mode, "over|under|context");
        c->add_option("--context-max", opts.context_max, "upper bound for context mode");
        if (with_metrics) {
            c->add_option("--metrics", opts.metrics, "metrics to compute")->delimiter(',');
            c->add_option("--k", opts.k, "hybrid weight K");
            c->add_option("--eps", opts.eps, "convergence epsilon");
        }
    };

    auto* t = app.add_subcommand("transform", "sentence(s) -> regex");
    t->add_option("--sentence", sentence, "one sentence");
    t->add_option("--dataset", dataset, "TSV dataset of sentences");
    add_common(t, false);

    auto* sc = app.add_subcommand("score", "similarity between two regexes");
    sc->add_option("--r1", r1, "first regex")->required();
    sc->add_option("--r2", r2, "second regex")->required();
    add_common(sc, true);

    auto* rn = app.add_subcommand("run", "round-trip pipeline over a dataset");
    rn->add_option("--dataset", run.dataset, "TSV dataset")->required();
    rn->add_option("--translator", run.translator, "translator backend (mock)");
    rn->add_option("--src", run.src, "source language");
    rn->add_option("--pivot", run.pivot, "pivot language");
    rn->add_option("--fault-kind", run.fault_kind, "mock fault kind");
    rn->add_option("--fault-rate", run.fault_rate, "mock fault rate [0,1]");
    rn->add_option("--fault-trip", run.fault_trip, "forward|backward");
    rn->add_option("--seed", run.seed, "mock fault seed");
    rn->add_option("--cache", run.cache_path, "translation cache JSONL");
    rn->add_option("--jobs", run.jobs, "worker threads");
    rn->add_option("--out", run.out, "output records JSONL (default stdout)");
    add_common(rn, true);

    auto* sw = app.add_subcommand("sweep", "threshold sweep against labels");
    sw->add_option("--records", records_path, "records JSONL")->required();
    sw->add_option("--labels", labels_path, "TSV id<TAB>0|1")->required();
    sw->add_option("--metric", metric, "metric to sweep");
    sw->add_option("--step", step, "grid step");
    sw->add_option("--threshold", threshold, "evaluate a fixed threshold instead");

    auto* lc = app.add_subcommand("localize", "attribute faults to a trip");
    lc->add_option("--records", records_path, "suspect records JSONL")->required();
    lc->add_option("--refs", refs_path, "reference (correct) records JSONL")->required();

    auto* rp = app.add_subcommand("report", "summarize a records file");
    rp->add_option("--records", records_path, "records JSONL")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (t->parsed()) return cmd_transform(sentence, dataset, opts);
        if (sc->parsed()) return cmd_score(r1, r2, opts);
        if (rn->parsed()) return cmd_run(run, opts);
        if (sw->parsed()) return cmd_sweep(records_path, labels_path, metric, step, threshold);
        if (lc->parsed()) return cmd_localize(records_path, refs_path);
        if (rp->parsed()) return cmd_report(records_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
