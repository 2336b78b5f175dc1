#ifndef SEMMT_RTT_HPP
#define SEMMT_RTT_HPP

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include <semmt/errors.hpp>
#include <semmt/nl2regex.hpp>
#include <semmt/regex_parser.hpp>
#include <semmt/similarity.hpp>

namespace semmt {

/// Pluggable translation backend. Implementations must be deterministic per
/// (text, src, dst) within a cache epoch; either safe for concurrent calls or
/// declared serial so the pipeline funnels them.
class TranslatorClient {
public:
    virtual ~TranslatorClient() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    virtual std::string translate(const std::string& text, const std::string& src,
                                  const std::string& dst) = 0;
    [[nodiscard]] virtual bool thread_safe() const { return true; }
};

enum class FaultKind {
    identity,
    quantifier_swap,  // "at least" <-> "at most", "more" <-> "less"
    negation_drop,    // remove "not"
    bound_shift,      // N -> N+1
    plural_drop,
    order_swap,
};

inline std::string fault_kind_name(FaultKind k) {
    switch (k) {
        case FaultKind::identity: return "identity";
        case FaultKind::quantifier_swap: return "quantifier_swap";
        case FaultKind::negation_drop: return "negation_drop";
        case FaultKind::bound_shift: return "bound_shift";
        case FaultKind::plural_drop: return "plural_drop";
        case FaultKind::order_swap: return "order_swap";
    }
    return "?";
}

enum class Trip { forward, backward };

/// Seeded fault injection spec for the mock translator.
struct MockFaultSpec {
    FaultKind kind = FaultKind::identity;
    double rate = 0.0;  // in [0,1]
    unsigned seed = 0;
    Trip trip = Trip::forward;
};

namespace detail {

inline std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

inline std::string swap_phrases(std::string text, const std::string& a, const std::string& b) {
    const std::string marker = "\x01";
    text = replace_all(std::move(text), a, marker);
    text = replace_all(std::move(text), b, a);
    return replace_all(std::move(text), marker, b);
}

/// Apply one fault rule; returns the text unchanged when the rule does not
/// apply (no matching phrase).
inline std::string apply_fault(FaultKind kind, const std::string& text) {
    switch (kind) {
        case FaultKind::identity:
            return text;
        case FaultKind::quantifier_swap: {
            std::string out = swap_phrases(text, "at least", "at most");
            return swap_phrases(std::move(out), "more", "less");
        }
        case FaultKind::negation_drop: {
            std::string out = replace_all(text, " not ", " ");
            if (out.rfind("not ", 0) == 0) out = out.substr(4);
            return out;
        }
        case FaultKind::bound_shift: {
            std::string out;
            bool shifted = false;
            std::size_t i = 0;
            while (i < text.size()) {
                if (!shifted && std::isdigit(static_cast<unsigned char>(text[i])) &&
                    (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1])))) {
                    std::size_t j = i;
                    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                    if (j == text.size() || !std::isalnum(static_cast<unsigned char>(text[j]))) {
                        long v = std::stol(text.substr(i, j - i));
                        out += std::to_string(v + 1);
                        i = j;
                        shifted = true;
                        continue;
                    }
                }
                out += text[i++];
            }
            return out;
        }
        case FaultKind::plural_drop: {
            std::string out = text;
            for (const char* w : {"letters", "numbers", "digits", "vowels", "characters", "words"}) {
                std::string plural = w;
                out = replace_all(std::move(out), plural, plural.substr(0, plural.size() - 1));
            }
            return out;
        }
        case FaultKind::order_swap: {
            std::size_t pos = text.find(" or ");
            if (pos == std::string::npos) return text;
            return text.substr(pos + 4) + " or " + text.substr(0, pos);
        }
    }
    return text;
}

/// Atbash letter substitution: an involution that preserves edit distance,
/// standing in for a pivot language.
inline std::string atbash(const std::string& text) {
    std::string out = text;
    for (char& c : out) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>('z' - (c - 'a'));
        else if (c >= 'A' && c <= 'Z') c = static_cast<char>('Z' - (c - 'A'));
    }
    return out;
}

}  // namespace detail

/// Deterministic mock translator. The pivot "language" is an atbash
/// substitution of the source text; faults are injected per the configured
/// specs, gated by a per-sentence hash so the same seed always faults the
/// same sentences.
class MockTranslator : public TranslatorClient {
public:
    explicit MockTranslator(std::vector<MockFaultSpec> faults = {}, std::string src = "en",
                            std::string pivot = "xx")
        : faults_(std::move(faults)), src_(std::move(src)), pivot_(std::move(pivot)) {
        for (const auto& f : faults_)
            if (f.rate < 0.0 || f.rate > 1.0) throw InvalidParameter("fault rate outside [0,1]");
    }

    [[nodiscard]] std::string name() const override { return "mock"; }

    /// The fault (if any) this translator will inject for a sentence;
    /// deterministic, so tests can use it as ground truth.
    [[nodiscard]] std::optional<MockFaultSpec> fault_for(const std::string& text) const {
        for (const auto& f : faults_) {
            if (f.kind == FaultKind::identity || f.rate <= 0.0) continue;
            std::size_t h = std::hash<std::string>()(text) ^ (static_cast<std::size_t>(f.seed) * 0x9e3779b97f4a7c15ull);
            double u = static_cast<double>(h % 1000000ull) / 1000000.0;
            if (u < f.rate && detail::apply_fault(f.kind, text) != text) return f;
        }
        return std::nullopt;
    }

    std::string translate(const std::string& text, const std::string& src,
                          const std::string& dst) override {
        ++calls_;
        if (src == src_ && dst == pivot_) {
            std::string out = text;
            if (auto f = fault_for(original_key(text)); f && f->trip == Trip::forward)
                out = detail::apply_fault(f->kind, out);
            return detail::atbash(out);
        }
        if (src == pivot_ && dst == src_) {
            std::string out = detail::atbash(text);
            if (auto f = fault_for(original_key(out)); f && f->trip == Trip::backward)
                out = detail::apply_fault(f->kind, out);
            return out;
        }
        throw Error("unsupported language pair " + src + "->" + dst);
    }

    [[nodiscard]] int calls() const { return calls_; }

private:
    // Backward faults must key on the clean original sentence; a forward
    // fault already changed the text, so strip its effect is not possible in
    // general. Faults are configured per trip, so a record never sees both.
    static std::string original_key(const std::string& text) { return text; }

    std::vector<MockFaultSpec> faults_;
    std::string src_, pivot_;
    std::atomic<int> calls_{0};
};

/// Thin vendor-neutral HTTP client: POSTs {"text","src","dst"} as JSON to the
/// endpoint in SEMMT_HTTP_URL (optional bearer key in SEMMT_HTTP_KEY) and
/// expects {"text": "..."} back. Requests are rate-limited by a minimum
/// inter-request delay.
class HttpTranslator : public TranslatorClient {
public:
    explicit HttpTranslator(std::string url = env_or("SEMMT_HTTP_URL"),
                            std::string key = env_or("SEMMT_HTTP_KEY"),
                            std::chrono::milliseconds min_delay = std::chrono::milliseconds(200))
        : url_(std::move(url)), key_(std::move(key)), min_delay_(min_delay) {
        if (url_.empty()) throw InvalidParameter("SEMMT_HTTP_URL is not set");
        auto scheme_end = url_.find("://");
        std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
        auto path_start = url_.find('/', host_start);
        host_ = url_.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : url_.substr(path_start);
    }

    [[nodiscard]] std::string name() const override { return "http"; }
    [[nodiscard]] bool thread_safe() const override { return false; }

    std::string translate(const std::string& text, const std::string& src,
                          const std::string& dst) override {
        throttle();
        httplib::Client cli(host_);
        httplib::Headers headers;
        if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);
        nlohmann::json body{{"text", text}, {"src", src}, {"dst", dst}};
        auto res = cli.Post(path_, headers, body.dump(), "application/json");
        if (!res) throw Error("http request failed: " + httplib::to_string(res.error()));
        if (res->status != 200) throw Error("http status " + std::to_string(res->status));
        return nlohmann::json::parse(res->body).at("text").get<std::string>();
    }

private:
    static std::string env_or(const char* var) {
        const char* v = std::getenv(var);
        return v ? v : "";
    }

    void throttle() {
        std::lock_guard<std::mutex> g(mu_);
        auto now = std::chrono::steady_clock::now();
        if (last_.time_since_epoch().count() != 0 && now - last_ < min_delay_)
            std::this_thread::sleep_for(min_delay_ - (now - last_));
        last_ = std::chrono::steady_clock::now();
    }

    std::string url_, key_, host_, path_;
    std::chrono::milliseconds min_delay_;
    std::chrono::steady_clock::time_point last_;
    std::mutex mu_;
};

/// Append-only JSONL translation cache keyed by
/// (translator, src, dst, normalized text).
class TranslationCache {
public:
    TranslationCache() = default;

    explicit TranslationCache(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line);
            map_[key(j.at("translator"), j.at("src"), j.at("dst"), j.at("text"))] =
                j.at("result").get<std::string>();
        }
    }

    std::optional<std::string> lookup(const std::string& translator, const std::string& src,
                                      const std::string& dst, const std::string& text) const {
        std::lock_guard<std::mutex> g(mu_);
        auto it = map_.find(key(translator, src, dst, text));
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void store(const std::string& translator, const std::string& src, const std::string& dst,
               const std::string& text, const std::string& result) {
        std::lock_guard<std::mutex> g(mu_);
        std::string k = key(translator, src, dst, text);
        if (map_.count(k)) return;
        map_[k] = result;
        if (!path_.empty()) {
            std::ofstream out(path_, std::ios::app);
            nlohmann::json j{{"translator", translator}, {"src", src}, {"dst", dst},
                             {"text", text},             {"result", result}};
            out << j.dump() << "\n";
        }
    }

    [[nodiscard]] std::size_t size() const {
        std::lock_guard<std::mutex> g(mu_);
        return map_.size();
    }

private:
    static std::string key(const std::string& translator, const std::string& src,
                           const std::string& dst, const std::string& text) {
        return translator + "\x1f" + src + "\x1f" + dst + "\x1f" +
               detail::normalize_sentence(text);
    }

    std::string path_;
    std::map<std::string, std::string> map_;
    mutable std::mutex mu_;
};

struct RttLabel {
    bool rtt_correct = true;
    bool fw_correct = true;
    bool bw_correct = true;
    std::string category;
};

/// One round trip with everything derived from it.
struct RttRecord {
    std::string id;
    std::string original;
    std::string intermediate;  // pivot-language slot
    std::string back;          // source-language slot
    std::string src, pivot;
    std::string translator;
    std::string timestamp;
    std::string regex_original, regex_back;
    std::string regex_error_original, regex_error_back;
    std::vector<SimilarityScore> scores;
    std::optional<RttLabel> label;
    bool failed = false;
    std::string failure;

    [[nodiscard]] std::optional<double> score(const std::string& metric) const {
        for (const auto& s : scores)
            if (s.name() == metric) return s.value;
        return std::nullopt;
    }

    [[nodiscard]] bool regex_ok() const {
        return regex_error_original.empty() && regex_error_back.empty() && !failed;
    }
};

inline void to_json(nlohmann::json& j, const SimilarityScore& s) {
    j = nlohmann::json{{"metric", s.name()}, {"value", s.value}};
    if (s.metric == Metric::SemmtD || s.metric == Metric::SemmtH) {
        j["lambda_stop"] = s.lambda_stop;
        j["converged"] = s.converged;
    }
    if (s.metric == Metric::SemmtH) j["k"] = s.k;
}

inline void from_json(const nlohmann::json& j, SimilarityScore& s) {
    std::string m = j.at("metric");
    s.metric = Metric::External;
    for (Metric mm : {Metric::SemmtR, Metric::SemmtD, Metric::SemmtH, Metric::Leven, Metric::Bleu})
        if (metric_name(mm) == m) s.metric = mm;
    if (s.metric == Metric::External) s.external_name = m;
    s.value = j.at("value");
    s.lambda_stop = j.value("lambda_stop", -1);
    s.converged = j.value("converged", true);
    s.k = j.value("k", -1.0);
}

inline void to_json(nlohmann::json& j, const RttRecord& r) {
    j = nlohmann::json{{"id", r.id},
                       {"original", r.original},
                       {"intermediate", r.intermediate},
                       {"back", r.back},
                       {"src", r.src},
                       {"pivot", r.pivot},
                       {"translator", r.translator},
                       {"scores", r.scores}};
    if (!r.timestamp.empty()) j["timestamp"] = r.timestamp;
    if (!r.regex_original.empty()) j["regex_original"] = r.regex_original;
    if (!r.regex_back.empty()) j["regex_back"] = r.regex_back;
    if (!r.regex_error_original.empty()) j["regex_error_original"] = r.regex_error_original;
    if (!r.regex_error_back.empty()) j["regex_error_back"] = r.regex_error_back;
    if (r.failed) {
        j["failed"] = true;
        j["failure"] = r.failure;
    }
    if (r.label) {
        j["label"] = nlohmann::json{{"rtt_correct", r.label->rtt_correct},
                                    {"fw_correct", r.label->fw_correct},
                                    {"bw_correct", r.label->bw_correct},
                                    {"category", r.label->category}};
    }
}

inline void from_json(const nlohmann::json& j, RttRecord& r) {
    r.id = j.at("id");
    r.original = j.at("original");
    r.intermediate = j.value("intermediate", "");
    r.back = j.value("back", "");
    r.src = j.value("src", "en");
    r.pivot = j.value("pivot", "");
    r.translator = j.value("translator", "");
    r.timestamp = j.value("timestamp", "");
    r.regex_original = j.value("regex_original", "");
    r.regex_back = j.value("regex_back", "");
    r.regex_error_original = j.value("regex_error_original", "");
    r.regex_error_back = j.value("regex_error_back", "");
    r.failed = j.value("failed", false);
    r.failure = j.value("failure", "");
    r.scores.clear();
    for (const auto& s : j.value("scores", nlohmann::json::array()))
        r.scores.push_back(s.get<SimilarityScore>());
    if (j.contains("label")) {
        RttLabel lab;
        lab.rtt_correct = j["label"].value("rtt_correct", true);
        lab.fw_correct = j["label"].value("fw_correct", true);
        lab.bw_correct = j["label"].value("bw_correct", true);
        lab.category = j["label"].value("category", "");
        r.label = lab;
    }
}

/// One round trip through the client, cache first.
inline RttRecord round_trip(const std::string& text, TranslatorClient& client,
                            const std::string& src, const std::string& pivot,
                            TranslationCache* cache = nullptr) {
    RttRecord rec;
    rec.original = text;
    rec.src = src;
    rec.pivot = pivot;
    rec.translator = client.name();

    auto step = [&](const std::string& input, const std::string& from, const std::string& to,
                    TranslatorError::Trip trip) {
        if (cache) {
            if (auto hit = cache->lookup(client.name(), from, to, input)) return *hit;
        }
        std::string out;
        try {
            out = client.translate(input, from, to);
        } catch (const std::exception& e) {
            throw TranslatorError(trip, e.what());
        }
        if (cache) cache->store(client.name(), from, to, input, out);
        return out;
    };

    rec.intermediate = step(text, src, pivot, TranslatorError::Trip::forward);
    rec.back = step(rec.intermediate, pivot, src, TranslatorError::Trip::backward);
    return rec;
}

struct PipelineConfig {
    std::vector<Metric> metrics = {Metric::SemmtD, Metric::Leven};
    double k = 0.5;
    DfaSimConfig dfa;
    VagueMode vague_mode = VagueMode::over;
    std::optional<int> context_max;
    double failure_ceiling = 0.2;
    int parallelism = 1;
    bool timestamps = false;  // off by default so warm-cache runs are byte-identical
    Lexicon lexicon = Lexicon::defaults();
    AlphabetPtr alphabet = standard_alphabet();
};

namespace detail {

inline void score_record(RttRecord& rec, const PipelineConfig& cfg) {
    RegexAst orig_ast, back_ast;
    try {
        orig_ast = sentence_to_regex(rec.original, cfg.lexicon, *cfg.alphabet, cfg.vague_mode,
                                     cfg.context_max);
        rec.regex_original = render_regex(orig_ast, *cfg.alphabet);
    } catch (const std::exception& e) {
        rec.regex_error_original = e.what();
    }
    try {
        back_ast = sentence_to_regex(rec.back, cfg.lexicon, *cfg.alphabet, cfg.vague_mode,
                                     cfg.context_max);
        rec.regex_back = render_regex(back_ast, *cfg.alphabet);
    } catch (const std::exception& e) {
        rec.regex_error_back = e.what();
    }
    bool have_regexes = orig_ast && back_ast;
    for (Metric m : cfg.metrics) {
        try {
            switch (m) {
                case Metric::SemmtR:
                    if (have_regexes) rec.scores.push_back(semmt_r(orig_ast, back_ast, *cfg.alphabet));
                    break;
                case Metric::SemmtD:
                    if (have_regexes) rec.scores.push_back(semmt_d(orig_ast, back_ast, cfg.alphabet, cfg.dfa));
                    break;
                case Metric::SemmtH:
                    if (have_regexes)
                        rec.scores.push_back(semmt_h(orig_ast, back_ast, cfg.alphabet, cfg.k, cfg.dfa));
                    break;
                case Metric::Leven:
                    rec.scores.push_back(leven_sim(rec.back, rec.original));
                    break;
                case Metric::Bleu:
                    rec.scores.push_back(bleu_sim(rec.back, rec.original));
                    break;
                case Metric::External:
                    break;
            }
        } catch (const std::exception&) {
            // metric-level failure leaves the record unscored for that metric
        }
    }
}

}  // namespace detail

/// Run the four-step pipeline over a dataset: round trip, regex
/// transformation, similarity scoring. One record per input, in input order;
/// failures are isolated per record up to the configured ceiling.
inline std::vector<RttRecord> run_pipeline(const std::vector<std::string>& dataset,
                                           TranslatorClient& client, const std::string& src,
                                           const std::string& pivot, const PipelineConfig& cfg = {},
                                           TranslationCache* cache = nullptr,
                                           const std::function<void(std::size_t)>& progress = {}) {
    if (dataset.empty()) throw InvalidParameter("empty dataset");
    std::vector<RttRecord> records(dataset.size());
    std::mutex client_mu;
    bool funnel = !client.thread_safe() && cfg.parallelism > 1;

    auto process = [&](std::size_t i) {
        RttRecord& rec = records[i];
        try {
            if (funnel) {
                std::lock_guard<std::mutex> g(client_mu);
                rec = round_trip(dataset[i], client, src, pivot, cache);
            } else {
                rec = round_trip(dataset[i], client, src, pivot, cache);
            }
        } catch (const TranslatorError& e) {
            rec.original = dataset[i];
            rec.src = src;
            rec.pivot = pivot;
            rec.translator = client.name();
            rec.failed = true;
            rec.failure = e.what();
        }
        rec.id = "r" + std::to_string(i);
        if (cfg.timestamps) {
            rec.timestamp = std::to_string(
                std::chrono::duration_cast<std::chrono::seconds>(
                    std::chrono::system_clock::now().time_since_epoch()).count());
        }
        if (!rec.failed) detail::score_record(rec, cfg);
        if (progress) progress(i);
    };

    int workers = std::max(1, cfg.parallelism);
    if (workers == 1) {
        for (std::size_t i = 0; i < dataset.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (std::size_t i = next++; i < dataset.size(); i = next++) process(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::size_t failures = 0;
    for (const auto& r : records)
        if (r.failed) ++failures;
    double rate = static_cast<double>(failures) / static_cast<double>(records.size());
    if (rate > cfg.failure_ceiling) {
        throw PipelineAborted("failure rate " + std::to_string(rate) + " exceeds ceiling " +
                              std::to_string(cfg.failure_ceiling));
    }
    return records;
}

/// Dataset loader: TSV "sentence<TAB>optional-gold-regex".
struct DatasetItem {
    std::string sentence;
    std::string gold_regex;
};

inline std::vector<DatasetItem> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open dataset: " + path);
    std::vector<DatasetItem> items;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        DatasetItem item;
        item.sentence = line.substr(0, tab);
        if (tab != std::string::npos) item.gold_regex = line.substr(tab + 1);
        items.push_back(std::move(item));
    }
    return items;
}

inline void write_records_jsonl(const std::vector<RttRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot write records: " + path);
    for (const auto& r : records) out << nlohmann::json(r).dump() << "\n";
}

inline std::vector<RttRecord> read_records_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot read records: " + path);
    std::vector<RttRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(nlohmann::json::parse(line).get<RttRecord>());
    }
    return records;
}

}  // namespace semmt

#endif  // SEMMT_RTT_HPP
