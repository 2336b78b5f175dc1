#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <semmt/rtt.hpp>

using namespace semmt;

namespace {
const std::vector<std::string> kSentences = {
    "A string that contains only 3 or more uppercase letters.",
    "A string that contains only at most 3 uppercase letters.",
    "The U.S. report contains only that promise.",
    "A string that contains only at least 5 digits.",
    "A string that contains only no more than 4 vowels.",
};

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) { std::remove(path.c_str()); }
    ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("identity mock round-trips every sentence unchanged") {
    MockTranslator client;
    for (const auto& s : kSentences) {
        RttRecord rec = round_trip(s, client, "en", "xx");
        CHECK(rec.back == s);
        CHECK(rec.intermediate != s);  // pivot slot holds the pivot text
        CHECK(rec.original == s);
    }
}

TEST_CASE("quantifier_swap fault flips 'at least' to 'at most'") {
    MockTranslator client({{FaultKind::quantifier_swap, 1.0, 3, Trip::forward}});
    RttRecord rec = round_trip("A string that contains only at least 5 digits.", client, "en", "xx");
    CHECK(rec.back == "A string that contains only at most 5 digits.");
}

TEST_CASE("unsupported language pair raises a forward-trip error") {
    MockTranslator client;
    try {
        round_trip("hello", client, "en", "de");
        FAIL("expected TranslatorError");
    } catch (const TranslatorError& e) {
        CHECK(e.trip() == TranslatorError::Trip::forward);
    }
}

TEST_CASE("mock fault decisions are per-sentence deterministic under a seed") {
    MockTranslator a({{FaultKind::quantifier_swap, 0.5, 11, Trip::forward}});
    MockTranslator b({{FaultKind::quantifier_swap, 0.5, 11, Trip::forward}});
    for (const auto& s : kSentences) {
        CHECK(round_trip(s, a, "en", "xx").back == round_trip(s, b, "en", "xx").back);
        CHECK(a.fault_for(s).has_value() == b.fault_for(s).has_value());
    }
    // a different seed eventually differs somewhere on a larger corpus
    MockTranslator c({{FaultKind::quantifier_swap, 0.5, 12, Trip::forward}});
    int diff = 0;
    for (int i = 0; i < 50; ++i) {
        std::string s = "A string that contains only at least " + std::to_string(i) + " digits.";
        if (a.fault_for(s).has_value() != c.fault_for(s).has_value()) ++diff;
    }
    CHECK(diff > 0);
}

TEST_CASE("fault rate outside [0,1] is rejected") {
    CHECK_THROWS_AS(MockTranslator({{FaultKind::negation_drop, 1.5, 0, Trip::forward}}),
                    InvalidParameter);
}

TEST_CASE("pipeline: identity run produces one scored record per input, in order") {
    MockTranslator client;
    PipelineConfig cfg;
    auto records = run_pipeline(kSentences, client, "en", "xx", cfg);
    REQUIRE(records.size() == kSentences.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].original == kSentences[i]);
        CHECK(records[i].back == kSentences[i]);
        CHECK_FALSE(records[i].failed);
        CHECK(records[i].score("semmt-d") == 1.0);
        CHECK(records[i].score("leven") == 1.0);
    }
}

TEST_CASE("pipeline: cache-warm rerun issues zero translator calls") {
    TempFile tmp("rtt_cache_test.jsonl");
    {
        MockTranslator client;
        TranslationCache cache(tmp.path);
        run_pipeline(kSentences, client, "en", "xx", {}, &cache);
        CHECK(client.calls() == static_cast<int>(2 * kSentences.size()));
    }
    MockTranslator client2;
    TranslationCache cache2(tmp.path);  // reloaded from disk
    auto records = run_pipeline(kSentences, client2, "en", "xx", {}, &cache2);
    CHECK(client2.calls() == 0);
    CHECK(records.size() == kSentences.size());
}

TEST_CASE("pipeline: warm-cache output is byte-identical across runs") {
    TempFile cache_file("rtt_cache_bytes.jsonl");
    TempFile out1("rtt_out1.jsonl"), out2("rtt_out2.jsonl");
    MockTranslator client;
    TranslationCache cache(cache_file.path);
    write_records_jsonl(run_pipeline(kSentences, client, "en", "xx", {}, &cache), out1.path);
    write_records_jsonl(run_pipeline(kSentences, client, "en", "xx", {}, &cache), out2.path);
    std::ifstream f1(out1.path), f2(out2.path);
    std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    CHECK(!b1.empty());
}

TEST_CASE("pipeline: per-record failure isolation below the ceiling") {
    // A client that fails on exactly one sentence.
    struct Flaky : TranslatorClient {
        [[nodiscard]] std::string name() const override { return "flaky"; }
        std::string translate(const std::string& text, const std::string& src,
                              const std::string& dst) override {
            if (text.find("U.S.") != std::string::npos) throw Error("boom");
            return inner.translate(text, src, dst);
        }
        MockTranslator inner;
    } client;
    auto records = run_pipeline(kSentences, client, "en", "xx");
    REQUIRE(records.size() == kSentences.size());
    int failed = 0;
    for (const auto& r : records)
        if (r.failed) {
            ++failed;
            CHECK(r.failure.find("forward") != std::string::npos);
        }
    CHECK(failed == 1);
}

TEST_CASE("pipeline: aborts above the failure ceiling") {
    struct Broken : TranslatorClient {
        [[nodiscard]] std::string name() const override { return "broken"; }
        std::string translate(const std::string&, const std::string&, const std::string&) override {
            throw Error("down");
        }
    } client;
    CHECK_THROWS_AS(run_pipeline(kSentences, client, "en", "xx"), PipelineAborted);
    CHECK_THROWS_AS(run_pipeline({}, client, "en", "xx"), InvalidParameter);
}

TEST_CASE("pipeline: parallel run equals serial run") {
    MockTranslator serial_client({{FaultKind::quantifier_swap, 0.5, 5, Trip::forward}});
    MockTranslator parallel_client({{FaultKind::quantifier_swap, 0.5, 5, Trip::forward}});
    PipelineConfig serial_cfg, parallel_cfg;
    parallel_cfg.parallelism = 4;
    auto a = run_pipeline(kSentences, serial_client, "en", "xx", serial_cfg);
    auto b = run_pipeline(kSentences, parallel_client, "en", "xx", parallel_cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].back == b[i].back);
        CHECK(nlohmann::json(a[i]) == nlohmann::json(b[i]));
    }
}

TEST_CASE("records round-trip through JSONL") {
    TempFile tmp("rtt_records_test.jsonl");
    MockTranslator client({{FaultKind::negation_drop, 1.0, 9, Trip::backward}});
    auto records =
        run_pipeline({"The U.S. report does not contain only that promise."}, client, "en", "xx");
    records[0].label = RttLabel{false, true, false, "negation lost"};
    write_records_jsonl(records, tmp.path);
    auto loaded = read_records_jsonl(tmp.path);
    REQUIRE(loaded.size() == 1);
    CHECK(nlohmann::json(loaded[0]) == nlohmann::json(records[0]));
    CHECK(loaded[0].label.has_value());
    CHECK(loaded[0].label->category == "negation lost");
    CHECK_FALSE(loaded[0].label->bw_correct);
}

TEST_CASE("fault detectability: swapped quantifiers give near-disjoint languages") {
    MockTranslator client({{FaultKind::quantifier_swap, 1.0, 2, Trip::forward}});
    PipelineConfig cfg;
    cfg.metrics = {Metric::SemmtD};
    std::vector<std::string> quantified = {
        "A string that contains only at least 5 digits.",
        "A string that contains only 3 or more uppercase letters.",
        "A string that contains only at least 7 lowercase letters.",
    };
    auto records = run_pipeline(quantified, client, "en", "xx", cfg);
    for (const auto& r : records) {
        REQUIRE(r.regex_ok());
        REQUIRE(client.fault_for(r.original).has_value());
        CHECK(*r.score("semmt-d") < 0.5);
    }
}

TEST_CASE("dataset loader reads optional gold regexes") {
    TempFile tmp("rtt_dataset_test.tsv");
    {
        std::ofstream out(tmp.path);
        out << "A string that contains only 3 or more uppercase letters.\t[A-Z]{3,}\n";
        out << "A plain sentence without gold\n";
    }
    auto items = load_dataset(tmp.path);
    REQUIRE(items.size() == 2);
    CHECK(items[0].gold_regex == "[A-Z]{3,}");
    CHECK(items[1].gold_regex.empty());
}
