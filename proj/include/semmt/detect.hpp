#ifndef SEMMT_DETECT_HPP
#define SEMMT_DETECT_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <semmt/errors.hpp>
#include <semmt/rtt.hpp>

namespace semmt {

/// A score compared against a threshold. Similarity metrics flag low values
/// (score <= threshold); distance metrics flag high values (score >= threshold).
struct Verdict {
    std::string id;
    double score = 0.0;
    bool distance = false;
    bool flagged = false;
};

inline bool flags_at(double score, double threshold, bool distance) {
    return distance ? score >= threshold : score <= threshold;
}

struct ConfusionCounts {
    long tp = 0, fp = 0, tn = 0, fn = 0;

    [[nodiscard]] long total() const { return tp + fp + tn + fn; }
    [[nodiscard]] double precision() const {
        return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    [[nodiscard]] double recall() const {
        return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    [[nodiscard]] double accuracy() const {
        return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
    }
    [[nodiscard]] double f_score() const {
        double p = precision(), r = recall();
        return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
};

/// Count the confusion matrix of verdicts against ground truth
/// (truth[id] == true means the record is a real mistranslation).
inline ConfusionCounts evaluate(const std::vector<Verdict>& verdicts,
                                const std::map<std::string, bool>& truth) {
    ConfusionCounts c;
    for (const auto& v : verdicts) {
        auto it = truth.find(v.id);
        if (it == truth.end()) throw MissingLabels("no label for record " + v.id);
        bool buggy = it->second;
        if (v.flagged && buggy) ++c.tp;
        else if (v.flagged && !buggy) ++c.fp;
        else if (!v.flagged && buggy) ++c.fn;
        else ++c.tn;
    }
    return c;
}

inline std::vector<Verdict> apply_threshold(std::vector<Verdict> verdicts, double threshold) {
    for (auto& v : verdicts) v.flagged = flags_at(v.score, threshold, v.distance);
    return verdicts;
}

struct SweepPoint {
    double threshold = 0.0;
    ConfusionCounts counts;
    double f = 0.0;
};

struct SweepResult {
    double best_threshold = 0.0;
    ConfusionCounts best_counts;
    std::vector<SweepPoint> curve;

    [[nodiscard]] double best_f() const { return best_counts.f_score(); }
};

/// Sweep thresholds over [0,1] on a fixed grid and keep the best F-score;
/// ties resolve to the smallest threshold.
inline SweepResult sweep_thresholds(const std::vector<Verdict>& verdicts,
                                    const std::map<std::string, bool>& truth, double step = 0.01) {
    if (verdicts.empty()) throw MissingScores("no scores to sweep");
    if (step <= 0.0 || step > 1.0) throw InvalidParameter("sweep step outside (0,1]");
    SweepResult res;
    bool first = true;
    int n = static_cast<int>(std::llround(1.0 / step));
    for (int i = 0; i <= n; ++i) {
        double t = std::min(1.0, i * step);
        ConfusionCounts c = evaluate(apply_threshold(verdicts, t), truth);
        res.curve.push_back({t, c, c.f_score()});
        if (first || c.f_score() > res.best_counts.f_score()) {
            res.best_threshold = t;
            res.best_counts = c;
            first = false;
        }
    }
    return res;
}

/// Union-combine two verdict sets over the same records: flagged when either
/// flags. Scores are kept from the first set.
inline std::vector<Verdict> combine_union(const std::vector<Verdict>& a,
                                          const std::vector<Verdict>& b) {
    std::map<std::string, bool> other;
    for (const auto& v : b) other[v.id] = v.flagged;
    if (other.size() != a.size()) throw UniverseMismatch("verdict sets cover different records");
    std::vector<Verdict> out = a;
    for (auto& v : out) {
        auto it = other.find(v.id);
        if (it == other.end()) throw UniverseMismatch("record " + v.id + " missing from second set");
        v.flagged = v.flagged || it->second;
    }
    return out;
}

/// Make verdicts (unflagged) for one metric from pipeline records; records
/// without that score are skipped.
inline std::vector<Verdict> verdicts_for_metric(const std::vector<RttRecord>& records,
                                                const std::string& metric) {
    std::vector<Verdict> out;
    for (const auto& r : records) {
        if (auto s = r.score(metric)) out.push_back({r.id, *s, false, false});
    }
    if (out.empty()) throw MissingScores("no records carry metric " + metric);
    return out;
}

// ---------------------------------------------------------------------------
// Faulty-trip localization.
// ---------------------------------------------------------------------------

/// Reference round trip for one sentence, produced by a trusted translator.
struct ReferenceTranslation {
    std::string intermediate;
    std::string back;
};

/// Per-trip similarities of one record against its reference translation.
struct TripSims {
    double sim_fw = 0.0;
    double sim_bw = 0.0;
};

inline TripSims trip_sims(const RttRecord& rec,
                          const std::map<std::string, ReferenceTranslation>& refs) {
    auto it = refs.find(rec.original);
    if (it == refs.end())
        throw MissingReferenceTranslation("no reference translation for: " + rec.original);
    TripSims s;
    s.sim_fw = leven_sim(rec.intermediate, it->second.intermediate).value;
    s.sim_bw = leven_sim(rec.back, it->second.back).value;
    return s;
}

/// Average per-trip similarity of known-correct round trips; the baseline
/// that a suspect record's trips are measured against.
struct TripCalibration {
    double ave_fw = 1.0;
    double ave_bw = 1.0;
};

inline TripCalibration calibrate_trip_stats(const std::vector<RttRecord>& correct_records,
                                            const std::map<std::string, ReferenceTranslation>& refs) {
    if (correct_records.empty()) throw NoCorrectRecords();
    double fw = 0.0, bw = 0.0;
    for (const auto& r : correct_records) {
        TripSims s = trip_sims(r, refs);
        fw += s.sim_fw;
        bw += s.sim_bw;
    }
    auto n = static_cast<double>(correct_records.size());
    return {fw / n, bw / n};
}

/// Localize which trip of a flagged round trip is at fault: the trip whose
/// similarity fell furthest below its calibrated average. Ties go to the
/// forward trip.
inline Trip localize_trip(const TripSims& sims, const TripCalibration& calib) {
    double d_fw = calib.ave_fw - sims.sim_fw;
    double d_bw = calib.ave_bw - sims.sim_bw;
    return d_fw >= d_bw ? Trip::forward : Trip::backward;
}

// ---------------------------------------------------------------------------
// External metric ingestion.
// ---------------------------------------------------------------------------

struct ExternalScore {
    std::string id;
    std::string metric;
    double value = 0.0;
    bool distance = false;
};

/// Read "id<TAB>metric<TAB>value<TAB>similarity|distance" lines. Values must
/// lie in [0,1] so they share the sweep grid with internal metrics.
inline std::vector<ExternalScore> ingest_external_scores(std::istream& in) {
    std::vector<ExternalScore> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        ExternalScore e;
        std::string value, type;
        if (!std::getline(ss, e.id, '\t') || !std::getline(ss, e.metric, '\t') ||
            !std::getline(ss, value, '\t') || !std::getline(ss, type))
            throw InvalidParameter("malformed external score line " + std::to_string(lineno));
        try {
            e.value = std::stod(value);
        } catch (const std::exception&) {
            throw InvalidParameter("bad score value on line " + std::to_string(lineno));
        }
        if (!(e.value >= 0.0 && e.value <= 1.0))
            throw ValueOutOfRange("score outside [0,1] on line " + std::to_string(lineno));
        if (type == "distance") e.distance = true;
        else if (type != "similarity")
            throw InvalidParameter("score type must be similarity or distance, line " +
                                   std::to_string(lineno));
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<ExternalScore> ingest_external_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open external scores: " + path);
    return ingest_external_scores(in);
}

/// Verdicts for one external metric; ids must match the record set exactly.
inline std::vector<Verdict> verdicts_for_external(const std::vector<ExternalScore>& scores,
                                                  const std::string& metric,
                                                  const std::vector<RttRecord>& records) {
    std::map<std::string, const RttRecord*> by_id;
    for (const auto& r : records) by_id[r.id] = &r;
    std::vector<Verdict> out;
    for (const auto& e : scores) {
        if (e.metric != metric) continue;
        if (!by_id.count(e.id)) throw UnknownRecordId("external score for unknown record " + e.id);
        out.push_back({e.id, e.value, e.distance, false});
    }
    if (out.empty()) throw MissingScores("no external scores for metric " + metric);
    return out;
}

}  // namespace semmt

#endif  // SEMMT_DETECT_HPP
