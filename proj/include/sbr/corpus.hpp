// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbr/rng.hpp"
#include "sbr/util.hpp"

namespace sbr {

enum class Label { nsbr = 0, sbr = 1 };

inline const char* label_name(Label l) { return l == Label::sbr ? "SBR" : "NSBR"; }

struct BugReport {
    std::string id;
    std::string text;   // concatenated summary + description
    Label label = Label::nsbr;
};

struct Corpus {
    std::string project;
    std::vector<BugReport> reports;

    std::size_t count(Label l) const {
        std::size_t n = 0;
        for (const auto& r : reports) n += (r.label == l);
        return n;
    }
};

enum class DataRole { train, test };

struct Provenance {
    std::string project;
    std::string filter = "train";  // pruning treatment applied, "train" = none
    DataRole role = DataRole::train;
};

struct DataRow {
    std::string id;
    std::vector<double> values;
    Label label = Label::nsbr;
};

/// Labeled feature matrix; the universal currency of the pipeline.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<DataRow> rows;
    Provenance provenance;

    std::size_t count(Label l) const {
        std::size_t n = 0;
        for (const auto& r : rows) n += (r.label == l);
        return n;
    }
    bool empty() const { return rows.empty(); }
    std::size_t size() const { return rows.size(); }
    std::size_t dim() const { return feature_names.size(); }
};

struct FoldAssignment {
    std::vector<std::vector<std::size_t>> bins;  // disjoint row-index groups
    std::uint64_t seed = 0;
};

enum class ReportFormat { csv, jsonlines };

namespace detail {

inline Label label_from_number(double v, const std::string& where) {
    if (v == 0.0) return Label::nsbr;
    if (v == 1.0) return Label::sbr;
    fail("label must be 0 or 1 at " + where);
}

inline std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

inline void append_report(Corpus& corpus, std::set<std::string>& seen, BugReport r,
                          const std::string& where) {
    if (r.id.empty()) fail("empty id at " + where);
    if (!seen.insert(r.id).second) fail("duplicate id '" + r.id + "' at " + where);
    corpus.reports.push_back(std::move(r));
}

}  // namespace detail

/// Read raw bug reports (id, summary/description text, binary security label).
inline Corpus load_reports(const std::string& path, ReportFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    Corpus corpus;
    std::set<std::string> seen;

    if (format == ReportFormat::jsonlines) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string where = path + ":" + std::to_string(lineno);
            if (trim(line).empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) fail("malformed JSON record at " + where);

            BugReport r;
            if (!j.contains("id")) fail("id absent at " + where);
            r.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();

            const bool has_security = j.contains("security");
            const bool has_label = j.contains("label");
            if (has_security && has_label) fail("ambiguous label (both 'security' and 'label') at " + where);
            if (!has_security && !has_label) fail("label absent at " + where);
            const auto& lv = has_security ? j["security"] : j["label"];
            double num;
            if (lv.is_number()) num = lv.get<double>();
            else if (lv.is_boolean()) num = lv.get<bool>() ? 1.0 : 0.0;
            else if (lv.is_string()) {
                auto p = detail::parse_number(lv.get<std::string>());
                if (!p) fail("non-numeric label at " + where);
                num = *p;
            } else fail("non-numeric label at " + where);
            r.label = detail::label_from_number(num, where);

            std::string text;
            if (j.contains("text") && j["text"].is_string()) {
                text = j["text"].get<std::string>();
            } else {
                if (j.contains("summary") && j["summary"].is_string())
                    text = j["summary"].get<std::string>();
                if (j.contains("description") && j["description"].is_string()) {
                    if (!text.empty()) text += ' ';
                    text += j["description"].get<std::string>();
                }
                if (!j.contains("summary") && !j.contains("description"))
                    fail("text absent at " + where);
            }
            r.text = std::move(text);
            detail::append_report(corpus, seen, std::move(r), where);
        }
        return corpus;
    }

    // CSV: header names the columns; id + label (or security) + text parts.
    std::vector<std::string> header;
    if (!csv::read_record(in, header)) return corpus;  // empty file -> empty corpus
    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (lower(trim(header[i])) == name) return static_cast<int>(i);
        return -1;
    };
    const int id_col = col("id");
    const int sec_col = col("security");
    const int lab_col = col("label");
    const int text_col = col("text");
    const int sum_col = col("summary");
    const int desc_col = col("description");
    if (id_col < 0) fail("id column absent in " + path);
    if (sec_col >= 0 && lab_col >= 0) fail("ambiguous label columns in " + path);
    const int the_label = sec_col >= 0 ? sec_col : lab_col;
    if (the_label < 0) fail("label absent in " + path);
    if (text_col < 0 && sum_col < 0 && desc_col < 0) fail("text absent in " + path);

    std::vector<std::string> rec;
    std::size_t lineno = 1;
    while (csv::read_record(in, rec)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        if (rec.size() != header.size()) fail("field count mismatch at " + where);
        BugReport r;
        r.id = trim(rec[id_col]);
        auto num = detail::parse_number(trim(rec[the_label]));
        if (!num) fail("non-numeric label at " + where);
        r.label = detail::label_from_number(*num, where);
        if (text_col >= 0) r.text = rec[text_col];
        else {
            if (sum_col >= 0) r.text = rec[sum_col];
            if (desc_col >= 0) {
                if (!r.text.empty()) r.text += ' ';
                r.text += rec[desc_col];
            }
        }
        detail::append_report(corpus, seen, std::move(r), where);
    }
    return corpus;
}

/// Read a prebuilt term-frequency matrix. Canonical layout: header row,
/// optional leading `id` column, numeric feature columns, trailing binary
/// `label` column.
inline Dataset load_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    Dataset d;
    std::vector<std::string> header;
    if (!csv::read_record(in, header)) fail("empty matrix file: " + path);
    if (header.size() < 2) fail("matrix needs at least one feature and a label: " + path);
    const bool has_id = lower(trim(header.front())) == "id";
    const std::size_t first_feature = has_id ? 1 : 0;
    const std::size_t label_col = header.size() - 1;
    if (first_feature >= label_col) fail("matrix has no feature columns: " + path);
    for (std::size_t i = first_feature; i < label_col; ++i)
        d.feature_names.push_back(trim(header[i]));

    std::set<std::string> seen;
    std::vector<std::string> rec;
    std::size_t lineno = 1;
    while (csv::read_record(in, rec)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        if (rec.size() != header.size()) fail("field count mismatch at " + where);
        DataRow row;
        row.id = has_id ? trim(rec[0]) : "r" + std::to_string(d.rows.size());
        if (row.id.empty()) fail("empty id at " + where);
        if (!seen.insert(row.id).second) fail("duplicate id '" + row.id + "' at " + where);
        row.values.reserve(d.feature_names.size());
        for (std::size_t i = first_feature; i < label_col; ++i) {
            auto v = detail::parse_number(trim(rec[i]));
            if (!v) fail("non-numeric feature cell at " + where + " column " + std::to_string(i + 1));
            if (*v < 0) fail("negative feature cell at " + where + " column " + std::to_string(i + 1));
            row.values.push_back(*v);
        }
        auto lab = detail::parse_number(trim(rec[label_col]));
        if (!lab) fail("non-numeric label at " + where);
        row.label = detail::label_from_number(*lab, where);
        d.rows.push_back(std::move(row));
    }
    return d;
}

/// Canonical CSV writer: id, features..., label; %.6g numeric formatting.
inline void save_matrix(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write file: " + path);
    std::vector<std::string> header;
    header.reserve(d.feature_names.size() + 2);
    header.emplace_back("id");
    for (const auto& f : d.feature_names) header.push_back(f);
    header.emplace_back("label");
    out << csv::join(header) << '\n';
    std::vector<std::string> rec;
    for (const auto& row : d.rows) {
        rec.clear();
        rec.push_back(row.id);
        for (double v : row.values) rec.push_back(fmt_g6(v));
        rec.push_back(row.label == Label::sbr ? "1" : "0");
        out << csv::join(rec) << '\n';
    }
}

/// Stratified partition into B bins: per-class proportional to within one
/// instance, overall bin sizes balanced to within one, deterministic per seed.
inline FoldAssignment split_folds(const Dataset& d, std::size_t bins, std::uint64_t seed) {
    if (bins == 0) fail("bin count must be positive");
    if (bins > d.rows.size()) fail("bin count exceeds row count");
    std::vector<std::size_t> sbr_idx, nsbr_idx;
    for (std::size_t i = 0; i < d.rows.size(); ++i)
        (d.rows[i].label == Label::sbr ? sbr_idx : nsbr_idx).push_back(i);
    if (sbr_idx.empty() || nsbr_idx.empty())
        fail("cannot stratify: a class has zero instances");

    Rng rng(hash_mix(seed, "split_folds"));
    rng.shuffle(sbr_idx);
    rng.shuffle(nsbr_idx);

    FoldAssignment fa;
    fa.seed = seed;
    fa.bins.assign(bins, {});
    // Deal minority first, then majority, continuing the round-robin cursor
    // so per-class and overall sizes both stay within +-1.
    std::size_t cursor = 0;
    for (const auto* group : {&sbr_idx, &nsbr_idx}) {
        for (std::size_t idx : *group) {
            fa.bins[cursor % bins].push_back(idx);
            ++cursor;
        }
    }
    for (auto& b : fa.bins) std::sort(b.begin(), b.end());
    return fa;
}

/// Subset of d given row indices; feature names and provenance carried over.
inline Dataset gather(const Dataset& d, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.feature_names = d.feature_names;
    out.provenance = d.provenance;
    out.rows.reserve(indices.size());
    for (std::size_t i : indices) out.rows.push_back(d.rows[i]);
    return out;
}

/// Training portion for one held-out bin (all rows outside bins[hold]).
inline Dataset fold_train(const Dataset& d, const FoldAssignment& fa, std::size_t hold) {
    std::vector<char> held(d.rows.size(), 0);
    for (std::size_t i : fa.bins.at(hold)) held[i] = 1;
    std::vector<std::size_t> keep;
    keep.reserve(d.rows.size() - fa.bins[hold].size());
    for (std::size_t i = 0; i < d.rows.size(); ++i)
        if (!held[i]) keep.push_back(i);
    return gather(d, keep);
}

inline Dataset fold_test(const Dataset& d, const FoldAssignment& fa, std::size_t hold) {
    return gather(d, fa.bins.at(hold));
}

}  // namespace sbr
