// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sbr/corpus.hpp"
#include "sbr/util.hpp"

namespace sbr {

/// Support-function variants applied to the SBR-side keyword frequency.
/// `jalali_sq` squares the frequency, `graham_two` doubles it; both push
/// keyword scores up so the corresponding pruners fire more often.
enum class SupportFunction { plain, jalali_sq, graham_two };

inline const char* support_name(SupportFunction sf) {
    switch (sf) {
        case SupportFunction::plain: return "plain";
        case SupportFunction::jalali_sq: return "jalali_sq";
        case SupportFunction::graham_two: return "graham_two";
    }
    return "?";
}

/// Security-relevance score per normalized token, in [0.01, 0.99].
using TermScoreTable = std::map<std::string, double>;

namespace detail {

inline const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> words = {
        "about", "above", "after", "again", "against", "all", "am", "an", "and",
        "any", "are", "as", "at", "be", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "cannot", "could", "did",
        "do", "does", "doing", "down", "during", "each", "few", "for", "from",
        "further", "had", "has", "have", "having", "he", "her", "here", "hers",
        "herself", "him", "himself", "his", "how", "if", "in", "into", "is",
        "it", "its", "itself", "me", "more", "most", "my", "myself", "no",
        "nor", "not", "of", "off", "on", "once", "only", "or", "other", "ought",
        "our", "ours", "ourselves", "out", "over", "own", "same", "she",
        "should", "so", "some", "such", "than", "that", "the", "their",
        "theirs", "them", "themselves", "then", "there", "these", "they",
        "this", "those", "through", "to", "too", "under", "until", "up",
        "very", "was", "we", "were", "what", "when", "where", "which", "while",
        "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
        "yourself", "yourselves",
    };
    return words;
}

}  // namespace detail

/// Lowercase alphanumeric tokens, length >= 2, English stop-words removed.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&]() {
        if (cur.size() >= 2 && !detail::stopwords().count(cur)) tokens.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) cur.push_back(static_cast<char>(std::tolower(c)));
        else flush();
    }
    flush();
    return tokens;
}

namespace detail {

inline std::set<std::string> token_set(const std::string& text) {
    auto toks = tokenize(text);
    return {toks.begin(), toks.end()};
}

/// Per-class document frequencies: number of reports containing each term.
struct ClassDocFreq {
    std::unordered_map<std::string, std::size_t> sbr, nsbr;
    std::size_t n_sbr = 0, n_nsbr = 0;
};

inline double combine_score(double tf_sbr, std::size_t n_sbr, double tf_nsbr,
                            std::size_t n_nsbr, SupportFunction sf) {
    double boosted = tf_sbr;
    if (sf == SupportFunction::jalali_sq) boosted = tf_sbr * tf_sbr;
    else if (sf == SupportFunction::graham_two) boosted = 2.0 * tf_sbr;
    const double s = std::min(1.0, boosted / static_cast<double>(n_sbr));
    const double n = std::min(1.0, tf_nsbr / static_cast<double>(n_nsbr));
    double score = (s + n) > 0 ? s / (s + n) : 0.0;
    return std::clamp(score, 0.01, 0.99);
}

inline TermScoreTable score_from_docfreq(const ClassDocFreq& df, SupportFunction sf) {
    if (df.n_sbr == 0) fail("cannot score terms: no SBRs in training data");
    if (df.n_nsbr == 0) fail("cannot score terms: no NSBRs in training data");
    TermScoreTable table;
    std::set<std::string> terms;
    for (const auto& [t, _] : df.sbr) terms.insert(t);
    for (const auto& [t, _] : df.nsbr) terms.insert(t);
    for (const auto& t : terms) {
        const auto it_s = df.sbr.find(t);
        const auto it_n = df.nsbr.find(t);
        const double tf_s = it_s == df.sbr.end() ? 0.0 : static_cast<double>(it_s->second);
        const double tf_n = it_n == df.nsbr.end() ? 0.0 : static_cast<double>(it_n->second);
        table[t] = combine_score(tf_s, df.n_sbr, tf_n, df.n_nsbr, sf);
    }
    return table;
}

}  // namespace detail

/// Score every term of a training corpus. A term counts at most once per
/// report (document frequency).
inline TermScoreTable score_terms(const Corpus& train, SupportFunction sf) {
    detail::ClassDocFreq df;
    df.n_sbr = train.count(Label::sbr);
    df.n_nsbr = train.count(Label::nsbr);
    for (const auto& r : train.reports) {
        auto& bucket = r.label == Label::sbr ? df.sbr : df.nsbr;
        for (const auto& t : detail::token_set(r.text)) ++bucket[t];
    }
    return detail::score_from_docfreq(df, sf);
}

/// Same scoring over a prebuilt matrix: a feature counts for a row when its
/// cell is nonzero.
inline TermScoreTable score_terms(const Dataset& train, SupportFunction sf) {
    detail::ClassDocFreq df;
    df.n_sbr = train.count(Label::sbr);
    df.n_nsbr = train.count(Label::nsbr);
    for (const auto& row : train.rows) {
        auto& bucket = row.label == Label::sbr ? df.sbr : df.nsbr;
        for (std::size_t j = 0; j < row.values.size(); ++j)
            if (row.values[j] > 0) ++bucket[train.feature_names[j]];
    }
    return detail::score_from_docfreq(df, sf);
}

/// The n highest-scoring terms, ties broken lexicographically.
inline std::vector<std::string> top_keywords(const TermScoreTable& scores, std::size_t n) {
    if (n > scores.size()) fail("requested more keywords than scored terms");
    std::vector<std::pair<std::string, double>> items(scores.begin(), scores.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(items[i].first);
    return out;
}

/// Term-frequency matrix over a fixed keyword list; cells are raw counts.
inline Dataset build_features(const Corpus& corpus, const std::vector<std::string>& keywords) {
    if (keywords.empty()) fail("keyword list is empty");
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < keywords.size(); ++i) pos[keywords[i]] = i;
    Dataset d;
    d.feature_names = keywords;
    d.provenance.project = corpus.project;
    d.rows.reserve(corpus.reports.size());
    for (const auto& r : corpus.reports) {
        DataRow row;
        row.id = r.id;
        row.label = r.label;
        row.values.assign(keywords.size(), 0.0);
        for (const auto& t : tokenize(r.text)) {
            auto it = pos.find(t);
            if (it != pos.end()) row.values[it->second] += 1.0;
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

/// Dump a score table as CSV (term,score) for audit.
inline void save_scores(const TermScoreTable& scores, const std::string& path) {
    std::string out = "term,score\n";
    for (const auto& [term, score] : scores)
        out += csv::escape(term) + "," + fmt_g6(score) + "\n";
    write_file(path, out);
}

}  // namespace sbr
