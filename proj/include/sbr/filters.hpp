// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "sbr/corpus.hpp"
#include "sbr/textmine.hpp"

namespace sbr {

/// The eight pruning treatments: identity, three FARSEC variants, CLNI,
/// and CLNI composed onto each FARSEC variant.
enum class FilterKind {
    train,
    farsec,
    farsecsq,
    farsectwo,
    clni,
    clnifarsec,
    clnifarsecsq,
    clnifarsectwo,
};

inline const std::vector<FilterKind>& all_filters() {
    static const std::vector<FilterKind> kinds = {
        FilterKind::train,        FilterKind::farsecsq,    FilterKind::farsectwo,
        FilterKind::farsec,       FilterKind::clni,        FilterKind::clnifarsecsq,
        FilterKind::clnifarsectwo, FilterKind::clnifarsec,
    };
    return kinds;
}

inline const char* filter_name(FilterKind k) {
    switch (k) {
        case FilterKind::train: return "train";
        case FilterKind::farsec: return "farsec";
        case FilterKind::farsecsq: return "farsecsq";
        case FilterKind::farsectwo: return "farsectwo";
        case FilterKind::clni: return "clni";
        case FilterKind::clnifarsec: return "clnifarsec";
        case FilterKind::clnifarsecsq: return "clnifarsecsq";
        case FilterKind::clnifarsectwo: return "clnifarsectwo";
    }
    return "?";
}

inline FilterKind filter_from_name(const std::string& name) {
    for (FilterKind k : all_filters())
        if (name == filter_name(k)) return k;
    fail("unknown filter: " + name);
}

inline bool filter_uses_clni(FilterKind k) {
    return k == FilterKind::clni || k == FilterKind::clnifarsec ||
           k == FilterKind::clnifarsecsq || k == FilterKind::clnifarsectwo;
}

/// Support function feeding the FARSEC stage of a composite filter, if any.
inline std::optional<SupportFunction> filter_support(FilterKind k) {
    switch (k) {
        case FilterKind::farsec:
        case FilterKind::clnifarsec: return SupportFunction::plain;
        case FilterKind::farsecsq:
        case FilterKind::clnifarsecsq: return SupportFunction::jalali_sq;
        case FilterKind::farsectwo:
        case FilterKind::clnifarsectwo: return SupportFunction::graham_two;
        default: return std::nullopt;
    }
}

struct ClniParams {
    std::size_t neighbor_count = 5;   // N nearest instances examined
    double noise_threshold = 0.8;     // fraction of differing neighbors
    double stop_similarity = 0.99;    // Jaccard similarity of noise sets
    std::size_t max_iterations = 10;
};

struct FilterOptions {
    double threshold = 0.75;  // report-score pruning cutoff
    std::size_t graham_top_k = 15;  // most-extreme present keywords combined
    ClniParams clni;
};

/// Graham combination over the present keywords' scores:
/// P = prod(s) / (prod(s) + prod(1-s)), restricted to the top_k scores
/// farthest from 0.5. A report with no present keyword scores 0.
inline double report_score(const std::vector<double>& row, const TermScoreTable& scores,
                           const std::vector<std::string>& feature_names,
                           std::size_t top_k = 15) {
    std::vector<double> present;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] <= 0) continue;
        auto it = scores.find(feature_names[j]);
        if (it == scores.end()) fail("feature without a score entry: " + feature_names[j]);
        present.push_back(it->second);
    }
    if (present.empty()) return 0.0;
    if (present.size() > top_k) {
        std::sort(present.begin(), present.end(), [](double a, double b) {
            const double ea = std::abs(a - 0.5), eb = std::abs(b - 0.5);
            if (ea != eb) return ea > eb;
            return a > b;
        });
        present.resize(top_k);
    }
    double p = 1.0, q = 1.0;
    for (double s : present) {
        p *= s;
        q *= 1.0 - s;
    }
    return p / (p + q);
}

/// Remove NSBR rows whose report score reaches the threshold. SBR rows are
/// retained unconditionally.
inline Dataset apply_farsec(const Dataset& d, const TermScoreTable& scores,
                            const FilterOptions& opt) {
    if (d.provenance.role == DataRole::test) fail("pruning filters must not touch test data");
    Dataset out;
    out.feature_names = d.feature_names;
    out.provenance = d.provenance;
    for (const auto& row : d.rows) {
        if (row.label == Label::nsbr &&
            report_score(row.values, scores, d.feature_names, opt.graham_top_k) >= opt.threshold)
            continue;
        out.rows.push_back(row);
    }
    return out;
}

namespace detail {

inline double sq_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

inline double jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (std::size_t x : a) inter += b.count(x);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

}  // namespace detail

/// Closest-list noise identification. Each pass flags instances whose N
/// nearest (Euclidean) neighbors mostly disagree with their class; flagged
/// instances leave the scan; passes stop once the cumulative noise set
/// stabilizes (Jaccard >= stop_similarity) or max_iterations is reached.
/// Only flagged NSBRs are removed from the output.
inline Dataset apply_clni(const Dataset& d, const ClniParams& p) {
    if (d.provenance.role == DataRole::test) fail("pruning filters must not touch test data");
    if (d.rows.size() <= p.neighbor_count) fail("CLNI needs more rows than neighbors");

    const std::size_t n = d.rows.size();
    std::set<std::size_t> noise;
    std::vector<char> active(n, 1);

    for (std::size_t iter = 0; iter < p.max_iterations; ++iter) {
        std::vector<std::size_t> alive;
        for (std::size_t i = 0; i < n; ++i)
            if (active[i]) alive.push_back(i);
        if (alive.size() <= p.neighbor_count + 1) break;

        std::set<std::size_t> next = noise;
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t i : alive) {
            dist.clear();
            for (std::size_t j : alive) {
                if (j == i) continue;
                dist.emplace_back(detail::sq_euclidean(d.rows[i].values, d.rows[j].values), j);
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(p.neighbor_count),
                              dist.end());
            std::size_t differing = 0;
            for (std::size_t k = 0; k < p.neighbor_count; ++k)
                differing += (d.rows[dist[k].second].label != d.rows[i].label);
            const double frac = static_cast<double>(differing) / static_cast<double>(p.neighbor_count);
            if (frac >= p.noise_threshold) next.insert(i);
        }

        const double sim = detail::jaccard(noise, next);
        for (std::size_t i : next) active[i] = 0;
        noise = std::move(next);
        if (sim >= p.stop_similarity) break;
    }

    Dataset out;
    out.feature_names = d.feature_names;
    out.provenance = d.provenance;
    for (std::size_t i = 0; i < n; ++i) {
        if (d.rows[i].label == Label::nsbr && noise.count(i)) continue;
        out.rows.push_back(d.rows[i]);
    }
    return out;
}

/// Dispatch one of the eight treatments. `scores_for` supplies the score
/// table for the FARSEC variant a composite requires; composite kinds apply
/// the FARSEC pruning first and CLNI to its output.
template <typename ScoreLookup>
Dataset apply_filter(const Dataset& d, FilterKind kind, ScoreLookup&& scores_for,
                     const FilterOptions& opt) {
    Dataset current = d;
    if (auto sf = filter_support(kind)) current = apply_farsec(current, scores_for(*sf), opt);
    if (filter_uses_clni(kind)) current = apply_clni(current, opt.clni);
    current.provenance.filter = filter_name(kind);
    return current;
}

inline Dataset apply_filter(const Dataset& d, FilterKind kind, const TermScoreTable& scores,
                            const FilterOptions& opt) {
    return apply_filter(d, kind, [&](SupportFunction) -> const TermScoreTable& { return scores; },
                        opt);
}

}  // namespace sbr
