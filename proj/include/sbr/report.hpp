// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sbr/harness.hpp"
#include "sbr/stats.hpp"

namespace sbr {

/// Minimal view of one results row; what results.csv round-trips.
struct ResultRow {
    std::string project;
    FilterKind filter = FilterKind::train;
    Treatment treatment = Treatment::baseline_default;
    std::string learner;
    double pd = 0, pf = 0, prec = 0, g = 0;  // percentages
    double minutes = 0;
};

inline ResultRow to_row(const TreatmentResult& r) {
    ResultRow row;
    row.project = r.project;
    row.filter = r.filter;
    row.treatment = r.treatment;
    row.learner = classifier_name(r.learner);
    row.pd = r.test_metrics.pd * 100.0;
    row.pf = r.test_metrics.pf * 100.0;
    row.prec = r.test_metrics.prec * 100.0;
    row.g = r.test_metrics.g * 100.0;
    row.minutes = 0.0;  // wall time goes to timings.csv; keeps runs byte-comparable
    return row;
}

inline std::vector<ResultRow> to_rows(const std::vector<TreatmentResult>& results) {
    std::vector<ResultRow> rows;
    rows.reserve(results.size());
    for (const auto& r : results) rows.push_back(to_row(r));
    return rows;
}

inline std::string results_csv(const std::vector<ResultRow>& rows) {
    std::string out = "project,filter,treatment,learner,pd,pf,prec,g,minutes\n";
    for (const auto& r : rows) {
        out += csv::join({r.project, filter_name(r.filter), treatment_name(r.treatment),
                          r.learner, fmt_g6(r.pd), fmt_g6(r.pf), fmt_g6(r.prec), fmt_g6(r.g),
                          fmt_g6(r.minutes)});
        out += '\n';
    }
    return out;
}

inline std::string timings_csv(const std::vector<TreatmentResult>& results) {
    std::string out = "project,filter,treatment,repeat,seconds\n";
    for (const auto& r : results) {
        out += csv::join({r.project, filter_name(r.filter), treatment_name(r.treatment),
                          std::to_string(r.repeat), fmt_g6(r.minutes * 60.0)});
        out += '\n';
    }
    return out;
}

/// Parse a results CSV back into rows; malformed input reports the line.
inline std::vector<ResultRow> parse_results_csv(const std::string& content) {
    std::istringstream in(content);
    std::vector<std::string> rec;
    if (!csv::read_record(in, rec)) return {};
    if (rec.size() != 9 || rec[0] != "project")
        fail("results csv: unexpected header at line 1");
    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (csv::read_record(in, rec)) {
        ++lineno;
        if (rec.size() != 9) fail("results csv: field count at line " + std::to_string(lineno));
        ResultRow row;
        row.project = rec[0];
        try {
            row.filter = filter_from_name(rec[1]);
            row.treatment = treatment_from_name(rec[2]);
            row.learner = rec[3];
            row.pd = std::stod(rec[4]);
            row.pf = std::stod(rec[5]);
            row.prec = std::stod(rec[6]);
            row.g = std::stod(rec[7]);
            row.minutes = std::stod(rec[8]);
        } catch (const std::exception&) {
            fail("results csv: malformed row at line " + std::to_string(lineno));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct RankRow {
    std::string project;
    FilterKind filter = FilterKind::train;
    Treatment treatment = Treatment::baseline_default;
    std::size_t rank = 1;
    double median_pd = 0.0;
};

/// Scott-Knott ranks of the treatments per (project, filter), over the pd
/// samples collected across repeats.
inline std::vector<RankRow> rank_treatments(const std::vector<ResultRow>& rows,
                                            std::uint64_t seed) {
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<double>>>
        cells;
    for (const auto& r : rows)
        cells[{r.project, filter_name(r.filter)}][treatment_name(r.treatment)].push_back(r.pd);

    std::vector<RankRow> out;
    for (const auto& [key, groups] : cells) {
        const auto& [project, filter] = key;
        const RankTable table =
            scott_knott(groups, hash_mix(hash_mix(seed, project), filter));
        for (const auto& g : table) {
            RankRow row;
            row.project = project;
            row.filter = filter_from_name(filter);
            row.treatment = treatment_from_name(g.label);
            row.rank = g.rank;
            row.median_pd = median_of(g.samples);
            out.push_back(row);
        }
    }
    std::sort(out.begin(), out.end(), [](const RankRow& a, const RankRow& b) {
        if (a.project != b.project) return a.project < b.project;
        if (a.filter != b.filter)
            return detail::filter_order(a.filter) < detail::filter_order(b.filter);
        return detail::treatment_order(a.treatment) < detail::treatment_order(b.treatment);
    });
    return out;
}

inline std::string ranks_csv(const std::vector<RankRow>& rows) {
    std::string out = "project,filter,treatment,rank,median_pd\n";
    for (const auto& r : rows) {
        out += csv::join({r.project, filter_name(r.filter), treatment_name(r.treatment),
                          std::to_string(r.rank), fmt_g6(r.median_pd)});
        out += '\n';
    }
    return out;
}

/// Deltas against baseline_default per cell, medians across repeats,
/// ascending; mirrors the sorted-series plots.
inline std::vector<DeltaRow> deltas_from_rows(const std::vector<ResultRow>& rows) {
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> pd_samples,
        pf_samples;
    for (const auto& r : rows) {
        const auto key = std::make_tuple(r.project, std::string(filter_name(r.filter)),
                                         std::string(treatment_name(r.treatment)));
        pd_samples[key].push_back(r.pd);
        pf_samples[key].push_back(r.pf);
    }
    std::vector<DeltaRow> out;
    for (const auto& [key, pds] : pd_samples) {
        const auto& [project, filter, treatment] = key;
        if (treatment == treatment_name(Treatment::baseline_default)) continue;
        const auto base = std::make_tuple(
            project, filter, std::string(treatment_name(Treatment::baseline_default)));
        if (!pd_samples.count(base))
            fail("deltas: baseline cell missing for " + project + "/" + filter);
        DeltaRow row;
        row.treatment = treatment_from_name(treatment);
        row.project = project;
        row.filter = filter_from_name(filter);
        row.dpd = median_of(pds) - median_of(pd_samples.at(base));
        row.dpf = median_of(pf_samples.at(key)) - median_of(pf_samples.at(base));
        out.push_back(row);
    }
    std::sort(out.begin(), out.end(), [](const DeltaRow& a, const DeltaRow& b) {
        if (a.dpd != b.dpd) return a.dpd < b.dpd;
        if (a.dpf != b.dpf) return a.dpf < b.dpf;
        const std::string ta = treatment_name(a.treatment), tb = treatment_name(b.treatment);
        if (ta != tb) return ta < tb;
        if (a.project != b.project) return a.project < b.project;
        return std::string(filter_name(a.filter)) < filter_name(b.filter);
    });
    return out;
}

inline std::string deltas_csv(const std::vector<DeltaRow>& rows) {
    std::string out = "treatment,project,filter,delta_pd,delta_pf\n";
    for (const auto& r : rows) {
        out += csv::join({treatment_name(r.treatment), r.project, filter_name(r.filter),
                          fmt_g6(r.dpd), fmt_g6(r.dpf)});
        out += '\n';
    }
    return out;
}

/// Markdown report: one table per project, eight filter rows, one column
/// group (learner, pd, pf, rank) per treatment.
inline std::string render_markdown(const std::vector<ResultRow>& rows,
                                   const std::vector<RankRow>& ranks) {
    struct CellAgg {
        std::vector<double> pd, pf;
        std::string learner;
    };
    std::map<std::string, std::map<std::string, std::map<std::string, CellAgg>>> by_project;
    std::set<std::string> treatments_present;
    for (const auto& r : rows) {
        auto& cell = by_project[r.project][filter_name(r.filter)][treatment_name(r.treatment)];
        cell.pd.push_back(r.pd);
        cell.pf.push_back(r.pf);
        if (cell.learner.empty()) cell.learner = r.learner;
        treatments_present.insert(treatment_name(r.treatment));
    }
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> rank_of;
    for (const auto& r : ranks)
        rank_of[{r.project, filter_name(r.filter), treatment_name(r.treatment)}] = r.rank;

    std::vector<std::string> treatment_cols;
    for (Treatment t : all_treatments())
        if (treatments_present.count(treatment_name(t)))
            treatment_cols.push_back(treatment_name(t));

    std::ostringstream md;
    md << "# Classification results\n";
    for (const auto& [project, filters] : by_project) {
        md << "\n## " << project << "\n\n";
        md << "| Filter |";
        for (const auto& t : treatment_cols) md << " " << t << " learner | pd | pf | rank |";
        md << "\n|---|";
        for (std::size_t i = 0; i < treatment_cols.size(); ++i) md << "---|---|---|---|";
        md << "\n";
        for (FilterKind f : all_filters()) {
            const auto fit = filters.find(filter_name(f));
            if (fit == filters.end()) continue;
            md << "| " << filter_name(f) << " |";
            for (const auto& t : treatment_cols) {
                const auto cit = fit->second.find(t);
                if (cit == fit->second.end()) {
                    md << "  | | | |";
                    continue;
                }
                const auto& cell = cit->second;
                md << " " << cell.learner << " | " << fmt_g6(median_of(cell.pd)) << " | "
                   << fmt_g6(median_of(cell.pf)) << " | ";
                const auto rit = rank_of.find({project, filter_name(f), t});
                if (rit != rank_of.end()) md << rit->second;
                md << " |";
            }
            md << "\n";
        }
    }
    return md.str();
}

}  // namespace sbr
