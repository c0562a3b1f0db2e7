// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sbr/filters.hpp"
#include "sbr/metrics.hpp"
#include "sbr/tuner.hpp"

namespace sbr {

/// The four pipelines compared per cell.
enum class Treatment { baseline_default, learner_tuning, smote_default, smotuned };

inline const std::vector<Treatment>& all_treatments() {
    static const std::vector<Treatment> t = {
        Treatment::baseline_default,
        Treatment::learner_tuning,
        Treatment::smote_default,
        Treatment::smotuned,
    };
    return t;
}

inline const char* treatment_name(Treatment t) {
    switch (t) {
        case Treatment::baseline_default: return "baseline_default";
        case Treatment::learner_tuning: return "learner_tuning";
        case Treatment::smote_default: return "smote_default";
        case Treatment::smotuned: return "smotuned";
    }
    return "?";
}

inline Treatment treatment_from_name(const std::string& name) {
    for (Treatment t : all_treatments())
        if (name == treatment_name(t)) return t;
    fail("unknown treatment: " + name);
}

/// One featurized project: training matrix, untouched test matrix, and the
/// train-derived keyword score tables per support function.
struct ProjectData {
    std::string name;
    Dataset train;
    Dataset test;
    std::map<SupportFunction, TermScoreTable> scores;

    const TermScoreTable& scores_for(SupportFunction sf) const {
        auto it = scores.find(sf);
        if (it == scores.end()) fail("no score table for support function");
        return it->second;
    }
};

struct CellOptions {
    std::uint64_t seed = 1;
    std::size_t repeat = 0;
    std::size_t de_generations = 3;
    std::vector<ClassifierKind> learners = all_classifiers();
    SmoteParams smote_defaults;
    SmoteBasis smote_basis = SmoteBasis::pre;
    bool keep_traces = false;
};

struct LearnerOutcome {
    ClassifierKind kind;
    double selection_g = 0.0;  // median fold g used for learner selection
    double default_g = 0.0;    // default-config fitness (tuning treatments)
    HyperParams params;
    SmoteParams smote_params;
    std::vector<DeTracePoint> trace;
};

struct TreatmentResult {
    std::string project;
    FilterKind filter = FilterKind::train;
    Treatment treatment = Treatment::baseline_default;
    std::size_t repeat = 0;
    ClassifierKind learner = ClassifierKind::nb;
    HyperParams params;
    SmoteParams smote_params;
    bool used_smote = false;
    Metrics test_metrics;
    double minutes = 0.0;
    std::vector<LearnerOutcome> per_learner;
};

namespace detail {

inline std::uint64_t cell_seed(std::uint64_t base, std::size_t repeat, const std::string& project,
                               FilterKind filter, Treatment treatment) {
    std::uint64_t h = hash_mix(base, repeat);
    h = hash_mix(h, project);
    h = hash_mix(h, filter_name(filter));
    h = hash_mix(h, treatment_name(treatment));
    return h;
}

}  // namespace detail

/// Run one (project, filter, treatment) cell on a pre-filtered training
/// set: per learner, evaluate the treatment's pipeline under stratified
/// cross-validation, pick the learner with the highest median fold
/// g-measure, rebuild that pipeline on the full filtered training data and
/// score once on the untouched test set.
inline TreatmentResult run_cell_filtered(const Dataset& filtered_train, const Dataset& test,
                                         const std::string& project, FilterKind filter,
                                         Treatment treatment, const CellOptions& opt) {
    if (test.provenance.role != DataRole::test) fail("run_cell: test dataset lacks test role");
    if (filtered_train.provenance.role != DataRole::train)
        fail("run_cell: training dataset lacks train role");
    if (opt.learners.empty()) fail("run_cell: no learners selected");
    const auto t0 = std::chrono::steady_clock::now();

    const std::uint64_t seed = detail::cell_seed(opt.seed, opt.repeat, project, filter, treatment);
    TreatmentResult result;
    result.project = project;
    result.filter = filter;
    result.treatment = treatment;
    result.repeat = opt.repeat;

    const std::size_t bins = std::min<std::size_t>(10, filtered_train.rows.size());
    const FoldAssignment folds = split_folds(filtered_train, bins, seed);

    for (ClassifierKind kind : opt.learners) {
        const std::uint64_t lseed = hash_mix(seed, classifier_name(kind));
        LearnerOutcome outcome;
        outcome.kind = kind;
        switch (treatment) {
            case Treatment::baseline_default: {
                outcome.params = default_params(kind);
                outcome.selection_g =
                    cross_fold_g(kind, outcome.params, filtered_train, folds, lseed);
                break;
            }
            case Treatment::learner_tuning: {
                TuneResult tuned = tune_learner(kind, filtered_train, opt.de_generations, lseed);
                outcome.params = tuned.params;
                outcome.selection_g = tuned.tuned_fitness;
                outcome.default_g = tuned.default_fitness;
                if (opt.keep_traces) outcome.trace = std::move(tuned.trace);
                break;
            }
            case Treatment::smote_default: {
                outcome.params = default_params(kind);
                outcome.smote_params = opt.smote_defaults;
                outcome.selection_g = cross_fold_g(
                    kind, outcome.params, filtered_train, folds, lseed,
                    [&](Dataset& part, std::size_t fold) {
                        Rng rng(hash_mix(hash_mix(lseed, "smote-fold"), fold));
                        part = smote(part, opt.smote_defaults, rng, opt.smote_basis);
                    });
                break;
            }
            case Treatment::smotuned: {
                SmotunedResult tuned =
                    smotuned(kind, filtered_train, lseed, 10, opt.smote_basis);
                outcome.params = default_params(kind);
                outcome.smote_params = tuned.params;
                outcome.selection_g = tuned.tuned_fitness;
                outcome.default_g = tuned.default_fitness;
                if (opt.keep_traces) outcome.trace = std::move(tuned.trace);
                break;
            }
        }
        result.per_learner.push_back(std::move(outcome));
    }

    // highest median fold g wins; ties keep the earlier learner
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.per_learner.size(); ++i)
        if (result.per_learner[i].selection_g > result.per_learner[best].selection_g) best = i;
    const LearnerOutcome& chosen = result.per_learner[best];
    result.learner = chosen.kind;
    result.params = chosen.params;

    // rebuild the chosen pipeline on the full filtered training data
    const std::uint64_t final_seed =
        hash_mix(hash_mix(seed, classifier_name(chosen.kind)), "final");
    Dataset final_train = filtered_train;
    if (treatment == Treatment::smote_default || treatment == Treatment::smotuned) {
        Rng rng(hash_mix(final_seed, "smote"));
        final_train = smote(filtered_train, chosen.smote_params, rng, opt.smote_basis);
        result.smote_params = chosen.smote_params;
        result.used_smote = true;
    }
    const Model model = train(chosen.kind, chosen.params, final_train, final_seed);
    result.test_metrics = score_predictions(predict_batch(model, test), labels_of(test));

    result.minutes =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
    return result;
}

/// Filter-then-run variant matching the cell protocol end to end.
inline TreatmentResult run_cell(const ProjectData& project, FilterKind filter,
                                Treatment treatment, const CellOptions& opt,
                                const FilterOptions& filter_opt = {}) {
    const Dataset filtered = apply_filter(
        project.train, filter,
        [&](SupportFunction sf) -> const TermScoreTable& { return project.scores_for(sf); },
        filter_opt);
    return run_cell_filtered(filtered, project.test, project.name, filter, treatment, opt);
}

struct DeltaRow {
    Treatment treatment;
    std::string project;
    FilterKind filter;
    double dpd = 0.0;  // percentage points
    double dpf = 0.0;
};

struct GridSpec {
    std::vector<FilterKind> filters = all_filters();
    std::vector<Treatment> treatments = all_treatments();
    std::size_t repeats = 1;
    std::size_t jobs = 0;  // 0 = hardware concurrency
    CellOptions cell;      // seed, learners, de generations, smote knobs
    FilterOptions filter_options;
};

struct CellFailure {
    std::string project;
    FilterKind filter = FilterKind::train;
    Treatment treatment = Treatment::baseline_default;
    std::size_t repeat = 0;
    std::string message;
};

struct GridOutcome {
    std::vector<TreatmentResult> results;  // canonical (project, filter, treatment, repeat) order
    std::vector<CellFailure> failures;
};

namespace detail {

template <typename Task>
void run_pool(std::size_t jobs, std::size_t task_count, Task&& task) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, task_count == 0 ? std::size_t{1} : task_count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= task_count) return;
            task(i);
        }
    };
    if (jobs <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
}

inline std::size_t filter_order(FilterKind k) {
    const auto& fs = all_filters();
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i] == k) return i;
    return fs.size();
}

inline std::size_t treatment_order(Treatment t) {
    const auto& ts = all_treatments();
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] == t) return i;
    return ts.size();
}

}  // namespace detail

/// Run the full (project x filter x treatment x repeat) grid over a worker
/// pool. Filtered training sets are computed once per (project, filter) and
/// shared read-only; per-cell seeds derive from the cell key, so results do
/// not depend on worker count or completion order. Failures are collected,
/// not fatal.
inline GridOutcome run_grid(const std::vector<ProjectData>& projects, const GridSpec& spec) {
    struct FilterTask {
        std::size_t project;
        FilterKind filter;
    };
    std::vector<FilterTask> filter_tasks;
    for (std::size_t p = 0; p < projects.size(); ++p)
        for (FilterKind f : spec.filters) filter_tasks.push_back({p, f});

    std::vector<Dataset> filtered(filter_tasks.size());
    std::vector<std::string> filter_errors(filter_tasks.size());
    detail::run_pool(spec.jobs, filter_tasks.size(), [&](std::size_t i) {
        const auto& task = filter_tasks[i];
        const auto& project = projects[task.project];
        try {
            filtered[i] = apply_filter(
                project.train, task.filter,
                [&](SupportFunction sf) -> const TermScoreTable& {
                    return project.scores_for(sf);
                },
                spec.filter_options);
        } catch (const std::exception& e) {
            filter_errors[i] = e.what();
        }
    });
    std::map<std::pair<std::size_t, FilterKind>, std::size_t> filter_slot;
    for (std::size_t i = 0; i < filter_tasks.size(); ++i)
        filter_slot[{filter_tasks[i].project, filter_tasks[i].filter}] = i;

    struct CellTask {
        std::size_t project;
        FilterKind filter;
        Treatment treatment;
        std::size_t repeat;
    };
    std::vector<CellTask> cells;
    for (std::size_t p = 0; p < projects.size(); ++p)
        for (FilterKind f : spec.filters)
            for (Treatment t : spec.treatments)
                for (std::size_t r = 0; r < spec.repeats; ++r) cells.push_back({p, f, t, r});

    std::vector<std::optional<TreatmentResult>> slots(cells.size());
    std::vector<std::optional<CellFailure>> errors(cells.size());
    detail::run_pool(spec.jobs, cells.size(), [&](std::size_t i) {
        const auto& cell = cells[i];
        const auto& project = projects[cell.project];
        const std::size_t fslot = filter_slot.at({cell.project, cell.filter});
        try {
            if (!filter_errors[fslot].empty()) fail(filter_errors[fslot]);
            CellOptions opt = spec.cell;
            opt.repeat = cell.repeat;
            slots[i] = run_cell_filtered(filtered[fslot], project.test, project.name,
                                         cell.filter, cell.treatment, opt);
        } catch (const std::exception& e) {
            errors[i] = CellFailure{project.name, cell.filter, cell.treatment, cell.repeat,
                                    e.what()};
        }
    });

    GridOutcome out;
    for (auto& s : slots)
        if (s) out.results.push_back(std::move(*s));
    for (auto& e : errors)
        if (e) out.failures.push_back(std::move(*e));
    std::sort(out.results.begin(), out.results.end(),
              [](const TreatmentResult& a, const TreatmentResult& b) {
                  if (a.project != b.project) return a.project < b.project;
                  if (a.filter != b.filter)
                      return detail::filter_order(a.filter) < detail::filter_order(b.filter);
                  if (a.treatment != b.treatment)
                      return detail::treatment_order(a.treatment) <
                             detail::treatment_order(b.treatment);
                  return a.repeat < b.repeat;
              });
    std::sort(out.failures.begin(), out.failures.end(),
              [](const CellFailure& a, const CellFailure& b) {
                  if (a.project != b.project) return a.project < b.project;
                  if (a.filter != b.filter)
                      return detail::filter_order(a.filter) < detail::filter_order(b.filter);
                  if (a.treatment != b.treatment)
                      return detail::treatment_order(a.treatment) <
                             detail::treatment_order(b.treatment);
                  return a.repeat < b.repeat;
              });
    return out;
}

/// Per-cell (delta-pd, delta-pf) of each non-baseline treatment against
/// baseline_default on the same (project, filter), medians across repeats,
/// sorted ascending for plotting.
inline std::vector<DeltaRow> delta_vs_baseline(const std::vector<TreatmentResult>& results) {
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> pd_samples,
        pf_samples;
    for (const auto& r : results) {
        const auto key = std::make_tuple(r.project, std::string(filter_name(r.filter)),
                                         std::string(treatment_name(r.treatment)));
        pd_samples[key].push_back(r.test_metrics.pd * 100.0);
        pf_samples[key].push_back(r.test_metrics.pf * 100.0);
    }
    std::vector<DeltaRow> rows;
    for (const auto& [key, pds] : pd_samples) {
        const auto& [project, filter, treatment] = key;
        if (treatment == treatment_name(Treatment::baseline_default)) continue;
        const auto base_key = std::make_tuple(project, filter,
                                              std::string(treatment_name(Treatment::baseline_default)));
        auto base_pd = pd_samples.find(base_key);
        auto base_pf = pf_samples.find(base_key);
        if (base_pd == pd_samples.end() || base_pf == pf_samples.end())
            fail("delta_vs_baseline: baseline cell missing for " + project + "/" + filter);
        DeltaRow row;
        row.treatment = treatment_from_name(treatment);
        row.project = project;
        row.filter = filter_from_name(filter);
        row.dpd = median_of(pds) - median_of(base_pd->second);
        row.dpf = median_of(pf_samples.at(key)) - median_of(base_pf->second);
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const DeltaRow& a, const DeltaRow& b) {
        if (a.dpd != b.dpd) return a.dpd < b.dpd;
        if (a.dpf != b.dpf) return a.dpf < b.dpf;
        const std::string ta = treatment_name(a.treatment), tb = treatment_name(b.treatment);
        if (ta != tb) return ta < tb;
        if (a.project != b.project) return a.project < b.project;
        return std::string(filter_name(a.filter)) < filter_name(b.filter);
    });
    return rows;
}

}  // namespace sbr
