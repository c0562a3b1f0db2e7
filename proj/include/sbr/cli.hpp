// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sbr/datagen.hpp"
#include "sbr/harness.hpp"
#include "sbr/report.hpp"

namespace sbr::cli {

namespace fs = std::filesystem;

struct RunConfig {
    std::string data_dir;
    std::string out_dir = "out";
    std::vector<std::string> projects = {"chromium", "wicket", "ambari", "camel", "derby"};
    std::vector<std::string> filters;     // empty = all eight
    std::vector<std::string> treatments;  // empty = all four
    std::vector<std::string> learners;    // empty = all five
    std::uint64_t seed = 1;
    std::size_t repeats = 1;
    std::size_t de_generations = 3;  // 3 or 10
    std::size_t jobs = 0;
    std::size_t keywords = 100;
    double filter_threshold = 0.75;
    double clni_threshold = 0.8;
    std::size_t graham_k = 15;
    int smote_k = 5, smote_m = 50, smote_r = 2;
    std::string smote_m_basis = "pre";  // pre | post
    bool trace = false;
    std::string keywords_out;  // optional TermScore dump
};

namespace detail {

inline std::string train_path(const RunConfig& cfg, const std::string& project,
                              const char* ext) {
    return (fs::path(cfg.data_dir) / (project + "-train." + ext)).string();
}

inline std::string test_path(const RunConfig& cfg, const std::string& project,
                             const char* ext) {
    return (fs::path(cfg.data_dir) / (project + "-test." + ext)).string();
}

inline std::map<SupportFunction, TermScoreTable> score_all(const Corpus& train) {
    return {{SupportFunction::plain, score_terms(train, SupportFunction::plain)},
            {SupportFunction::jalali_sq, score_terms(train, SupportFunction::jalali_sq)},
            {SupportFunction::graham_two, score_terms(train, SupportFunction::graham_two)}};
}

inline std::map<SupportFunction, TermScoreTable> score_all(const Dataset& train) {
    return {{SupportFunction::plain, score_terms(train, SupportFunction::plain)},
            {SupportFunction::jalali_sq, score_terms(train, SupportFunction::jalali_sq)},
            {SupportFunction::graham_two, score_terms(train, SupportFunction::graham_two)}};
}

}  // namespace detail

/// Load one project's train/test pair. JSON-lines files hold raw reports
/// and go through the text-mining pipeline (keyword scores and features are
/// derived from the training split only, then frozen for the test split);
/// CSV files are prebuilt matrices and are scored directly.
inline ProjectData load_project(const RunConfig& cfg, const std::string& project) {
    ProjectData data;
    data.name = project;

    const std::string jsonl_train = detail::train_path(cfg, project, "jsonl");
    const std::string csv_train = detail::train_path(cfg, project, "csv");
    if (fs::exists(jsonl_train)) {
        const std::string jsonl_test = detail::test_path(cfg, project, "jsonl");
        if (!fs::exists(jsonl_test)) fail("missing data file: " + jsonl_test);
        Corpus train = load_reports(jsonl_train, ReportFormat::jsonlines);
        Corpus test = load_reports(jsonl_test, ReportFormat::jsonlines);
        train.project = project;

        const TermScoreTable plain = score_terms(train, SupportFunction::plain);
        const std::size_t n = std::min<std::size_t>(cfg.keywords, plain.size());
        const auto keywords = top_keywords(plain, n);
        data.train = build_features(train, keywords);
        data.test = build_features(test, keywords);
        data.scores = detail::score_all(train);
        if (!cfg.keywords_out.empty())
            save_scores(plain, (fs::path(cfg.keywords_out) / (project + "-scores.csv")).string());
    } else if (fs::exists(csv_train)) {
        const std::string csv_test = detail::test_path(cfg, project, "csv");
        if (!fs::exists(csv_test)) fail("missing data file: " + csv_test);
        data.train = load_matrix(csv_train);
        data.test = load_matrix(csv_test);
        if (data.train.feature_names != data.test.feature_names)
            fail("train/test feature mismatch for project " + project);
        data.scores = detail::score_all(data.train);
    } else {
        fail("missing data file: " + jsonl_train + " (or " + csv_train + ")");
    }

    data.train.provenance = {project, "train", DataRole::train};
    data.test.provenance = {project, "train", DataRole::test};
    return data;
}

struct RunOutcome {
    GridOutcome grid;
    std::vector<ResultRow> rows;
    std::string out_dir;
    int exit_code = 0;
};

namespace detail {

inline GridSpec grid_spec(const RunConfig& cfg) {
    GridSpec spec;
    if (!cfg.filters.empty()) {
        spec.filters.clear();
        for (const auto& f : cfg.filters) spec.filters.push_back(filter_from_name(f));
    }
    if (!cfg.treatments.empty()) {
        spec.treatments.clear();
        for (const auto& t : cfg.treatments) spec.treatments.push_back(treatment_from_name(t));
    }
    spec.repeats = cfg.repeats;
    spec.jobs = cfg.jobs;
    spec.cell.seed = cfg.seed;
    spec.cell.de_generations = cfg.de_generations;
    if (!cfg.learners.empty()) {
        spec.cell.learners.clear();
        for (const auto& l : cfg.learners) spec.cell.learners.push_back(classifier_from_name(l));
    }
    spec.cell.smote_defaults = {cfg.smote_k, cfg.smote_m, cfg.smote_r};
    spec.cell.smote_basis = cfg.smote_m_basis == "post" ? SmoteBasis::post : SmoteBasis::pre;
    spec.cell.keep_traces = cfg.trace;
    spec.filter_options.threshold = cfg.filter_threshold;
    spec.filter_options.graham_top_k = cfg.graham_k;
    spec.filter_options.clni.noise_threshold = cfg.clni_threshold;
    return spec;
}

inline std::string join_names(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i];
    }
    return out;
}

inline std::string manifest_text(const RunConfig& cfg, const GridSpec& spec,
                                 const std::vector<std::string>& input_files) {
    std::ostringstream m;
    m << "config.data_dir=" << cfg.data_dir << '\n';
    m << "config.out_dir=" << cfg.out_dir << '\n';
    m << "config.projects=" << join_names(cfg.projects) << '\n';
    std::vector<std::string> names;
    for (auto f : spec.filters) names.emplace_back(filter_name(f));
    m << "config.filters=" << join_names(names) << '\n';
    names.clear();
    for (auto t : spec.treatments) names.emplace_back(treatment_name(t));
    m << "config.treatments=" << join_names(names) << '\n';
    names.clear();
    for (auto l : spec.cell.learners) names.emplace_back(classifier_name(l));
    m << "config.learners=" << join_names(names) << '\n';
    m << "config.seed=" << cfg.seed << '\n';
    m << "config.repeats=" << cfg.repeats << '\n';
    m << "config.de_generations=" << cfg.de_generations << '\n';
    m << "config.keywords=" << cfg.keywords << '\n';
    m << "config.filter_threshold=" << fmt_g6(cfg.filter_threshold) << '\n';
    m << "config.clni_threshold=" << fmt_g6(cfg.clni_threshold) << '\n';
    m << "config.graham_k=" << cfg.graham_k << '\n';
    m << "config.smote=" << cfg.smote_k << ',' << cfg.smote_m << ',' << cfg.smote_r << ','
      << cfg.smote_m_basis << '\n';
    for (const auto& path : input_files)
        m << "input." << path << "=" << content_hash(read_file(path)) << '\n';
    return m.str();
}

inline void write_traces(const RunOutcome& outcome, const std::string& dir) {
    fs::create_directories(dir);
    std::string fitness = "project,filter,treatment,learner,repeat,default_g,tuned_g\n";
    for (const auto& r : outcome.grid.results) {
        if (r.treatment != Treatment::learner_tuning && r.treatment != Treatment::smotuned)
            continue;
        for (const auto& l : r.per_learner) {
            fitness += csv::join({r.project, filter_name(r.filter), treatment_name(r.treatment),
                                  classifier_name(l.kind), std::to_string(r.repeat),
                                  fmt_g6(l.default_g), fmt_g6(l.selection_g)});
            fitness += '\n';
            if (l.trace.empty()) continue;
            std::string body = "generation,best_fitness\n";
            for (const auto& pt : l.trace)
                body += std::to_string(pt.generation) + "," + fmt_g6(pt.best_fitness) + "\n";
            const std::string name = r.project + "_" + filter_name(r.filter) + "_" +
                                     treatment_name(r.treatment) + "_" + classifier_name(l.kind) +
                                     "_" + std::to_string(r.repeat) + ".csv";
            write_file((fs::path(dir) / name).string(), body);
        }
    }
    write_file((fs::path(dir) / "tuning_fitness.csv").string(), fitness);
}

}  // namespace detail

/// Execute the configured grid and write results.csv, ranks.csv,
/// deltas.csv, report.md, timings.csv and manifest.txt into the output
/// directory. Cell failures leave partial results plus failed_cells.txt and
/// a nonzero exit code.
inline RunOutcome run(const RunConfig& cfg) {
    if (cfg.projects.empty()) fail("no projects selected");
    const GridSpec spec = detail::grid_spec(cfg);
    if (spec.filters.empty() || spec.treatments.empty()) fail("empty filter/treatment selection");

    std::vector<ProjectData> projects;
    std::vector<std::string> input_files;
    for (const auto& name : cfg.projects) {
        for (const char* ext : {"jsonl", "csv"}) {
            const std::string tr = detail::train_path(cfg, name, ext);
            const std::string te = detail::test_path(cfg, name, ext);
            if (fs::exists(tr)) input_files.push_back(tr);
            if (fs::exists(te)) input_files.push_back(te);
        }
        projects.push_back(load_project(cfg, name));
    }

    RunOutcome outcome;
    outcome.out_dir = cfg.out_dir;
    fs::create_directories(cfg.out_dir);
    outcome.grid = run_grid(projects, spec);
    outcome.rows = to_rows(outcome.grid.results);

    const fs::path out(cfg.out_dir);
    write_file((out / "results.csv").string(), results_csv(outcome.rows));
    write_file((out / "timings.csv").string(), timings_csv(outcome.grid.results));
    const auto ranks = rank_treatments(outcome.rows, cfg.seed);
    write_file((out / "ranks.csv").string(), ranks_csv(ranks));
    std::string deltas_text = "treatment,project,filter,delta_pd,delta_pf\n";
    try {
        deltas_text = deltas_csv(deltas_from_rows(outcome.rows));
    } catch (const Error&) {
        // baseline treatment not part of this run; leave the header only
    }
    write_file((out / "deltas.csv").string(), deltas_text);
    write_file((out / "report.md").string(), render_markdown(outcome.rows, ranks));
    write_file((out / "manifest.txt").string(), detail::manifest_text(cfg, spec, input_files));
    if (cfg.trace) detail::write_traces(outcome, (out / "traces").string());

    if (!outcome.grid.failures.empty()) {
        std::string failed;
        for (const auto& f : outcome.grid.failures) {
            failed += f.project;
            failed += ',';
            failed += filter_name(f.filter);
            failed += ',';
            failed += treatment_name(f.treatment);
            failed += ',';
            failed += std::to_string(f.repeat);
            failed += ',';
            failed += csv::escape(f.message);
            failed += '\n';
        }
        write_file((out / "failed_cells.txt").string(), failed);
        outcome.exit_code = 1;
    }
    return outcome;
}

/// Re-render ranks, deltas and the markdown report from an existing
/// results.csv; a pure function of that file.
inline void report(const std::string& results_path, const std::string& out_dir) {
    const auto rows = parse_results_csv(read_file(results_path));
    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    const auto ranks = rows.empty() ? std::vector<RankRow>{} : rank_treatments(rows, 1);
    write_file((out / "ranks.csv").string(), ranks_csv(ranks));
    std::string deltas_text = "treatment,project,filter,delta_pd,delta_pf\n";
    if (!rows.empty()) {
        try {
            deltas_text = deltas_csv(deltas_from_rows(rows));
        } catch (const Error&) {
        }
    }
    write_file((out / "deltas.csv").string(), deltas_text);
    write_file((out / "report.md").string(), render_markdown(rows, ranks));
}

/// Generate the synthetic desk-scale project corpora as JSON-lines files.
inline std::vector<std::string> generate_data(const std::string& data_dir, std::uint64_t seed,
                                              const std::vector<std::string>& only = {},
                                              double scale = 1.0) {
    fs::create_directories(data_dir);
    std::vector<std::string> written;
    for (ProjectProfile profile : default_profiles()) {
        if (!only.empty() &&
            std::find(only.begin(), only.end(), profile.name) == only.end())
            continue;
        profile.train_rows = std::max<std::size_t>(
            40, static_cast<std::size_t>(std::llround(profile.train_rows * scale)));
        profile.test_rows = std::max<std::size_t>(
            20, static_cast<std::size_t>(std::llround(profile.test_rows * scale)));
        const GeneratedProject gen = generate_project(profile, seed);
        const std::string train = (fs::path(data_dir) / (profile.name + "-train.jsonl")).string();
        const std::string test = (fs::path(data_dir) / (profile.name + "-test.jsonl")).string();
        save_reports_jsonl(gen.train, train);
        save_reports_jsonl(gen.test, test);
        written.push_back(train);
        written.push_back(test);
    }
    return written;
}

}  // namespace sbr::cli
