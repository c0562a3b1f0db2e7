// SPDX-License-Identifier: Apache-2.0
//
// Batch driver for the bug-report classification experiments: data
// generation, grid runs, and report rendering.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbr/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"security bug-report classification experiments"};
    app.require_subcommand(1);

    sbr::cli::RunConfig cfg;

    auto* run = app.add_subcommand("run", "execute the experiment grid");
    run->set_config("--config", "", "flat key=value configuration file");
    run->add_option("--data-dir", cfg.data_dir, "directory with <project>-{train,test}.{jsonl,csv}")
        ->required();
    run->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    run->add_option("--projects", cfg.projects, "projects to run")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--filters", cfg.filters, "subset of the eight pruning filters")
        ->delimiter(',');
    run->add_option("--treatments", cfg.treatments, "subset of the four treatments")
        ->delimiter(',');
    run->add_option("--learners", cfg.learners, "subset of RF,NB,LR,MLP,KNN")->delimiter(',');
    run->add_option("--seed", cfg.seed, "base RNG seed")->capture_default_str();
    run->add_option("--repeats", cfg.repeats, "independent repeats per cell")
        ->capture_default_str();
    run->add_option("--de-gens", cfg.de_generations, "DE generations for learner tuning (3 or 10)")
        ->check(CLI::IsMember({3, 10}))
        ->capture_default_str();
    run->add_option("--jobs", cfg.jobs, "worker threads (0 = logical cores)")
        ->capture_default_str();
    run->add_option("--keywords", cfg.keywords, "security keyword budget")
        ->capture_default_str();
    run->add_option("--filter-threshold", cfg.filter_threshold,
                    "report-score cutoff for FARSEC pruning")
        ->capture_default_str();
    run->add_option("--clni-threshold", cfg.clni_threshold,
                    "neighbor-disagreement cutoff for CLNI")
        ->capture_default_str();
    run->add_option("--graham-k", cfg.graham_k, "present keywords combined per report score")
        ->capture_default_str();
    run->add_option("--smote-k", cfg.smote_k, "SMOTE neighbors")->capture_default_str();
    run->add_option("--smote-m", cfg.smote_m, "SMOTE target percent")->capture_default_str();
    run->add_option("--smote-r", cfg.smote_r, "SMOTE Minkowski power")->capture_default_str();
    run->add_option("--smote-m-basis", cfg.smote_m_basis,
                    "what m is a percent of: pre-sampling size (pre) or final share (post)")
        ->check(CLI::IsMember({"pre", "post"}))
        ->capture_default_str();
    run->add_flag("--trace", cfg.trace, "write DE tuning traces");
    run->add_option("--keywords-out", cfg.keywords_out,
                    "directory for per-project TermScore dumps");

    std::string results_path = "out/results.csv";
    std::string report_out = "out";
    auto* report = app.add_subcommand("report", "re-render tables from a results.csv");
    report->add_option("--results", results_path, "results.csv path")->capture_default_str();
    report->add_option("--out", report_out, "output directory")->capture_default_str();

    std::string gen_dir = "data";
    std::uint64_t gen_seed = 13;
    double gen_scale = 1.0;
    std::vector<std::string> gen_projects;
    auto* gen = app.add_subcommand("gen", "generate synthetic desk-scale project corpora");
    gen->add_option("--out", gen_dir, "data directory")->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--scale", gen_scale, "row-count scale factor")->capture_default_str();
    gen->add_option("--projects", gen_projects, "subset of project names")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto outcome = sbr::cli::run(cfg);
            std::printf("wrote %zu result rows to %s\n", outcome.rows.size(),
                        outcome.out_dir.c_str());
            if (!outcome.grid.failures.empty())
                std::fprintf(stderr, "%zu cells failed; see failed_cells.txt\n",
                             outcome.grid.failures.size());
            return outcome.exit_code;
        }
        if (report->parsed()) {
            sbr::cli::report(results_path, report_out);
            std::printf("report rendered to %s\n", report_out.c_str());
            return 0;
        }
        if (gen->parsed()) {
            const auto files = sbr::cli::generate_data(gen_dir, gen_seed, gen_projects, gen_scale);
            std::printf("wrote %zu corpus files to %s\n", files.size(), gen_dir.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
