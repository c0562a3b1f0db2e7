// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include "sbr/corpus.hpp"

using namespace sbr;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    static const auto stamp =
        std::chrono::steady_clock::now().time_since_epoch().count();
    const auto dir = fs::temp_directory_path() / ("sbr_corpus_" + std::to_string(stamp));
    fs::create_directories(dir);
    return dir / name;
}

Dataset random_counts_dataset(Rng& rng, std::size_t rows, std::size_t dims,
                              std::size_t sbr_count) {
    Dataset d;
    for (std::size_t j = 0; j < dims; ++j) d.feature_names.push_back("w" + std::to_string(j));
    for (std::size_t i = 0; i < rows; ++i) {
        DataRow row;
        row.id = "r" + std::to_string(i);
        row.label = i < sbr_count ? Label::sbr : Label::nsbr;
        for (std::size_t j = 0; j < dims; ++j)
            row.values.push_back(static_cast<double>(rng.uniform_int(0, 6)));
        d.rows.push_back(std::move(row));
    }
    rng.shuffle(d.rows);
    return d;
}

}  // namespace

TEST_CASE("jsonl reports map fields directly") {
    const auto path = temp_file("reports.jsonl");
    std::ofstream(path) << R"({"id":"c1","summary":"buffer overflow in parser","security":1})"
                        << "\n"
                        << R"({"id":"c2","summary":"font too small","description":"ui nit","security":0})"
                        << "\n";
    const Corpus c = load_reports(path.string(), ReportFormat::jsonlines);
    REQUIRE(c.reports.size() == 2);
    CHECK(c.reports[0].id == "c1");
    CHECK(c.reports[0].label == Label::sbr);
    CHECK(c.reports[0].text == "buffer overflow in parser");
    CHECK(c.reports[1].label == Label::nsbr);
    CHECK(c.reports[1].text == "font too small ui nit");
}

TEST_CASE("empty file yields empty corpus") {
    const auto path = temp_file("empty.jsonl");
    std::ofstream(path) << "";
    CHECK(load_reports(path.string(), ReportFormat::jsonlines).reports.empty());
}

TEST_CASE("record without a label is rejected") {
    const auto path = temp_file("nolabel.jsonl");
    std::ofstream(path) << R"({"id":"c1","summary":"crash"})" << "\n";
    CHECK_THROWS_WITH(load_reports(path.string(), ReportFormat::jsonlines),
                      Catch::Matchers::ContainsSubstring("label absent"));
}

TEST_CASE("ambiguous and duplicate records are rejected") {
    const auto both = temp_file("both.jsonl");
    std::ofstream(both) << R"({"id":"c1","summary":"x","security":1,"label":1})" << "\n";
    CHECK_THROWS_WITH(load_reports(both.string(), ReportFormat::jsonlines),
                      Catch::Matchers::ContainsSubstring("ambiguous"));

    const auto dup = temp_file("dup.jsonl");
    std::ofstream(dup) << R"({"id":"c1","summary":"x","security":1})" << "\n"
                       << R"({"id":"c1","summary":"y","security":0})" << "\n";
    CHECK_THROWS_WITH(load_reports(dup.string(), ReportFormat::jsonlines),
                      Catch::Matchers::ContainsSubstring("duplicate id"));
}

TEST_CASE("csv reports honor header names") {
    const auto path = temp_file("reports.csv");
    std::ofstream(path) << "id,summary,description,security\n"
                        << "a1,\"overflow, heap\",parser crash,1\n"
                        << "a2,slow page,,0\n";
    const Corpus c = load_reports(path.string(), ReportFormat::csv);
    REQUIRE(c.reports.size() == 2);
    CHECK(c.reports[0].text == "overflow, heap parser crash");
    CHECK(c.reports[0].label == Label::sbr);
}

TEST_CASE("matrix loader reproduces the study-scale class profile") {
    struct Shape {
        const char* name;
        std::size_t rows;
        std::size_t sbr;
    };
    for (const Shape shape : {Shape{"chromium", 20970, 77}, Shape{"wicket", 500, 4}}) {
        const auto path = temp_file(std::string(shape.name) + "-train.csv");
        {
            std::ofstream out(path);
            out << "id,w0,w1,label\n";
            for (std::size_t i = 0; i < shape.rows; ++i)
                out << "b" << i << "," << (i % 3) << "," << (i % 5) << ","
                    << (i < shape.sbr ? 1 : 0) << "\n";
        }
        const Dataset d = load_matrix(path.string());
        CHECK(d.rows.size() == shape.rows);
        CHECK(d.count(Label::sbr) == shape.sbr);
        CHECK(d.feature_names == std::vector<std::string>{"w0", "w1"});
    }
}

TEST_CASE("one-row matrix with label 1 is a single SBR") {
    const auto path = temp_file("one.csv");
    std::ofstream(path) << "id,w0,label\nx,3,1\n";
    const Dataset d = load_matrix(path.string());
    REQUIRE(d.rows.size() == 1);
    CHECK(d.rows[0].label == Label::sbr);
    CHECK(d.rows[0].values == std::vector<double>{3.0});
}

TEST_CASE("non-numeric feature cell names row and column") {
    const auto path = temp_file("bad.csv");
    std::ofstream(path) << "id,w0,w1,label\nx,3,oops,1\n";
    CHECK_THROWS_WITH(load_matrix(path.string()),
                      Catch::Matchers::ContainsSubstring(":2") &&
                          Catch::Matchers::ContainsSubstring("column 3"));
}

TEST_CASE("save then load is the identity on count matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rows = static_cast<std::size_t>(rng.uniform_int(2, 40));
        const auto dims = static_cast<std::size_t>(rng.uniform_int(1, 8));
        const auto sbr = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(rows)));
        const Dataset d = random_counts_dataset(rng, rows, dims, sbr);
        const auto path = temp_file("roundtrip_" + std::to_string(trial) + ".csv");
        save_matrix(d, path.string());
        const Dataset back = load_matrix(path.string());
        REQUIRE(back.rows.size() == d.rows.size());
        CHECK(back.feature_names == d.feature_names);
        for (std::size_t i = 0; i < d.rows.size(); ++i) {
            CHECK(back.rows[i].id == d.rows[i].id);
            CHECK(back.rows[i].label == d.rows[i].label);
            CHECK(back.rows[i].values == d.rows[i].values);
        }
    }
}

TEST_CASE("stratified folds spread a 10 percent minority one per bin") {
    Rng rng(7);
    const Dataset d = random_counts_dataset(rng, 100, 3, 10);
    const FoldAssignment fa = split_folds(d, 10, 7);
    REQUIRE(fa.bins.size() == 10);
    for (const auto& bin : fa.bins) {
        CHECK(bin.size() == 10);
        std::size_t sbr = 0;
        for (std::size_t i : bin) sbr += (d.rows[i].label == Label::sbr);
        CHECK(sbr == 1);
    }
}

TEST_CASE("single bin equals the dataset") {
    Rng rng(3);
    const Dataset d = random_counts_dataset(rng, 17, 2, 4);
    const FoldAssignment fa = split_folds(d, 1, 5);
    REQUIRE(fa.bins.size() == 1);
    CHECK(fa.bins[0].size() == d.rows.size());
}

TEST_CASE("fold assignment is deterministic per seed") {
    Rng rng(11);
    const Dataset d = random_counts_dataset(rng, 53, 2, 9);
    const FoldAssignment a = split_folds(d, 10, 42);
    const FoldAssignment b = split_folds(d, 10, 42);
    CHECK(a.bins == b.bins);
    const FoldAssignment c = split_folds(d, 10, 43);
    CHECK(a.bins != c.bins);
}

TEST_CASE("folds partition the rows with balanced sizes") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const auto rows = static_cast<std::size_t>(rng.uniform_int(12, 120));
        const auto sbr = static_cast<std::size_t>(
            rng.uniform_int(1, static_cast<int>(rows) - 1));
        const Dataset d = random_counts_dataset(rng, rows, 2, sbr);
        const auto bins = static_cast<std::size_t>(
            rng.uniform_int(2, static_cast<int>(std::min<std::size_t>(rows, 10))));
        const FoldAssignment fa = split_folds(d, bins, rng.next());

        std::set<std::size_t> seen;
        std::size_t min_size = rows, max_size = 0, min_sbr = rows, max_sbr = 0;
        for (const auto& bin : fa.bins) {
            std::size_t bin_sbr = 0;
            for (std::size_t i : bin) {
                CHECK(seen.insert(i).second);  // disjoint
                bin_sbr += (d.rows[i].label == Label::sbr);
            }
            min_size = std::min(min_size, bin.size());
            max_size = std::max(max_size, bin.size());
            min_sbr = std::min(min_sbr, bin_sbr);
            max_sbr = std::max(max_sbr, bin_sbr);
        }
        CHECK(seen.size() == rows);  // exhaustive
        CHECK(max_size - min_size <= 1);
        CHECK(max_sbr - min_sbr <= 1);  // stratification tolerance
    }
}

TEST_CASE("row order never shifts per-fold class counts beyond tolerance") {
    Rng rng(5);
    Dataset d = random_counts_dataset(rng, 60, 2, 12);
    const FoldAssignment fa = split_folds(d, 10, 1);
    Dataset shuffled = d;
    Rng perm(6);
    perm.shuffle(shuffled.rows);
    const FoldAssignment fb = split_folds(shuffled, 10, 1);
    for (std::size_t b = 0; b < 10; ++b) {
        std::size_t ca = 0, cb = 0;
        for (std::size_t i : fa.bins[b]) ca += (d.rows[i].label == Label::sbr);
        for (std::size_t i : fb.bins[b]) cb += (shuffled.rows[i].label == Label::sbr);
        CHECK(ca >= 1);
        CHECK(cb >= 1);
        CHECK(ca <= 2);
        CHECK(cb <= 2);
    }
}

TEST_CASE("stratification refuses a missing class") {
    Dataset d;
    d.feature_names = {"w0"};
    for (int i = 0; i < 6; ++i) d.rows.push_back({"r" + std::to_string(i), {1.0}, Label::nsbr});
    CHECK_THROWS_WITH(split_folds(d, 2, 1), Catch::Matchers::ContainsSubstring("stratify"));
    CHECK_THROWS(split_folds(d, 7, 1));  // more bins than rows
}
