// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sbr/corpus.hpp"
#include "sbr/rng.hpp"

namespace sbr {

/// Shape of one synthetic bug-report project: heavy class imbalance, a
/// small pool of security terms that dominates SBRs, and a trickle of the
/// same terms inside ordinary reports (the cross words that make pruning
/// worthwhile). A slice of NSBRs is generated from the SBR token model to
/// stand in for mislabeled or noisy reports.
struct ProjectProfile {
    std::string name;
    std::size_t train_rows = 300;
    std::size_t test_rows = 150;
    double sbr_rate = 0.05;
    double security_rate_sbr = 0.30;   // per-token probability inside SBRs
    double security_rate_nsbr = 0.03;  // cross-word rate inside NSBRs
    double noisy_nsbr_rate = 0.04;     // NSBRs drawn from the SBR token model
};

/// Desk-scale stand-ins for the five study projects, keeping their relative
/// size and imbalance ordering.
inline std::vector<ProjectProfile> default_profiles() {
    return {
        {"chromium", 1200, 600, 0.010, 0.30, 0.030, 0.03},
        {"wicket", 350, 175, 0.024, 0.30, 0.030, 0.04},
        {"ambari", 350, 175, 0.046, 0.30, 0.030, 0.04},
        {"camel", 350, 175, 0.030, 0.30, 0.030, 0.04},
        {"derby", 350, 175, 0.092, 0.30, 0.030, 0.04},
    };
}

namespace datagen {

inline const std::vector<std::string>& security_terms() {
    static const std::vector<std::string> terms = {
        "overflow", "injection", "xss", "csrf", "spoofing", "sandbox", "privilege",
        "escalation", "vulnerability", "exploit", "malicious", "attacker", "bypass",
        "certificate", "crypto", "password", "leak", "corruption", "overread",
        "fuzzer", "heap", "traversal", "unauthorized", "hijack",
    };
    return terms;
}

inline const std::vector<std::string>& generic_terms() {
    static const std::vector<std::string> terms = {
        "crash",     "null",     "pointer",  "thread",    "deadlock", "button",
        "render",    "build",    "compile",  "warning",   "timeout",  "network",
        "socket",    "parse",    "file",     "upload",    "memory",   "cache",
        "query",     "database", "index",    "config",    "install",  "upgrade",
        "layout",    "font",     "scroll",   "click",     "drag",     "menu",
        "tab",       "window",   "dialog",   "print",     "export",   "import",
        "sync",      "refresh",  "startup",  "shutdown",  "plugin",   "widget",
        "toolbar",   "panel",    "page",     "link",      "image",    "video",
        "audio",     "search",   "filter",   "sort",      "column",   "row",
        "cell",      "editor",   "viewer",   "console",   "logging",  "metric",
        "request",   "response", "header",   "payload",   "session",  "cursor",
        "selection", "clipboard", "keyboard", "mouse",    "focus",    "resize",
        "animation", "theme",    "style",    "locale",    "translation", "format",
        "version",   "release",  "branch",   "merge",     "commit",   "patch",
        "regression", "unit",    "integration", "fixture", "mock",    "assertion",
        "exception", "stack",    "trace",    "handler",   "listener", "callback",
        "scheduler", "worker",   "queue",    "buffer",    "stream",   "channel",
        "parser",    "lexer",    "compiler", "linker",    "loader",   "runtime",
        "garbage",   "collector", "allocation", "fragmentation", "latency", "throughput",
        "bandwidth", "protocol", "endpoint", "routing",   "proxy",    "gateway",
        "cluster",   "replica",  "shard",    "partition", "snapshot", "backup",
        "restore",   "migration", "schema",  "table",     "transaction", "rollback",
        "timestamp", "timezone", "calendar", "duration",  "interval", "counter",
    };
    return terms;
}

/// Zipf-flavored pick: low indices dominate, so the frequent terms recur
/// across many reports.
class WeightedPool {
public:
    explicit WeightedPool(const std::vector<std::string>& terms) : terms_(terms) {
        cumulative_.reserve(terms.size());
        double acc = 0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            acc += 1.0 / std::pow(static_cast<double>(i + 1), 0.7);
            cumulative_.push_back(acc);
        }
    }

    const std::string& pick(Rng& rng) const {
        const double u = rng.uniform(0.0, cumulative_.back());
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return terms_[static_cast<std::size_t>(it - cumulative_.begin())];
    }

private:
    const std::vector<std::string>& terms_;
    std::vector<double> cumulative_;
};

inline std::string make_text(Rng& rng, double security_rate) {
    static const WeightedPool sec_pool(security_terms());
    static const WeightedPool gen_pool(generic_terms());
    const std::size_t len = static_cast<std::size_t>(rng.uniform_int(8, 22));
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
        if (i) text += ' ';
        text += rng.coin(security_rate) ? sec_pool.pick(rng) : gen_pool.pick(rng);
    }
    return text;
}

inline Corpus make_corpus(const ProjectProfile& p, std::size_t rows, const std::string& tag,
                          Rng& rng) {
    Corpus corpus;
    corpus.project = p.name;
    const auto sbr_target =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(p.sbr_rate * rows)));
    for (std::size_t i = 0; i < rows; ++i) {
        BugReport r;
        char idbuf[64];
        std::snprintf(idbuf, sizeof(idbuf), "%s-%s-%05zu", p.name.c_str(), tag.c_str(), i);
        r.id = idbuf;
        const bool is_sbr = i < sbr_target;
        if (is_sbr) {
            r.label = Label::sbr;
            r.text = make_text(rng, p.security_rate_sbr);
        } else {
            r.label = Label::nsbr;
            const bool noisy = rng.coin(p.noisy_nsbr_rate);
            r.text = make_text(rng, noisy ? p.security_rate_sbr : p.security_rate_nsbr);
        }
        corpus.reports.push_back(std::move(r));
    }
    // deterministic interleave so class order carries no signal
    Rng shuffle_rng(rng.fork("shuffle").next());
    shuffle_rng.shuffle(corpus.reports);
    return corpus;
}

}  // namespace datagen

struct GeneratedProject {
    Corpus train;
    Corpus test;
};

inline GeneratedProject generate_project(const ProjectProfile& profile, std::uint64_t seed) {
    Rng train_rng(hash_mix(hash_mix(seed, profile.name), "train"));
    Rng test_rng(hash_mix(hash_mix(seed, profile.name), "test"));
    GeneratedProject out;
    out.train = datagen::make_corpus(profile, profile.train_rows, "t", train_rng);
    out.test = datagen::make_corpus(profile, profile.test_rows, "s", test_rng);
    return out;
}

/// Write a corpus as JSON lines (id, summary, description, security).
inline void save_reports_jsonl(const Corpus& corpus, const std::string& path) {
    std::string out;
    for (const auto& r : corpus.reports) {
        nlohmann::json j;
        j["id"] = r.id;
        const auto cut = r.text.find(' ', r.text.size() / 3);
        if (cut == std::string::npos) {
            j["summary"] = r.text;
            j["description"] = "";
        } else {
            j["summary"] = r.text.substr(0, cut);
            j["description"] = r.text.substr(cut + 1);
        }
        j["security"] = r.label == Label::sbr ? 1 : 0;
        out += j.dump();
        out += '\n';
    }
    write_file(path, out);
}

}  // namespace sbr
