// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "sbr/rng.hpp"
#include "sbr/util.hpp"

namespace sbr {

/// Vargha-Delaney effect size: probability that a value drawn from M
/// exceeds one drawn from N, ties counting half. Rank-based, O((m+n)log).
inline double a12(const std::vector<double>& m_sample, const std::vector<double>& n_sample) {
    if (m_sample.empty() || n_sample.empty()) fail("a12: empty sample");
    struct Tagged {
        double v;
        int from_m;
    };
    std::vector<Tagged> all;
    all.reserve(m_sample.size() + n_sample.size());
    for (double v : m_sample) all.push_back({v, 1});
    for (double v : n_sample) all.push_back({v, 0});
    std::stable_sort(all.begin(), all.end(),
                     [](const Tagged& a, const Tagged& b) { return a.v < b.v; });

    // mid-ranks over tie runs
    double rank_sum_m = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].v == all[i].v) ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].from_m) rank_sum_m += mid_rank;
        i = j;
    }
    const double m = static_cast<double>(m_sample.size());
    const double n = static_cast<double>(n_sample.size());
    return (rank_sum_m / m - (m + 1.0) / 2.0) / n;
}

/// Two-sided bootstrap test of mean difference under the pooled null.
/// Returns true when the observed difference is significant at 95%.
inline bool bootstrap_test(const std::vector<double>& m_sample,
                           const std::vector<double>& n_sample, std::size_t iterations,
                           std::uint64_t seed) {
    if (m_sample.empty() || n_sample.empty()) fail("bootstrap_test: empty sample");
    if (iterations == 0) fail("bootstrap_test: iterations must be positive");
    const auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const double observed = std::abs(mean(m_sample) - mean(n_sample));

    std::vector<double> pooled;
    pooled.reserve(m_sample.size() + n_sample.size());
    pooled.insert(pooled.end(), m_sample.begin(), m_sample.end());
    pooled.insert(pooled.end(), n_sample.begin(), n_sample.end());

    Rng rng(hash_mix(seed, "bootstrap"));
    std::size_t at_least = 0;
    for (std::size_t it = 0; it < iterations; ++it) {
        double sum_m = 0.0, sum_n = 0.0;
        for (std::size_t k = 0; k < m_sample.size(); ++k) sum_m += pooled[rng.index(pooled.size())];
        for (std::size_t k = 0; k < n_sample.size(); ++k) sum_n += pooled[rng.index(pooled.size())];
        const double delta = std::abs(sum_m / static_cast<double>(m_sample.size()) -
                                      sum_n / static_cast<double>(n_sample.size()));
        if (delta >= observed) ++at_least;
    }
    const double p = (1.0 + static_cast<double>(at_least)) /
                     (1.0 + static_cast<double>(iterations));
    return p <= 0.05;
}

/// Expected gain of splitting l at `split`:
/// E(delta) = (ms/ls)|mean(m)-mean(l)|^2 + (ns/ls)|mean(n)-mean(l)|^2
/// with m = l[0..split), n = l[split..).
inline double sk_gain(const std::vector<double>& l, std::size_t split) {
    if (split == 0 || split >= l.size()) fail("sk_gain: split out of range");
    const double ls = static_cast<double>(l.size());
    const double ms = static_cast<double>(split);
    const double ns = ls - ms;
    const double total = std::accumulate(l.begin(), l.end(), 0.0);
    const double sum_m = std::accumulate(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(split), 0.0);
    const double mu_l = total / ls;
    const double mu_m = sum_m / ms;
    const double mu_n = (total - sum_m) / ns;
    return (ms / ls) * (mu_m - mu_l) * (mu_m - mu_l) + (ns / ls) * (mu_n - mu_l) * (mu_n - mu_l);
}

struct RankedGroup {
    std::string label;
    std::vector<double> samples;
    std::size_t rank = 0;  // 1 = best (highest median)
};

using RankTable = std::vector<RankedGroup>;

struct ScottKnottOptions {
    std::size_t bootstrap_iterations = 1000;
    double a12_threshold = 0.6;
};

namespace detail {

struct SkGroup {
    std::string label;
    std::vector<double> samples;
    double median;
};

inline void sk_recurse(std::vector<SkGroup>& groups, std::size_t lo, std::size_t hi,
                       std::size_t& next_rank, std::uint64_t seed,
                       const ScottKnottOptions& opt, RankTable& out) {
    if (hi - lo == 1) {
        out.push_back({groups[lo].label, groups[lo].samples, next_rank++});
        return;
    }
    // best split between adjacent groups by expected gain
    std::vector<double> concat;
    std::vector<std::size_t> boundaries;  // concat offsets at group edges
    for (std::size_t gi = lo; gi < hi; ++gi) {
        concat.insert(concat.end(), groups[gi].samples.begin(), groups[gi].samples.end());
        boundaries.push_back(concat.size());
    }
    double best_gain = -1.0;
    std::size_t best_group_split = lo;  // split before this group index + 1
    for (std::size_t gi = 0; gi + 1 < hi - lo; ++gi) {
        const double gain = sk_gain(concat, boundaries[gi]);
        if (gain > best_gain) {
            best_gain = gain;
            best_group_split = lo + gi + 1;
        }
    }

    std::vector<double> high_side, low_side;
    for (std::size_t gi = lo; gi < best_group_split; ++gi)
        high_side.insert(high_side.end(), groups[gi].samples.begin(), groups[gi].samples.end());
    for (std::size_t gi = best_group_split; gi < hi; ++gi)
        low_side.insert(low_side.end(), groups[gi].samples.begin(), groups[gi].samples.end());

    const std::uint64_t split_seed = hash_mix(hash_mix(seed, lo), hi);
    const bool significant =
        bootstrap_test(high_side, low_side, opt.bootstrap_iterations, split_seed) &&
        a12(high_side, low_side) >= opt.a12_threshold;

    if (!significant) {
        const std::size_t rank = next_rank++;
        for (std::size_t gi = lo; gi < hi; ++gi)
            out.push_back({groups[gi].label, groups[gi].samples, rank});
        return;
    }
    sk_recurse(groups, lo, best_group_split, next_rank, seed, opt, out);
    sk_recurse(groups, best_group_split, hi, next_rank, seed, opt, out);
}

}  // namespace detail

/// Scott-Knott ranking: order groups by median (descending), find the
/// max-gain split, and recurse on each side only when both the bootstrap
/// test and the A12 effect size agree that the division is real. Groups
/// sharing a rank are statistically indistinguishable; rank 1 is best.
inline RankTable scott_knott(const std::map<std::string, std::vector<double>>& groups,
                             std::uint64_t seed, const ScottKnottOptions& opt = {}) {
    if (groups.empty()) fail("scott_knott: no groups");
    std::vector<detail::SkGroup> work;
    work.reserve(groups.size());
    for (const auto& [label, samples] : groups) {
        if (samples.empty()) fail("scott_knott: group '" + label + "' is empty");
        work.push_back({label, samples, median_of(samples)});
    }
    std::sort(work.begin(), work.end(), [](const detail::SkGroup& a, const detail::SkGroup& b) {
        if (a.median != b.median) return a.median > b.median;
        if (a.samples != b.samples) return a.samples > b.samples;
        return a.label < b.label;
    });
    RankTable out;
    std::size_t next_rank = 1;
    detail::sk_recurse(work, 0, work.size(), next_rank, seed, opt, out);
    return out;
}

}  // namespace sbr
