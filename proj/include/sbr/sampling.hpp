// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sbr/corpus.hpp"
#include "sbr/rng.hpp"

namespace sbr {

struct SmoteParams {
    int k = 5;   // neighbors, [1,20]
    int m = 50;  // per-class target as percent of pre-sampling size, [50,400]
    int r = 2;   // Minkowski power, [1,6]
};

/// What m is a percentage of: the pre-sampling training size (default), or
/// the minority share of the final data (m >= 100 then means full balance).
enum class SmoteBasis { pre, post };

/// (sum |a_i - b_i|^r)^(1/r)
inline double minkowski(const std::vector<double>& a, const std::vector<double>& b, double r) {
    if (a.size() != b.size()) fail("minkowski: dimension mismatch");
    if (r <= 0) fail("minkowski: power must be positive");
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), r);
    return std::pow(acc, 1.0 / r);
}

/// Same-class neighbors of x0, found by widening the all-class neighbor
/// horizon k1 = 1..20 until at least k same-class rows are inside it.
/// Returns the indices of those rows in d (x0 itself excluded); may return
/// fewer than k when the class is small.
inline std::vector<std::size_t> nearest_same_class(const Dataset& d, std::size_t x0, int k,
                                                   double r) {
    if (x0 >= d.rows.size()) fail("nearest_same_class: row out of range");
    const auto& ref = d.rows[x0];
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(d.rows.size() - 1);
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        if (i == x0) continue;
        dist.emplace_back(minkowski(ref.values, d.rows[i].values, r), i);
    }
    std::sort(dist.begin(), dist.end());

    std::vector<std::size_t> relevant;
    for (int k1 = 1; k1 <= 20 && static_cast<int>(relevant.size()) < k; ++k1) {
        if (static_cast<std::size_t>(k1) > dist.size()) break;
        const std::size_t idx = dist[static_cast<std::size_t>(k1) - 1].second;
        if (d.rows[idx].label == ref.label) relevant.push_back(idx);
    }
    return relevant;
}

/// Random point on the segment between two same-class rows.
inline DataRow synthesize(const DataRow& x0, const DataRow& z, Rng& rng) {
    if (x0.label != z.label) fail("synthesize: rows of different classes");
    if (x0.values.size() != z.values.size()) fail("synthesize: dimension mismatch");
    const double t = rng.uniform();
    DataRow y;
    y.label = x0.label;
    y.values.resize(x0.values.size());
    for (std::size_t i = 0; i < x0.values.size(); ++i)
        y.values[i] = x0.values[i] + t * (z.values[i] - x0.values[i]);
    return y;
}

/// Hybrid over/under-sampling. The per-class target is
/// T = round(m/100 * |d|); the majority class is uniformly down-sampled to
/// T and the minority class grown to T with synthetic rows interpolated
/// between same-class neighbors. Original minority rows all survive.
/// Training data only.
inline Dataset smote(const Dataset& d, const SmoteParams& p, Rng& rng,
                     SmoteBasis basis = SmoteBasis::pre) {
    if (d.provenance.role == DataRole::test) fail("smote must not touch test data");
    const std::size_t n_sbr = d.count(Label::sbr);
    const std::size_t n_nsbr = d.rows.size() - n_sbr;
    if (n_sbr == 0 || n_nsbr == 0) fail("smote needs both classes present");
    const Label minority = n_sbr <= n_nsbr ? Label::sbr : Label::nsbr;
    const std::size_t n_minority = std::min(n_sbr, n_nsbr);
    const std::size_t n_majority = std::max(n_sbr, n_nsbr);
    std::size_t target;
    if (basis == SmoteBasis::pre) {
        target = static_cast<std::size_t>(
            std::llround(p.m / 100.0 * static_cast<double>(d.rows.size())));
    } else if (p.m >= 100) {
        target = n_majority;
    } else {
        target = static_cast<std::size_t>(std::llround(
            static_cast<double>(n_majority) * p.m / (100.0 - p.m)));
    }

    // Down-sample the majority uniformly without replacement.
    std::vector<std::size_t> majority_rows;
    majority_rows.reserve(n_majority);
    for (std::size_t i = 0; i < d.rows.size(); ++i)
        if (d.rows[i].label != minority) majority_rows.push_back(i);
    if (majority_rows.size() > target) {
        rng.shuffle(majority_rows);
        majority_rows.resize(target);
        std::sort(majority_rows.begin(), majority_rows.end());
    }

    Dataset out;
    out.feature_names = d.feature_names;
    out.provenance = d.provenance;
    std::vector<std::size_t> minority_rows;
    for (std::size_t i = 0; i < d.rows.size(); ++i)
        if (d.rows[i].label == minority) minority_rows.push_back(i);

    std::size_t mi = 0, gi = 0;
    while (mi < minority_rows.size() || gi < majority_rows.size()) {
        // interleave in original row order
        if (gi >= majority_rows.size() ||
            (mi < minority_rows.size() && minority_rows[mi] < majority_rows[gi]))
            out.rows.push_back(d.rows[minority_rows[mi++]]);
        else
            out.rows.push_back(d.rows[majority_rows[gi++]]);
    }

    // Minority dataset for neighbor search among originals only.
    Dataset minority_set;
    minority_set.feature_names = d.feature_names;
    minority_set.provenance = d.provenance;
    for (std::size_t i : minority_rows) minority_set.rows.push_back(d.rows[i]);

    std::size_t synth_count = 0;
    std::size_t cursor = 0;
    while (n_minority + synth_count < target) {
        const std::size_t x0 = cursor % minority_set.rows.size();
        ++cursor;
        const auto peers = nearest_same_class(minority_set, x0, p.k, static_cast<double>(p.r));
        DataRow y;
        if (peers.empty()) {
            // lone minority point: degenerate segment
            y = minority_set.rows[x0];
        } else {
            const std::size_t z = peers[rng.index(peers.size())];
            y = synthesize(minority_set.rows[x0], minority_set.rows[z], rng);
        }
        y.id = "syn" + std::to_string(synth_count);
        ++synth_count;
        out.rows.push_back(std::move(y));
    }
    return out;
}

}  // namespace sbr
