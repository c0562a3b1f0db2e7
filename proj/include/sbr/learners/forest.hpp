// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <vector>

#include "sbr/learners/common.hpp"
#include "sbr/rng.hpp"

namespace sbr::learn {

struct ForestParams {
    int n_estimators = 10;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    int max_leaf_nodes = 0;   // 0 = unlimited
    double max_features = 0;  // fraction of columns per split; 0 = sqrt(d)/d
    int max_depth = 0;        // 0 = unlimited
};

struct TreeNode {
    int feature = -1;         // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double sbr_prob = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> bag_counts;  // per training row, draws in the bootstrap

    double probability(const double* row) const {
        int cur = 0;
        while (nodes[cur].feature >= 0)
            cur = row[nodes[cur].feature] <= nodes[cur].threshold ? nodes[cur].left
                                                                  : nodes[cur].right;
        return nodes[cur].sbr_prob;
    }
};

/// Bagged CART trees, gini split criterion, per-split feature subsampling.
struct ForestModel {
    std::vector<Tree> trees;

    double probability(const double* row) const {
        double acc = 0;
        for (const auto& t : trees) acc += t.probability(row);
        return acc / static_cast<double>(trees.size());
    }

    bool predict_sbr(const double* row, std::size_t) const { return probability(row) >= 0.5; }
};

namespace detail {

struct PendingNode {
    int node_index;
    std::vector<std::size_t> samples;  // indices into the bootstrap sample arrays
    int depth;
    // best split found for this node
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
    std::size_t order = 0;  // creation sequence, deterministic tie-break
};

struct PendingCompare {
    bool operator()(const PendingNode* a, const PendingNode* b) const {
        if (a->gain != b->gain) return a->gain < b->gain;
        return a->order > b->order;
    }
};

inline double gini(std::size_t pos, std::size_t total) {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<double>& x, const std::vector<int>& y, std::size_t dim,
                const ForestParams& p, Rng& rng)
        : x_(x), y_(y), d_(dim), p_(p), rng_(rng) {
        features_per_split_ = p.max_features > 0
                                  ? std::max<std::size_t>(
                                        1, static_cast<std::size_t>(std::llround(
                                               p.max_features * static_cast<double>(d_))))
                                  : std::max<std::size_t>(
                                        1, static_cast<std::size_t>(std::llround(
                                               std::sqrt(static_cast<double>(d_)))));
        features_per_split_ = std::min(features_per_split_, d_);
        feature_pool_.resize(d_);
        for (std::size_t j = 0; j < d_; ++j) feature_pool_[j] = j;
    }

    Tree build(std::vector<std::size_t> root_samples) {
        Tree tree;
        const std::size_t max_leaves =
            p_.max_leaf_nodes > 0 ? static_cast<std::size_t>(p_.max_leaf_nodes)
                                  : std::numeric_limits<std::size_t>::max();

        std::vector<std::unique_ptr<PendingNode>> storage;
        std::priority_queue<PendingNode*, std::vector<PendingNode*>, PendingCompare> frontier;

        tree.nodes.push_back(make_leaf(root_samples));
        storage.push_back(make_pending(tree, 0, std::move(root_samples), 0));
        if (storage.back()->feature >= 0) frontier.push(storage.back().get());

        std::size_t leaves = 1;
        while (!frontier.empty() && leaves < max_leaves) {
            PendingNode* cur = frontier.top();
            frontier.pop();

            std::vector<std::size_t> left_samples, right_samples;
            for (std::size_t s : cur->samples) {
                (value(s, cur->feature) <= cur->threshold ? left_samples : right_samples)
                    .push_back(s);
            }
            auto& node = tree.nodes[cur->node_index];
            node.feature = cur->feature;
            node.threshold = cur->threshold;
            node.left = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(make_leaf(left_samples));
            node.right = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(make_leaf(right_samples));
            ++leaves;

            const int child_depth = cur->depth + 1;
            storage.push_back(
                make_pending(tree, tree.nodes[cur->node_index].left, std::move(left_samples),
                             child_depth));
            if (storage.back()->feature >= 0) frontier.push(storage.back().get());
            storage.push_back(
                make_pending(tree, tree.nodes[cur->node_index].right, std::move(right_samples),
                             child_depth));
            if (storage.back()->feature >= 0) frontier.push(storage.back().get());
        }
        return tree;
    }

private:
    double value(std::size_t sample, int feature) const {
        return x_[sample * d_ + static_cast<std::size_t>(feature)];
    }

    TreeNode make_leaf(const std::vector<std::size_t>& samples) const {
        TreeNode n;
        std::size_t pos = 0;
        for (std::size_t s : samples) pos += static_cast<std::size_t>(y_[s]);
        n.sbr_prob = samples.empty()
                         ? 0.0
                         : static_cast<double>(pos) / static_cast<double>(samples.size());
        return n;
    }

    std::unique_ptr<PendingNode> make_pending(Tree&, int node_index,
                                              std::vector<std::size_t> samples, int depth) {
        auto pending = std::make_unique<PendingNode>();
        pending->node_index = node_index;
        pending->depth = depth;
        pending->order = next_order_++;
        pending->samples = std::move(samples);
        find_best_split(*pending);
        return pending;
    }

    void find_best_split(PendingNode& node) {
        const auto& samples = node.samples;
        const std::size_t m = samples.size();
        if (m < static_cast<std::size_t>(std::max(p_.min_samples_split, 2))) return;
        if (p_.max_depth > 0 && node.depth >= p_.max_depth) return;
        std::size_t pos = 0;
        for (std::size_t s : samples) pos += static_cast<std::size_t>(y_[s]);
        if (pos == 0 || pos == m) return;  // pure node

        // Sample the feature subset for this split (partial Fisher-Yates).
        for (std::size_t i = 0; i < features_per_split_; ++i) {
            const std::size_t j = i + rng_.index(d_ - i);
            std::swap(feature_pool_[i], feature_pool_[j]);
        }

        const double parent_gini = gini(pos, m);
        const auto min_leaf = static_cast<std::size_t>(p_.min_samples_leaf);
        std::vector<std::pair<double, int>> column(m);

        for (std::size_t fi = 0; fi < features_per_split_; ++fi) {
            const int feature = static_cast<int>(feature_pool_[fi]);
            for (std::size_t i = 0; i < m; ++i)
                column[i] = {value(samples[i], feature), y_[samples[i]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;

            std::size_t left_pos = 0;
            for (std::size_t i = 0; i + 1 < m; ++i) {
                left_pos += static_cast<std::size_t>(column[i].second);
                if (column[i].first == column[i + 1].first) continue;
                const std::size_t nl = i + 1, nr = m - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double wl = static_cast<double>(nl) / static_cast<double>(m);
                const double wr = 1.0 - wl;
                const double split_gini =
                    wl * gini(left_pos, nl) + wr * gini(pos - left_pos, nr);
                const double gain =
                    (parent_gini - split_gini) * static_cast<double>(m);
                if (gain > node.gain + 1e-15) {
                    node.gain = gain;
                    node.feature = feature;
                    node.threshold =
                        column[i].first + 0.5 * (column[i + 1].first - column[i].first);
                }
            }
        }
        if (node.gain <= 1e-12) node.feature = -1;  // no useful split
    }

    const std::vector<double>& x_;
    const std::vector<int>& y_;
    std::size_t d_;
    ForestParams p_;
    Rng& rng_;
    std::size_t features_per_split_ = 1;
    std::vector<std::size_t> feature_pool_;
    std::size_t next_order_ = 0;
};

}  // namespace detail

inline ForestModel train_forest(const TrainMatrix& m, const ForestParams& p, std::uint64_t seed) {
    require_both_classes(m);
    if (p.n_estimators < 1) fail("random forest: n_estimators must be positive");
    ForestModel model;
    model.trees.reserve(static_cast<std::size_t>(p.n_estimators));
    for (int t = 0; t < p.n_estimators; ++t) {
        Rng rng(hash_mix(hash_mix(seed, "tree"), static_cast<std::uint64_t>(t)));
        // Bootstrap: exactly n draws with replacement.
        std::vector<std::size_t> bag(m.n);
        std::vector<std::size_t> counts(m.n, 0);
        for (std::size_t i = 0; i < m.n; ++i) {
            bag[i] = rng.index(m.n);
            ++counts[bag[i]];
        }
        std::sort(bag.begin(), bag.end());
        detail::TreeBuilder builder(m.x, m.y, m.d, p, rng);
        Tree tree = builder.build(std::move(bag));
        tree.bag_counts = std::move(counts);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

}  // namespace sbr::learn
