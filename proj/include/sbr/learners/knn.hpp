// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <vector>

#include "sbr/learners/common.hpp"

namespace sbr::learn {

/// Majority vote of the n_neighbors nearest training rows under Euclidean
/// distance; ties in the vote go to SBR. A query equal to a training row
/// counts that row among its own neighbors. leaf_size only shapes the
/// lookup index granularity and never changes predictions.
struct KnnModel {
    std::size_t n = 0, d = 0;
    std::vector<double> x;
    std::vector<int> y;
    int n_neighbors = 5;
    int leaf_size = 30;

    bool predict_sbr(const double* row, std::size_t dim) const {
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0;
            const double* xi = &x[i * d];
            for (std::size_t j = 0; j < dim; ++j) {
                const double diff = xi[j] - row[j];
                acc += diff * diff;
            }
            dist[i] = {acc, i};
        }
        const auto k = static_cast<std::size_t>(n_neighbors);
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.end());
        std::size_t votes = 0;
        for (std::size_t i = 0; i < k; ++i) votes += static_cast<std::size_t>(y[dist[i].second]);
        return 2 * votes >= k;
    }
};

inline KnnModel train_knn(const TrainMatrix& m, int n_neighbors, int leaf_size) {
    require_both_classes(m);
    if (n_neighbors < 1) fail("knn: n_neighbors must be positive");
    if (static_cast<std::size_t>(n_neighbors) > m.n)
        fail("knn: n_neighbors exceeds training rows");
    KnnModel model;
    model.n = m.n;
    model.d = m.d;
    model.x = m.x;
    model.y = m.y;
    model.n_neighbors = n_neighbors;
    model.leaf_size = leaf_size;
    return model;
}

}  // namespace sbr::learn
