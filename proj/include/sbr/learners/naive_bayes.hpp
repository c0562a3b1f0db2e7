// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "sbr/learners/common.hpp"

namespace sbr::learn {

/// Gaussian naive Bayes: per-class, per-feature mean and variance with a
/// variance floor of var_smoothing times the largest overall feature
/// variance.
struct NaiveBayesModel {
    double log_prior[2] = {0, 0};
    std::vector<double> mean[2];
    std::vector<double> var[2];

    double log_joint(const double* row, std::size_t d, int cls) const {
        double acc = log_prior[cls];
        for (std::size_t j = 0; j < d; ++j) {
            const double v = var[cls][j];
            const double diff = row[j] - mean[cls][j];
            acc += -0.5 * std::log(2.0 * M_PI * v) - diff * diff / (2.0 * v);
        }
        return acc;
    }

    bool predict_sbr(const double* row, std::size_t d) const {
        return log_joint(row, d, 1) >= log_joint(row, d, 0);
    }
};

inline NaiveBayesModel train_naive_bayes(const TrainMatrix& m, double var_smoothing) {
    require_both_classes(m);
    NaiveBayesModel model;
    const std::size_t counts[2] = {m.n - m.count_sbr(), m.count_sbr()};
    for (int c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(m.n));
        model.mean[c].assign(m.d, 0.0);
        model.var[c].assign(m.d, 0.0);
    }
    for (std::size_t i = 0; i < m.n; ++i) {
        const int c = m.y[i];
        for (std::size_t j = 0; j < m.d; ++j) model.mean[c][j] += m.x[i * m.d + j];
    }
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < m.d; ++j) model.mean[c][j] /= static_cast<double>(counts[c]);
    for (std::size_t i = 0; i < m.n; ++i) {
        const int c = m.y[i];
        for (std::size_t j = 0; j < m.d; ++j) {
            const double diff = m.x[i * m.d + j] - model.mean[c][j];
            model.var[c][j] += diff * diff;
        }
    }

    // Smoothing scale: largest per-feature variance over the whole matrix.
    std::vector<double> overall_mean(m.d, 0.0), overall_var(m.d, 0.0);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.d; ++j) overall_mean[j] += m.x[i * m.d + j];
    for (double& v : overall_mean) v /= static_cast<double>(m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.d; ++j) {
            const double diff = m.x[i * m.d + j] - overall_mean[j];
            overall_var[j] += diff * diff;
        }
    double max_var = 0.0;
    for (double v : overall_var) max_var = std::max(max_var, v / static_cast<double>(m.n));
    const double epsilon = var_smoothing * max_var;

    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < m.d; ++j) {
            double v = model.var[c][j] / static_cast<double>(counts[c]) + epsilon;
            if (v <= 0) v = 1e-12;
            model.var[c][j] = v;
        }
    return model;
}

}  // namespace sbr::learn
