// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "sbr/learners/common.hpp"

namespace sbr::learn {

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// L2-regularized logistic regression fitted by batch gradient descent on
/// internally standardized features. Penalty strength is 1/C; the intercept
/// is left unpenalized.
struct LogisticModel {
    Standardizer scaler;
    std::vector<double> w;
    double b = 0.0;

    double probability(const double* row, std::size_t d) const {
        auto v = scaler.transformed(row, d);
        double z = b;
        for (std::size_t j = 0; j < d; ++j) z += w[j] * v[j];
        return sigmoid(z);
    }

    bool predict_sbr(const double* row, std::size_t d) const {
        return probability(row, d) >= 0.5;
    }
};

inline LogisticModel train_logistic(const TrainMatrix& m, double c_inv_reg, int max_iter) {
    require_both_classes(m);
    if (c_inv_reg <= 0) fail("logistic regression: C must be positive");
    if (max_iter < 1) fail("logistic regression: max_iter must be positive");

    LogisticModel model;
    model.scaler = Standardizer::fit(m);
    model.w.assign(m.d, 0.0);

    std::vector<double> xs(m.x);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.d; ++j)
            xs[i * m.d + j] = (m.x[i * m.d + j] - model.scaler.mean[j]) / model.scaler.scale[j];

    const double inv_n = 1.0 / static_cast<double>(m.n);
    const double lambda = 1.0 / (c_inv_reg * static_cast<double>(m.n));
    double mean_sq_norm = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < m.d; ++j) s += xs[i * m.d + j] * xs[i * m.d + j];
        mean_sq_norm += s;
    }
    mean_sq_norm *= inv_n;
    const double lipschitz = 0.25 * (mean_sq_norm + 1.0) + lambda;
    const double step = 1.0 / lipschitz;

    std::vector<double> grad(m.d);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < m.n; ++i) {
            double z = model.b;
            const double* xi = &xs[i * m.d];
            for (std::size_t j = 0; j < m.d; ++j) z += model.w[j] * xi[j];
            const double err = sigmoid(z) - m.y[i];
            for (std::size_t j = 0; j < m.d; ++j) grad[j] += err * xi[j];
            grad_b += err;
        }
        double norm_sq = 0.0;
        for (std::size_t j = 0; j < m.d; ++j) {
            grad[j] = grad[j] * inv_n + lambda * model.w[j];
            norm_sq += grad[j] * grad[j];
        }
        grad_b *= inv_n;
        norm_sq += grad_b * grad_b;
        if (std::sqrt(norm_sq) < 1e-6) break;
        for (std::size_t j = 0; j < m.d; ++j) model.w[j] -= step * grad[j];
        model.b -= step * grad_b;
    }
    return model;
}

}  // namespace sbr::learn
