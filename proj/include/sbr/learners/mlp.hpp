// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "sbr/learners/common.hpp"
#include "sbr/learners/logistic.hpp"  // sigmoid
#include "sbr/rng.hpp"

namespace sbr::learn {

struct MlpParams {
    double alpha = 1e-4;               // L2 penalty
    double learning_rate_init = 1e-3;
    double power_t = 0.5;              // inverse-scaling exponent
    int max_iter = 200;                // epochs
    double momentum = 0.9;
    int n_iter_no_change = 10;         // early-stop patience on training loss
};

/// One hidden layer of 100 ReLU units with a logistic output, trained by
/// minibatch SGD with momentum and an inverse-scaling learning rate on
/// internally standardized features.
struct MlpModel {
    static constexpr std::size_t hidden = 100;

    Standardizer scaler;
    std::size_t d = 0;
    std::vector<double> w1;  // hidden x d
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // hidden
    double b2 = 0.0;
    int epochs_run = 0;

    double forward(const double* scaled_row, std::vector<double>* hidden_out = nullptr) const {
        double z = b2;
        for (std::size_t h = 0; h < hidden; ++h) {
            double a = b1[h];
            const double* wrow = &w1[h * d];
            for (std::size_t j = 0; j < d; ++j) a += wrow[j] * scaled_row[j];
            if (a < 0) a = 0;  // ReLU
            if (hidden_out) (*hidden_out)[h] = a;
            z += w2[h] * a;
        }
        return sigmoid(z);
    }

    double probability(const double* row, std::size_t dim) const {
        auto v = scaler.transformed(row, dim);
        return forward(v.data());
    }

    bool predict_sbr(const double* row, std::size_t dim) const {
        return probability(row, dim) >= 0.5;
    }
};

namespace detail {

inline double bce(double p, int y) {
    const double eps = 1e-12;
    return y ? -std::log(std::max(p, eps)) : -std::log(std::max(1.0 - p, eps));
}

}  // namespace detail

inline MlpModel train_mlp(const TrainMatrix& m, const MlpParams& p, std::uint64_t seed) {
    require_both_classes(m);
    if (p.max_iter < 1) fail("mlp: max_iter must be positive");

    MlpModel model;
    model.d = m.d;
    model.scaler = Standardizer::fit(m);
    const std::size_t H = MlpModel::hidden;

    std::vector<double> xs(m.x);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.d; ++j)
            xs[i * m.d + j] = (m.x[i * m.d + j] - model.scaler.mean[j]) / model.scaler.scale[j];

    Rng rng(hash_mix(seed, "mlp"));
    const double limit1 = std::sqrt(6.0 / static_cast<double>(m.d + H));
    const double limit2 = std::sqrt(6.0 / static_cast<double>(H + 1));
    model.w1.resize(H * m.d);
    model.b1.assign(H, 0.0);
    model.w2.resize(H);
    for (auto& w : model.w1) w = rng.uniform(-limit1, limit1);
    for (auto& w : model.w2) w = rng.uniform(-limit2, limit2);

    std::vector<double> v1(H * m.d, 0.0), vb1(H, 0.0), v2(H, 0.0);
    double vb2 = 0.0;
    std::vector<double> g1(H * m.d), gb1(H), g2(H);
    std::vector<double> act(H), delta_h(H);
    std::vector<std::size_t> order(m.n);
    std::iota(order.begin(), order.end(), 0);

    const std::size_t batch = std::min<std::size_t>(200, m.n);
    const double inv_n = 1.0 / static_cast<double>(m.n);
    double best_loss = std::numeric_limits<double>::infinity();
    int stall = 0;
    const double tol = 1e-4;

    for (int epoch = 1; epoch <= p.max_iter; ++epoch) {
        const double lr = p.learning_rate_init / std::pow(static_cast<double>(epoch), p.power_t);
        rng.shuffle(order);
        double loss = 0.0;

        for (std::size_t start = 0; start < m.n; start += batch) {
            const std::size_t stop = std::min(start + batch, m.n);
            const double inv_b = 1.0 / static_cast<double>(stop - start);
            std::fill(g1.begin(), g1.end(), 0.0);
            std::fill(gb1.begin(), gb1.end(), 0.0);
            std::fill(g2.begin(), g2.end(), 0.0);
            double gb2 = 0.0;

            for (std::size_t bi = start; bi < stop; ++bi) {
                const std::size_t i = order[bi];
                const double* xi = &xs[i * m.d];
                const double prob = model.forward(xi, &act);
                loss += detail::bce(prob, m.y[i]);
                const double dout = prob - m.y[i];
                gb2 += dout;
                for (std::size_t h = 0; h < H; ++h) {
                    g2[h] += dout * act[h];
                    delta_h[h] = act[h] > 0 ? dout * model.w2[h] : 0.0;
                    gb1[h] += delta_h[h];
                }
                for (std::size_t h = 0; h < H; ++h) {
                    if (delta_h[h] == 0.0) continue;
                    double* grow = &g1[h * m.d];
                    const double dh = delta_h[h];
                    for (std::size_t j = 0; j < m.d; ++j) grow[j] += dh * xi[j];
                }
            }

            // momentum update; L2 applies to weights only
            for (std::size_t k = 0; k < g1.size(); ++k) {
                v1[k] = p.momentum * v1[k] - lr * (g1[k] * inv_b + p.alpha * model.w1[k] * inv_n);
                model.w1[k] += v1[k];
            }
            for (std::size_t h = 0; h < H; ++h) {
                vb1[h] = p.momentum * vb1[h] - lr * gb1[h] * inv_b;
                model.b1[h] += vb1[h];
                v2[h] = p.momentum * v2[h] - lr * (g2[h] * inv_b + p.alpha * model.w2[h] * inv_n);
                model.w2[h] += v2[h];
            }
            vb2 = p.momentum * vb2 - lr * gb2 * inv_b;
            model.b2 += vb2;
        }

        double reg = 0.0;
        for (double w : model.w1) reg += w * w;
        for (double w : model.w2) reg += w * w;
        loss = loss * inv_n + 0.5 * p.alpha * reg * inv_n;
        model.epochs_run = epoch;

        if (loss < best_loss - tol) {
            best_loss = loss;
            stall = 0;
        } else if (++stall >= p.n_iter_no_change) {
            break;
        }
    }
    return model;
}

}  // namespace sbr::learn
