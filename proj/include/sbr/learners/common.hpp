// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sbr/corpus.hpp"
#include "sbr/space.hpp"

namespace sbr {

enum class ClassifierKind { rf, nb, lr, mlp, knn };

inline const std::vector<ClassifierKind>& all_classifiers() {
    static const std::vector<ClassifierKind> kinds = {
        ClassifierKind::rf, ClassifierKind::nb, ClassifierKind::lr,
        ClassifierKind::mlp, ClassifierKind::knn,
    };
    return kinds;
}

inline const char* classifier_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::rf: return "RF";
        case ClassifierKind::nb: return "NB";
        case ClassifierKind::lr: return "LR";
        case ClassifierKind::mlp: return "MLP";
        case ClassifierKind::knn: return "KNN";
    }
    return "?";
}

inline ClassifierKind classifier_from_name(const std::string& name) {
    const std::string up = [&] {
        std::string s = name;
        for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }();
    for (ClassifierKind k : all_classifiers())
        if (up == classifier_name(k)) return k;
    fail("unknown learner: " + name);
}

namespace learn {

/// Flat row-major training matrix in canonical row order. Training is made
/// invariant to input row permutations by sorting rows on
/// (values, label, id) before any seed-controlled randomness is drawn.
struct TrainMatrix {
    std::size_t n = 0, d = 0;
    std::vector<double> x;  // n * d
    std::vector<int> y;     // 1 = SBR

    static TrainMatrix from(const Dataset& data) {
        TrainMatrix m;
        m.n = data.rows.size();
        m.d = data.feature_names.size();
        std::vector<std::size_t> order(m.n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& ra = data.rows[a];
            const auto& rb = data.rows[b];
            if (ra.values != rb.values) return ra.values < rb.values;
            if (ra.label != rb.label) return ra.label < rb.label;
            return ra.id < rb.id;
        });
        m.x.reserve(m.n * m.d);
        m.y.reserve(m.n);
        for (std::size_t i : order) {
            const auto& row = data.rows[i];
            m.x.insert(m.x.end(), row.values.begin(), row.values.end());
            m.y.push_back(row.label == Label::sbr ? 1 : 0);
        }
        return m;
    }

    const double* row(std::size_t i) const { return &x[i * d]; }

    std::size_t count_sbr() const {
        return static_cast<std::size_t>(std::accumulate(y.begin(), y.end(), 0));
    }
};

/// Per-feature z-scoring with training statistics; constant features pass
/// through unscaled.
struct Standardizer {
    std::vector<double> mean, scale;

    static Standardizer fit(const TrainMatrix& m) {
        Standardizer s;
        s.mean.assign(m.d, 0.0);
        s.scale.assign(m.d, 1.0);
        if (m.n == 0) return s;
        for (std::size_t i = 0; i < m.n; ++i)
            for (std::size_t j = 0; j < m.d; ++j) s.mean[j] += m.x[i * m.d + j];
        for (double& v : s.mean) v /= static_cast<double>(m.n);
        std::vector<double> var(m.d, 0.0);
        for (std::size_t i = 0; i < m.n; ++i)
            for (std::size_t j = 0; j < m.d; ++j) {
                const double dlt = m.x[i * m.d + j] - s.mean[j];
                var[j] += dlt * dlt;
            }
        for (std::size_t j = 0; j < m.d; ++j) {
            const double sd = std::sqrt(var[j] / static_cast<double>(m.n));
            s.scale[j] = sd > 1e-12 ? sd : 1.0;
        }
        return s;
    }

    void apply(std::vector<double>& v) const {
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = (v[j] - mean[j]) / scale[j];
    }

    std::vector<double> transformed(const double* row, std::size_t d) const {
        std::vector<double> v(row, row + d);
        apply(v);
        return v;
    }
};

inline void require_both_classes(const TrainMatrix& m) {
    const std::size_t sbr = m.count_sbr();
    if (m.n == 0 || sbr == 0 || sbr == m.n)
        fail("training data must contain both classes");
}

}  // namespace learn
}  // namespace sbr
