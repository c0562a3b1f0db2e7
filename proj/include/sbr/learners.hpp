// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>

#include "sbr/learners/common.hpp"
#include "sbr/learners/forest.hpp"
#include "sbr/learners/knn.hpp"
#include "sbr/learners/logistic.hpp"
#include "sbr/learners/mlp.hpp"
#include "sbr/learners/naive_bayes.hpp"

namespace sbr {

/// Trained classifier behind a uniform train/predict surface.
struct Model {
    ClassifierKind kind;
    std::size_t feature_count = 0;
    std::variant<learn::ForestModel, learn::NaiveBayesModel, learn::LogisticModel,
                 learn::MlpModel, learn::KnnModel>
        impl;
};

/// Factory defaults per learner. max_leaf_nodes / max_features / max_depth
/// use 0 as the "none/auto" sentinel (unbounded growth, sqrt-feature
/// sampling).
inline HyperParams default_params(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::rf:
            return {{"n_estimators", 10}, {"min_samples_leaf", 1}, {"min_samples_split", 2},
                    {"max_leaf_nodes", 0}, {"max_features", 0},    {"max_depth", 0}};
        case ClassifierKind::lr:
            return {{"C", 1.0}, {"max_iter", 100}, {"verbose", 0}};
        case ClassifierKind::mlp:
            return {{"alpha", 1e-4},   {"learning_rate_init", 1e-3}, {"power_t", 0.5},
                    {"max_iter", 200}, {"momentum", 0.9},            {"n_iter_no_change", 10}};
        case ClassifierKind::knn:
            return {{"leaf_size", 30}, {"n_neighbors", 5}};
        case ClassifierKind::nb:
            return {{"var_smoothing", 1e-9}};
    }
    fail("unknown classifier kind");
}

/// Tuning ranges per learner.
inline ParamSpace param_space(ClassifierKind kind) {
    ParamSpace s;
    switch (kind) {
        case ClassifierKind::rf:
            s.add("n_estimators", DimType::integer, 10, 150);
            s.add("min_samples_leaf", DimType::integer, 1, 20);
            s.add("min_samples_split", DimType::integer, 2, 20);
            s.add("max_leaf_nodes", DimType::integer, 2, 50);
            s.add("max_features", DimType::real, 0.01, 1);
            s.add("max_depth", DimType::integer, 1, 10);
            break;
        case ClassifierKind::lr:
            s.add("C", DimType::real, 1.0, 10.0);
            s.add("max_iter", DimType::integer, 50, 200);
            s.add("verbose", DimType::integer, 0, 10);
            break;
        case ClassifierKind::mlp:
            s.add("alpha", DimType::real, 0.0001, 0.001);
            s.add("learning_rate_init", DimType::real, 0.001, 0.01);
            s.add("power_t", DimType::real, 0.1, 1);
            s.add("max_iter", DimType::integer, 50, 300);
            s.add("momentum", DimType::real, 0.1, 1);
            s.add("n_iter_no_change", DimType::integer, 1, 100);
            break;
        case ClassifierKind::knn:
            s.add("leaf_size", DimType::integer, 10, 100);
            s.add("n_neighbors", DimType::integer, 1, 10);
            break;
        case ClassifierKind::nb:
            s.add("var_smoothing", DimType::real, 0.0, 1.0);
            break;
    }
    return s;
}

/// The SMOTE pre-processor knobs, exposed alongside the learner spaces.
inline ParamSpace smote_space() {
    ParamSpace s;
    s.add("k", DimType::integer, 1, 20);
    s.add("m", DimType::integer, 50, 400);
    s.add("r", DimType::integer, 1, 6);
    return s;
}

inline Model train(ClassifierKind kind, const HyperParams& hp, const Dataset& data,
                   std::uint64_t seed) {
    auto m = learn::TrainMatrix::from(data);
    learn::require_both_classes(m);
    Model model;
    model.kind = kind;
    model.feature_count = m.d;
    switch (kind) {
        case ClassifierKind::rf: {
            learn::ForestParams p;
            p.n_estimators = hp_int(hp, "n_estimators");
            p.min_samples_leaf = hp_int(hp, "min_samples_leaf");
            p.min_samples_split = hp_int(hp, "min_samples_split");
            p.max_leaf_nodes = hp_int(hp, "max_leaf_nodes");
            p.max_features = hp_get(hp, "max_features");
            p.max_depth = hp_int(hp, "max_depth");
            model.impl = learn::train_forest(m, p, seed);
            break;
        }
        case ClassifierKind::nb:
            model.impl = learn::train_naive_bayes(m, hp_get(hp, "var_smoothing"));
            break;
        case ClassifierKind::lr:
            model.impl = learn::train_logistic(m, hp_get(hp, "C"), hp_int(hp, "max_iter"));
            break;
        case ClassifierKind::mlp: {
            learn::MlpParams p;
            p.alpha = hp_get(hp, "alpha");
            p.learning_rate_init = hp_get(hp, "learning_rate_init");
            p.power_t = hp_get(hp, "power_t");
            p.max_iter = hp_int(hp, "max_iter");
            p.momentum = hp_get(hp, "momentum");
            p.n_iter_no_change = hp_int(hp, "n_iter_no_change");
            model.impl = learn::train_mlp(m, p, seed);
            break;
        }
        case ClassifierKind::knn:
            model.impl =
                learn::train_knn(m, hp_int(hp, "n_neighbors"), hp_int(hp, "leaf_size"));
            break;
    }
    return model;
}

inline Label predict(const Model& model, const std::vector<double>& x) {
    if (x.size() != model.feature_count)
        fail("predict: expected " + std::to_string(model.feature_count) + " features, got " +
             std::to_string(x.size()));
    const bool sbr = std::visit(
        [&](const auto& impl) { return impl.predict_sbr(x.data(), x.size()); }, model.impl);
    return sbr ? Label::sbr : Label::nsbr;
}

inline std::vector<Label> predict_batch(const Model& model, const Dataset& data) {
    if (data.feature_names.size() != model.feature_count)
        fail("predict_batch: feature count mismatch");
    std::vector<Label> out;
    out.reserve(data.rows.size());
    for (const auto& row : data.rows) out.push_back(predict(model, row.values));
    return out;
}

}  // namespace sbr
