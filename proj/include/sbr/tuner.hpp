// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sbr/learners.hpp"
#include "sbr/metrics.hpp"
#include "sbr/rng.hpp"
#include "sbr/sampling.hpp"
#include "sbr/space.hpp"

namespace sbr {

struct Candidate {
    std::vector<double> values;
    std::optional<double> fitness;
};

struct DeConfig {
    std::size_t np = 10;
    double f = 0.8;
    double cr = 0.9;
    std::size_t generations = 10;
    std::uint64_t seed = 0;
};

/// Population size rule: ten members per tunable dimension.
inline std::size_t np_for(const ParamSpace& space) {
    if (space.size() == 0) fail("np_for: empty parameter space");
    return 10 * space.size();
}

/// DE/rand/1/bin step. Each dimension mutates with probability cr
/// (numerics move to a_k + f*(b_k - c_k), booleans flip); one randomly
/// chosen dimension always mutates. Mutants are clipped to bounds and
/// integer dimensions rounded.
inline Candidate mutate(const ParamSpace& space, const Candidate& x, const Candidate& a,
                        const Candidate& b, const Candidate& c, double f, double cr, Rng& rng) {
    Candidate y;
    y.values.resize(space.size());
    const std::size_t forced = rng.index(space.size());
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (k != forced && !rng.coin(cr)) {
            y.values[k] = x.values[k];
            continue;
        }
        const auto& dim = space.at(k);
        double v;
        if (dim.type == DimType::boolean) {
            v = x.values[k] != 0.0 ? 0.0 : 1.0;
        } else {
            v = a.values[k] + f * (b.values[k] - c.values[k]);
        }
        y.values[k] = space.clip(k, v);
    }
    return y;
}

struct DeTracePoint {
    std::size_t generation;
    double best_fitness;
};

struct DeResult {
    Candidate best;
    std::vector<DeTracePoint> trace;  // best-ever fitness per generation
    std::size_t evaluations = 0;
};

/// Maximize fitness over the space. np uniform-random candidates (plus any
/// injected seeds) are refined for g generations of mutate/compare/replace;
/// an incumbent is replaced only by a strictly better mutant. Returns the
/// best candidate ever evaluated.
inline DeResult de_optimize(const ParamSpace& space,
                            const std::function<double(const Candidate&)>& fitness,
                            const DeConfig& cfg,
                            const std::vector<Candidate>& injected = {}) {
    if (space.size() == 0) fail("de_optimize: empty parameter space");
    if (cfg.np < 4) fail("de_optimize: population must hold at least 4 members");
    Rng rng(hash_mix(cfg.seed, "de"));

    std::vector<Candidate> pop(cfg.np);
    for (std::size_t i = 0; i < cfg.np; ++i) {
        if (i < injected.size()) {
            pop[i] = injected[i];
            for (std::size_t k = 0; k < space.size(); ++k)
                pop[i].values[k] = space.clip(k, pop[i].values[k]);
            pop[i].fitness.reset();
        } else {
            pop[i].values.resize(space.size());
            for (std::size_t k = 0; k < space.size(); ++k) {
                const auto& dim = space.at(k);
                const double raw = dim.type == DimType::boolean
                                       ? (rng.coin(0.5) ? 1.0 : 0.0)
                                       : rng.uniform(dim.low, dim.high);
                pop[i].values[k] = space.clip(k, raw);
            }
        }
    }

    DeResult result;
    for (auto& cand : pop) {
        cand.fitness = fitness(cand);
        ++result.evaluations;
    }
    auto best_it = std::max_element(pop.begin(), pop.end(), [](const auto& a, const auto& b) {
        return *a.fitness < *b.fitness;
    });
    result.best = *best_it;
    result.trace.push_back({0, *result.best.fitness});

    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        for (std::size_t i = 0; i < cfg.np; ++i) {
            // three distinct members, all different from i
            std::size_t a, b, c;
            do { a = rng.index(cfg.np); } while (a == i);
            do { b = rng.index(cfg.np); } while (b == i || b == a);
            do { c = rng.index(cfg.np); } while (c == i || c == a || c == b);
            Candidate y = mutate(space, pop[i], pop[a], pop[b], pop[c], cfg.f, cfg.cr, rng);
            y.fitness = fitness(y);
            ++result.evaluations;
            if (*y.fitness > *pop[i].fitness) pop[i] = std::move(y);
            if (*pop[i].fitness > *result.best.fitness) result.best = pop[i];
        }
        result.trace.push_back({gen, *result.best.fitness});
    }
    return result;
}

/// Median held-out g-measure over the fold grid; the training side of each
/// fold may first pass through `transform` (used for SMOTE treatments).
template <typename TrainsetTransform>
double cross_fold_g(ClassifierKind kind, const HyperParams& hp, const Dataset& data,
                    const FoldAssignment& folds, std::uint64_t seed,
                    TrainsetTransform&& transform) {
    std::vector<double> gs;
    gs.reserve(folds.bins.size());
    for (std::size_t fold = 0; fold < folds.bins.size(); ++fold) {
        Dataset train_part = fold_train(data, folds, fold);
        const Dataset heldout = fold_test(data, folds, fold);
        transform(train_part, fold);
        double g = 0.0;
        if (train_part.count(Label::sbr) > 0 && train_part.count(Label::nsbr) > 0) {
            const Model model = train(kind, hp, train_part, hash_mix(seed, fold));
            g = score_predictions(predict_batch(model, heldout), labels_of(heldout)).g;
        }
        gs.push_back(g);
    }
    return median_of(gs);
}

inline double cross_fold_g(ClassifierKind kind, const HyperParams& hp, const Dataset& data,
                           const FoldAssignment& folds, std::uint64_t seed) {
    return cross_fold_g(kind, hp, data, folds, seed, [](Dataset&, std::size_t) {});
}

namespace detail {

inline HyperParams to_params(const ParamSpace& space, const Candidate& cand) {
    HyperParams hp;
    for (std::size_t k = 0; k < space.size(); ++k) hp[space.at(k).name] = cand.values[k];
    return hp;
}

inline Candidate from_params(const ParamSpace& space, const HyperParams& hp) {
    Candidate c;
    c.values.reserve(space.size());
    for (const auto& dim : space.dims) c.values.push_back(hp_get(hp, dim.name));
    return c;
}

inline std::size_t fold_count(const Dataset& d) {
    return std::min<std::size_t>(10, d.rows.size());
}

/// In-range stand-in for defaults whose sentinel (0 = none/auto) lies
/// outside the tuning range: unbounded growth maps to the high end,
/// auto feature sampling to the sqrt fraction.
inline Candidate default_equivalent(const ParamSpace& space, const HyperParams& defaults,
                                    std::size_t feature_dim) {
    Candidate c;
    c.values.reserve(space.size());
    for (std::size_t k = 0; k < space.size(); ++k) {
        const auto& dim = space.at(k);
        double v = hp_get(defaults, dim.name);
        if (!space.contains(k, v)) {
            if (dim.name == "max_features" && feature_dim > 0)
                v = std::sqrt(static_cast<double>(feature_dim)) /
                    static_cast<double>(feature_dim);
            else
                v = dim.high;
        }
        c.values.push_back(space.clip(k, v));
    }
    return c;
}

}  // namespace detail

struct TuneResult {
    HyperParams params;
    double default_fitness = 0.0;
    double tuned_fitness = 0.0;
    std::vector<DeTracePoint> trace;
};

/// Differential evolution over a learner's parameter space; candidate
/// fitness is the median g-measure across the 10 stratified folds of the
/// training data. The factory defaults are seeded into the initial
/// population, so the tuned settings never score below them.
inline TuneResult tune_learner(ClassifierKind kind, const Dataset& d_train,
                               std::size_t generations, std::uint64_t seed) {
    if (d_train.provenance.role == DataRole::test) fail("tuning must not touch test data");
    const ParamSpace space = param_space(kind);
    const FoldAssignment folds = split_folds(d_train, detail::fold_count(d_train), seed);

    const auto fitness = [&](const Candidate& cand) {
        for (std::size_t k = 0; k < space.size(); ++k)
            if (!space.contains(k, cand.values[k]))
                fail("candidate out of bounds for " + space.at(k).name);
        return cross_fold_g(kind, detail::to_params(space, cand), d_train, folds, seed);
    };

    DeConfig cfg;
    cfg.np = np_for(space);
    cfg.f = 0.8;
    cfg.cr = 0.9;
    cfg.generations = generations;
    cfg.seed = hash_mix(seed, classifier_name(kind));

    // Seed the population with the defaults (clipped) and an in-range
    // equivalent of any sentinel defaults; the true default fitness is
    // measured separately so the tuned result can never fall below it.
    const HyperParams defaults = default_params(kind);
    const double default_fitness = cross_fold_g(kind, defaults, d_train, folds, seed);
    std::vector<Candidate> seeds = {detail::default_equivalent(space, defaults, d_train.dim())};
    const DeResult de = de_optimize(space, fitness, cfg, seeds);

    TuneResult out;
    out.trace = de.trace;
    if (de.best.fitness && *de.best.fitness >= default_fitness) {
        out.params = detail::to_params(space, de.best);
        out.tuned_fitness = *de.best.fitness;
    } else {
        out.params = defaults;
        out.tuned_fitness = default_fitness;
    }
    out.default_fitness = default_fitness;
    return out;
}

struct SmotunedResult {
    SmoteParams params;
    double default_fitness = 0.0;
    double tuned_fitness = 0.0;
    std::vector<DeTracePoint> trace;
};

/// DE over the SMOTE space (np=30, f=0.8, cr=0.9, g=10). Candidate fitness
/// is the median cross-fold g-measure of smote -> train the default-config
/// learner -> score, with SMOTE applied inside each fold to the training
/// bins only.
inline SmotunedResult smotuned(ClassifierKind kind, const Dataset& d_train, std::uint64_t seed,
                               std::size_t generations = 10,
                               SmoteBasis basis = SmoteBasis::pre) {
    if (d_train.provenance.role == DataRole::test) fail("tuning must not touch test data");
    const ParamSpace space = smote_space();
    const FoldAssignment folds = split_folds(d_train, detail::fold_count(d_train), seed);
    const HyperParams learner_defaults = default_params(kind);

    const auto eval = [&](const SmoteParams& sp) {
        return cross_fold_g(kind, learner_defaults, d_train, folds, seed,
                            [&](Dataset& train_part, std::size_t fold) {
                                Rng rng(hash_mix(hash_mix(seed, "smote-fold"), fold));
                                train_part = smote(train_part, sp, rng, basis);
                            });
    };

    const auto fitness = [&](const Candidate& cand) {
        SmoteParams sp;
        sp.k = static_cast<int>(cand.values[0]);
        sp.m = static_cast<int>(cand.values[1]);
        sp.r = static_cast<int>(cand.values[2]);
        return eval(sp);
    };

    DeConfig cfg;
    cfg.np = np_for(space);  // 30
    cfg.f = 0.8;
    cfg.cr = 0.9;
    cfg.generations = generations;
    cfg.seed = hash_mix(seed, "smotuned");

    const SmoteParams defaults;
    Candidate seed_cand;
    seed_cand.values = {static_cast<double>(defaults.k), static_cast<double>(defaults.m),
                        static_cast<double>(defaults.r)};
    const double default_fitness = eval(defaults);
    const DeResult de = de_optimize(space, fitness, cfg, {seed_cand});

    SmotunedResult out;
    out.trace = de.trace;
    out.default_fitness = default_fitness;
    if (de.best.fitness && *de.best.fitness >= default_fitness) {
        out.params.k = static_cast<int>(de.best.values[0]);
        out.params.m = static_cast<int>(de.best.values[1]);
        out.params.r = static_cast<int>(de.best.values[2]);
        out.tuned_fitness = *de.best.fitness;
    } else {
        out.params = defaults;
        out.tuned_fitness = default_fitness;
    }
    return out;
}

}  // namespace sbr
