// SPDX-License-Identifier: Apache-2.0
//
// Minimize the 3-D sphere function with the differential evolution core.

#include <cstdio>

#include "sbr/tuner.hpp"

int main() {
    sbr::ParamSpace space;
    space.add("x", sbr::DimType::real, -5, 5);
    space.add("y", sbr::DimType::real, -5, 5);
    space.add("z", sbr::DimType::real, -5, 5);

    sbr::DeConfig cfg;
    cfg.np = sbr::np_for(space);
    cfg.generations = 10;
    cfg.seed = 42;

    const auto fitness = [](const sbr::Candidate& c) {
        double acc = 0;
        for (double v : c.values) acc += v * v;
        return -acc;  // maximize the negated sphere
    };

    const auto result = sbr::de_optimize(space, fitness, cfg);
    std::printf("evaluations: %zu\n", result.evaluations);
    for (const auto& pt : result.trace)
        std::printf("gen %zu  best %.6f\n", pt.generation, -pt.best_fitness);
    std::printf("best point: (%.4f, %.4f, %.4f)\n", result.best.values[0],
                result.best.values[1], result.best.values[2]);
    return 0;
}
