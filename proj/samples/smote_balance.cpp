// SPDX-License-Identifier: Apache-2.0
//
// Rebalance a tiny imbalanced dataset and print the class counts.

#include <cstdio>

#include "sbr/sampling.hpp"

int main() {
    sbr::Dataset d;
    d.feature_names = {"f0", "f1"};
    sbr::Rng gen(7);
    for (int i = 0; i < 95; ++i)
        d.rows.push_back({"n" + std::to_string(i),
                          {gen.uniform(0, 1), gen.uniform(0, 1)},
                          sbr::Label::nsbr});
    for (int i = 0; i < 5; ++i)
        d.rows.push_back({"s" + std::to_string(i),
                          {gen.uniform(3, 4), gen.uniform(3, 4)},
                          sbr::Label::sbr});

    sbr::SmoteParams params;  // k=5, m=50, r=2
    sbr::Rng rng(1);
    const sbr::Dataset balanced = sbr::smote(d, params, rng);

    std::printf("before: %zu SBR / %zu NSBR\n", d.count(sbr::Label::sbr),
                d.count(sbr::Label::nsbr));
    std::printf("after:  %zu SBR / %zu NSBR\n", balanced.count(sbr::Label::sbr),
                balanced.count(sbr::Label::nsbr));
    return 0;
}
