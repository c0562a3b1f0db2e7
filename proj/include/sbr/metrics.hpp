// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "sbr/corpus.hpp"

namespace sbr {

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Counts with SBR as the positive class.
inline Confusion confusion(const std::vector<Label>& preds, const std::vector<Label>& truth) {
    if (preds.size() != truth.size()) fail("confusion: length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool p = preds[i] == Label::sbr;
        const bool t = truth[i] == Label::sbr;
        if (p && t) ++c.tp;
        else if (p && !t) ++c.fp;
        else if (!p && t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

/// pd (recall), pf (false alarm), prec, and the g-measure
/// g = 2*pd*(1-pf) / (pd + (1-pf)). Zero denominators yield 0.
struct Metrics {
    double pd = 0, pf = 0, prec = 0, g = 0;
};

inline Metrics metrics(const Confusion& c) {
    Metrics m;
    const auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    m.pd = ratio(c.tp, c.tp + c.fn);
    m.pf = ratio(c.fp, c.fp + c.tn);
    m.prec = ratio(c.tp, c.tp + c.fp);
    const double npf = 1.0 - m.pf;
    m.g = (m.pd + npf) > 0 ? 2.0 * m.pd * npf / (m.pd + npf) : 0.0;
    return m;
}

inline Metrics score_predictions(const std::vector<Label>& preds,
                                 const std::vector<Label>& truth) {
    return metrics(confusion(preds, truth));
}

inline std::vector<Label> labels_of(const Dataset& d) {
    std::vector<Label> out;
    out.reserve(d.rows.size());
    for (const auto& r : d.rows) out.push_back(r.label);
    return out;
}

}  // namespace sbr
