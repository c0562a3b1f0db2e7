// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "sbr/util.hpp"

namespace sbr {

enum class DimType { real, integer, boolean };

struct ParamDim {
    std::string name;
    DimType type = DimType::real;
    double low = 0.0;
    double high = 1.0;
};

/// Ordered collection of tunable dimensions.
struct ParamSpace {
    std::vector<ParamDim> dims;

    std::size_t size() const { return dims.size(); }

    const ParamDim& at(std::size_t i) const { return dims.at(i); }

    void add(std::string name, DimType type, double low, double high) {
        if (type != DimType::boolean && !(low < high))
            fail("param dimension '" + name + "' needs low < high");
        for (const auto& d : dims)
            if (d.name == name) fail("duplicate param dimension '" + name + "'");
        dims.push_back({std::move(name), type, low, high});
    }

    double clip(std::size_t i, double v) const {
        const auto& d = dims[i];
        if (d.type == DimType::boolean) return v != 0.0 ? 1.0 : 0.0;
        v = std::clamp(v, d.low, d.high);
        if (d.type == DimType::integer) v = std::round(v);
        return std::clamp(v, d.low, d.high);
    }

    bool contains(std::size_t i, double v) const {
        const auto& d = dims[i];
        if (d.type == DimType::boolean) return v == 0.0 || v == 1.0;
        if (v < d.low || v > d.high) return false;
        if (d.type == DimType::integer && v != std::round(v)) return false;
        return true;
    }
};

/// Named parameter assignment, aligned with some ParamSpace or the
/// defaults table of a learner.
using HyperParams = std::map<std::string, double>;

inline double hp_get(const HyperParams& hp, const std::string& name) {
    auto it = hp.find(name);
    if (it == hp.end()) fail("missing hyperparameter: " + name);
    return it->second;
}

inline int hp_int(const HyperParams& hp, const std::string& name) {
    return static_cast<int>(std::llround(hp_get(hp, name)));
}

}  // namespace sbr
