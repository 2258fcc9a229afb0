#pragma once

#include <algorithm>
#include <vector>

#include "rbmarket/core.hpp"

namespace rbmarket {

// Fixed affine input normalization for the learning agents: each state field
// is divided by a configured full-scale value and clamped to [0, 1]. Loads can
// grow without bound when tenants are persistently under-served, so their
// scale is deliberately generous before the clamp saturates.
struct FeatureScales {
    double request_scale = 3000.0;  // prior-epoch requests
    double load_scale = 6000.0;     // buffered demand incl. backlog
    double rb_scale = 1500.0;       // RBs on sale

    // Derive scales from the largest RB inventory a scenario can offer.
    static FeatureScales for_inventory(double max_rbs) {
        FeatureScales s;
        s.request_scale = 4.0 * max_rbs;
        s.load_scale = 8.0 * max_rbs;
        s.rb_scale = 2.0 * max_rbs;
        return s;
    }
};

// Feature layout: [nu_prev / request_scale ..., load / load_scale ..., n / rb_scale],
// 2N + 1 values in [0, 1].
inline std::vector<double> featurize(const MarketState& x, const FeatureScales& s) {
    std::vector<double> f;
    f.reserve(2 * x.prev_requests.size() + 1);
    auto unit = [](double v, double scale) {
        return std::clamp(v / scale, 0.0, 1.0);
    };
    for (auto r : x.prev_requests) f.push_back(unit(static_cast<double>(r), s.request_scale));
    for (double l : x.loads) f.push_back(unit(l, s.load_scale));
    f.push_back(unit(static_cast<double>(x.available), s.rb_scale));
    return f;
}

}  // namespace rbmarket
