#include "rbmarket/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace rbmarket {

double PriceBounds::clamp(double p) const {
    return std::min(max, std::max(min, p));
}

Allocation allocate(const std::vector<double>& requests, double available) {
    Allocation out;
    out.granted.assign(requests.size(), 0.0);
    double total_requested = 0.0;
    for (double r : requests) {
        assert(r >= 0.0);
        total_requested += r;
    }
    if (total_requested <= 0.0 || available <= 0.0) return out;

    const double sold = std::min(available, total_requested);
    const double scale = sold / total_requested;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        out.granted[i] = requests[i] * scale;
        out.total += out.granted[i];
    }
    return out;
}

double mismatch_factor(double available, double requested, double sigma) {
    assert(available > 0.0);
    assert(sigma > 0.0);
    const double x = (available - requested) / available;
    return std::exp(-(x * x) / (sigma * sigma));
}

double revenue_factor(double actual, double target, double delta) {
    if (delta == 0.0) return 1.0;
    if (target <= 0.0) return actual == 0.0 ? 1.0 : 0.0;
    const double x = actual / target;
    if (x == 0.0) return 0.0;
    const double ratio = x < 1.0 ? x : 1.0 / x;
    return std::pow(ratio, delta);
}

double reward(const MarketState& state, double price,
              const std::vector<std::int64_t>& requests,
              const Allocation& allocation, const RewardConfig& cfg) {
    if (state.available <= 0) return 0.0;

    double total_requested = 0.0;
    for (std::int64_t r : requests) total_requested += static_cast<double>(r);

    const double f = mismatch_factor(static_cast<double>(state.available),
                                     total_requested, cfg.sigma);
    const double g = revenue_factor(price * allocation.total,
                                    cfg.target(state.available), cfg.delta);
    return f * g;
}

}  // namespace rbmarket
