#pragma once

#include <cstdint>
#include <functional>
#include <vector>

// Core market model: epoch clock, price bounds, market state, the proportional
// allocation rule and the two-factor epoch reward used by the neutral host.
namespace rbmarket {

// Discrete time. An epoch is the atomic market round (30 ms at full scale);
// `epochs_per_period` epochs form one period (an hour of the daily pattern) and
// `periods_per_day` periods wrap around to the next day.
struct EpochClock {
    std::int64_t epoch = 0;            // t, monotone
    std::int64_t epochs_per_period = 120000;  // e, full-scale default for 30 ms epochs
    std::int64_t periods_per_day = 24;        // H

    // h(t) = (t div e) mod H
    std::int64_t period() const {
        return (epoch / epochs_per_period) % periods_per_day;
    }
    void advance() { ++epoch; }
};

struct PriceBounds {
    double min = 0.0;
    double max = 2500.0;

    double clamp(double p) const;
    double midpoint() const { return 0.5 * (min + max); }
    double range() const { return max - min; }
};

// State observed by the pricing agent at the start of epoch t:
// requests granted in t-1, current per-tenant loads, and available RBs.
struct MarketState {
    std::vector<std::int64_t> prev_requests;  // nu^{t-1}, zeros at t=0
    std::vector<double> loads;                // l^t, RBs of buffered demand per tenant
    std::int64_t available = 0;               // n^t, RBs on sale this epoch
};

struct Allocation {
    std::vector<double> granted;  // u_i
    double total = 0.0;           // sum u_i <= available
};

// Proportional rule: u_i = nu_i * min(n, sum nu) / sum nu.
// Requests at or under capacity are granted verbatim; excess demand is scaled
// back pro rata. All-zero requests yield an all-zero allocation.
Allocation allocate(const std::vector<double>& requests, double available);

struct RewardConfig {
    double sigma = 1.0;    // width of the mismatch factor
    double delta = 1.0;    // exponent of the revenue factor
    double rb_cost = 850.0;  // p_c, per-RB cost the host must recover
    PriceBounds price;

    // Revenue target T(n). Defaults to rb_cost * n; replaceable for hosts with
    // a different cost model.
    std::function<double(std::int64_t)> target_fn;
    double target(std::int64_t available) const {
        return target_fn ? target_fn(available) : rb_cost * static_cast<double>(available);
    }
};

// f(x) = exp(-x^2 / sigma^2) evaluated at the relative mismatch
// x = (available - requested) / available. Peaks at requested == available.
double mismatch_factor(double available, double requested, double sigma);

// g(x) = (min(1,x) / max(1,x))^delta with x = actual / target. Peaks at
// actual == target and decays symmetrically in ratio on both sides.
double revenue_factor(double actual, double target, double delta);

// Epoch reward r = f * g for the given announced price, request vector and
// allocation. An epoch with no RBs on sale has reward 0 by definition.
double reward(const MarketState& state, double price,
              const std::vector<std::int64_t>& requests,
              const Allocation& allocation, const RewardConfig& cfg);

}  // namespace rbmarket
