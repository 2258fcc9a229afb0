#include "rbmarket/environment.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace rbmarket {

DailyProfile DailyProfile::standard(int tenants) {
    assert(tenants > 0);
    // Aggregate arrival rate per hour, RBs per epoch, split evenly across
    // tenants; dispersion is 8% of the mean. The spectrum on sale follows the
    // demand envelope in half-MHz steps: generous headroom overnight, tight
    // through the morning ramp, pinned at 5 MHz across the afternoon (where
    // demand hovers within a couple percent of capacity), and a surplus in
    // the evening when extra spectrum stays on sale while the load falls off.
    static constexpr double kAggregate[24] = {
        300, 200, 150, 100, 100, 120, 150, 200, 250, 400, 650, 750,
        750, 765, 760, 755, 745, 735, 700, 650, 600, 500, 420, 350,
    };
    static constexpr double kMhz[24] = {
        3.0, 2.0, 1.5, 1.0, 1.0, 1.0, 1.5, 2.0, 2.5, 3.5, 4.5, 5.0,
        5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 6.0, 5.5, 5.0, 5.0, 4.0, 3.0,
    };
    DailyProfile p;
    p.hours.resize(24);
    for (int h = 0; h < 24; ++h) {
        HourProfile& row = p.hours[h];
        const double mean = kAggregate[h] / tenants;
        row.mean.assign(tenants, mean);
        row.stddev.assign(tenants, 0.08 * mean);
        row.mhz = kMhz[h];
    }
    return p;
}

Market::Market(MarketConfig cfg)
    : cfg_(std::move(cfg)),
      tenants_(cfg_.tenants),
      rng_(cfg_.seed),
      responsive_(tenants_.size(), true),
      backlog_(tenants_.size(), 0.0) {
    assert(!tenants_.empty());
    assert(cfg_.profile.periods() > 0);
    assert(cfg_.profile.tenants() == static_cast<int>(tenants_.size()));
    clock_.epochs_per_period = cfg_.epochs_per_period;
    clock_.periods_per_day = cfg_.profile.periods();
    clock_.epoch = cfg_.start_epoch;

    state_.prev_requests.assign(tenants_.size(), 0);
    draw_arrivals();
    state_.loads = arrivals_;
    state_.available = cfg_.profile.hours[clock_.period()].rbs();
}

void Market::set_responsive(int tenant, bool on) {
    assert(tenant >= 0 && tenant < static_cast<int>(responsive_.size()));
    responsive_[tenant] = on;
}

void Market::draw_arrivals() {
    const HourProfile& row = cfg_.profile.hours[clock_.period()];
    arrivals_.resize(tenants_.size());
    for (std::size_t i = 0; i < tenants_.size(); ++i) {
        double a = row.mean[i];
        if (row.stddev[i] > 0.0) {
            std::normal_distribution<double> d(row.mean[i], row.stddev[i]);
            a = d(rng_);
        }
        arrivals_[i] = std::max(0.0, a);
    }
}

StepResult Market::step(double price) {
    std::vector<std::int64_t> req(tenants_.size(), 0);
    for (std::size_t i = 0; i < tenants_.size(); ++i) {
        if (responsive_[i]) req[i] = tenant_act(state_.loads[i], price, tenants_[i]);
    }
    return settle(price, req, true);
}

StepResult Market::step_with_requests(double price,
                                      const std::vector<std::int64_t>& requests) {
    assert(requests.size() == tenants_.size());
    std::vector<std::int64_t> req(requests);
    for (std::size_t i = 0; i < req.size(); ++i) {
        if (!responsive_[i]) req[i] = 0;
    }
    return settle(price, req, true);
}

StepResult Market::step_proportional() {
    // Requests are the loads themselves. Allocation works on the real-valued
    // loads; the integer request column records them rounded.
    const double price = cfg_.reward.rb_cost;
    std::vector<double> ask(tenants_.size(), 0.0);
    std::vector<std::int64_t> req(tenants_.size(), 0);
    for (std::size_t i = 0; i < tenants_.size(); ++i) {
        if (!responsive_[i]) continue;
        ask[i] = state_.loads[i];
        req[i] = std::llround(ask[i]);
    }

    StepResult r;
    r.epoch = clock_.epoch;
    r.hour = clock_.period();
    r.price = price;
    r.arrivals = arrivals_;
    r.loads = state_.loads;
    r.requests = req;
    r.available = state_.available;
    r.alloc = allocate(ask, static_cast<double>(state_.available));
    r.revenue = price * r.alloc.total;
    r.target = cfg_.reward.target(state_.available);

    const double asked = std::accumulate(ask.begin(), ask.end(), 0.0);
    if (state_.available > 0) {
        const double n = static_cast<double>(state_.available);
        r.mismatch = (n - asked) / n;
        r.reward = mismatch_factor(n, asked, cfg_.reward.sigma) *
                   revenue_factor(r.revenue, r.target, cfg_.reward.delta);
    }

    r.served.resize(tenants_.size());
    r.disutility.resize(tenants_.size());
    for (std::size_t i = 0; i < tenants_.size(); ++i) {
        r.served[i] = std::min(r.alloc.granted[i], state_.loads[i]);
        r.disutility[i] = disutility(r.alloc.granted[i], state_.loads[i], price,
                                     tenants_[i]);
    }

    const std::int64_t live =
        std::count(responsive_.begin(), responsive_.end(), true);
    r.messages.announcements = static_cast<std::int64_t>(tenants_.size());
    r.messages.requests = live;
    r.messages.grants = live;

    roll_forward(r);
    return r;
}

StepResult Market::settle(double price, const std::vector<std::int64_t>& requests,
                          bool price_driven) {
    (void)price_driven;
    StepResult r;
    r.epoch = clock_.epoch;
    r.hour = clock_.period();
    r.price = price;
    r.arrivals = arrivals_;
    r.loads = state_.loads;
    r.requests = requests;
    r.available = state_.available;

    std::vector<double> ask(requests.size());
    std::transform(requests.begin(), requests.end(), ask.begin(),
                   [](std::int64_t v) { return static_cast<double>(v); });
    r.alloc = allocate(ask, static_cast<double>(state_.available));
    r.revenue = price * r.alloc.total;
    r.target = cfg_.reward.target(state_.available);
    r.reward = reward(state_, price, requests, r.alloc, cfg_.reward);
    if (state_.available > 0) {
        const double n = static_cast<double>(state_.available);
        const double asked = std::accumulate(ask.begin(), ask.end(), 0.0);
        r.mismatch = (n - asked) / n;
    }

    r.served.resize(requests.size());
    r.disutility.resize(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        r.served[i] = std::min(r.alloc.granted[i], state_.loads[i]);
        r.disutility[i] = disutility(r.alloc.granted[i], state_.loads[i], price,
                                     tenants_[i]);
    }

    const std::int64_t live =
        std::count(responsive_.begin(), responsive_.end(), true);
    r.messages.announcements = static_cast<std::int64_t>(tenants_.size());
    r.messages.requests = live;
    r.messages.grants = live;

    roll_forward(r);
    return r;
}

void Market::roll_forward(const StepResult& r) {
    for (std::size_t i = 0; i < backlog_.size(); ++i) {
        backlog_[i] = std::max(0.0, state_.loads[i] - r.alloc.granted[i]);
    }
    clock_.advance();
    draw_arrivals();
    for (std::size_t i = 0; i < backlog_.size(); ++i) {
        state_.loads[i] = backlog_[i] + arrivals_[i];
    }
    state_.available = cfg_.profile.hours[clock_.period()].rbs();
    state_.prev_requests = r.requests;
}

}  // namespace rbmarket
