#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rbmarket/core.hpp"
#include "rbmarket/tenant.hpp"

namespace rbmarket {

// Spectrum granularity: RBs brought to market per MHz per epoch, and the
// payload carried by one RB.
inline constexpr double kRbPerMhzEpoch = 150.0;
inline constexpr double kBitsPerRb = 640.0;

// One period (hour) of the daily pattern: per-tenant arrival statistics in
// RBs per epoch, and the spectrum the host puts on sale.
struct HourProfile {
    std::vector<double> mean;
    std::vector<double> stddev;
    double mhz = 5.0;

    std::int64_t rbs() const {
        return static_cast<std::int64_t>(mhz * kRbPerMhzEpoch + 0.5);
    }
};

// A full day of hourly rows. The standard() pattern is a four-tenant urban
// weekday: a deep overnight trough, a morning ramp, and a long afternoon
// plateau that brushes the 5 MHz ceiling, with extra spectrum switched on
// for the early-evening hours.
struct DailyProfile {
    std::vector<HourProfile> hours;

    int tenants() const {
        return hours.empty() ? 0 : static_cast<int>(hours.front().mean.size());
    }
    int periods() const { return static_cast<int>(hours.size()); }

    static DailyProfile standard(int tenants = 4);
};

// Control-plane traffic per epoch: one price announcement per tenant, then one
// request and one grant per responsive tenant (zero-RB requests and grants are
// still messages).
struct MessageLedger {
    std::int64_t announcements = 0;
    std::int64_t requests = 0;
    std::int64_t grants = 0;
    std::int64_t total() const { return announcements + requests + grants; }

    MessageLedger& operator+=(const MessageLedger& o) {
        announcements += o.announcements;
        requests += o.requests;
        grants += o.grants;
        return *this;
    }
};

// Everything that happened in one epoch, in decision order.
struct StepResult {
    std::int64_t epoch = 0;
    std::int64_t hour = 0;
    double price = 0.0;
    std::vector<double> arrivals;           // fresh demand this epoch
    std::vector<double> loads;              // backlog + arrivals at decision time
    std::vector<std::int64_t> requests;     // nu_i, zero for unresponsive tenants
    Allocation alloc;
    std::vector<double> served;             // min(u_i, l_i)
    std::vector<double> disutility;         // tenant cost at the granted RBs
    double reward = 0.0;
    double mismatch = 0.0;                  // (n - sum nu) / n, 0 when n == 0
    double revenue = 0.0;                   // price * sum u
    double target = 0.0;                    // revenue target T(n)
    std::int64_t available = 0;
    MessageLedger messages;
};

struct MarketConfig {
    DailyProfile profile;
    std::vector<TenantProfile> tenants;
    RewardConfig reward;
    std::int64_t epochs_per_period = 120000;
    std::int64_t start_epoch = 0;           // offset the clock to start mid-day
    std::uint64_t seed = 1;                 // environment stream, separate from agents
};

// The epoch market. Construction draws the first epoch's arrivals; state()
// then exposes what a pricing agent may observe (previous requests, current
// loads, RBs on sale). Each step consumes exactly one batch of arrival draws
// per tenant, so two markets built from the same config see identical demand
// regardless of the prices charged.
class Market {
  public:
    explicit Market(MarketConfig cfg);

    const MarketState& state() const { return state_; }
    std::int64_t epoch() const { return clock_.epoch; }
    std::int64_t hour() const { return clock_.period(); }
    int tenants() const { return static_cast<int>(tenants_.size()); }
    const MarketConfig& config() const { return cfg_; }

    // Tenants that are switched off stop sending requests (and receive no
    // grant), but their traffic keeps arriving and queueing.
    void set_responsive(int tenant, bool on);
    bool responsive(int tenant) const { return responsive_[tenant]; }

    // Announce a price; tenants respond with their cost-minimizing requests.
    StepResult step(double price);

    // Announce a price but override the tenants' requests (externally solved).
    StepResult step_with_requests(double price, const std::vector<std::int64_t>& requests);

    // No price signal: every tenant asks for its full load and the pool is
    // split pro rata. Revenue is booked at the host's per-RB cost.
    StepResult step_proportional();

  private:
    StepResult settle(double price, const std::vector<std::int64_t>& requests,
                      bool price_driven);
    void roll_forward(const StepResult& r);
    void draw_arrivals();

    MarketConfig cfg_;
    std::vector<TenantProfile> tenants_;
    EpochClock clock_;
    std::mt19937_64 rng_;
    std::vector<bool> responsive_;
    std::vector<double> backlog_;
    std::vector<double> arrivals_;
    MarketState state_;
};

}  // namespace rbmarket
