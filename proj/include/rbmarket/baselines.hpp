#pragma once

#include <cstdint>
#include <vector>

#include "rbmarket/core.hpp"
#include "rbmarket/tenant.hpp"

namespace rbmarket {

// Fixed-price policies at the odd eighths of the price range.
enum class StaticLevel { Low, MediumLow, MediumHigh, High };

double static_price(StaticLevel level, const PriceBounds& bounds);

// Iterative tatonnement pricer: nudge the price along excess demand each
// epoch, never dropping below the reserve. reserve = 0 gives the no-reserve
// variant; reserve = rb_cost gives the cost-floor variant.
struct DistributedPricerConfig {
    double kappa = 0.0;      // price units per RB of excess demand
    double reserve = 0.0;
    double initial = 0.0;
    PriceBounds price;
};

// kappa small enough that one epoch's full-capacity imbalance moves the price
// by 0.1% of the range.
double default_kappa(const PriceBounds& bounds, std::int64_t available);

class DistributedPricer {
  public:
    explicit DistributedPricer(const DistributedPricerConfig& cfg);

    double price() const { return p_; }

    // Feed back the demand observed at the current price; returns the price
    // for the next epoch.
    double update(double total_demand, std::int64_t available);

  private:
    DistributedPricerConfig cfg_;
    double p_;
};

// Price-blind splitting of the pool pro rata to the tenants' loads.
Allocation proportional_allocation(const std::vector<double>& loads, double available);

// One-epoch full-information planner: choose (p, nu) minimizing total tenant
// dis-utility subject to the revenue floor p * sum(nu) >= target and the
// capacity cap sum(nu) <= available.
struct MyopicConfig {
    PriceBounds price;
    int scan_points = 17;     // coarse grid over p before golden-section
    int golden_iters = 40;
    int inner_iters = 60;     // projected-gradient cap for the fixed-p problem
    int polish_sweeps = 4;    // pairwise-transfer refinement rounds
    double tolerance = 1e-6;  // relative feasibility tolerance
};

struct MyopicSolution {
    double price = 0.0;
    std::vector<double> requests;
    double objective = 0.0;  // sum of tenant dis-utilities at (price, requests)
    double revenue = 0.0;    // price * sum(requests)
    // False when no in-range price can reach the target even selling the whole
    // pool; the solution is then the revenue-maximizing point (p_max, sum = n).
    bool feasible = true;
};

// warm_hint, when given, seeds the inner solver (e.g. with the previous
// epoch's solution); it affects speed only, not the feasible set.
MyopicSolution myopic_solve(const std::vector<double>& loads,
                            const std::vector<TenantProfile>& profiles,
                            std::int64_t available, double revenue_target,
                            const MyopicConfig& cfg = {},
                            const std::vector<double>* warm_hint = nullptr);

}  // namespace rbmarket
