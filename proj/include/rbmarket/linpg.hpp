#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rbmarket/core.hpp"
#include "rbmarket/fault.hpp"
#include "rbmarket/features.hpp"

namespace rbmarket {

struct LinPgConfig {
    double actor_lr = 1e-3;
    double critic_lr = 1e-2;
    double discount = 0.99;
    double sigma = 0.2;          // initial exploration std, unit-action space
    double sigma_final = 0.02;
    std::int64_t decay_steps = 15000;
    FeatureScales scales;
    PriceBounds price;
};

// Linear-Gaussian policy-gradient pricer, the shallow counterpart to the
// deep agent. The policy mean and the state value are both linear in the
// normalized features (plus a bias term); updates are incremental one-step
// temporal-difference actor-critic:
//   delta = r + discount * V(x') - V(x)
//   v     += critic_lr * delta * phi(x)
//   theta += actor_lr  * delta * (a - mean) / sigma^2 * phi(x)
// Exploration noise anneals on the same linear schedule as the deep agent's.
class LinPgAgent {
  public:
    // feature_dim is the raw feature count, before the bias term is appended.
    LinPgAgent(int feature_dim, const LinPgConfig& cfg, std::uint64_t seed);

    static LinPgAgent for_market(int tenants, const LinPgConfig& cfg,
                                 std::uint64_t seed) {
        return LinPgAgent(2 * tenants + 1, cfg, seed);
    }

    // Market-facing interface, mirroring the deep agent.
    double act(const MarketState& x, bool explore);
    void update(const MarketState& x, double price, double reward_value,
                const MarketState& x_next);

    // Raw interface in unit-action space, usable outside the market loop.
    double mean_unit(const std::vector<double>& phi) const;
    double value(const std::vector<double>& phi) const;
    double sample_unit(const std::vector<double>& phi);
    void td_update(const std::vector<double>& phi, double unit, double reward_value,
                   const std::vector<double>& phi_next, bool bootstrap);

    double sigma_now() const;
    double unit_action(double price) const;
    double price_of(double unit) const;
    std::int64_t steps() const { return step_; }
    int feature_dim() const { return dim_; }

  private:
    double dot_aug(const std::vector<double>& w, const std::vector<double>& phi) const;

    int dim_;
    LinPgConfig cfg_;
    std::vector<double> theta_;  // policy mean weights, dim_ + 1 with bias last
    std::vector<double> v_;      // value weights, dim_ + 1 with bias last
    std::mt19937_64 rng_;
    std::int64_t step_ = 0;
};

}  // namespace rbmarket
