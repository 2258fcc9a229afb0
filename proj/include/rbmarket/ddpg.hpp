#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "rbmarket/core.hpp"
#include "rbmarket/fault.hpp"
#include "rbmarket/features.hpp"
#include "rbmarket/mlp.hpp"
#include "rbmarket/noise.hpp"
#include "rbmarket/replay.hpp"

namespace rbmarket {

struct DdpgConfig {
    std::vector<int> actor_hidden = {400, 300};
    std::vector<int> critic_hidden = {400, 300};
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double tau = 0.001;       // Polyak factor for target tracking
    double discount = 0.99;
    int batch_size = 64;
    std::size_t buffer_capacity = 100000;
    int warmup = 1000;        // transitions required before updates begin
    OuParams noise;
    FeatureScales scales;
    PriceBounds price;
};

struct TrainStats {
    double critic_loss = 0.0;
    double actor_value = 0.0;  // mean critic value of the actor's actions
    bool trained = false;
};

// Deterministic-policy-gradient price setter. The actor maps the normalized
// market state to a unit action in [-1, 1] via tanh; prices are the affine
// image of that interval onto [price.min, price.max]. The critic scores
// (state, unit action) pairs. Four networks total: online and target copies
// of each, with the targets trailing by Polyak averaging.
class DdpgAgent {
  public:
    DdpgAgent(int tenants, const DdpgConfig& cfg, std::uint64_t seed);

    // Price for the current state. With exploration enabled, OU noise is added
    // in price units and the result clamped back into range.
    double act(const MarketState& x, bool explore);

    // Record an executed transition. The stored action is the unit image of
    // the price actually charged, so clamping is reflected in the replay data.
    void observe(const MarketState& x, double price, double reward_value,
                 const MarketState& x_next);

    // One gradient update on a uniformly sampled minibatch, plus target
    // tracking. No-op (trained=false) until the buffer passes the warmup bar.
    TrainStats train_step();

    double unit_action(double price) const;
    double price_of(double unit) const;

    std::size_t buffer_size() const { return replay_.size(); }
    std::int64_t updates() const { return updates_; }
    const DdpgConfig& config() const { return cfg_; }
    int tenants() const { return tenants_; }
    int feature_dim() const { return 2 * tenants_ + 1; }

    const Mlp& actor() const { return actor_; }
    const Mlp& critic() const { return critic_; }

    void save(std::ostream& os) const;
    void load(std::istream& is);
    void save_file(const std::string& path) const;
    void load_file(const std::string& path);

  private:
    std::vector<double> critic_input(const std::vector<double>& feat, double unit) const;
    void check_finite(double v, const char* where) const;

    int tenants_;
    DdpgConfig cfg_;
    Mlp actor_, actor_target_;
    Mlp critic_, critic_target_;
    Adam actor_opt_, critic_opt_;
    ReplayBuffer replay_;
    OuNoise ou_;
    std::mt19937_64 rng_;
    std::int64_t updates_ = 0;

    // Reused scratch to avoid per-update allocation churn.
    MlpGrads critic_grads_, actor_grads_, probe_grads_;
    MlpTrace actor_trace_, critic_trace_;
};

}  // namespace rbmarket
