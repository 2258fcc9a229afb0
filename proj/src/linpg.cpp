#include "rbmarket/linpg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace rbmarket {

LinPgAgent::LinPgAgent(int feature_dim, const LinPgConfig& cfg, std::uint64_t seed)
    : dim_(feature_dim),
      cfg_(cfg),
      theta_(static_cast<std::size_t>(feature_dim) + 1, 0.0),
      v_(static_cast<std::size_t>(feature_dim) + 1, 0.0),
      rng_(seed) {
    assert(feature_dim > 0);
}

double LinPgAgent::dot_aug(const std::vector<double>& w,
                           const std::vector<double>& phi) const {
    assert(phi.size() == static_cast<std::size_t>(dim_));
    double s = w.back();  // bias
    for (int i = 0; i < dim_; ++i) s += w[i] * phi[i];
    return s;
}

double LinPgAgent::mean_unit(const std::vector<double>& phi) const {
    return dot_aug(theta_, phi);
}

double LinPgAgent::value(const std::vector<double>& phi) const {
    return dot_aug(v_, phi);
}

double LinPgAgent::sigma_now() const {
    if (cfg_.decay_steps <= 0) return cfg_.sigma;
    const double frac = std::min(
        1.0, static_cast<double>(step_) / static_cast<double>(cfg_.decay_steps));
    return cfg_.sigma + (cfg_.sigma_final - cfg_.sigma) * frac;
}

double LinPgAgent::sample_unit(const std::vector<double>& phi) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double u = mean_unit(phi) + sigma_now() * n(rng_);
    ++step_;
    return u;
}

double LinPgAgent::unit_action(double price) const {
    const double half = 0.5 * cfg_.price.range();
    return std::clamp((price - cfg_.price.midpoint()) / half, -1.0, 1.0);
}

double LinPgAgent::price_of(double unit) const {
    return cfg_.price.clamp(cfg_.price.midpoint() + unit * 0.5 * cfg_.price.range());
}

double LinPgAgent::act(const MarketState& x, bool explore) {
    const auto phi = featurize(x, cfg_.scales);
    const double u = explore ? sample_unit(phi) : mean_unit(phi);
    return price_of(u);
}

void LinPgAgent::update(const MarketState& x, double price, double reward_value,
                        const MarketState& x_next) {
    td_update(featurize(x, cfg_.scales), unit_action(price), reward_value,
              featurize(x_next, cfg_.scales), true);
}

void LinPgAgent::td_update(const std::vector<double>& phi, double unit,
                           double reward_value, const std::vector<double>& phi_next,
                           bool bootstrap) {
    const double v_now = value(phi);
    const double v_next = bootstrap ? value(phi_next) : 0.0;
    const double delta = reward_value + cfg_.discount * v_next - v_now;

    const double s = sigma_now();
    const double score = (unit - mean_unit(phi)) / (s * s);

    for (int i = 0; i <= dim_; ++i) {
        const double f = (i < dim_) ? phi[i] : 1.0;
        v_[i] += cfg_.critic_lr * delta * f;
        theta_[i] += cfg_.actor_lr * delta * score * f;
    }

    if (!std::isfinite(theta_.back()) || !std::isfinite(v_.back())) {
        std::ostringstream msg;
        msg << "linear policy-gradient update diverged at step " << step_;
        throw TrainingFault(msg.str());
    }
}

}  // namespace rbmarket
