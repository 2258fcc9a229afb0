#include "rbmarket/ddpg.hpp"

#include <cassert>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rbmarket {

namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> s;
    s.reserve(hidden.size() + 2);
    s.push_back(in);
    s.insert(s.end(), hidden.begin(), hidden.end());
    s.push_back(out);
    return s;
}

}  // namespace

DdpgAgent::DdpgAgent(int tenants, const DdpgConfig& cfg, std::uint64_t seed)
    : tenants_(tenants),
      cfg_(cfg),
      actor_(layer_sizes(2 * tenants + 1, cfg.actor_hidden, 1), Activation::Relu,
             Activation::Tanh),
      actor_target_(actor_),
      critic_(layer_sizes(2 * tenants + 2, cfg.critic_hidden, 1), Activation::Relu,
              Activation::Identity),
      critic_target_(critic_),
      actor_opt_(actor_, cfg.actor_lr),
      critic_opt_(critic_, cfg.critic_lr),
      replay_(cfg.buffer_capacity),
      ou_(cfg.noise),
      rng_(seed) {
    assert(tenants > 0);
    actor_.init(rng_);
    critic_.init(rng_);
    actor_target_ = actor_;
    critic_target_ = critic_;
    critic_grads_ = critic_.make_grads();
    actor_grads_ = actor_.make_grads();
    probe_grads_ = critic_.make_grads();
}

double DdpgAgent::unit_action(double price) const {
    const double half = 0.5 * cfg_.price.range();
    const double u = (price - cfg_.price.midpoint()) / half;
    return std::clamp(u, -1.0, 1.0);
}

double DdpgAgent::price_of(double unit) const {
    return cfg_.price.clamp(cfg_.price.midpoint() + unit * 0.5 * cfg_.price.range());
}

std::vector<double> DdpgAgent::critic_input(const std::vector<double>& feat,
                                            double unit) const {
    std::vector<double> in(feat);
    in.push_back(unit);
    return in;
}

double DdpgAgent::act(const MarketState& x, bool explore) {
    const auto feat = featurize(x, cfg_.scales);
    const double unit = actor_.forward(feat)[0];
    double price = price_of(unit);
    if (explore) {
        price += ou_.sample(rng_);
        price = cfg_.price.clamp(price);
    }
    return price;
}

void DdpgAgent::observe(const MarketState& x, double price, double reward_value,
                        const MarketState& x_next) {
    Transition t;
    t.state = featurize(x, cfg_.scales);
    t.next_state = featurize(x_next, cfg_.scales);
    t.action = unit_action(price);
    t.reward = reward_value;
    replay_.push(std::move(t));
}

void DdpgAgent::check_finite(double v, const char* where) const {
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite value in " << where << " after " << updates_ << " updates";
        throw TrainingFault(msg.str());
    }
}

TrainStats DdpgAgent::train_step() {
    TrainStats stats;
    const std::size_t need =
        std::max<std::size_t>(cfg_.batch_size, static_cast<std::size_t>(cfg_.warmup));
    if (replay_.size() < need) return stats;

    const auto batch = replay_.sample(cfg_.batch_size, rng_);
    const double inv_b = 1.0 / static_cast<double>(batch.size());

    // Critic regression toward the bootstrapped target
    //   y = r + discount * Q'(x', pi'(x')).
    critic_grads_.zero();
    double loss = 0.0;
    std::vector<double> targets(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        const double a_next = actor_target_.forward(t.next_state)[0];
        const double q_next = critic_target_.forward(critic_input(t.next_state, a_next))[0];
        targets[i] = t.reward + cfg_.discount * q_next;
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        const double q = critic_.forward(critic_input(t.state, t.action), critic_trace_)[0];
        const double err = q - targets[i];
        loss += err * err * inv_b;
        critic_.backward(critic_trace_, {2.0 * err * inv_b}, critic_grads_);
    }
    check_finite(loss, "critic loss");
    critic_opt_.step(critic_, critic_grads_);

    // Actor ascent on the critic: push each action along dQ/da. The chain is
    // actor forward, critic forward, critic backward to its inputs (the action
    // slot is last), actor backward with that slope. The critic gradients from
    // this probe are scratch and never applied.
    actor_grads_.zero();
    double value = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        const double a = actor_.forward(t.state, actor_trace_)[0];
        const double q = critic_.forward(critic_input(t.state, a), critic_trace_)[0];
        value += q * inv_b;
        probe_grads_.zero();
        const auto dq_din = critic_.backward(critic_trace_, {-inv_b}, probe_grads_);
        actor_.backward(actor_trace_, {dq_din.back()}, actor_grads_);
    }
    check_finite(value, "actor objective");
    actor_opt_.step(actor_, actor_grads_);

    soft_update(actor_target_, actor_, cfg_.tau);
    soft_update(critic_target_, critic_, cfg_.tau);
    ++updates_;

    stats.critic_loss = loss;
    stats.actor_value = value;
    stats.trained = true;
    return stats;
}

void DdpgAgent::save(std::ostream& os) const {
    os << std::setprecision(17);
    os << "ddpg " << tenants_ << ' ' << updates_ << '\n';
    actor_.save(os);
    actor_target_.save(os);
    critic_.save(os);
    critic_target_.save(os);
    actor_opt_.save(os);
    critic_opt_.save(os);
    ou_.save(os);
    os << rng_ << '\n';
}

void DdpgAgent::load(std::istream& is) {
    std::string tag;
    int tenants = 0;
    is >> tag >> tenants >> updates_;
    if (tag != "ddpg" || tenants != tenants_) {
        throw std::runtime_error("checkpoint does not match this agent");
    }
    actor_ = Mlp::load(is);
    actor_target_ = Mlp::load(is);
    critic_ = Mlp::load(is);
    critic_target_ = Mlp::load(is);
    actor_opt_.load(is);
    critic_opt_.load(is);
    ou_.load(is);
    is >> rng_;
    if (!is) throw std::runtime_error("truncated checkpoint");
}

void DdpgAgent::save_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
    save(os);
}

void DdpgAgent::load_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read checkpoint: " + path);
    load(is);
}

}  // namespace rbmarket
