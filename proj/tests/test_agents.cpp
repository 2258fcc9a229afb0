// Learning agents: replay sampling statistics, exploration noise dynamics,
// checkpoint round-trips for the deep pricer, and the linear actor-critic on
// a two-state bandit it must be able to solve.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rbmarket/ddpg.hpp"
#include "rbmarket/linpg.hpp"
#include "rbmarket/noise.hpp"
#include "rbmarket/replay.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

using namespace rbmarket;

TEST_CASE("replay buffer: ring semantics") {
    ReplayBuffer buf(4);
    for (int i = 0; i < 6; ++i) {
        Transition t;
        t.reward = i;
        buf.push(std::move(t));
    }
    CHECK(buf.size() == 4);
    // Entries 0 and 1 were overwritten by 4 and 5.
    std::vector<double> rewards;
    for (std::size_t i = 0; i < buf.size(); ++i) rewards.push_back(buf.at(i).reward);
    CHECK(rewards == std::vector<double>{4.0, 5.0, 2.0, 3.0});
}

TEST_CASE("replay buffer: sampling is uniform (chi-squared)") {
    // 1000 distinct entries, 10000 draws bucketed into 10 groups of 100
    // entries each. Expected count 1000 per bucket; chi-squared with 9
    // degrees of freedom stays below the 1% critical value 21.67.
    ReplayBuffer buf(1000);
    for (int i = 0; i < 1000; ++i) {
        Transition t;
        t.reward = i;
        buf.push(std::move(t));
    }
    std::mt19937_64 rng(17);
    std::vector<int> counts(10, 0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto& t = buf.sample(rng);
        ++counts[static_cast<std::size_t>(t.reward / 100.0)];
    }
    double chi2 = 0.0;
    const double expect = draws / 10.0;
    for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
    CHECK(chi2 < 21.67);
}

TEST_CASE("ou noise: volatility anneals linearly and mean-reverts") {
    OuParams p;
    p.theta = 0.2;
    p.mu = 0.0;
    p.sigma = 100.0;
    p.sigma_final = 10.0;
    p.decay_steps = 100;
    OuNoise ou(p);

    CHECK(ou.sigma_now() == doctest::Approx(100.0));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) ou.sample(rng);
    CHECK(ou.sigma_now() == doctest::Approx(55.0));
    for (int i = 0; i < 200; ++i) ou.sample(rng);
    CHECK(ou.sigma_now() == doctest::Approx(10.0));

    // With zero volatility the process is pure mean reversion: from any
    // excursion it contracts geometrically back to mu.
    OuParams q;
    q.theta = 0.15;
    q.mu = 0.0;
    q.sigma = 0.0;
    q.sigma_final = 0.0;
    q.decay_steps = 0;
    OuNoise drift(q);
    std::stringstream seed_state;
    seed_state << 500.0 << ' ' << 0;  // park the process at x = 500
    drift.load(seed_state);
    double x = 0.0;
    for (int i = 0; i < 100; ++i) x = drift.sample(rng);
    CHECK(std::abs(x) < 500.0 * std::pow(0.85, 99) + 1e-9);
}

namespace {

MarketState tiny_state(std::int64_t available, double load) {
    MarketState x;
    x.prev_requests = {100, 200};
    x.loads = {load, load * 0.5};
    x.available = available;
    return x;
}

DdpgConfig tiny_ddpg() {
    DdpgConfig cfg;
    cfg.actor_hidden = {16, 16};
    cfg.critic_hidden = {16, 16};
    cfg.warmup = 32;
    cfg.batch_size = 8;
    cfg.noise.sigma = 50.0;
    cfg.noise.sigma_final = 10.0;
    cfg.noise.decay_steps = 100;
    return cfg;
}

}  // namespace

TEST_CASE("ddpg: prices stay in range and warmup gates training") {
    DdpgAgent agent(2, tiny_ddpg(), 42);
    std::mt19937_64 env_rng(7);
    std::uniform_real_distribution<double> load(0.0, 4000.0);

    MarketState x = tiny_state(750, 1000.0);
    for (int i = 0; i < 64; ++i) {
        const double p = agent.act(x, true);
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 2500.0);
        MarketState nx = tiny_state(750, load(env_rng));
        agent.observe(x, p, 0.5, nx);
        const auto stats = agent.train_step();
        if (agent.buffer_size() < 32) {
            REQUIRE_FALSE(stats.trained);
        } else {
            REQUIRE(stats.trained);
        }
        x = nx;
    }
    CHECK(agent.updates() == 64 - 32 + 1);
}

TEST_CASE("ddpg: unit/price maps are inverse bijections on the range") {
    DdpgAgent agent(2, tiny_ddpg(), 1);
    for (double p : {0.0, 312.5, 1250.0, 2187.5, 2500.0}) {
        CHECK(agent.price_of(agent.unit_action(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(agent.unit_action(0.0) == doctest::Approx(-1.0));
    CHECK(agent.unit_action(2500.0) == doctest::Approx(1.0));
}

TEST_CASE("ddpg: checkpoint round-trip restores behavior exactly") {
    DdpgAgent agent(2, tiny_ddpg(), 42);
    std::mt19937_64 env_rng(13);
    std::uniform_real_distribution<double> load(0.0, 4000.0);

    MarketState x = tiny_state(750, 1500.0);
    for (int i = 0; i < 200; ++i) {
        const double p = agent.act(x, true);
        MarketState nx = tiny_state(750, load(env_rng));
        agent.observe(x, p, 1.0 / (1.0 + i), nx);
        agent.train_step();
        x = nx;
    }

    std::stringstream ss;
    agent.save(ss);
    DdpgAgent clone(2, tiny_ddpg(), 999);  // different seed, then overwritten by load
    clone.load(ss);

    CHECK(clone.updates() == agent.updates());
    for (double l : {100.0, 900.0, 2500.0, 5000.0}) {
        MarketState probe = tiny_state(750, l);
        REQUIRE(clone.act(probe, false) == agent.act(probe, false));
    }

    // The exploration stream (OU state + RNG) is part of the checkpoint, so
    // even noisy actions replay identically.
    MarketState probe = tiny_state(600, 800.0);
    for (int i = 0; i < 10; ++i) {
        REQUIRE(clone.act(probe, true) == agent.act(probe, true));
    }

    DdpgAgent mismatched(3, tiny_ddpg(), 1);
    std::stringstream ss2;
    agent.save(ss2);
    CHECK_THROWS(mismatched.load(ss2));
}

TEST_CASE("linpg: solves a two-state continuous bandit") {
    // States are one-hot; the reward is 1 - (a - a*)^2 with a* = -0.5 in
    // state 0 and +0.5 in state 1. The linear-Gaussian actor must move its
    // per-state mean toward the optimum.
    LinPgConfig cfg;
    cfg.actor_lr = 2e-3;
    cfg.critic_lr = 1e-2;
    cfg.discount = 0.0;  // bandit: no bootstrapping
    cfg.sigma = 0.3;
    cfg.sigma_final = 0.1;
    cfg.decay_steps = 8000;
    LinPgAgent agent(2, cfg, 11);

    const std::vector<double> s0 = {1.0, 0.0};
    const std::vector<double> s1 = {0.0, 1.0};
    std::mt19937_64 rng(29);
    std::bernoulli_distribution which(0.5);

    for (int t = 0; t < 10000; ++t) {
        const bool one = which(rng);
        const auto& phi = one ? s1 : s0;
        const double target = one ? 0.5 : -0.5;
        const double a = agent.sample_unit(phi);
        const double r = 1.0 - (a - target) * (a - target);
        agent.td_update(phi, a, r, phi, false);
    }

    CHECK(std::abs(agent.mean_unit(s0) - (-0.5)) <= 0.2);
    CHECK(std::abs(agent.mean_unit(s1) - 0.5) <= 0.2);

    // The critic's baseline should separate the states' achievable values
    // from the initial zero guess.
    CHECK(agent.value(s0) > 0.5);
    CHECK(agent.value(s1) > 0.5);
}

TEST_CASE("linpg: market-facing prices stay in range") {
    LinPgConfig cfg;
    LinPgAgent agent = LinPgAgent::for_market(2, cfg, 9);
    MarketState x = tiny_state(750, 2000.0);
    for (int i = 0; i < 50; ++i) {
        const double p = agent.act(x, true);
        REQUIRE(p >= cfg.price.min);
        REQUIRE(p <= cfg.price.max);
        agent.update(x, p, 0.4, x);
    }
    CHECK(agent.steps() == 50);
}
