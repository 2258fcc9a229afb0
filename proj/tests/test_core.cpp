// Allocation rule and epoch reward: frozen-value checks plus randomized
// property sweeps over the proportional allocator.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rbmarket/core.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace rbmarket;

TEST_CASE("proportional allocation: hand-checked splits") {
    SUBCASE("oversubscribed pool scales pro rata") {
        const auto a = allocate({10.0, 30.0}, 20.0);
        CHECK(a.granted[0] == doctest::Approx(5.0));
        CHECK(a.granted[1] == doctest::Approx(15.0));
        CHECK(a.total == doctest::Approx(20.0));
    }
    SUBCASE("requests under capacity are granted verbatim") {
        const auto a = allocate({10.0, 30.0}, 100.0);
        CHECK(a.granted[0] == doctest::Approx(10.0));
        CHECK(a.granted[1] == doctest::Approx(30.0));
        CHECK(a.total == doctest::Approx(40.0));
    }
    SUBCASE("all-zero requests yield an all-zero grant") {
        const auto a = allocate({0.0, 0.0, 0.0}, 50.0);
        CHECK(a.total == 0.0);
        for (double g : a.granted) CHECK(g == 0.0);
    }
    SUBCASE("empty pool grants nothing") {
        const auto a = allocate({5.0, 5.0}, 0.0);
        CHECK(a.total == 0.0);
    }
}

TEST_CASE("proportional allocation: randomized properties") {
    // Conservation, identity under capacity, and a shared scaling factor for
    // every positive request, across ten thousand random instances.
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<int> n_dist(1, 12);
    std::uniform_real_distribution<double> req_dist(0.0, 400.0);
    std::uniform_real_distribution<double> avail_dist(1.0, 1200.0);

    for (int it = 0; it < 10000; ++it) {
        const int n = n_dist(rng);
        std::vector<double> req(static_cast<std::size_t>(n));
        double sum = 0.0;
        for (auto& r : req) {
            r = req_dist(rng);
            sum += r;
        }
        const double avail = avail_dist(rng);
        const auto a = allocate(req, avail);

        // Conservation: total never exceeds the pool, and equals either the
        // pool or the demand, whichever binds.
        const double expect_total = sum > 0.0 ? std::min(sum, avail) : 0.0;
        REQUIRE(a.total <= avail * (1.0 + 1e-12) + 1e-9);
        REQUIRE(a.total == doctest::Approx(expect_total).epsilon(1e-12));

        if (sum <= avail) {
            // Identity: nobody is trimmed when the pool covers all requests.
            for (std::size_t i = 0; i < req.size(); ++i)
                REQUIRE(a.granted[i] == doctest::Approx(req[i]).epsilon(1e-12));
        } else {
            // Proportionality: one common scale factor.
            const double scale = avail / sum;
            for (std::size_t i = 0; i < req.size(); ++i)
                REQUIRE(a.granted[i] == doctest::Approx(req[i] * scale).epsilon(1e-12));
        }
    }
}

TEST_CASE("mismatch factor: frozen values and scale invariance") {
    // Selling nothing against a pool of n leaves relative mismatch 1.
    CHECK(mismatch_factor(100.0, 0.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    // n=90, requested=60: x = 1/3, f = exp(-1/9).
    CHECK(mismatch_factor(90.0, 60.0, 1.0) ==
          doctest::Approx(0.8948393168143697).epsilon(1e-15));
    // Exact match peaks at 1, over-request decays symmetrically in x.
    CHECK(mismatch_factor(750.0, 750.0, 1.0) == doctest::Approx(1.0));
    CHECK(mismatch_factor(100.0, 130.0, 1.0) ==
          doctest::Approx(mismatch_factor(100.0, 70.0, 1.0)).epsilon(1e-15));
    // Wider sigma flattens the penalty.
    CHECK(mismatch_factor(100.0, 0.0, 3.0) ==
          doctest::Approx(std::exp(-1.0 / 9.0)).epsilon(1e-15));

    // f depends only on the relative mismatch: scaling pool and request
    // together leaves it unchanged.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    for (int it = 0; it < 1000; ++it) {
        const double n = u(rng);
        const double q = u(rng);
        const double k = u(rng);
        CHECK(mismatch_factor(n, q, 1.0) ==
              doctest::Approx(mismatch_factor(k * n, k * q, 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("revenue factor: frozen values") {
    // Double or half the target both halve the factor at delta = 1.
    CHECK(revenue_factor(2.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(revenue_factor(0.5, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(revenue_factor(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    // delta sharpens the decay.
    CHECK(revenue_factor(2.0, 1.0, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
    // Zero revenue against a positive target scores zero.
    CHECK(revenue_factor(0.0, 850.0, 1.0) == 0.0);
}

TEST_CASE("epoch reward: range and the exact-peak condition") {
    RewardConfig cfg;  // sigma = delta = 1, target 850 * n

    MarketState s;
    s.available = 750;

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> req_dist(0, 1200);
    std::uniform_real_distribution<double> price_dist(0.0, 2500.0);

    for (int it = 0; it < 5000; ++it) {
        std::vector<std::int64_t> req = {req_dist(rng), req_dist(rng), req_dist(rng)};
        std::vector<double> reqd(req.begin(), req.end());
        const auto a = allocate(reqd, static_cast<double>(s.available));
        const double p = price_dist(rng);
        const double r = reward(s, p, req, a, cfg);
        REQUIRE(r >= 0.0);
        REQUIRE(r <= 1.0);

        // r == 1 exactly when demand matches the pool and revenue hits target.
        const double total_req = reqd[0] + reqd[1] + reqd[2];
        const bool peak = total_req == static_cast<double>(s.available) &&
                          p * a.total == cfg.target(s.available);
        if (r == 1.0) REQUIRE(peak);
        if (peak) REQUIRE(r == 1.0);
    }

    // Construct the peak explicitly: requests sum to n, price such that
    // p * n == 850 * n.
    std::vector<std::int64_t> exact = {250, 250, 250};
    const auto a = allocate({250.0, 250.0, 250.0}, 750.0);
    CHECK(reward(s, 850.0, exact, a, cfg) == doctest::Approx(1.0).epsilon(1e-15));

    // Either factor alone below peak drags the reward under 1.
    CHECK(reward(s, 851.0, exact, a, cfg) < 1.0);
    std::vector<std::int64_t> off = {250, 250, 249};
    const auto a2 = allocate({250.0, 250.0, 249.0}, 750.0);
    CHECK(reward(s, 850.0, off, a2, cfg) < 1.0);

    // No RBs on sale: reward pinned to zero.
    MarketState empty;
    empty.available = 0;
    CHECK(reward(empty, 850.0, exact, a, cfg) == 0.0);
}

TEST_CASE("epoch clock wraps periods into days") {
    EpochClock clk;
    clk.epochs_per_period = 10;
    clk.periods_per_day = 24;
    CHECK(clk.period() == 0);
    for (int i = 0; i < 10; ++i) clk.advance();
    CHECK(clk.period() == 1);
    clk.epoch = 10 * 24;  // one full day
    CHECK(clk.period() == 0);
    clk.epoch = 10 * 24 + 35;
    CHECK(clk.period() == 3);
}

TEST_CASE("price bounds clamp") {
    PriceBounds b;
    CHECK(b.clamp(-5.0) == 0.0);
    CHECK(b.clamp(3000.0) == 2500.0);
    CHECK(b.clamp(1234.5) == 1234.5);
    CHECK(b.midpoint() == doctest::Approx(1250.0));
}
