#include "rbmarket/baselines.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rbmarket {

double static_price(StaticLevel level, const PriceBounds& bounds) {
    switch (level) {
        case StaticLevel::Low: return bounds.min + bounds.range() * (1.0 / 8.0);
        case StaticLevel::MediumLow: return bounds.min + bounds.range() * (3.0 / 8.0);
        case StaticLevel::MediumHigh: return bounds.min + bounds.range() * (5.0 / 8.0);
        case StaticLevel::High: return bounds.min + bounds.range() * (7.0 / 8.0);
    }
    return bounds.midpoint();
}

double default_kappa(const PriceBounds& bounds, std::int64_t available) {
    assert(available > 0);
    return 0.001 * bounds.range() / static_cast<double>(available);
}

DistributedPricer::DistributedPricer(const DistributedPricerConfig& cfg)
    : cfg_(cfg), p_(cfg.price.clamp(std::max(cfg.reserve, cfg.initial))) {
    assert(cfg_.kappa > 0.0);
}

double DistributedPricer::update(double total_demand, std::int64_t available) {
    double next = p_ + cfg_.kappa * (total_demand - static_cast<double>(available));
    next = std::max(cfg_.reserve, next);
    p_ = cfg_.price.clamp(next);
    return p_;
}

Allocation proportional_allocation(const std::vector<double>& loads, double available) {
    return allocate(loads, available);
}

namespace {

// Dis-utility slope in the bought quantity. With U the inner power form,
//   U'(b)  = gp p^gp b^(gp-1) - a gd ((d-b)^+)^(gd-1)   for b < d
//            gp p^gp b^(gp-1)                            for b >= d
//   Ubar'  = U' / (gp U^(1 - 1/gp)).
double ubar_prime(const TenantProfile& t, double d, double p, double b) {
    const double gp = t.gamma_p;
    const double gd = t.gamma_d;
    double uprime = gp * std::pow(p, gp) * std::pow(b, gp - 1.0);
    if (b < d) uprime -= t.factor * gd * std::pow(d - b, gd - 1.0);
    if (gp == 1.0) return uprime;
    const double u = disutility_power(b, d, p, t);
    if (u <= 0.0) return 0.0;
    return uprime / (gp * std::pow(u, 1.0 - 1.0 / gp));
}

double total_disutility(const std::vector<double>& loads,
                        const std::vector<TenantProfile>& profiles, double p,
                        const std::vector<double>& nu) {
    double s = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        s += disutility(nu[i], loads[i], p, profiles[i]);
    }
    return s;
}

// Euclidean projection onto {nu >= 0, sum nu = S}: nu_i = max(0, y_i + lam)
// with lam found by bisection.
std::vector<double> project_sum(const std::vector<double>& y, double S) {
    const std::size_t n = y.size();
    std::vector<double> out(n);
    if (S <= 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return out;
    }
    const double ymax = *std::max_element(y.begin(), y.end());
    const double ymin = *std::min_element(y.begin(), y.end());
    double lo = -ymax;                                  // sum -> 0
    double hi = S / static_cast<double>(n) - ymin;      // sum >= S
    auto sum_at = [&](double lam) {
        double s = 0.0;
        for (double v : y) s += std::max(0.0, v + lam);
        return s;
    };
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sum_at(mid) < S ? lo : hi) = mid;
    }
    const double lam = 0.5 * (lo + hi);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::max(0.0, y[i] + lam);
        s += out[i];
    }
    if (s > 0.0) {
        const double scale = S / s;
        for (double& v : out) v *= scale;
    }
    return out;
}

struct Inner {
    std::vector<double> nu;
    double objective = 0.0;
};

// Minimize the total dis-utility at fixed price over {nu >= 0, sum nu = S}:
// projected gradient with backtracking, then pairwise-transfer polish along
// the constraint.
Inner solve_at_sum(const std::vector<double>& loads,
                   const std::vector<TenantProfile>& profiles, double p, double S,
                   const std::vector<double>& seed, const MyopicConfig& cfg) {
    const std::size_t n = loads.size();
    Inner best;
    best.nu = project_sum(seed, S);
    best.objective = total_disutility(loads, profiles, p, best.nu);

    std::vector<double> grad(n), trial(n);
    for (int it = 0; it < cfg.inner_iters; ++it) {
        double gmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = ubar_prime(profiles[i], loads[i], p, best.nu[i]);
            gmax = std::max(gmax, std::abs(grad[i]));
        }
        if (gmax == 0.0) break;

        double alpha = std::max(1.0, S) / gmax;
        bool improved = false;
        for (int bt = 0; bt < 24; ++bt, alpha *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = best.nu[i] - alpha * grad[i];
            auto cand = project_sum(trial, S);
            const double f = total_disutility(loads, profiles, p, cand);
            if (f < best.objective * (1.0 - 1e-12)) {
                const double gain = best.objective - f;
                best.nu = std::move(cand);
                best.objective = f;
                improved = true;
                if (gain < 1e-9 * (std::abs(best.objective) + 1.0)) it = cfg.inner_iters;
                break;
            }
        }
        if (!improved) break;
    }

    // Pairwise transfers keep the sum fixed and escape the flat directions the
    // projected gradient struggles with. Each pair gets a golden-section over
    // the transfer amount plus snap candidates at the per-tenant optima.
    for (int sweep = 0; sweep < cfg.polish_sweeps; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double ni = best.nu[i], nj = best.nu[j];
                auto pair_cost = [&](double t) {
                    return disutility(ni - t, loads[i], p, profiles[i]) +
                           disutility(nj + t, loads[j], p, profiles[j]);
                };
                const double base = pair_cost(0.0);
                double lo = -nj, hi = ni;
                if (hi - lo <= 0.0) continue;

                constexpr double kPhi = 0.6180339887498949;
                double x1 = hi - kPhi * (hi - lo), x2 = lo + kPhi * (hi - lo);
                double f1 = pair_cost(x1), f2 = pair_cost(x2);
                for (int g = 0; g < 48 && hi - lo > 1e-10 * (std::abs(ni) + std::abs(nj) + 1.0); ++g) {
                    if (f1 < f2) {
                        hi = x2; x2 = x1; f2 = f1;
                        x1 = hi - kPhi * (hi - lo);
                        f1 = pair_cost(x1);
                    } else {
                        lo = x1; x1 = x2; f1 = f2;
                        x2 = lo + kPhi * (hi - lo);
                        f2 = pair_cost(x2);
                    }
                }
                double tbest = (f1 < f2) ? x1 : x2;
                double fbest = std::min(f1, f2);
                const double bi = optimal_request(loads[i], p, profiles[i]);
                const double bj = optimal_request(loads[j], p, profiles[j]);
                for (double t : {ni - bi, bj - nj, -nj, ni}) {
                    if (t < -nj || t > ni) continue;
                    const double f = pair_cost(t);
                    if (f < fbest) { fbest = f; tbest = t; }
                }
                if (fbest < base - 1e-10 * (std::abs(base) + 1.0)) {
                    best.nu[i] = ni - tbest;
                    best.nu[j] = nj + tbest;
                    best.objective += fbest - base;
                    moved = true;
                }
            }
        }
        if (!moved) break;
    }
    best.objective = total_disutility(loads, profiles, p, best.nu);
    return best;
}

// Fixed-price subproblem over {nu >= 0, L <= sum nu <= U}. The unconstrained
// per-tenant optima decide which (if either) sum bound is active.
Inner solve_at_price(const std::vector<double>& loads,
                     const std::vector<TenantProfile>& profiles, double p, double L,
                     double U, const std::vector<double>* warm,
                     const MyopicConfig& cfg) {
    const std::size_t n = loads.size();
    std::vector<double> bstar(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        bstar[i] = optimal_request(loads[i], p, profiles[i]);
        total += bstar[i];
    }
    const double slack = 1e-9 * (U + 1.0);
    if (total >= L - slack && total <= U + slack) {
        Inner r;
        r.nu = std::move(bstar);
        r.objective = total_disutility(loads, profiles, p, r.nu);
        return r;
    }
    const double S = (total < L) ? L : U;

    Inner from_bstar = solve_at_sum(loads, profiles, p, S, bstar, cfg);
    if (warm && warm->size() == n) {
        // A warm seed that projects onto the same start point would just redo
        // the solve we already have.
        const auto seeded = project_sum(*warm, S);
        const auto base = project_sum(bstar, S);
        double gap = 0.0;
        for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, std::abs(seeded[i] - base[i]));
        if (gap > 1e-9 * (S + 1.0)) {
            Inner from_warm = solve_at_sum(loads, profiles, p, S, *warm, cfg);
            if (from_warm.objective < from_bstar.objective) return from_warm;
        }
    }
    return from_bstar;
}

}  // namespace

MyopicSolution myopic_solve(const std::vector<double>& loads,
                            const std::vector<TenantProfile>& profiles,
                            std::int64_t available, double revenue_target,
                            const MyopicConfig& cfg,
                            const std::vector<double>* warm_hint) {
    if (profiles.empty() || loads.size() != profiles.size()) {
        throw std::invalid_argument("myopic_solve: loads and profiles must be non-empty and aligned");
    }
    const std::size_t n_tenants = loads.size();
    MyopicSolution sol;
    sol.requests.assign(n_tenants, 0.0);

    if (available <= 0) {
        sol.price = cfg.price.min;
        sol.feasible = revenue_target <= 0.0;
        sol.objective = total_disutility(loads, profiles, sol.price, sol.requests);
        return sol;
    }
    const double n = static_cast<double>(available);

    // No in-range price reaches the target even selling everything: return the
    // revenue-maximizing point and flag it.
    if (revenue_target > cfg.price.max * n * (1.0 + cfg.tolerance)) {
        Inner forced = solve_at_price(loads, profiles, cfg.price.max, n, n, nullptr, cfg);
        sol.price = cfg.price.max;
        sol.requests = forced.nu;
        sol.objective = forced.objective;
        sol.revenue = sol.price * std::accumulate(forced.nu.begin(), forced.nu.end(), 0.0);
        sol.feasible = false;
        return sol;
    }

    double p_lo = cfg.price.min;
    if (revenue_target > 0.0) p_lo = std::max(p_lo, revenue_target / n);
    const double p_hi = cfg.price.max;

    std::vector<double> warm;
    if (warm_hint && warm_hint->size() == n_tenants) warm = *warm_hint;
    double best_f = 0.0, best_p = p_lo;
    std::vector<double> best_nu;
    bool have_best = false;

    auto value = [&](double p) {
        double L = (revenue_target > 0.0) ? revenue_target / p : 0.0;
        L = std::min(L, n);
        Inner r = solve_at_price(loads, profiles, p, L, n,
                                 warm.empty() ? nullptr : &warm, cfg);
        warm = r.nu;
        if (!have_best || r.objective < best_f) {
            have_best = true;
            best_f = r.objective;
            best_p = p;
            best_nu = std::move(r.nu);
        }
        return r.objective;
    };

    // Coarse scan, then golden-section inside the best bracket.
    const int k = std::max(2, cfg.scan_points);
    std::vector<double> fs(k);
    int k_best = 0;
    for (int i = 0; i < k; ++i) {
        const double p = p_lo + (p_hi - p_lo) * i / (k - 1);
        fs[i] = value(p);
        if (fs[i] < fs[k_best]) k_best = i;
    }
    double lo = p_lo + (p_hi - p_lo) * std::max(0, k_best - 1) / (k - 1);
    double hi = p_lo + (p_hi - p_lo) * std::min(k - 1, k_best + 1) / (k - 1);

    constexpr double kPhi = 0.6180339887498949;
    double x1 = hi - kPhi * (hi - lo), x2 = lo + kPhi * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    for (int g = 0; g < cfg.golden_iters; ++g) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - kPhi * (hi - lo);
            f1 = value(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + kPhi * (hi - lo);
            f2 = value(x2);
        }
    }

    sol.price = best_p;
    sol.requests = best_nu;
    sol.objective = best_f;
    sol.revenue = best_p * std::accumulate(best_nu.begin(), best_nu.end(), 0.0);
    sol.feasible = sol.revenue >= revenue_target * (1.0 - cfg.tolerance) &&
                   std::accumulate(best_nu.begin(), best_nu.end(), 0.0) <=
                       n * (1.0 + cfg.tolerance);
    return sol;
}

}  // namespace rbmarket
