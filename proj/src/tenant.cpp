#include "rbmarket/tenant.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbmarket {
namespace {

TenantRegime classify(double gamma_d, double gamma_p) {
    const bool d1 = gamma_d == 1.0;
    const bool p1 = gamma_p == 1.0;
    if (d1 && p1) return TenantRegime::Extreme;
    if (d1) return TenantRegime::CostSaving;
    if (p1) return TenantRegime::BoundedBacklog;
    if (gamma_d == gamma_p) return TenantRegime::Balanced;
    return TenantRegime::General;
}

// exp(log(base) * e) with clamping so that gamma -> 1 limits (huge exponents)
// saturate instead of overflowing.
double safe_pow(double base, double e) {
    if (base <= 0.0) return 0.0;
    const double t = std::log(base) * e;
    if (t > 700.0) return std::numeric_limits<double>::infinity();
    if (t < -700.0) return 0.0;
    return std::exp(t);
}

// d/db of the inner form U at 0 <= b < d:
//   U'(b) = -a gamma_d (d-b)^(gamma_d-1) + gamma_p p^gamma_p b^(gamma_p-1)
double power_derivative(double b, double d, double p, const TenantProfile& t) {
    const double lack = d - b;
    const double demand_term = t.factor * t.gamma_d * std::pow(lack, t.gamma_d - 1.0);
    const double price_term =
        t.gamma_p * std::pow(p, t.gamma_p) * std::pow(b, t.gamma_p - 1.0);
    return price_term - demand_term;
}

}  // namespace

TenantProfile make_cost_saving(double gamma_p, double d0, double p0) {
    assert(gamma_p > 1.0 && d0 > 0.0 && p0 > 0.0);
    TenantProfile t;
    t.regime = TenantRegime::CostSaving;
    t.gamma_d = 1.0;
    t.gamma_p = gamma_p;
    t.factor = gamma_p * std::pow(p0, gamma_p) * std::pow(d0, gamma_p - 1.0);
    return t;
}

TenantProfile make_bounded_backlog(double gamma_d, double d0, double p0) {
    assert(gamma_d > 1.0 && d0 > 0.0 && p0 > 0.0);
    TenantProfile t;
    t.regime = TenantRegime::BoundedBacklog;
    t.gamma_d = gamma_d;
    t.gamma_p = 1.0;
    t.factor = p0 / (gamma_d * std::pow(d0, gamma_d - 1.0));
    return t;
}

TenantProfile make_balanced(double gamma, double omega0, double p0) {
    assert(gamma > 1.0 && omega0 > 0.0 && omega0 < 1.0 && p0 > 0.0);
    TenantProfile t;
    t.regime = TenantRegime::Balanced;
    t.gamma_d = gamma;
    t.gamma_p = gamma;
    t.factor = std::pow(p0, gamma) * std::pow(omega0 / (1.0 - omega0), gamma - 1.0);
    return t;
}

TenantProfile make_extreme(double a) {
    assert(a > 0.0);
    TenantProfile t;
    t.regime = TenantRegime::Extreme;
    t.gamma_d = 1.0;
    t.gamma_p = 1.0;
    t.factor = a;
    return t;
}

double balanced_fraction(double factor, double gamma, double p0) {
    assert(gamma > 1.0 && factor > 0.0 && p0 > 0.0);
    // omega / (1 - omega) = (factor / p0^gamma)^(1/(gamma-1))
    const double q = safe_pow(factor / std::pow(p0, gamma), 1.0 / (gamma - 1.0));
    return q / (1.0 + q);
}

const std::vector<TenantProfile>& standard_profiles() {
    static const std::vector<TenantProfile> catalog = [] {
        std::vector<TenantProfile> v(4);
        v[0] = TenantProfile{TenantRegime::CostSaving, 3.5e8, 1.0, 2.0, "best_effort"};
        v[1] = TenantProfile{TenantRegime::CostSaving, 2e9, 1.0, 2.0, "price_driven"};
        v[2] = TenantProfile{TenantRegime::BoundedBacklog, 0.203, 2.0, 1.0, "demand_driven"};
        v[3] = TenantProfile{TenantRegime::Balanced, 1.1e5, 2.0, 2.0, "medium_qos"};
        return v;
    }();
    return catalog;
}

const TenantProfile& profile_by_label(const std::string& label) {
    for (const TenantProfile& t : standard_profiles()) {
        if (t.label == label) return t;
    }
    throw std::invalid_argument("unknown tenant profile label: " + label);
}

double disutility_power(double bought, double load, double price,
                        const TenantProfile& t) {
    assert(bought >= 0.0 && load >= 0.0 && price >= 0.0);
    const double lack = std::max(0.0, load - bought);
    return t.factor * std::pow(lack, t.gamma_d) + std::pow(price * bought, t.gamma_p);
}

double disutility(double bought, double load, double price, const TenantProfile& t) {
    return std::pow(disutility_power(bought, load, price, t), 1.0 / t.gamma_p);
}

double optimal_request(double load, double price, const TenantProfile& t) {
    assert(load >= 0.0 && price >= 0.0);
    const double d = load;
    if (d == 0.0) return 0.0;
    if (price == 0.0) return d;

    const TenantRegime regime = classify(t.gamma_d, t.gamma_p);
    switch (regime) {
        case TenantRegime::Extreme:
            // Ubar is linear in b: slope p - a. Ties (p == a) resolve to d.
            return price <= t.factor ? d : 0.0;

        case TenantRegime::CostSaving: {
            // b* = min( (a / (gamma_p p^gamma_p))^(1/(gamma_p-1)), d )
            const double cap = safe_pow(
                t.factor / (t.gamma_p * std::pow(price, t.gamma_p)),
                1.0 / (t.gamma_p - 1.0));
            return std::min(cap, d);
        }

        case TenantRegime::BoundedBacklog: {
            // b* = (d - (p / (a gamma_d))^(1/(gamma_d-1)))^+
            const double tolerated =
                safe_pow(price / (t.factor * t.gamma_d), 1.0 / (t.gamma_d - 1.0));
            return std::max(0.0, d - tolerated);
        }

        case TenantRegime::Balanced: {
            // b* = d / (1 + (p^gamma / a)^(1/(gamma-1)))
            const double q = safe_pow(std::pow(price, t.gamma_p) / t.factor,
                                      1.0 / (t.gamma_p - 1.0));
            if (std::isinf(q)) return 0.0;
            return d / (1.0 + q);
        }

        case TenantRegime::General:
            break;
    }

    // General regime: U' is continuous and strictly increasing on (0, d) with
    // U'(0+) < 0 < U'(d-), so the unique interior root is bracketed.
    double lo = 0.0, hi = d;
    const double tol = 1e-6 * d;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (power_derivative(mid, d, price, t) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double brute_force_request(double load, double price, const TenantProfile& t,
                           int resolution) {
    assert(resolution > 0);
    if (load == 0.0) return 0.0;
    double best_b = 0.0;
    double best_u = disutility(0.0, load, price, t);
    for (int k = 1; k <= resolution; ++k) {
        const double b = load * static_cast<double>(k) / resolution;
        const double u = disutility(b, load, price, t);
        if (u < best_u) {
            best_u = u;
            best_b = b;
        }
    }
    return best_b;
}

std::int64_t tenant_act(double load, double price, const TenantProfile& t) {
    if (load <= 0.0) return 0;
    const double b = optimal_request(load, price, t);
    return static_cast<std::int64_t>(std::llround(b));
}

}  // namespace rbmarket
