#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Tenant demand model. Each tenant scores buying b RBs against a load of d RBs
// at unit price p with the dis-utility
//
//   Ubar(b; d, p) = ( a * ((d - b)^+)^gamma_d + (p * b)^gamma_p )^(1 / gamma_p)
//
// and requests the minimizer of Ubar over b in [0, d]. The exponent pair
// (gamma_d, gamma_p) selects a behavioural regime with a closed-form optimum
// in all but the general case.
namespace rbmarket {

enum class TenantRegime {
    Extreme,         // gamma_d = gamma_p = 1: all-or-nothing at price a
    CostSaving,      // gamma_d = 1, gamma_p > 1: price-capped purchases
    BoundedBacklog,  // gamma_d > 1, gamma_p = 1: tolerates a fixed backlog
    Balanced,        // gamma_d = gamma_p > 1: buys a price-dependent fraction
    General,         // gamma_d, gamma_p > 1, distinct: numeric root
};

struct TenantProfile {
    TenantRegime regime = TenantRegime::Balanced;
    double factor = 1.0;   // a > 0
    double gamma_d = 2.0;  // >= 1
    double gamma_p = 2.0;  // >= 1
    std::string label;     // optional catalog name
};

// Operating-point parametrizations: pick the factor `a` so that a profile's
// behaviour hits an interpretable threshold.

// Cost-saving tenant that affords exactly d0 RBs at price p0:
// a = gamma_p * p0^gamma_p * d0^(gamma_p - 1).
TenantProfile make_cost_saving(double gamma_p, double d0, double p0);

// Bounded-backlog tenant whose tolerated backlog reaches d0 at price p0:
// a = p0 / (gamma_d * d0^(gamma_d - 1)).
TenantProfile make_bounded_backlog(double gamma_d, double d0, double p0);

// Balanced tenant that buys the fraction omega0 of its load at price p0:
// a = p0^gamma * (omega0 / (1 - omega0))^(gamma - 1).
TenantProfile make_balanced(double gamma, double omega0, double p0);

// All-or-nothing tenant with switch price a.
TenantProfile make_extreme(double a);

// Fraction of load a balanced tenant buys at price p0 given its factor
// (inverse of make_balanced's parametrization).
double balanced_fraction(double factor, double gamma, double p0);

// Reference catalog of four tenant archetypes (factor, gamma_p, gamma_d):
//   best_effort    3.5e8, 2, 1   cost-saving
//   price_driven   2e9,   2, 1   cost-saving
//   demand_driven  0.203, 1, 2   bounded-backlog
//   medium_qos     1.1e5, 2, 2   balanced
const std::vector<TenantProfile>& standard_profiles();
const TenantProfile& profile_by_label(const std::string& label);

// Dis-utility Ubar(b; d, p). Total for b >= 0, d >= 0, p >= 0.
double disutility(double bought, double load, double price, const TenantProfile&);

// Inner power form U = Ubar^gamma_p = a((d-b)^+)^gamma_d + (pb)^gamma_p.
// Convex in b; shares its minimizer with Ubar. Used by the solvers.
double disutility_power(double bought, double load, double price, const TenantProfile&);

// Exact minimizer b* of Ubar over [0, d]. Closed form per regime; the general
// regime bisects the derivative of U on (0, d) to |b - b*| <= 1e-6 * d.
// p = 0 yields d (RBs are free); ties in the extreme regime resolve to d.
double optimal_request(double load, double price, const TenantProfile&);

// Independent check: evaluates Ubar on a uniform grid of `resolution` steps
// over [0, d] and returns the grid argmin. Differs from optimal_request by at
// most d / resolution plus solver tolerance.
double brute_force_request(double load, double price, const TenantProfile&,
                           int resolution = 2000);

// Per-epoch behaviour: the integer RB request for a load of `load` RBs at the
// announced price (round-half-up of the exact optimum).
std::int64_t tenant_act(double load, double price, const TenantProfile&);

}  // namespace rbmarket
