#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>

namespace rbmarket {

// Ornstein-Uhlenbeck exploration noise with a linearly annealed volatility:
//   x_{k+1} = x_k + theta * (mu - x_k) + sigma_k * N(0,1)
// sigma_k falls from sigma to sigma_final over decay_steps samples and stays
// there. Temporally correlated, so price exploration sweeps rather than jumps.
struct OuParams {
    double theta = 0.15;
    double mu = 0.0;
    double sigma = 250.0;        // initial, in action units
    double sigma_final = 0.0;
    std::int64_t decay_steps = 15000;
};

class OuNoise {
  public:
    OuNoise() = default;
    explicit OuNoise(OuParams p) : p_(p), x_(p.mu) {}

    double sigma_now() const {
        if (p_.decay_steps <= 0) return p_.sigma;
        const double frac = std::min(
            1.0, static_cast<double>(step_) / static_cast<double>(p_.decay_steps));
        return p_.sigma + (p_.sigma_final - p_.sigma) * frac;
    }

    double sample(std::mt19937_64& rng) {
        std::normal_distribution<double> n(0.0, 1.0);
        x_ += p_.theta * (p_.mu - x_) + sigma_now() * n(rng);
        ++step_;
        return x_;
    }

    void reset() {
        x_ = p_.mu;
        step_ = 0;
    }

    const OuParams& params() const { return p_; }

    void save(std::ostream& os) const { os << x_ << ' ' << step_ << '\n'; }
    void load(std::istream& is) { is >> x_ >> step_; }

  private:
    OuParams p_;
    double x_ = 0.0;
    std::int64_t step_ = 0;
};

}  // namespace rbmarket
