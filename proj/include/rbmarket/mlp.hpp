#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

// Small fully connected networks with hand-written backpropagation, plus the
// Adam rule and Polyak averaging used by the learning agents. Everything is
// double precision and deterministic given the caller's RNG.
namespace rbmarket {

enum class Activation { Identity, Relu, Tanh };

// Per-layer parameter gradients, same shapes as the owning Mlp.
struct MlpGrads {
    std::vector<std::vector<double>> w;  // [layer][out * in], row-major
    std::vector<std::vector<double>> b;  // [layer][out]
    void zero();
};

// Forward-pass cache consumed by backward().
struct MlpTrace {
    std::vector<std::vector<double>> act;  // act[0] = input, act[L] = output
    std::vector<std::vector<double>> pre;  // pre-activation per layer
};

class Mlp {
  public:
    Mlp() = default;
    // sizes = {in, hidden..., out}
    Mlp(std::vector<int> sizes, Activation hidden, Activation output);

    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    int layer_count() const { return static_cast<int>(w_.size()); }
    const std::vector<int>& sizes() const { return sizes_; }
    std::size_t parameter_count() const;

    std::vector<double>& layer_weights(int l) { return w_[l]; }
    std::vector<double>& layer_biases(int l) { return b_[l]; }
    const std::vector<double>& layer_weights(int l) const { return w_[l]; }
    const std::vector<double>& layer_biases(int l) const { return b_[l]; }

    // Hidden layers: U(-1/sqrt(fan_in), 1/sqrt(fan_in)). Final layer:
    // U(-final_scale, final_scale), so a fresh net outputs near zero.
    void init(std::mt19937_64& rng, double final_scale = 3e-3);

    std::vector<double> forward(const std::vector<double>& x) const;
    const std::vector<double>& forward(const std::vector<double>& x, MlpTrace&) const;

    // dLdy is the loss gradient at the (post-activation) output. Parameter
    // gradients accumulate into `grads`; the return value is dL/dx.
    std::vector<double> backward(const MlpTrace&, std::vector<double> dLdy,
                                 MlpGrads& grads) const;

    MlpGrads make_grads() const;

    void save(std::ostream&) const;
    static Mlp load(std::istream&);

    bool finite() const;

  private:
    std::vector<int> sizes_;
    Activation hidden_ = Activation::Relu;
    Activation output_ = Activation::Identity;
    std::vector<std::vector<double>> w_;  // [layer][out * in]
    std::vector<std::vector<double>> b_;
};

// target <- tau * online + (1 - tau) * target, elementwise.
void soft_update(Mlp& target, const Mlp& online, double tau);

class Adam {
  public:
    Adam() = default;
    Adam(const Mlp& shape, double lr, double beta1 = 0.9, double beta2 = 0.999,
         double eps = 1e-8);
    void step(Mlp& net, const MlpGrads& grads);
    double learning_rate() const { return lr_; }

    void save(std::ostream&) const;
    void load(std::istream&);

  private:
    double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    std::int64_t t_ = 0;
    std::vector<std::vector<double>> mw_, vw_, mb_, vb_;
};

}  // namespace rbmarket
