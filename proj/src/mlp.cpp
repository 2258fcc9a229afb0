#include "rbmarket/mlp.hpp"

#include <cassert>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rbmarket {
namespace {

double activate(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Tanh: return std::tanh(x);
    }
    return x;
}

// Derivative in terms of pre-activation x and activation value y.
double activate_prime(Activation a, double x, double y) {
    switch (a) {
        case Activation::Identity: return 1.0;
        case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - y * y;
    }
    return 1.0;
}

const char* act_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
    }
    return "identity";
}

Activation act_from_name(const std::string& s) {
    if (s == "identity") return Activation::Identity;
    if (s == "relu") return Activation::Relu;
    if (s == "tanh") return Activation::Tanh;
    throw std::runtime_error("unknown activation in stream: " + s);
}

}  // namespace

void MlpGrads::zero() {
    for (auto& layer : w) layer.assign(layer.size(), 0.0);
    for (auto& layer : b) layer.assign(layer.size(), 0.0);
}

Mlp::Mlp(std::vector<int> sizes, Activation hidden, Activation output)
    : sizes_(std::move(sizes)), hidden_(hidden), output_(output) {
    assert(sizes_.size() >= 2);
    const int layers = static_cast<int>(sizes_.size()) - 1;
    w_.resize(layers);
    b_.resize(layers);
    for (int l = 0; l < layers; ++l) {
        w_[l].assign(static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l], 0.0);
        b_[l].assign(sizes_[l + 1], 0.0);
    }
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (int l = 0; l < layer_count(); ++l) n += w_[l].size() + b_[l].size();
    return n;
}

void Mlp::init(std::mt19937_64& rng, double final_scale) {
    const int layers = layer_count();
    for (int l = 0; l < layers; ++l) {
        const double bound = l + 1 == layers
                                 ? final_scale
                                 : 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (double& x : w_[l]) x = u(rng);
        for (double& x : b_[l]) x = u(rng);
    }
}

const std::vector<double>& Mlp::forward(const std::vector<double>& x,
                                        MlpTrace& tr) const {
    assert(static_cast<int>(x.size()) == input_size());
    const int layers = layer_count();
    tr.act.resize(layers + 1);
    tr.pre.resize(layers);
    tr.act[0] = x;
    for (int l = 0; l < layers; ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const Activation a = l + 1 == layers ? output_ : hidden_;
        tr.pre[l].assign(out, 0.0);
        tr.act[l + 1].assign(out, 0.0);
        const std::vector<double>& src = tr.act[l];
        for (int j = 0; j < out; ++j) {
            double s = b_[l][j];
            const double* row = &w_[l][static_cast<std::size_t>(j) * in];
            for (int i = 0; i < in; ++i) s += row[i] * src[i];
            tr.pre[l][j] = s;
            tr.act[l + 1][j] = activate(a, s);
        }
    }
    return tr.act[layers];
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
    MlpTrace tr;
    return forward(x, tr);
}

std::vector<double> Mlp::backward(const MlpTrace& tr, std::vector<double> dLdy,
                                  MlpGrads& grads) const {
    const int layers = layer_count();
    assert(static_cast<int>(dLdy.size()) == output_size());
    std::vector<double> delta = std::move(dLdy);
    for (int l = layers - 1; l >= 0; --l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const Activation a = l + 1 == layers ? output_ : hidden_;
        for (int j = 0; j < out; ++j) {
            delta[j] *= activate_prime(a, tr.pre[l][j], tr.act[l + 1][j]);
        }
        const std::vector<double>& src = tr.act[l];
        for (int j = 0; j < out; ++j) {
            double* grow = &grads.w[l][static_cast<std::size_t>(j) * in];
            const double dj = delta[j];
            for (int i = 0; i < in; ++i) grow[i] += dj * src[i];
            grads.b[l][j] += dj;
        }
        if (l == 0) break;
        std::vector<double> prev(in, 0.0);
        for (int j = 0; j < out; ++j) {
            const double* row = &w_[l][static_cast<std::size_t>(j) * in];
            const double dj = delta[j];
            for (int i = 0; i < in; ++i) prev[i] += row[i] * dj;
        }
        delta = std::move(prev);
    }
    // dL/dx for the first layer.
    const int in = sizes_[0], out = sizes_[1];
    std::vector<double> dx(in, 0.0);
    for (int j = 0; j < out; ++j) {
        const double* row = &w_[0][static_cast<std::size_t>(j) * in];
        for (int i = 0; i < in; ++i) dx[i] += row[i] * delta[j];
    }
    return dx;
}

MlpGrads Mlp::make_grads() const {
    MlpGrads g;
    g.w.resize(layer_count());
    g.b.resize(layer_count());
    for (int l = 0; l < layer_count(); ++l) {
        g.w[l].assign(w_[l].size(), 0.0);
        g.b[l].assign(b_[l].size(), 0.0);
    }
    return g;
}

bool Mlp::finite() const {
    for (const auto& layer : w_)
        for (double x : layer)
            if (!std::isfinite(x)) return false;
    for (const auto& layer : b_)
        for (double x : layer)
            if (!std::isfinite(x)) return false;
    return true;
}

void Mlp::save(std::ostream& os) const {
    os << "mlp " << sizes_.size();
    for (int s : sizes_) os << ' ' << s;
    os << ' ' << act_name(hidden_) << ' ' << act_name(output_) << '\n';
    os << std::setprecision(17);
    for (int l = 0; l < layer_count(); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        for (int j = 0; j < out; ++j) {
            for (int i = 0; i < in; ++i) {
                if (i) os << ' ';
                os << w_[l][static_cast<std::size_t>(j) * in + i];
            }
            os << '\n';
        }
        for (int j = 0; j < out; ++j) {
            if (j) os << ' ';
            os << b_[l][j];
        }
        os << '\n';
    }
}

Mlp Mlp::load(std::istream& is) {
    std::string tag;
    std::size_t n = 0;
    is >> tag >> n;
    if (tag != "mlp" || n < 2) throw std::runtime_error("malformed mlp header");
    std::vector<int> sizes(n);
    for (auto& s : sizes) is >> s;
    std::string hidden, output;
    is >> hidden >> output;
    Mlp net(sizes, act_from_name(hidden), act_from_name(output));
    for (int l = 0; l < net.layer_count(); ++l) {
        for (double& x : net.w_[l]) is >> x;
        for (double& x : net.b_[l]) is >> x;
    }
    if (!is) throw std::runtime_error("truncated mlp stream");
    return net;
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
    assert(target.sizes() == online.sizes());
    for (int l = 0; l < target.layer_count(); ++l) {
        auto& tw = target.layer_weights(l);
        const auto& ow = online.layer_weights(l);
        for (std::size_t i = 0; i < tw.size(); ++i)
            tw[i] = tau * ow[i] + (1.0 - tau) * tw[i];
        auto& tb = target.layer_biases(l);
        const auto& ob = online.layer_biases(l);
        for (std::size_t i = 0; i < tb.size(); ++i)
            tb[i] = tau * ob[i] + (1.0 - tau) * tb[i];
    }
}

Adam::Adam(const Mlp& shape, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    mw_.resize(shape.layer_count());
    vw_.resize(shape.layer_count());
    mb_.resize(shape.layer_count());
    vb_.resize(shape.layer_count());
    for (int l = 0; l < shape.layer_count(); ++l) {
        mw_[l].assign(shape.layer_weights(l).size(), 0.0);
        vw_[l].assign(shape.layer_weights(l).size(), 0.0);
        mb_[l].assign(shape.layer_biases(l).size(), 0.0);
        vb_[l].assign(shape.layer_biases(l).size(), 0.0);
    }
}

void Adam::step(Mlp& net, const MlpGrads& grads) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (int l = 0; l < net.layer_count(); ++l) {
        auto& w = net.layer_weights(l);
        const auto& gw = grads.w[l];
        for (std::size_t i = 0; i < w.size(); ++i) {
            mw_[l][i] = beta1_ * mw_[l][i] + (1.0 - beta1_) * gw[i];
            vw_[l][i] = beta2_ * vw_[l][i] + (1.0 - beta2_) * gw[i] * gw[i];
            w[i] -= lr_ * (mw_[l][i] / c1) / (std::sqrt(vw_[l][i] / c2) + eps_);
        }
        auto& b = net.layer_biases(l);
        const auto& gb = grads.b[l];
        for (std::size_t i = 0; i < b.size(); ++i) {
            mb_[l][i] = beta1_ * mb_[l][i] + (1.0 - beta1_) * gb[i];
            vb_[l][i] = beta2_ * vb_[l][i] + (1.0 - beta2_) * gb[i] * gb[i];
            b[i] -= lr_ * (mb_[l][i] / c1) / (std::sqrt(vb_[l][i] / c2) + eps_);
        }
    }
}

void Adam::save(std::ostream& os) const {
    os << "adam " << lr_ << ' ' << beta1_ << ' ' << beta2_ << ' ' << eps_ << ' '
       << t_ << ' ' << mw_.size() << '\n';
    os << std::setprecision(17);
    auto dump = [&os](const std::vector<std::vector<double>>& vv) {
        for (const auto& v : vv) {
            os << v.size();
            for (double x : v) os << ' ' << x;
            os << '\n';
        }
    };
    dump(mw_);
    dump(vw_);
    dump(mb_);
    dump(vb_);
}

void Adam::load(std::istream& is) {
    std::string tag;
    std::size_t layers = 0;
    is >> tag >> lr_ >> beta1_ >> beta2_ >> eps_ >> t_ >> layers;
    if (tag != "adam") throw std::runtime_error("malformed adam header");
    auto slurp = [&is, layers](std::vector<std::vector<double>>& vv) {
        vv.resize(layers);
        for (auto& v : vv) {
            std::size_t n = 0;
            is >> n;
            v.resize(n);
            for (double& x : v) is >> x;
        }
    };
    slurp(mw_);
    slurp(vw_);
    slurp(mb_);
    slurp(vb_);
    if (!is) throw std::runtime_error("truncated adam stream");
}

}  // namespace rbmarket
