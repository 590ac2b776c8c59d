#include "forgecurve/net.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace forgecurve {

TinyNet::TinyNet(std::vector<int> layer_dims) : dims_(std::move(layer_dims)) {
    if (dims_.size() < 2) {
        throw ConfigError("TinyNet: need at least input and output dims");
    }
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        if (dims_[l] < 1 || dims_[l + 1] < 1) {
            throw ConfigError("TinyNet: layer dims must be positive");
        }
        w_off_.push_back(total);
        total += static_cast<std::size_t>(dims_[l]) * static_cast<std::size_t>(dims_[l + 1]);
        b_off_.push_back(total);
        total += static_cast<std::size_t>(dims_[l + 1]);
    }
    params_.assign(total, 0.0);
}

TinyNet::TinyNet(std::vector<int> layer_dims, std::uint64_t seed)
    : TinyNet(std::move(layer_dims)) {
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
        std::uniform_real_distribution<double> dist(-bound, bound);
        const std::size_t n =
            static_cast<std::size_t>(dims_[l]) * static_cast<std::size_t>(dims_[l + 1]) +
            static_cast<std::size_t>(dims_[l + 1]);
        for (std::size_t i = 0; i < n; ++i) {
            params_[w_off_[l] + i] = dist(rng);
        }
    }
}

TinyNet TinyNet::with_params(std::vector<int> layer_dims, std::vector<double> params) {
    TinyNet net(std::move(layer_dims));
    if (params.size() != net.params_.size()) {
        throw ShapeError("TinyNet::with_params: expected " +
                         std::to_string(net.params_.size()) + " parameters, got " +
                         std::to_string(params.size()));
    }
    net.params_ = std::move(params);
    return net;
}

void TinyNet::validate_example(const Example& ex) const {
    if (static_cast<int>(ex.features.size()) != input_dim()) {
        throw ShapeError("TinyNet: example has " + std::to_string(ex.features.size()) +
                         " features, expected " + std::to_string(input_dim()));
    }
    if (ex.label < 0 || ex.label >= num_classes()) {
        throw ShapeError("TinyNet: label " + std::to_string(ex.label) +
                         " outside [0, " + std::to_string(num_classes()) + ")");
    }
}

namespace {

void softmax_inplace(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : z) {
        v /= sum;
    }
}

}  // namespace

std::vector<double> TinyNet::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != input_dim()) {
        throw ShapeError("TinyNet::forward: input has " + std::to_string(x.size()) +
                         " features, expected " + std::to_string(input_dim()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw NumericError("TinyNet::forward: non-finite input");
        }
    }
    std::vector<double> act(x.begin(), x.end());
    const std::size_t layers = dims_.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
        const int in = dims_[l];
        const int out = dims_[l + 1];
        const double* w = params_.data() + w_off_[l];
        const double* b = params_.data() + b_off_[l];
        std::vector<double> z(static_cast<std::size_t>(out));
        for (int o = 0; o < out; ++o) {
            double acc = b[o];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) {
                acc += row[i] * act[i];
            }
            z[o] = acc;
        }
        if (l + 1 < layers) {
            for (double& v : z) {
                v = std::tanh(v);
            }
        }
        act = std::move(z);
    }
    softmax_inplace(act);
    return act;
}

int TinyNet::predict(std::span<const double> x) const {
    const std::vector<double> probs = forward(x);
    return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double TinyNet::batch_loss(const std::vector<Example>& batch) const {
    if (batch.empty()) {
        throw ShapeError("TinyNet::batch_loss: empty batch");
    }
    double total = 0.0;
    for (const Example& ex : batch) {
        validate_example(ex);
        const std::vector<double> probs = forward(ex.features);
        total += -std::log(probs[static_cast<std::size_t>(ex.label)]);
    }
    const double loss = total / static_cast<double>(batch.size());
    if (!std::isfinite(loss)) {
        throw NumericError("TinyNet: non-finite cross-entropy loss");
    }
    return loss;
}

double TinyNet::batch_loss_and_gradient(const std::vector<Example>& batch,
                                        std::vector<double>& grad) const {
    if (batch.empty()) {
        throw ShapeError("TinyNet::batch_loss_and_gradient: empty batch");
    }
    grad.assign(params_.size(), 0.0);
    const std::size_t layers = dims_.size() - 1;
    double total = 0.0;

    std::vector<std::vector<double>> acts(layers + 1);
    for (const Example& ex : batch) {
        validate_example(ex);
        // Forward pass keeping every activation.
        acts[0].assign(ex.features.begin(), ex.features.end());
        for (std::size_t l = 0; l < layers; ++l) {
            const int in = dims_[l];
            const int out = dims_[l + 1];
            const double* w = params_.data() + w_off_[l];
            const double* b = params_.data() + b_off_[l];
            acts[l + 1].assign(static_cast<std::size_t>(out), 0.0);
            for (int o = 0; o < out; ++o) {
                double acc = b[o];
                const double* row = w + static_cast<std::size_t>(o) * in;
                for (int i = 0; i < in; ++i) {
                    acc += row[i] * acts[l][static_cast<std::size_t>(i)];
                }
                acts[l + 1][static_cast<std::size_t>(o)] = acc;
            }
            if (l + 1 < layers) {
                for (double& v : acts[l + 1]) {
                    v = std::tanh(v);
                }
            }
        }
        std::vector<double> probs = acts[layers];
        softmax_inplace(probs);
        total += -std::log(probs[static_cast<std::size_t>(ex.label)]);

        // Backward pass: dz at the output is probs - onehot(label).
        std::vector<double> dz = std::move(probs);
        dz[static_cast<std::size_t>(ex.label)] -= 1.0;
        for (std::size_t l = layers; l-- > 0;) {
            const int in = dims_[l];
            const int out = dims_[l + 1];
            double* gw = grad.data() + w_off_[l];
            double* gb = grad.data() + b_off_[l];
            const double* w = params_.data() + w_off_[l];
            std::vector<double> dprev(static_cast<std::size_t>(in), 0.0);
            for (int o = 0; o < out; ++o) {
                const double d = dz[static_cast<std::size_t>(o)];
                double* grow = gw + static_cast<std::size_t>(o) * in;
                const double* wrow = w + static_cast<std::size_t>(o) * in;
                for (int i = 0; i < in; ++i) {
                    grow[i] += d * acts[l][static_cast<std::size_t>(i)];
                    dprev[static_cast<std::size_t>(i)] += d * wrow[i];
                }
                gb[o] += d;
            }
            if (l > 0) {
                // tanh'(z) = 1 - tanh(z)^2, and acts[l] holds tanh(z).
                for (int i = 0; i < in; ++i) {
                    const double h = acts[l][static_cast<std::size_t>(i)];
                    dprev[static_cast<std::size_t>(i)] *= 1.0 - h * h;
                }
            }
            dz = std::move(dprev);
        }
    }

    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (double& g : grad) {
        g *= inv_b;
    }
    const double loss = total * inv_b;
    if (!std::isfinite(loss)) {
        throw NumericError("TinyNet: non-finite cross-entropy loss");
    }
    return loss;
}

SgdOptimizer::SgdOptimizer(double learning_rate, double momentum)
    : lr_(learning_rate), momentum_(momentum) {
    if (!std::isfinite(lr_) || lr_ < 0.0) {
        throw ConfigError("learning_rate must be finite and >= 0");
    }
    if (!std::isfinite(momentum_) || momentum_ < 0.0 || momentum_ >= 1.0) {
        throw ConfigError("momentum must be in [0, 1)");
    }
}

void SgdOptimizer::step(std::vector<double>& params, std::span<const double> grad) {
    if (params.size() != grad.size()) {
        throw ShapeError("SgdOptimizer::step: parameter/gradient length mismatch");
    }
    if (momentum_ == 0.0) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] -= lr_ * grad[i];
        }
        return;
    }
    if (velocity_.size() != params.size()) {
        velocity_.assign(params.size(), 0.0);
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        velocity_[i] = momentum_ * velocity_[i] + grad[i];
        params[i] -= lr_ * velocity_[i];
    }
}

}  // namespace forgecurve
