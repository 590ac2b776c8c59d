#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forgecurve/errors.hpp"
#include "forgecurve/memory.hpp"

namespace forgecurve {

// Small feed-forward classifier: tanh hidden layers, softmax output,
// cross-entropy loss. Parameters live in one flat vector; layout is, for
// each layer l (dims[l] -> dims[l+1]): weights row-major [out][in], then
// biases [out]. That order is the canonical flattening used everywhere an
// operation consumes "the parameter vector".
class TinyNet {
public:
    // Seeded uniform init in (-1/sqrt(fan_in), +1/sqrt(fan_in)).
    TinyNet(std::vector<int> layer_dims, std::uint64_t seed);

    // Wraps an explicit parameter vector (tests build nets by hand).
    static TinyNet with_params(std::vector<int> layer_dims, std::vector<double> params);

    std::size_t param_count() const { return params_.size(); }
    std::span<const double> params() const { return params_; }
    std::vector<double>& mutable_params() { return params_; }
    const std::vector<int>& layer_dims() const { return dims_; }
    int input_dim() const { return dims_.front(); }
    int num_classes() const { return dims_.back(); }

    // Class probabilities for one input (softmax over logits).
    std::vector<double> forward(std::span<const double> x) const;

    // Argmax class; ties resolve to the lowest index.
    int predict(std::span<const double> x) const;

    // Mean cross-entropy over the batch.
    double batch_loss(const std::vector<Example>& batch) const;

    // Mean cross-entropy plus its gradient (same layout as params).
    double batch_loss_and_gradient(const std::vector<Example>& batch,
                                   std::vector<double>& grad) const;

private:
    explicit TinyNet(std::vector<int> layer_dims);
    void validate_example(const Example& ex) const;

    std::vector<int> dims_;
    std::vector<double> params_;
    std::vector<std::size_t> w_off_;
    std::vector<std::size_t> b_off_;
};

// Plain gradient descent with optional momentum. learning_rate may be zero
// (null update); momentum in [0, 1).
class SgdOptimizer {
public:
    explicit SgdOptimizer(double learning_rate, double momentum = 0.0);

    void step(std::vector<double>& params, std::span<const double> grad);

    double learning_rate() const { return lr_; }
    double momentum() const { return momentum_; }

private:
    double lr_;
    double momentum_;
    std::vector<double> velocity_;
};

}  // namespace forgecurve
