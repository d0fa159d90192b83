#pragma once

#include <map>
#include <string>

#include "vlg/autograd.hpp"
#include "vlg/rng.hpp"
#include "vlg/tensor.hpp"

namespace vlg {

/// Named view into a model's parameters. Pointers stay valid for the duration
/// of a training step; the optimizer replaces the pointed-to tensors.
using ParamRefs = std::map<std::string, Tensor*>;

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

/// Per-parameter Adam moments plus the shared step counter.
struct OptimizerState {
    AdamWConfig cfg;
    int64_t step = 0;
    std::map<std::string, Tensor> m;
    std::map<std::string, Tensor> v;
};

/// One decoupled-weight-decay Adam step over the given parameters.
/// Moments are created lazily with the parameter's shape. Throws when a
/// gradient is non-finite, naming the parameter.
void adamw_step(ParamRefs& params, const Gradients& grads, OptimizerState& state, double lr);

/// Linear warmup from 0 to base_lr over `warmup` steps, then half-cosine decay
/// to 0 at `total`. Steps past `total` clamp to the final value.
double cosine_lr(int64_t step, int64_t warmup, int64_t total, double base_lr);

// Tensor initializers. All draws come from the caller's stream.
Tensor randn(Shape shape, RngStream& rng, double stddev = 1.0, bool requires_grad = false);
Tensor rand_uniform(Shape shape, RngStream& rng, double lo, double hi, bool requires_grad = false);

} // namespace vlg
