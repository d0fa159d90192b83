#include "vlg/optim.hpp"

#include <cmath>

#include "vlg/kernels.hpp"

namespace vlg {

void adamw_step(ParamRefs& params, const Gradients& grads, OptimizerState& state, double lr) {
    state.step += 1;
    for (auto& [name, param] : params) {
        const Tensor grad = grads.grad_for(*param);
        VLG_CHECK(grad.shape() == param->shape(), "gradient shape ", shape_str(grad.shape()),
                  " does not match parameter ", name, " ", shape_str(param->shape()));
        VLG_CHECK(grad.all_finite(), "non-finite gradient for parameter ", name);

        auto mit = state.m.find(name);
        if (mit == state.m.end()) {
            mit = state.m.emplace(name, Tensor::zeros(param->shape())).first;
            state.v.emplace(name, Tensor::zeros(param->shape()));
        }
        Tensor& m = mit->second;
        Tensor& v = state.v.at(name);

        std::vector<double> p(param->vec());
        std::vector<double> mv(m.vec());
        std::vector<double> vv(v.vec());
        kern::adamw_update(p.data(), grad.data(), mv.data(), vv.data(), param->numel(), lr,
                           state.cfg.beta1, state.cfg.beta2, state.cfg.eps,
                           state.cfg.weight_decay, state.step);
        const bool rg = param->requires_grad();
        *param = Tensor(param->shape(), std::move(p), rg);
        m = Tensor(m.shape(), std::move(mv));
        v = Tensor(v.shape(), std::move(vv));
    }
}

double cosine_lr(int64_t step, int64_t warmup, int64_t total, double base_lr) {
    VLG_CHECK(warmup < total, "cosine_lr: warmup ", warmup, " must be below total ", total);
    VLG_CHECK(step >= 0, "cosine_lr: negative step ", step);
    if (step >= total) return 0.0;
    if (step < warmup) return base_lr * static_cast<double>(step) / static_cast<double>(warmup);
    const double progress =
        static_cast<double>(step - warmup) / static_cast<double>(total - warmup);
    return base_lr * 0.5 * (1.0 + std::cos(3.14159265358979323846 * progress));
}

Tensor randn(Shape shape, RngStream& rng, double stddev, bool requires_grad) {
    std::vector<double> d(static_cast<size_t>(shape_numel(shape)));
    for (double& v : d) v = rng.normal(0.0, stddev);
    return Tensor(std::move(shape), std::move(d), requires_grad);
}

Tensor rand_uniform(Shape shape, RngStream& rng, double lo, double hi, bool requires_grad) {
    std::vector<double> d(static_cast<size_t>(shape_numel(shape)));
    for (double& v : d) v = rng.uniform(lo, hi);
    return Tensor(std::move(shape), std::move(d), requires_grad);
}

} // namespace vlg
