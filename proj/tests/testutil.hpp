#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "vlg/tensor.hpp"

namespace vlgtest {

// Central finite differences. Evaluates `f` (a plain forward pass, no tape
// involved) with each coordinate of each parameter nudged by +/-h, giving an
// oracle that is independent of the reverse-mode path it checks.
inline std::vector<std::vector<double>> numeric_grad(
    const std::function<double(const std::vector<vlg::Tensor>&)>& f,
    const std::vector<vlg::Tensor>& params, double h = 1e-5) {
    std::vector<std::vector<double>> grads;
    grads.reserve(params.size());
    for (size_t p = 0; p < params.size(); ++p) {
        std::vector<double> g(static_cast<size_t>(params[p].numel()));
        for (int64_t i = 0; i < params[p].numel(); ++i) {
            auto bump = [&](double delta) {
                std::vector<vlg::Tensor> mod = params;
                std::vector<double> data(params[p].vec());
                data[static_cast<size_t>(i)] += delta;
                mod[p] = vlg::Tensor(params[p].shape(), std::move(data));
                return f(mod);
            };
            g[static_cast<size_t>(i)] = (bump(h) - bump(-h)) / (2.0 * h);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

// Relative error with an absolute floor for near-zero gradients.
inline double rel_err(double got, double want) {
    const double denom = std::max({std::fabs(got), std::fabs(want), 1e-8});
    return std::fabs(got - want) / denom;
}

} // namespace vlgtest
