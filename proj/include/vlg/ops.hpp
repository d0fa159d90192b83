#pragma once

#include <cstdint>
#include <vector>

#include "vlg/autograd.hpp"
#include "vlg/tensor.hpp"

namespace vlg {

// Differentiable tensor ops. Each op validates shape conformance, computes its
// result through the kernels, and records itself on the active tape when any
// input is traced.

Tensor matmul(const Tensor& a, const Tensor& b);            // [m,k]x[k,n] -> [m,n]
Tensor add(const Tensor& a, const Tensor& b);               // same shape
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor add_rowvec(const Tensor& a, const Tensor& v);        // [r,c] + [1,c]

Tensor gelu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor softmax_rows(const Tensor& x);
Tensor causal_softmax_rows(const Tensor& x);                // square, masks j > i
Tensor layernorm_rows(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                      double eps = 1e-5);
Tensor normalize_rows(const Tensor& x, double eps = 1e-12); // row-wise L2

Tensor embedding_rows(const Tensor& table, const std::vector<int32_t>& ids);
Tensor concat_rows(const Tensor& a, const Tensor& b);
Tensor stack_rows(const std::vector<Tensor>& rows);         // each [1,c] -> [n,c]
Tensor slice_rows(const Tensor& x, int64_t begin, int64_t end);
Tensor gather_rows(const Tensor& x, const std::vector<int32_t>& idx);
Tensor transpose2d(const Tensor& x);
Tensor mean_rows(const Tensor& x);                          // [r,c] -> [1,c]

Tensor sum_all(const Tensor& x);                            // -> [1]
Tensor mean_all(const Tensor& x);                           // -> [1]
Tensor mse(const Tensor& a, const Tensor& b);               // mean of squared diffs -> [1]
Tensor cross_entropy_rows(const Tensor& logits, const std::vector<int32_t>& targets); // mean
Tensor cosine_sim(const Tensor& a, const Tensor& b);        // flattened vectors -> [1]

Tensor detach(const Tensor& t);

} // namespace vlg
