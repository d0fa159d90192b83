#pragma once

#include <cstdint>

namespace vlg::kern {

// Dense numeric kernels. Every kernel exists in two variants: the OpenMP one
// used by the library and a serial reference under kern::serial. Both call the
// same per-row routines, so their outputs are bit-identical; the kernel tests
// assert that and the bench_kernels tool compares their throughput.
//
// Parallelism is only ever over independent output rows/elements. Reductions
// that would reorder floating-point sums stay serial in both variants to keep
// results deterministic regardless of thread count.

// C[m x n] = A[m x k] * B[k x n]
void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);
// C[m x n] = A[m x k] * B[n x k]^T
void matmul_nt(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);
// C[k x n] = A[m x k]^T * B[m x n]
void matmul_tn(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);

void add(const double* a, const double* b, double* out, int64_t n);
void sub(const double* a, const double* b, double* out, int64_t n);
void mul(const double* a, const double* b, double* out, int64_t n);
void scale(const double* a, double s, double* out, int64_t n);
// out[r, :] = a[r, :] + v[:] for each of rows rows
void add_rowvec(const double* a, const double* v, double* out, int64_t rows, int64_t cols);

void gelu(const double* x, double* y, int64_t n);
void gelu_grad(const double* x, const double* gy, double* gx, int64_t n);
void sigmoid(const double* x, double* y, int64_t n);
void sigmoid_grad(const double* y, const double* gy, double* gx, int64_t n);

// Row-wise softmax; causal=true masks columns j > i (rows == cols required).
void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols, bool causal);
void softmax_rows_grad(const double* y, const double* gy, double* gx, int64_t rows, int64_t cols,
                       bool causal);

// Row-wise layer normalization with affine terms; saves mean/rstd for backward.
void layernorm_rows(const double* x, const double* gamma, const double* beta, double eps,
                    double* y, double* mean, double* rstd, int64_t rows, int64_t cols);
void layernorm_rows_grad(const double* x, const double* gamma, const double* mean,
                         const double* rstd, const double* gy, double* gx, double* ggamma,
                         double* gbeta, int64_t rows, int64_t cols);

// Row-wise L2 normalization. eps keeps zero rows finite.
void normalize_rows(const double* x, double* y, double eps, int64_t rows, int64_t cols);
void normalize_rows_grad(const double* x, const double* gy, double* gx, double eps, int64_t rows,
                         int64_t cols);

// Fused decoupled-weight-decay Adam update (bias-corrected).
void adamw_update(double* param, const double* grad, double* m, double* v, int64_t n, double lr,
                  double beta1, double beta2, double eps, double weight_decay, int64_t step);

// Serial deterministic reductions (identical in both variants).
double sum(const double* a, int64_t n);
double sq_diff_sum(const double* a, const double* b, int64_t n);
double dot(const double* a, const double* b, int64_t n);

namespace serial {
void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);
void matmul_nt(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);
void matmul_tn(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);
void add(const double* a, const double* b, double* out, int64_t n);
void sub(const double* a, const double* b, double* out, int64_t n);
void mul(const double* a, const double* b, double* out, int64_t n);
void scale(const double* a, double s, double* out, int64_t n);
void add_rowvec(const double* a, const double* v, double* out, int64_t rows, int64_t cols);
void gelu(const double* x, double* y, int64_t n);
void gelu_grad(const double* x, const double* gy, double* gx, int64_t n);
void sigmoid(const double* x, double* y, int64_t n);
void sigmoid_grad(const double* y, const double* gy, double* gx, int64_t n);
void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols, bool causal);
void layernorm_rows(const double* x, const double* gamma, const double* beta, double eps,
                    double* y, double* mean, double* rstd, int64_t rows, int64_t cols);
void normalize_rows(const double* x, double* y, double eps, int64_t rows, int64_t cols);
void adamw_update(double* param, const double* grad, double* m, double* v, int64_t n, double lr,
                  double beta1, double beta2, double eps, double weight_decay, int64_t step);
} // namespace serial

} // namespace vlg::kern
