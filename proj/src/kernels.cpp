#include "vlg/kernels.hpp"

#include <cmath>
#include <cstring>

namespace vlg::kern {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Per-row / per-range routines shared by the serial and OpenMP entry points.
// Keeping one definition guarantees both variants produce the same bits.

inline void matmul_row(const double* a, const double* b, double* c, int64_t k, int64_t n) {
    for (int64_t j = 0; j < n; ++j) c[j] = 0.0;
    for (int64_t p = 0; p < k; ++p) {
        const double av = a[p];
        const double* brow = b + p * n;
        for (int64_t j = 0; j < n; ++j) c[j] += av * brow[j];
    }
}

inline void matmul_nt_row(const double* a, const double* b, double* c, int64_t k, int64_t n) {
    for (int64_t j = 0; j < n; ++j) {
        const double* brow = b + j * k;
        double acc = 0.0;
        for (int64_t p = 0; p < k; ++p) acc += a[p] * brow[p];
        c[j] = acc;
    }
}

// row r of C[kxn] = sum_i A[i,r] * B[i,:]
inline void matmul_tn_row(const double* a, const double* b, double* c, int64_t m, int64_t k,
                          int64_t n, int64_t r) {
    for (int64_t j = 0; j < n; ++j) c[j] = 0.0;
    for (int64_t i = 0; i < m; ++i) {
        const double av = a[i * k + r];
        const double* brow = b + i * n;
        for (int64_t j = 0; j < n; ++j) c[j] += av * brow[j];
    }
}

inline void gelu_one(double x, double* y) {
    *y = 0.5 * x * (1.0 + std::erf(x * kSqrt1_2));
}

inline void gelu_grad_one(double x, double gy, double* gx) {
    const double cdf = 0.5 * (1.0 + std::erf(x * kSqrt1_2));
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    *gx = gy * (cdf + x * pdf);
}

inline void softmax_row(const double* x, double* y, int64_t cols, int64_t limit) {
    double mx = x[0];
    for (int64_t j = 1; j < limit; ++j) mx = x[j] > mx ? x[j] : mx;
    double denom = 0.0;
    for (int64_t j = 0; j < limit; ++j) {
        y[j] = std::exp(x[j] - mx);
        denom += y[j];
    }
    const double inv = 1.0 / denom;
    for (int64_t j = 0; j < limit; ++j) y[j] *= inv;
    for (int64_t j = limit; j < cols; ++j) y[j] = 0.0;
}

inline void softmax_row_grad(const double* y, const double* gy, double* gx, int64_t cols,
                             int64_t limit) {
    double acc = 0.0;
    for (int64_t j = 0; j < limit; ++j) acc += gy[j] * y[j];
    for (int64_t j = 0; j < limit; ++j) gx[j] = y[j] * (gy[j] - acc);
    for (int64_t j = limit; j < cols; ++j) gx[j] = 0.0;
}

inline void layernorm_row(const double* x, const double* gamma, const double* beta, double eps,
                          double* y, double* mean, double* rstd, int64_t cols) {
    double mu = 0.0;
    for (int64_t j = 0; j < cols; ++j) mu += x[j];
    mu /= static_cast<double>(cols);
    double var = 0.0;
    for (int64_t j = 0; j < cols; ++j) {
        const double d = x[j] - mu;
        var += d * d;
    }
    var /= static_cast<double>(cols);
    const double rs = 1.0 / std::sqrt(var + eps);
    for (int64_t j = 0; j < cols; ++j) y[j] = (x[j] - mu) * rs * gamma[j] + beta[j];
    *mean = mu;
    *rstd = rs;
}

inline void normalize_row(const double* x, double* y, double eps, int64_t cols) {
    double nrm = 0.0;
    for (int64_t j = 0; j < cols; ++j) nrm += x[j] * x[j];
    const double inv = 1.0 / std::sqrt(nrm + eps);
    for (int64_t j = 0; j < cols; ++j) y[j] = x[j] * inv;
}

inline void normalize_row_grad(const double* x, const double* gy, double* gx, double eps,
                               int64_t cols) {
    double nrm = 0.0, xg = 0.0;
    for (int64_t j = 0; j < cols; ++j) {
        nrm += x[j] * x[j];
        xg += x[j] * gy[j];
    }
    const double inv = 1.0 / std::sqrt(nrm + eps);
    const double inv3 = inv * inv * inv;
    for (int64_t j = 0; j < cols; ++j) gx[j] = gy[j] * inv - x[j] * xg * inv3;
}

inline void adamw_one(double* p, double g, double* m, double* v, double lr, double beta1,
                      double beta2, double eps, double wd, double bc1, double bc2) {
    *m = beta1 * *m + (1.0 - beta1) * g;
    *v = beta2 * *v + (1.0 - beta2) * g * g;
    const double mhat = *m / bc1;
    const double vhat = *v / bc2;
    *p -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * *p);
}

// Elementwise work below this size is not worth spawning a team for.
constexpr int64_t kOmpMinElems = 4096;
constexpr int64_t kOmpMinRows = 2;

} // namespace

// ---------------------------------------------------------------- OpenMP ---

void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
#pragma omp parallel for if (m >= kOmpMinRows && m * k * n >= kOmpMinElems)
    for (int64_t i = 0; i < m; ++i) matmul_row(a + i * k, b, c + i * n, k, n);
}

void matmul_nt(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
#pragma omp parallel for if (m >= kOmpMinRows && m * k * n >= kOmpMinElems)
    for (int64_t i = 0; i < m; ++i) matmul_nt_row(a + i * k, b, c + i * n, k, n);
}

void matmul_tn(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
#pragma omp parallel for if (k >= kOmpMinRows && m * k * n >= kOmpMinElems)
    for (int64_t r = 0; r < k; ++r) matmul_tn_row(a, b, c + r * n, m, k, n, r);
}

void add(const double* a, const double* b, double* out, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double s, double* out, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void add_rowvec(const double* a, const double* v, double* out, int64_t rows, int64_t cols) {
#pragma omp parallel for if (rows >= kOmpMinRows && rows * cols >= kOmpMinElems)
    for (int64_t r = 0; r < rows; ++r) {
        const double* ar = a + r * cols;
        double* or_ = out + r * cols;
        for (int64_t j = 0; j < cols; ++j) or_[j] = ar[j] + v[j];
    }
}

void gelu(const double* x, double* y, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) gelu_one(x[i], &y[i]);
}

void gelu_grad(const double* x, const double* gy, double* gx, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) gelu_grad_one(x[i], gy[i], &gx[i]);
}

void sigmoid(const double* x, double* y, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
}

void sigmoid_grad(const double* y, const double* gy, double* gx, int64_t n) {
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i) gx[i] = gy[i] * y[i] * (1.0 - y[i]);
}

void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols, bool causal) {
#pragma omp parallel for if (rows >= kOmpMinRows && rows * cols >= kOmpMinElems)
    for (int64_t r = 0; r < rows; ++r) {
        const int64_t limit = causal ? (r + 1 < cols ? r + 1 : cols) : cols;
        softmax_row(x + r * cols, y + r * cols, cols, limit);
    }
}

void softmax_rows_grad(const double* y, const double* gy, double* gx, int64_t rows, int64_t cols,
                       bool causal) {
#pragma omp parallel for if (rows >= kOmpMinRows && rows * cols >= kOmpMinElems)
    for (int64_t r = 0; r < rows; ++r) {
        const int64_t limit = causal ? (r + 1 < cols ? r + 1 : cols) : cols;
        softmax_row_grad(y + r * cols, gy + r * cols, gx + r * cols, cols, limit);
    }
}

void layernorm_rows(const double* x, const double* gamma, const double* beta, double eps,
                    double* y, double* mean, double* rstd, int64_t rows, int64_t cols) {
#pragma omp parallel for if (rows >= kOmpMinRows && rows * cols >= kOmpMinElems)
    for (int64_t r = 0; r < rows; ++r)
        layernorm_row(x + r * cols, gamma, beta, eps, y + r * cols, &mean[r], &rstd[r], cols);
}

void layernorm_rows_grad(const double* x, const double* gamma, const double* mean,
                         const double* rstd, const double* gy, double* gx, double* ggamma,
                         double* gbeta, int64_t rows, int64_t cols) {
    // gx rows are independent; gamma/beta grads are cross-row sums kept serial.
#pragma omp parallel for if (rows >= kOmpMinRows && rows * cols >= kOmpMinElems)
    for (int64_t r = 0; r < rows; ++r) {
        const double* xr = x + r * cols;
        const double* gyr = gy + r * cols;
        double* gxr = gx + r * cols;
        const double mu = mean[r];
        const double rs = rstd[r];
        double s1 = 0.0, s2 = 0.0;
        for (int64_t j = 0; j < cols; ++j) {
            const double xhat = (xr[j] - mu) * rs;
            const double gj = gyr[j] * gamma[j];
            s1 += gj;
            s2 += gj * xhat;
        }
        const double invc = 1.0 / static_cast<double>(cols);
        for (int64_t j = 0; j < cols; ++j) {
            const double xhat = (xr[j] - mu) * rs;
            const double gj = gyr[j] * gamma[j];
            gxr[j] = rs * (gj - invc * s1 - xhat * invc * s2);
        }
    }
    for (int64_t j = 0; j < cols; ++j) {
        ggamma[j] = 0.0;
        gbeta[j] = 0.0;
    }
    for (int64_t r = 0; r < rows; ++r) {
        const double* xr = x + r * cols;
        const double* gyr = gy + r * cols;
        for (int64_t j = 0; j < cols; ++j) {
            ggamma[j] += gyr[j] * (xr[j] - mean[r]) * rstd[r];
            gbeta[j] += gyr[j];
        }
    }
}

void normalize_rows(const double* x, double* y, double eps, int64_t rows, int64_t cols) {
#pragma omp parallel for if (rows >= kOmpMinRows && rows * cols >= kOmpMinElems)
    for (int64_t r = 0; r < rows; ++r) normalize_row(x + r * cols, y + r * cols, eps, cols);
}

void normalize_rows_grad(const double* x, const double* gy, double* gx, double eps, int64_t rows,
                         int64_t cols) {
#pragma omp parallel for if (rows >= kOmpMinRows && rows * cols >= kOmpMinElems)
    for (int64_t r = 0; r < rows; ++r)
        normalize_row_grad(x + r * cols, gy + r * cols, gx + r * cols, eps, cols);
}

void adamw_update(double* param, const double* grad, double* m, double* v, int64_t n, double lr,
                  double beta1, double beta2, double eps, double weight_decay, int64_t step) {
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
#pragma omp parallel for if (n >= kOmpMinElems)
    for (int64_t i = 0; i < n; ++i)
        adamw_one(&param[i], grad[i], &m[i], &v[i], lr, beta1, beta2, eps, weight_decay, bc1, bc2);
}

double sum(const double* a, int64_t n) {
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double sq_diff_sum(const double* a, const double* b, int64_t n) {
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double dot(const double* a, const double* b, int64_t n) {
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

// ---------------------------------------------------------------- serial ---

namespace serial {

void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
    for (int64_t i = 0; i < m; ++i) matmul_row(a + i * k, b, c + i * n, k, n);
}

void matmul_nt(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
    for (int64_t i = 0; i < m; ++i) matmul_nt_row(a + i * k, b, c + i * n, k, n);
}

void matmul_tn(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
    for (int64_t r = 0; r < k; ++r) matmul_tn_row(a, b, c + r * n, m, k, n, r);
}

void add(const double* a, const double* b, double* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double s, double* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void add_rowvec(const double* a, const double* v, double* out, int64_t rows, int64_t cols) {
    for (int64_t r = 0; r < rows; ++r)
        for (int64_t j = 0; j < cols; ++j) out[r * cols + j] = a[r * cols + j] + v[j];
}

void gelu(const double* x, double* y, int64_t n) {
    for (int64_t i = 0; i < n; ++i) gelu_one(x[i], &y[i]);
}

void gelu_grad(const double* x, const double* gy, double* gx, int64_t n) {
    for (int64_t i = 0; i < n; ++i) gelu_grad_one(x[i], gy[i], &gx[i]);
}

void sigmoid(const double* x, double* y, int64_t n) {
    for (int64_t i = 0; i < n; ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
}

void sigmoid_grad(const double* y, const double* gy, double* gx, int64_t n) {
    for (int64_t i = 0; i < n; ++i) gx[i] = gy[i] * y[i] * (1.0 - y[i]);
}

void softmax_rows(const double* x, double* y, int64_t rows, int64_t cols, bool causal) {
    for (int64_t r = 0; r < rows; ++r) {
        const int64_t limit = causal ? (r + 1 < cols ? r + 1 : cols) : cols;
        softmax_row(x + r * cols, y + r * cols, cols, limit);
    }
}

void layernorm_rows(const double* x, const double* gamma, const double* beta, double eps,
                    double* y, double* mean, double* rstd, int64_t rows, int64_t cols) {
    for (int64_t r = 0; r < rows; ++r)
        layernorm_row(x + r * cols, gamma, beta, eps, y + r * cols, &mean[r], &rstd[r], cols);
}

void normalize_rows(const double* x, double* y, double eps, int64_t rows, int64_t cols) {
    for (int64_t r = 0; r < rows; ++r) normalize_row(x + r * cols, y + r * cols, eps, cols);
}

void adamw_update(double* param, const double* grad, double* m, double* v, int64_t n, double lr,
                  double beta1, double beta2, double eps, double weight_decay, int64_t step) {
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (int64_t i = 0; i < n; ++i)
        adamw_one(&param[i], grad[i], &m[i], &v[i], lr, beta1, beta2, eps, weight_decay, bc1, bc2);
}

} // namespace serial

} // namespace vlg::kern
