#include "vlg/ops.hpp"

#include <cmath>
#include <cstring>

#include "vlg/kernels.hpp"

namespace vlg {

namespace {

// Records `out = f(inputs...)` on the active tape when tracing applies.
// The vjp receives the upstream gradient and must return one gradient per
// input, in order; gradients for untraced inputs are dropped.
void record(const Tensor& out, std::initializer_list<const Tensor*> inputs, Tape::Vjp vjp) {
    Tape* tape = Tape::active();
    if (!tape) return;
    bool any = false;
    for (const Tensor* in : inputs) {
        if (tape->wants(*in)) {
            any = true;
            break;
        }
    }
    if (!any) return;
    std::vector<int> parents;
    parents.reserve(inputs.size());
    for (const Tensor* in : inputs) parents.push_back(tape->track(*in));
    tape->note(out, std::move(parents), std::move(vjp));
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    VLG_CHECK(a.shape() == b.shape(), op, ": shape mismatch ", shape_str(a.shape()), " vs ",
              shape_str(b.shape()));
}

std::pair<int64_t, int64_t> rows_cols(const Tensor& t, const char* op) {
    VLG_CHECK(t.rank() == 2, op, ": expected a 2D tensor, got ", shape_str(t.shape()));
    return {t.dim(0), t.dim(1)};
}

Tensor make(Shape shape, std::vector<double> data) { return Tensor(std::move(shape), std::move(data)); }

} // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    auto [m, k] = rows_cols(a, "matmul");
    auto [k2, n] = rows_cols(b, "matmul");
    VLG_CHECK(k == k2, "matmul: inner extents differ, ", shape_str(a.shape()), " vs ",
              shape_str(b.shape()));
    std::vector<double> out(static_cast<size_t>(m * n));
    kern::matmul(a.data(), b.data(), out.data(), m, k, n);
    Tensor c = make({m, n}, std::move(out));
    record(c, {&a, &b}, [a, b, m, k, n](const Tensor& g) {
        std::vector<double> ga(static_cast<size_t>(m * k));
        std::vector<double> gb(static_cast<size_t>(k * n));
        kern::matmul_nt(g.data(), b.data(), ga.data(), m, n, k);
        kern::matmul_tn(a.data(), g.data(), gb.data(), m, k, n);
        return std::vector<Tensor>{make({m, k}, std::move(ga)), make({k, n}, std::move(gb))};
    });
    return c;
}

Tensor add(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "add");
    std::vector<double> out(static_cast<size_t>(a.numel()));
    kern::add(a.data(), b.data(), out.data(), a.numel());
    Tensor c = make(a.shape(), std::move(out));
    record(c, {&a, &b}, [](const Tensor& g) { return std::vector<Tensor>{g, g}; });
    return c;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "sub");
    std::vector<double> out(static_cast<size_t>(a.numel()));
    kern::sub(a.data(), b.data(), out.data(), a.numel());
    Tensor c = make(a.shape(), std::move(out));
    record(c, {&a, &b}, [](const Tensor& g) {
        std::vector<double> neg(static_cast<size_t>(g.numel()));
        kern::scale(g.data(), -1.0, neg.data(), g.numel());
        return std::vector<Tensor>{g, make(g.shape(), std::move(neg))};
    });
    return c;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "mul");
    std::vector<double> out(static_cast<size_t>(a.numel()));
    kern::mul(a.data(), b.data(), out.data(), a.numel());
    Tensor c = make(a.shape(), std::move(out));
    record(c, {&a, &b}, [a, b](const Tensor& g) {
        std::vector<double> ga(static_cast<size_t>(g.numel()));
        std::vector<double> gb(static_cast<size_t>(g.numel()));
        kern::mul(g.data(), b.data(), ga.data(), g.numel());
        kern::mul(g.data(), a.data(), gb.data(), g.numel());
        return std::vector<Tensor>{make(a.shape(), std::move(ga)), make(b.shape(), std::move(gb))};
    });
    return c;
}

Tensor scale(const Tensor& a, double s) {
    std::vector<double> out(static_cast<size_t>(a.numel()));
    kern::scale(a.data(), s, out.data(), a.numel());
    Tensor c = make(a.shape(), std::move(out));
    record(c, {&a}, [s](const Tensor& g) {
        std::vector<double> ga(static_cast<size_t>(g.numel()));
        kern::scale(g.data(), s, ga.data(), g.numel());
        return std::vector<Tensor>{make(g.shape(), std::move(ga))};
    });
    return c;
}

Tensor add_rowvec(const Tensor& a, const Tensor& v) {
    auto [r, c] = rows_cols(a, "add_rowvec");
    const int64_t vc = v.rank() == 2 ? v.dim(1) : v.dim(0);
    VLG_CHECK((v.rank() == 1 || (v.rank() == 2 && v.dim(0) == 1)) && vc == c,
              "add_rowvec: incompatible shapes ", shape_str(a.shape()), " vs ",
              shape_str(v.shape()));
    std::vector<double> out(static_cast<size_t>(a.numel()));
    kern::add_rowvec(a.data(), v.data(), out.data(), r, c);
    Tensor y = make(a.shape(), std::move(out));
    record(y, {&a, &v}, [r, c, vshape = v.shape()](const Tensor& g) {
        std::vector<double> gv(static_cast<size_t>(c), 0.0);
        for (int64_t i = 0; i < r; ++i)
            for (int64_t j = 0; j < c; ++j) gv[static_cast<size_t>(j)] += g.data()[i * c + j];
        return std::vector<Tensor>{g, make(vshape, std::move(gv))};
    });
    return y;
}

Tensor gelu(const Tensor& x) {
    std::vector<double> out(static_cast<size_t>(x.numel()));
    kern::gelu(x.data(), out.data(), x.numel());
    Tensor y = make(x.shape(), std::move(out));
    record(y, {&x}, [x](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(g.numel()));
        kern::gelu_grad(x.data(), g.data(), gx.data(), g.numel());
        return std::vector<Tensor>{make(x.shape(), std::move(gx))};
    });
    return y;
}

Tensor sigmoid(const Tensor& x) {
    std::vector<double> out(static_cast<size_t>(x.numel()));
    kern::sigmoid(x.data(), out.data(), x.numel());
    Tensor y = make(x.shape(), std::move(out));
    record(y, {&x}, [y](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(g.numel()));
        kern::sigmoid_grad(y.data(), g.data(), gx.data(), g.numel());
        return std::vector<Tensor>{make(y.shape(), std::move(gx))};
    });
    return y;
}

namespace {
Tensor softmax_impl(const Tensor& x, bool causal) {
    auto [r, c] = rows_cols(x, "softmax");
    if (causal) VLG_CHECK(r == c, "causal softmax expects a square matrix, got ", shape_str(x.shape()));
    std::vector<double> out(static_cast<size_t>(x.numel()));
    kern::softmax_rows(x.data(), out.data(), r, c, causal);
    Tensor y = make(x.shape(), std::move(out));
    record(y, {&x}, [y, r, c, causal](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(g.numel()));
        kern::softmax_rows_grad(y.data(), g.data(), gx.data(), r, c, causal);
        return std::vector<Tensor>{make(y.shape(), std::move(gx))};
    });
    return y;
}
} // namespace

Tensor softmax_rows(const Tensor& x) { return softmax_impl(x, false); }
Tensor causal_softmax_rows(const Tensor& x) { return softmax_impl(x, true); }

Tensor layernorm_rows(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
    auto [r, c] = rows_cols(x, "layernorm");
    VLG_CHECK(gamma.numel() == c && beta.numel() == c, "layernorm: affine extents ",
              shape_str(gamma.shape()), "/", shape_str(beta.shape()), " do not match ",
              shape_str(x.shape()));
    std::vector<double> out(static_cast<size_t>(x.numel()));
    auto mean = std::make_shared<std::vector<double>>(static_cast<size_t>(r));
    auto rstd = std::make_shared<std::vector<double>>(static_cast<size_t>(r));
    kern::layernorm_rows(x.data(), gamma.data(), beta.data(), eps, out.data(), mean->data(),
                         rstd->data(), r, c);
    Tensor y = make(x.shape(), std::move(out));
    record(y, {&x, &gamma, &beta}, [x, gamma, gshape = gamma.shape(), bshape = beta.shape(), mean,
                                    rstd, r, c](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(r * c));
        std::vector<double> ggamma(static_cast<size_t>(c));
        std::vector<double> gbeta(static_cast<size_t>(c));
        kern::layernorm_rows_grad(x.data(), gamma.data(), mean->data(), rstd->data(), g.data(),
                                  gx.data(), ggamma.data(), gbeta.data(), r, c);
        return std::vector<Tensor>{make(x.shape(), std::move(gx)), make(gshape, std::move(ggamma)),
                                   make(bshape, std::move(gbeta))};
    });
    return y;
}

Tensor normalize_rows(const Tensor& x, double eps) {
    auto [r, c] = rows_cols(x, "normalize_rows");
    std::vector<double> out(static_cast<size_t>(x.numel()));
    kern::normalize_rows(x.data(), out.data(), eps, r, c);
    Tensor y = make(x.shape(), std::move(out));
    record(y, {&x}, [x, eps, r, c](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(g.numel()));
        kern::normalize_rows_grad(x.data(), g.data(), gx.data(), eps, r, c);
        return std::vector<Tensor>{make(x.shape(), std::move(gx))};
    });
    return y;
}

Tensor embedding_rows(const Tensor& table, const std::vector<int32_t>& ids) {
    auto [v, d] = rows_cols(table, "embedding");
    VLG_CHECK(!ids.empty(), "embedding lookup needs at least one id");
    std::vector<double> out(ids.size() * static_cast<size_t>(d));
    for (size_t i = 0; i < ids.size(); ++i) {
        VLG_CHECK(ids[i] >= 0 && ids[i] < v, "embedding id ", ids[i], " out of range [0,", v, ")");
        std::memcpy(out.data() + i * static_cast<size_t>(d), table.data() + ids[i] * d,
                    static_cast<size_t>(d) * sizeof(double));
    }
    Tensor y = make({static_cast<int64_t>(ids.size()), d}, std::move(out));
    record(y, {&table}, [ids, v, d, tshape = table.shape()](const Tensor& g) {
        std::vector<double> gt(static_cast<size_t>(v * d), 0.0);
        for (size_t i = 0; i < ids.size(); ++i) {
            const double* row = g.data() + i * static_cast<size_t>(d);
            double* dst = gt.data() + ids[i] * d;
            for (int64_t j = 0; j < d; ++j) dst[j] += row[j];
        }
        return std::vector<Tensor>{make(tshape, std::move(gt))};
    });
    return y;
}

Tensor concat_rows(const Tensor& a, const Tensor& b) {
    auto [ra, c] = rows_cols(a, "concat_rows");
    auto [rb, cb] = rows_cols(b, "concat_rows");
    VLG_CHECK(c == cb, "concat_rows: column extents differ, ", shape_str(a.shape()), " vs ",
              shape_str(b.shape()));
    std::vector<double> out;
    out.reserve(static_cast<size_t>((ra + rb) * c));
    out.insert(out.end(), a.vec().begin(), a.vec().end());
    out.insert(out.end(), b.vec().begin(), b.vec().end());
    Tensor y = make({ra + rb, c}, std::move(out));
    record(y, {&a, &b}, [ra, rb, c](const Tensor& g) {
        std::vector<double> ga(g.vec().begin(), g.vec().begin() + static_cast<size_t>(ra * c));
        std::vector<double> gb(g.vec().begin() + static_cast<size_t>(ra * c), g.vec().end());
        return std::vector<Tensor>{make({ra, c}, std::move(ga)), make({rb, c}, std::move(gb))};
    });
    return y;
}

Tensor stack_rows(const std::vector<Tensor>& rows) {
    VLG_CHECK(!rows.empty(), "stack_rows needs at least one row");
    const int64_t c = rows[0].numel();
    std::vector<double> out;
    out.reserve(rows.size() * static_cast<size_t>(c));
    for (const Tensor& r : rows) {
        VLG_CHECK(r.numel() == c, "stack_rows: row extents differ, ", c, " vs ", r.numel());
        out.insert(out.end(), r.vec().begin(), r.vec().end());
    }
    Tensor y = make({static_cast<int64_t>(rows.size()), c}, std::move(out));

    Tape* tape = Tape::active();
    if (tape) {
        bool any = false;
        for (const Tensor& r : rows)
            if (tape->wants(r)) {
                any = true;
                break;
            }
        if (any) {
            std::vector<int> parents;
            std::vector<Shape> shapes;
            parents.reserve(rows.size());
            for (const Tensor& r : rows) {
                parents.push_back(tape->track(r));
                shapes.push_back(r.shape());
            }
            tape->note(y, std::move(parents), [shapes, c](const Tensor& g) {
                std::vector<Tensor> out;
                out.reserve(shapes.size());
                for (size_t i = 0; i < shapes.size(); ++i) {
                    std::vector<double> gi(g.vec().begin() + i * static_cast<size_t>(c),
                                           g.vec().begin() + (i + 1) * static_cast<size_t>(c));
                    out.push_back(Tensor(shapes[i], std::move(gi)));
                }
                return out;
            });
        }
    }
    return y;
}

Tensor slice_rows(const Tensor& x, int64_t begin, int64_t end) {
    auto [r, c] = rows_cols(x, "slice_rows");
    VLG_CHECK(0 <= begin && begin < end && end <= r, "slice_rows: range [", begin, ",", end,
              ") invalid for ", shape_str(x.shape()));
    std::vector<double> out(x.vec().begin() + static_cast<size_t>(begin * c),
                            x.vec().begin() + static_cast<size_t>(end * c));
    Tensor y = make({end - begin, c}, std::move(out));
    record(y, {&x}, [r, c, begin, end](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(r * c), 0.0);
        std::memcpy(gx.data() + begin * c, g.data(), static_cast<size_t>((end - begin) * c) * sizeof(double));
        return std::vector<Tensor>{make({r, c}, std::move(gx))};
    });
    return y;
}

Tensor gather_rows(const Tensor& x, const std::vector<int32_t>& idx) {
    auto [r, c] = rows_cols(x, "gather_rows");
    VLG_CHECK(!idx.empty(), "gather_rows needs at least one index");
    std::vector<double> out(idx.size() * static_cast<size_t>(c));
    for (size_t i = 0; i < idx.size(); ++i) {
        VLG_CHECK(idx[i] >= 0 && idx[i] < r, "gather_rows index ", idx[i], " out of range [0,", r, ")");
        std::memcpy(out.data() + i * static_cast<size_t>(c), x.data() + idx[i] * c,
                    static_cast<size_t>(c) * sizeof(double));
    }
    Tensor y = make({static_cast<int64_t>(idx.size()), c}, std::move(out));
    record(y, {&x}, [idx, r, c](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(r * c), 0.0);
        for (size_t i = 0; i < idx.size(); ++i) {
            const double* row = g.data() + i * static_cast<size_t>(c);
            double* dst = gx.data() + idx[i] * c;
            for (int64_t j = 0; j < c; ++j) dst[j] += row[j];
        }
        return std::vector<Tensor>{make({r, c}, std::move(gx))};
    });
    return y;
}

Tensor transpose2d(const Tensor& x) {
    auto [r, c] = rows_cols(x, "transpose2d");
    std::vector<double> out(static_cast<size_t>(r * c));
    for (int64_t i = 0; i < r; ++i)
        for (int64_t j = 0; j < c; ++j) out[static_cast<size_t>(j * r + i)] = x.data()[i * c + j];
    Tensor y = make({c, r}, std::move(out));
    record(y, {&x}, [r, c](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(r * c));
        for (int64_t i = 0; i < c; ++i)
            for (int64_t j = 0; j < r; ++j) gx[static_cast<size_t>(j * c + i)] = g.data()[i * r + j];
        return std::vector<Tensor>{make({r, c}, std::move(gx))};
    });
    return y;
}

Tensor mean_rows(const Tensor& x) {
    auto [r, c] = rows_cols(x, "mean_rows");
    std::vector<double> out(static_cast<size_t>(c), 0.0);
    for (int64_t i = 0; i < r; ++i)
        for (int64_t j = 0; j < c; ++j) out[static_cast<size_t>(j)] += x.data()[i * c + j];
    const double inv = 1.0 / static_cast<double>(r);
    for (double& v : out) v *= inv;
    Tensor y = make({1, c}, std::move(out));
    record(y, {&x}, [r, c, inv](const Tensor& g) {
        std::vector<double> gx(static_cast<size_t>(r * c));
        for (int64_t i = 0; i < r; ++i)
            for (int64_t j = 0; j < c; ++j) gx[static_cast<size_t>(i * c + j)] = g.data()[j] * inv;
        return std::vector<Tensor>{make({r, c}, std::move(gx))};
    });
    return y;
}

Tensor sum_all(const Tensor& x) {
    Tensor y = Tensor::scalar(kern::sum(x.data(), x.numel()));
    record(y, {&x}, [shape = x.shape(), n = x.numel()](const Tensor& g) {
        return std::vector<Tensor>{Tensor::full(shape, g.item())};
    });
    return y;
}

Tensor mean_all(const Tensor& x) {
    const double inv = 1.0 / static_cast<double>(x.numel());
    Tensor y = Tensor::scalar(kern::sum(x.data(), x.numel()) * inv);
    record(y, {&x}, [shape = x.shape(), inv](const Tensor& g) {
        return std::vector<Tensor>{Tensor::full(shape, g.item() * inv)};
    });
    return y;
}

Tensor mse(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "mse");
    const int64_t n = a.numel();
    Tensor y = Tensor::scalar(kern::sq_diff_sum(a.data(), b.data(), n) / static_cast<double>(n));
    record(y, {&a, &b}, [a, b, n](const Tensor& g) {
        const double s = 2.0 * g.item() / static_cast<double>(n);
        std::vector<double> ga(static_cast<size_t>(n));
        std::vector<double> gb(static_cast<size_t>(n));
        for (int64_t i = 0; i < n; ++i) {
            const double d = s * (a.data()[i] - b.data()[i]);
            ga[static_cast<size_t>(i)] = d;
            gb[static_cast<size_t>(i)] = -d;
        }
        return std::vector<Tensor>{make(a.shape(), std::move(ga)), make(b.shape(), std::move(gb))};
    });
    return y;
}

Tensor cross_entropy_rows(const Tensor& logits, const std::vector<int32_t>& targets) {
    auto [r, c] = rows_cols(logits, "cross_entropy");
    VLG_CHECK(static_cast<int64_t>(targets.size()) == r, "cross_entropy: ", targets.size(),
              " targets for ", r, " rows");
    auto probs = std::make_shared<std::vector<double>>(static_cast<size_t>(r * c));
    kern::softmax_rows(logits.data(), probs->data(), r, c, false);
    double loss = 0.0;
    for (int64_t i = 0; i < r; ++i) {
        const int32_t t = targets[static_cast<size_t>(i)];
        VLG_CHECK(t >= 0 && t < c, "cross_entropy target ", t, " out of range [0,", c, ")");
        loss -= std::log((*probs)[static_cast<size_t>(i * c + t)]);
    }
    Tensor y = Tensor::scalar(loss / static_cast<double>(r));
    record(y, {&logits}, [probs, targets, r, c, shape = logits.shape()](const Tensor& g) {
        const double s = g.item() / static_cast<double>(r);
        std::vector<double> gx(*probs);
        for (int64_t i = 0; i < r; ++i) gx[static_cast<size_t>(i * c + targets[static_cast<size_t>(i)])] -= 1.0;
        for (double& v : gx) v *= s;
        return std::vector<Tensor>{make(shape, std::move(gx))};
    });
    return y;
}

Tensor cosine_sim(const Tensor& a, const Tensor& b) {
    VLG_CHECK(a.numel() == b.numel(), "cosine_sim: element counts differ, ", a.numel(), " vs ",
              b.numel());
    const int64_t n = a.numel();
    const double ab = kern::dot(a.data(), b.data(), n);
    const double aa = kern::dot(a.data(), a.data(), n);
    const double bb = kern::dot(b.data(), b.data(), n);
    VLG_CHECK(aa > 0.0 && bb > 0.0, "cosine_sim: zero-norm input");
    const double na = std::sqrt(aa), nb = std::sqrt(bb);
    const double s = ab / (na * nb);
    Tensor y = Tensor::scalar(s);
    record(y, {&a, &b}, [a, b, n, na, nb, s](const Tensor& g) {
        const double gv = g.item();
        std::vector<double> ga(static_cast<size_t>(n));
        std::vector<double> gb(static_cast<size_t>(n));
        for (int64_t i = 0; i < n; ++i) {
            ga[static_cast<size_t>(i)] = gv * (b.data()[i] / (na * nb) - s * a.data()[i] / (na * na));
            gb[static_cast<size_t>(i)] = gv * (a.data()[i] / (na * nb) - s * b.data()[i] / (nb * nb));
        }
        return std::vector<Tensor>{make(a.shape(), std::move(ga)), make(b.shape(), std::move(gb))};
    });
    return y;
}

Tensor detach(const Tensor& t) {
    Tensor out = t;
    out.set_requires_grad(false);
    out.node_ = -1;
    out.epoch_ = 0;
    return out;
}

} // namespace vlg
