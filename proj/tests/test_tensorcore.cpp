#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vlg/kernels.hpp"
#include "vlg/ops.hpp"
#include "vlg/optim.hpp"
#include "vlg/rng.hpp"

#include "testutil.hpp"

using namespace vlg;
using vlgtest::numeric_grad;
using vlgtest::rel_err;

TEST_CASE("softmax of a constant row is uniform") {
    Tensor x({1, 2}, {0.0, 0.0});
    Tensor y = softmax_rows(x);
    CHECK(y.at(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(y.at(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("softmax rows are nonnegative and sum to one") {
    RngStream rng(11);
    Tensor x = randn({7, 13}, rng, 3.0);
    Tensor y = softmax_rows(x);
    for (int64_t r = 0; r < 7; ++r) {
        double s = 0.0;
        for (int64_t c = 0; c < 13; ++c) {
            CHECK(y.at(r * 13 + c) >= 0.0);
            s += y.at(r * 13 + c);
        }
        CHECK(std::fabs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("layernorm of a constant vector is zero before affine terms") {
    Tensor x({1, 8}, std::vector<double>(8, 3.25));
    Tensor gamma = Tensor::full({8}, 1.0);
    Tensor beta = Tensor::zeros({8});
    Tensor y = layernorm_rows(x, gamma, beta);
    for (int64_t i = 0; i < 8; ++i) CHECK(std::fabs(y.at(i)) < 1e-9);
}

TEST_CASE("matmul shape algebra and mismatch error") {
    RngStream rng(3);
    Tensor a = randn({2, 3}, rng);
    Tensor b = randn({3, 4}, rng);
    Tensor c = matmul(a, b);
    CHECK(c.shape() == Shape{2, 4});
    Tensor bad = randn({5, 4}, rng);
    CHECK_THROWS_WITH_AS(matmul(a, bad), doctest::Contains("[2x3]"), Error);
    CHECK_THROWS_WITH_AS(matmul(a, bad), doctest::Contains("[5x4]"), Error);
}

TEST_CASE("backward of x*x at x=3 is 6") {
    Tensor x({1}, {3.0}, true);
    Tape tape;
    TapeScope scope(tape);
    Tensor loss = mul(x, x);
    auto grads = tape.backward(loss);
    CHECK(grads.grad_for(x).at(0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("parameter the loss never touches gets a zero gradient") {
    Tensor x({1}, {2.0}, true);
    Tensor unused({4}, {1.0, 2.0, 3.0, 4.0}, true);
    Tape tape;
    TapeScope scope(tape);
    Tensor loss = mul(x, x);
    auto grads = tape.backward(loss);
    CHECK_FALSE(grads.has(unused));
    Tensor g = grads.grad_for(unused);
    CHECK(g.shape() == unused.shape());
    for (int64_t i = 0; i < 4; ++i) CHECK(g.at(i) == 0.0);
}

TEST_CASE("backward rejects a non-scalar loss") {
    Tensor x({2, 2}, {1.0, 2.0, 3.0, 4.0}, true);
    Tape tape;
    TapeScope scope(tape);
    Tensor y = mul(x, x);
    CHECK_THROWS_AS((void)tape.backward(y), Error);
}

TEST_CASE("matmul+softmax+cross-entropy composite matches finite differences") {
    RngStream rng(17);
    Tensor w = randn({4, 4}, rng, 0.7, true);
    Tensor x = randn({4, 4}, rng, 1.0);
    const std::vector<int32_t> targets{1, 0, 3, 2};

    Tape tape;
    TapeScope scope(tape);
    Tensor loss = cross_entropy_rows(matmul(x, w), targets);
    auto grads = tape.backward(loss);
    Tensor gw = grads.grad_for(w);

    auto f = [&](const std::vector<Tensor>& ps) {
        return cross_entropy_rows(matmul(x, ps[0]), targets).item();
    };
    auto num = numeric_grad(f, {w});
    for (int64_t i = 0; i < gw.numel(); ++i)
        CHECK(rel_err(gw.at(i), num[0][static_cast<size_t>(i)]) < 1e-4);
}

TEST_CASE("gradients of a mixed composite match finite differences") {
    // Exercises every required op at least once through one scalar loss.
    RngStream rng(23);
    Tensor w1 = randn({6, 8}, rng, 0.5, true);
    Tensor w2 = randn({8, 5}, rng, 0.5, true);
    Tensor gamma = Tensor::full({8}, 1.0, true);
    Tensor beta = Tensor::zeros({8}, true);
    Tensor table = randn({10, 6}, rng, 0.8, true);
    const std::vector<int32_t> ids{1, 4, 7, 2};
    const std::vector<int32_t> targets{0, 2, 4, 1};
    Tensor ref = randn({4, 5}, rng);

    auto forward = [&](const Tensor& t_table, const Tensor& t_w1, const Tensor& t_w2,
                       const Tensor& t_gamma, const Tensor& t_beta) {
        Tensor e = embedding_rows(t_table, ids);
        Tensor h = gelu(matmul(e, t_w1));
        h = layernorm_rows(h, t_gamma, t_beta);
        Tensor logits = matmul(h, t_w2);
        Tensor ce = cross_entropy_rows(logits, targets);
        Tensor reg = mse(softmax_rows(logits), ref);
        Tensor cs = cosine_sim(slice_rows(logits, 0, 2), slice_rows(ref, 0, 2));
        return add(add(ce, scale(reg, 0.5)), scale(cs, 0.25));
    };

    Tape tape;
    TapeScope scope(tape);
    Tensor loss = forward(table, w1, w2, gamma, beta);
    auto grads = tape.backward(loss);

    auto f = [&](const std::vector<Tensor>& ps) {
        return forward(ps[0], ps[1], ps[2], ps[3], ps[4]).item();
    };
    auto num = numeric_grad(f, {table, w1, w2, gamma, beta});
    const Tensor analytic[] = {grads.grad_for(table), grads.grad_for(w1), grads.grad_for(w2),
                               grads.grad_for(gamma), grads.grad_for(beta)};
    for (size_t p = 0; p < 5; ++p)
        for (int64_t i = 0; i < analytic[p].numel(); ++i)
            CHECK(rel_err(analytic[p].at(i), num[p][static_cast<size_t>(i)]) < 1e-4);
}

TEST_CASE("adamw with zero gradient and zero weight decay is the identity") {
    Tensor p({3}, {1.0, -2.0, 0.5}, true);
    const Tensor before = p;
    ParamRefs refs{{"p", &p}};
    OptimizerState state;
    state.cfg.weight_decay = 0.0;
    Gradients none;
    for (int s = 0; s < 4; ++s) adamw_step(refs, none, state, 0.1);
    CHECK(p.same_values(before));
    CHECK(state.step == 4);
}

TEST_CASE("adamw single step matches the hand-computed recurrence") {
    // One scalar parameter, fresh state: m = (1-b1) g, v = (1-b2) g^2,
    // bias-corrected mhat = g, vhat = g^2, so the update is
    // p - lr * (g / (|g| + eps) + wd * p).
    const double g = 0.5, lr = 0.1, wd = 0.01, eps = 1e-8;
    Tensor p({1}, {1.0}, true);
    ParamRefs refs{{"p", &p}};
    OptimizerState state;
    Gradients grads;
    grads.by_id.emplace(p.id(), Tensor({1}, {g}));
    adamw_step(refs, grads, state, lr);
    const double expected = 1.0 - lr * (g / (g + eps) + wd * 1.0);
    CHECK(p.at(0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("adamw rejects non-finite gradients by parameter name") {
    Tensor p({1}, {1.0}, true);
    ParamRefs refs{{"theta", &p}};
    OptimizerState state;
    Gradients grads;
    grads.by_id.emplace(p.id(), Tensor({1}, {std::nan("")}));
    CHECK_THROWS_WITH_AS(adamw_step(refs, grads, state, 0.1), doctest::Contains("theta"), Error);
}

TEST_CASE("cosine schedule endpoints and midpoint") {
    const double base = 2e-4;
    CHECK(cosine_lr(100, 100, 1100, base) == doctest::Approx(base).epsilon(1e-15));
    CHECK(cosine_lr(1100, 100, 1100, base) == 0.0);
    CHECK(cosine_lr(600, 100, 1100, base) == doctest::Approx(base / 2).epsilon(1e-12));
    CHECK(cosine_lr(5000, 100, 1100, base) == 0.0); // clamped past total
    CHECK(cosine_lr(50, 100, 1100, base) == doctest::Approx(base * 0.5).epsilon(1e-12));
}

TEST_CASE("identical seeds give bit-identical tensors") {
    auto run = [] {
        RngStream rng = RngStream(99).child("weights");
        Tensor a = randn({16, 16}, rng, 0.3);
        Tensor b = rand_uniform({16, 16}, rng, -1.0, 1.0);
        return matmul(a, b);
    };
    CHECK(run().same_values(run()));
}

TEST_CASE("rng streams are independent of sibling draws") {
    RngStream root(5);
    RngStream a1 = root.child("a");
    double first = a1.uniform();
    RngStream b = root.child("b");
    for (int i = 0; i < 10; ++i) (void)b.uniform();
    RngStream a2 = root.child("a");
    CHECK(a2.uniform() == first);
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
    RngStream rng(41);
    const int64_t m = 33, k = 47, n = 29;
    Tensor a = randn({m, k}, rng);
    Tensor b = randn({k, n}, rng);
    std::vector<double> c_par(static_cast<size_t>(m * n)), c_ser(static_cast<size_t>(m * n));
    kern::matmul(a.data(), b.data(), c_par.data(), m, k, n);
    kern::serial::matmul(a.data(), b.data(), c_ser.data(), m, k, n);
    CHECK(std::memcmp(c_par.data(), c_ser.data(), c_par.size() * sizeof(double)) == 0);

    Tensor x = randn({64, 65}, rng, 2.0);
    std::vector<double> s_par(static_cast<size_t>(64 * 65)), s_ser(static_cast<size_t>(64 * 65));
    kern::softmax_rows(x.data(), s_par.data(), 64, 65, false);
    kern::serial::softmax_rows(x.data(), s_ser.data(), 64, 65, false);
    CHECK(std::memcmp(s_par.data(), s_ser.data(), s_par.size() * sizeof(double)) == 0);

    std::vector<double> g_par(static_cast<size_t>(64 * 65)), g_ser(static_cast<size_t>(64 * 65));
    kern::gelu(x.data(), g_par.data(), x.numel());
    kern::serial::gelu(x.data(), g_ser.data(), x.numel());
    CHECK(std::memcmp(g_par.data(), g_ser.data(), g_par.size() * sizeof(double)) == 0);
}

TEST_CASE("gather, concat, stack and transpose round out the op set") {
    Tensor x({3, 2}, {1, 2, 3, 4, 5, 6});
    Tensor g = gather_rows(x, {2, 0});
    CHECK(g.at(0) == 5.0);
    CHECK(g.at(3) == 2.0);
    Tensor t = transpose2d(x);
    CHECK(t.shape() == Shape{2, 3});
    CHECK(t.at(1) == 3.0);
    Tensor c = concat_rows(x, g);
    CHECK(c.shape() == Shape{5, 2});
    Tensor s = stack_rows({Tensor::from_row({7, 8}), Tensor::from_row({9, 10})});
    CHECK(s.shape() == Shape{2, 2});
    CHECK(s.at(3) == 10.0);
    Tensor m = mean_rows(x);
    CHECK(m.at(0) == doctest::Approx(3.0));
    CHECK(m.at(1) == doctest::Approx(4.0));
}
