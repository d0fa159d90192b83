#include "vlg/tensor.hpp"

#include <cmath>
#include <cstring>

namespace vlg {

std::string shape_str(const Shape& s) {
    std::string out = "[";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += "x";
        out += std::to_string(s[i]);
    }
    out += "]";
    return out;
}

int64_t shape_numel(const Shape& s) {
    int64_t n = 1;
    for (int64_t d : s) n *= d;
    return n;
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad)
    : shape_(std::move(shape)),
      data_(std::make_shared<std::vector<double>>(std::move(data))),
      requires_grad_(requires_grad) {
    for (int64_t d : shape_) {
        VLG_CHECK(d > 0, "tensor extents must be positive, got ", shape_str(shape_));
    }
    VLG_CHECK(shape_numel(shape_) == static_cast<int64_t>(data_->size()),
              "shape ", shape_str(shape_), " does not match data length ", data_->size());
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
    std::vector<double> d(static_cast<size_t>(shape_numel(shape)), 0.0);
    return Tensor(std::move(shape), std::move(d), requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
    std::vector<double> d(static_cast<size_t>(shape_numel(shape)), value);
    return Tensor(std::move(shape), std::move(d), requires_grad);
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::from_row(const std::vector<double>& row) {
    VLG_CHECK(!row.empty(), "from_row needs a non-empty vector");
    return Tensor({1, static_cast<int64_t>(row.size())}, row);
}

int64_t Tensor::dim(size_t i) const {
    VLG_CHECK(i < shape_.size(), "dim index ", i, " out of range for ", shape_str(shape_));
    return shape_[i];
}

double Tensor::item() const {
    VLG_CHECK(numel() == 1, "item() requires a scalar, got ", shape_str(shape_));
    return (*data_)[0];
}

Tensor Tensor::reshaped(Shape shape) const {
    VLG_CHECK(shape_numel(shape) == numel(), "cannot reshape ", shape_str(shape_), " to ",
              shape_str(shape));
    Tensor t = *this;
    t.shape_ = std::move(shape);
    return t;
}

bool Tensor::same_values(const Tensor& other) const {
    if (shape_ != other.shape_) return false;
    if (!defined() || !other.defined()) return defined() == other.defined();
    return std::memcmp(data_->data(), other.data_->data(), data_->size() * sizeof(double)) == 0;
}

bool Tensor::all_finite() const {
    for (double v : *data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace vlg
