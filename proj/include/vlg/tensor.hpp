#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vlg/common.hpp"

namespace vlg {

using Shape = std::vector<int64_t>;

std::string shape_str(const Shape& s);
int64_t shape_numel(const Shape& s);

/// Dense row-major tensor of 64-bit floats. The storage is shared and treated
/// as immutable once the tensor has been handed to an op; optimizers produce
/// fresh tensors instead of writing in place.
class Tensor {
  public:
    Tensor() = default;
    Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, double value, bool requires_grad = false);
    static Tensor scalar(double value);
    static Tensor from_row(const std::vector<double>& row); // shape {1, n}

    const Shape& shape() const { return shape_; }
    int64_t numel() const { return data_ ? static_cast<int64_t>(data_->size()) : 0; }
    int64_t dim(size_t i) const;
    size_t rank() const { return shape_.size(); }
    bool defined() const { return static_cast<bool>(data_); }

    const double* data() const { return data_->data(); }
    const std::vector<double>& vec() const { return *data_; }
    double at(int64_t i) const { return (*data_)[static_cast<size_t>(i)]; }
    double item() const; // numel()==1 only

    /// Identity of the underlying storage; used to key gradients.
    const void* id() const { return static_cast<const void*>(data_.get()); }

    bool requires_grad() const { return requires_grad_; }
    Tensor& set_requires_grad(bool v) {
        requires_grad_ = v;
        return *this;
    }

    Tensor reshaped(Shape shape) const; // same storage, new shape
    bool same_values(const Tensor& other) const; // bitwise equality of shape+data
    bool all_finite() const;

    // Tape bookkeeping (set by traced ops; stale epochs are ignored).
    mutable int32_t node_ = -1;
    mutable uint64_t epoch_ = 0;

  private:
    Shape shape_;
    std::shared_ptr<std::vector<double>> data_;
    bool requires_grad_ = false;
};

} // namespace vlg
