#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "vlg/tensor.hpp"

namespace vlg {

/// Gradients produced by one backward sweep, keyed by parameter storage.
/// Parameters the loss never reached report zero gradients.
struct Gradients {
    std::unordered_map<const void*, Tensor> by_id;

    bool has(const Tensor& param) const { return by_id.count(param.id()) > 0; }
    Tensor grad_for(const Tensor& param) const {
        auto it = by_id.find(param.id());
        if (it != by_id.end()) return it->second;
        return Tensor::zeros(param.shape());
    }
};

/// Define-by-run tape. Ops executed while a tape is active append nodes in
/// execution order; backward replays them in reverse. Single-writer: a tape
/// belongs to one thread for its lifetime.
class Tape {
  public:
    using Vjp = std::function<std::vector<Tensor>(const Tensor&)>;

    Tape();

    Gradients backward(const Tensor& loss);

    size_t size() const { return nodes_.size(); }
    uint64_t epoch() const { return epoch_; }
    void reset();

    // Op plumbing.
    static Tape* active();
    bool wants(const Tensor& t) const;
    int track(const Tensor& t);           // node id, or -1 when untraced
    int note(const Tensor& out, std::vector<int> parents, Vjp vjp);

  private:
    struct Node {
        std::vector<int> parents;
        Vjp vjp;
    };
    std::vector<Node> nodes_;
    std::unordered_map<const void*, int> leaves_;
    std::vector<const void*> leaf_ids_;
    uint64_t epoch_;

    friend struct TapeScope;
};

/// RAII activation of a tape on the current thread.
struct TapeScope {
    explicit TapeScope(Tape& tape);
    ~TapeScope();
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;

  private:
    Tape* prev_;
};

} // namespace vlg
