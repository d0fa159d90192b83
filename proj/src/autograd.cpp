#include "vlg/autograd.hpp"

#include <atomic>

#include "vlg/kernels.hpp"

namespace vlg {

namespace {
std::atomic<uint64_t> g_epoch{1};
thread_local Tape* t_active = nullptr;
} // namespace

Tape::Tape() : epoch_(g_epoch.fetch_add(1)) {}

Tape* Tape::active() { return t_active; }

void Tape::reset() {
    nodes_.clear();
    leaves_.clear();
    leaf_ids_.clear();
    epoch_ = g_epoch.fetch_add(1);
}

bool Tape::wants(const Tensor& t) const {
    return (t.epoch_ == epoch_ && t.node_ >= 0) || t.requires_grad();
}

int Tape::track(const Tensor& t) {
    if (t.epoch_ == epoch_ && t.node_ >= 0) return t.node_;
    if (!t.requires_grad()) return -1;
    auto it = leaves_.find(t.id());
    if (it != leaves_.end()) {
        t.node_ = it->second;
        t.epoch_ = epoch_;
        return it->second;
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{});
    leaves_.emplace(t.id(), id);
    leaf_ids_.push_back(t.id());
    t.node_ = id;
    t.epoch_ = epoch_;
    return id;
}

int Tape::note(const Tensor& out, std::vector<int> parents, Vjp vjp) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{std::move(parents), std::move(vjp)});
    out.node_ = id;
    out.epoch_ = epoch_;
    return id;
}

Gradients Tape::backward(const Tensor& loss) {
    VLG_CHECK(loss.numel() == 1, "backward requires a scalar loss, got ", shape_str(loss.shape()));
    VLG_CHECK(loss.epoch_ == epoch_ && loss.node_ >= 0,
              "backward requires a loss recorded on the active tape");

    std::vector<Tensor> grads(nodes_.size());
    grads[static_cast<size_t>(loss.node_)] = Tensor::full({1}, 1.0);

    // Reverse creation order is a topological order for a define-by-run tape.
    for (int i = loss.node_; i >= 0; --i) {
        Tensor& g = grads[static_cast<size_t>(i)];
        if (!g.defined()) continue;
        const Node& node = nodes_[static_cast<size_t>(i)];
        if (!node.vjp) continue; // leaf
        std::vector<Tensor> pg = node.vjp(g);
        for (size_t p = 0; p < node.parents.size(); ++p) {
            const int pid = node.parents[p];
            if (pid < 0 || !pg[p].defined()) continue;
            Tensor& slot = grads[static_cast<size_t>(pid)];
            if (!slot.defined()) {
                slot = pg[p];
            } else {
                std::vector<double> acc(slot.vec());
                kern::add(acc.data(), pg[p].data(), acc.data(), slot.numel());
                slot = Tensor(slot.shape(), std::move(acc));
            }
        }
    }

    Gradients out;
    for (const void* id : leaf_ids_) {
        const int nid = leaves_.at(id);
        if (grads[static_cast<size_t>(nid)].defined()) out.by_id.emplace(id, grads[static_cast<size_t>(nid)]);
    }
    return out;
}

TapeScope::TapeScope(Tape& tape) : prev_(t_active) { t_active = &tape; }

TapeScope::~TapeScope() { t_active = prev_; }

} // namespace vlg
