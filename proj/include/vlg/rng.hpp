#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace vlg {

/// Counter-based random stream. A stream is identified by a key derived from
/// the run seed and a name path; draws advance only the stream's own counter,
/// so independently derived streams never interact and replaying a stream is
/// just re-deriving it. Training code derives one child stream per step, which
/// makes checkpoint resume reproduce the exact same draws.
class RngStream {
  public:
    RngStream() = default;
    explicit RngStream(uint64_t seed) : key_(mix(0x9e3779b97f4a7c15ULL, seed)) {}

    RngStream child(std::string_view name) const;
    RngStream child(uint64_t index) const;

    uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    double normal();                        // standard normal, Box-Muller
    double normal(double mean, double stddev);
    int64_t uniform_int(int64_t n);         // [0, n)
    bool bernoulli(double p);

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(uniform_int(static_cast<int64_t>(i)));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Sample k distinct indices from [0, n), returned in increasing order.
    std::vector<int64_t> sample_without_replacement(int64_t n, int64_t k);

  private:
    static uint64_t mix(uint64_t key, uint64_t x);

    uint64_t key_ = 0x9e3779b97f4a7c15ULL;
    uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace vlg
