#include "vlg/rng.hpp"

#include <algorithm>
#include <cmath>

#include "vlg/common.hpp"

namespace vlg {

namespace {
inline uint64_t splitmix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}
} // namespace

uint64_t RngStream::mix(uint64_t key, uint64_t x) { return splitmix(splitmix(key) ^ splitmix(x)); }

RngStream RngStream::child(std::string_view name) const {
    RngStream s;
    s.key_ = mix(key_, fnv1a(name));
    return s;
}

RngStream RngStream::child(uint64_t index) const {
    RngStream s;
    s.key_ = mix(key_, index ^ 0xd6e8feb86659fd93ULL);
    return s;
}

uint64_t RngStream::next_u64() { return mix(key_, counter_++); }

double RngStream::uniform() {
    // 53-bit mantissa construction.
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // avoid log(0)
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586477 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double RngStream::normal(double mean, double stddev) { return mean + stddev * normal(); }

int64_t RngStream::uniform_int(int64_t n) {
    VLG_CHECK(n > 0, "uniform_int requires n > 0, got ", n);
    // Rejection sampling keeps the distribution exactly uniform.
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<int64_t>(x % un);
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

std::vector<int64_t> RngStream::sample_without_replacement(int64_t n, int64_t k) {
    VLG_CHECK(k >= 0 && k <= n, "cannot sample ", k, " of ", n);
    std::vector<int64_t> idx(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    shuffle(idx);
    idx.resize(static_cast<size_t>(k));
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace vlg
