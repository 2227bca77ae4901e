#pragma once

#include <cstdint>
#include <random>

namespace randlat {

/// Identifies one independent random stream: the same (master_seed,
/// stream_index) pair always yields the same draws, whatever the schedule.
struct RngState {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_stream_seed(RngState s) {
    return mix64(mix64(s.master_seed) ^ mix64(s.stream_index + 0x632be59bd9b4e019ULL));
}

/// Stream indices at or above this value are reserved for auxiliary
/// streams (bootstrap, overlap checks) so they never collide with trials.
inline constexpr std::uint64_t kAuxiliaryStreamBase = 1ULL << 62;

class Rng {
public:
    explicit Rng(RngState state) : state_(state), engine_(derive_stream_seed(state)) {}

    /// Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    /// Uniform on (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }
    double normal() { return normal_(engine_); }
    double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }
    std::int64_t binomial(std::int64_t n, double p) {
        if (n <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        return std::binomial_distribution<std::int64_t>(n, p)(engine_);
    }

    RngState state() const { return state_; }
    std::mt19937_64& engine() { return engine_; }

private:
    RngState state_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace randlat
