#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <span>

namespace modechoice {

// splitmix64 finalizer; also used as the hash for substream derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Purpose tags for substream derivation. Keeping them in one place makes the
// seed layout auditable: every random decision in a run is reachable from
// (master_seed, rep, tag, ...) without any dependence on scheduling order.
namespace rng_tag {
constexpr std::uint64_t replication = 0x5245504cULL; // "REPL"
constexpr std::uint64_t population  = 0x504f5055ULL; // "POPU"
constexpr std::uint64_t network     = 0x4e455457ULL; // "NETW"
constexpr std::uint64_t decision    = 0x44454349ULL; // "DECI"
} // namespace rng_tag

/// Counter-based stream (splitmix64). Substreams are derived by hashing the
/// parent key with integer tags, so independent agents/periods/replications
/// can draw in parallel and still reproduce bit-for-bit in any order.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : state_(mix64(key ^ 0x9d5fb1c3a87e6f42ULL)) {}

    static std::uint64_t derive_key(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) {
        std::uint64_t k = mix64(parent);
        for (std::uint64_t t : tags) k = mix64(k ^ mix64(t + 0x7fb5d329728ea185ULL));
        return k;
    }

    static RngStream derive(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) {
        return RngStream(derive_key(parent, tags));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        // Multiply-shift; bias is negligible for simulation-sized n.
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
    }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller. Two uniforms per draw, no cached spare, so the stream
    /// position after a draw does not depend on call history.
    double normal(double mean = 0.0, double sd = 1.0) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double two_pi = 6.283185307179586476925286766559;
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        return mean + z * sd;
    }

    /// Normal draw clamped into [lo, hi].
    double clamped_normal(double mean, double sd, double lo, double hi) {
        double v = normal(mean, sd);
        if (v < lo) return lo;
        if (v > hi) return hi;
        return v;
    }

    /// Normal truncated to [lo, hi] by rejection; falls back to clamping
    /// after 64 attempts (only reachable for pathological bounds).
    double truncated_normal(double mean, double sd, double lo, double hi) {
        for (int i = 0; i < 64; ++i) {
            double v = normal(mean, sd);
            if (v >= lo && v <= hi) return v;
        }
        return clamped_normal(mean, sd, lo, hi);
    }

    /// Lognormal parameterized by median and log-scale sigma.
    double lognormal_median(double median, double sigma) {
        return std::exp(normal(std::log(median), sigma));
    }

    /// Categorical draw; probs need not be normalized. Returns index.
    int categorical(std::span<const double> probs) {
        double total = 0.0;
        for (double p : probs) total += p;
        double u = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;
    }

private:
    std::uint64_t state_;
};

} // namespace modechoice
