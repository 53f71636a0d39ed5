#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace drlids {

/// Seeded generator with distribution helpers whose output is fully
/// specified (the std:: distributions are implementation-defined, which
/// would break byte-identical artifacts across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, n); n must be > 0.
    std::size_t uniform_index(std::size_t n);
    bool bernoulli(double p) { return uniform01() < p; }
    /// Standard normal via Box-Muller (no cached second variate).
    double normal();
    /// Draws index i with probability weights[i] / sum(weights).
    std::size_t categorical(std::span<const double> weights);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace drlids
