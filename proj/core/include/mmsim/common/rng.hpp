#pragma once

#include <cstdint>
#include <random>

namespace mmsim {

/// SplitMix64 finalizer; used to derive independent stream seeds from one
/// user seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded generator whose draws are identical across platforms.
///
/// std::mt19937_64 output is fixed by the standard; the distributions come
/// from Boost.Random because the std:: ones are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    /// Uniform real in [0, 1).
    double uniform();
    double normal(double mean = 0.0, double stddev = 1.0);
    std::int64_t poisson(double mean);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace mmsim
