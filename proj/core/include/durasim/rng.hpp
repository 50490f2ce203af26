#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace durasim {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). Output is
/// a pure function of (counter, key), so any draw can be recomputed in any
/// order on any thread.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept;
};

/// Uniform variate in the open interval (0, 1) for one (seed, iteration,
/// stream) cell. The simulation uses stream = work-package index.
double substream_uniform(std::uint64_t seed, std::uint64_t iteration, std::uint64_t stream) noexcept;

/// Sequential 64-bit engine over one Philox stream, for auxiliary draws
/// (e.g. reservoir sampling). Satisfies UniformRandomBitGenerator.
class CounterEngine {
public:
    using result_type = std::uint64_t;

    CounterEngine(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
};

}  // namespace durasim
