#include "durasim/rng.hpp"

namespace durasim {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

Philox4x32::Counter counter_of(std::uint64_t lo, std::uint64_t hi) noexcept {
    return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
            static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)};
}

Philox4x32::Key key_of(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

double substream_uniform(std::uint64_t seed, std::uint64_t iteration, std::uint64_t stream) noexcept {
    const auto out = Philox4x32::generate(counter_of(iteration, stream), key_of(seed));
    const std::uint64_t bits = ((static_cast<std::uint64_t>(out[0]) << 32) | out[1]) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

CounterEngine::result_type CounterEngine::operator()() noexcept {
    // Upper counter word tags auxiliary streams apart from simulation cells.
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
         static_cast<std::uint32_t>(stream_), 0x80000000u | static_cast<std::uint32_t>(stream_ >> 32)},
        key_of(seed_));
    ++position_;
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace durasim
