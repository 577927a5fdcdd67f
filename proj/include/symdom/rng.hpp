#pragma once

// Counter-based random streams.
//
// Every random draw in the library comes from a Philox4x32-10 block cipher
// keyed by the master seed. The 128-bit counter is laid out as
//   word 0: block index inside a chunk
//   word 1: chunk index
//   words 2-3: 64-bit stream id (one per purpose)
// so any (seed, stream, chunk) triple can be regenerated independently of
// the order in which chunks are evaluated.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace symdom {

class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream, std::uint32_t chunk) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Ten-round Philox bijection of one counter block.
    static Block encrypt(Block counter, Key key) noexcept;

private:
    void refill() noexcept;

    Key key_;
    Block counter_;
    Block buffer_{};
    unsigned position_ = 4;
};

/// Seed plus purpose-specific stream id.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// Derives a child stream; the mapping is a fixed hash of (stream, purpose, index).
    StreamKey child(std::string_view purpose, std::uint64_t index = 0) const noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Variate generation on top of one Philox stream.
class RandomStream {
public:
    RandomStream(StreamKey key, std::uint32_t chunk) noexcept
        : engine_(key.seed, key.stream, chunk) {}

    std::uint64_t bits() noexcept { return engine_(); }

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// +1 or -1 with probability 1/2 each.
    double sign() noexcept { return (engine_() >> 63) ? -1.0 : 1.0; }

    double exponential() noexcept { return -std::log(uniform()); }

    /// Box-Muller; the second variate of each pair is cached.
    double normal() noexcept;

    Philox4x32& engine() noexcept { return engine_; }

private:
    Philox4x32 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace symdom
