#include "symdom/rng.hpp"

#include <numbers>

namespace symdom {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream, std::uint32_t chunk) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, chunk, static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)} {}

Philox4x32::Block Philox4x32::encrypt(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kMul0, ctr[0], lo0, hi0);
        mulhilo(kMul1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

void Philox4x32::refill() noexcept {
    buffer_ = encrypt(counter_, key_);
    ++counter_[0];
    position_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
    if (position_ >= 4) refill();
    const std::uint64_t lo = buffer_[position_];
    const std::uint64_t hi = buffer_[position_ + 1];
    position_ += 2;
    return (hi << 32) | lo;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

StreamKey StreamKey::child(std::string_view purpose, std::uint64_t index) const noexcept {
    // FNV-1a over the purpose tag, folded with the parent stream and index.
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : purpose) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    const std::uint64_t mixed = splitmix64(splitmix64(stream ^ h) + index);
    return StreamKey{seed, mixed};
}

double RandomStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace symdom
