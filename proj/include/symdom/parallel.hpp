#pragma once

#include <cstdint>
#include <functional>

namespace symdom::parallel {

/// Samples per Monte Carlo chunk. Each chunk owns one RandomStream, so the
/// chunking (and therefore every estimate) is independent of the worker count.
inline constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 14;

void set_threads(unsigned count);
unsigned threads() noexcept;

/// Calls body(i) for every i in [0, count). Iterations may run concurrently;
/// callers write into per-index slots and reduce in index order afterwards.
void for_each_index(std::uint64_t count, const std::function<void(std::uint64_t)>& body);

inline std::uint64_t chunk_count(std::uint64_t samples) noexcept {
    return (samples + kChunkSize - 1) / kChunkSize;
}

inline std::uint64_t chunk_length(std::uint64_t samples, std::uint64_t chunk) noexcept {
    const std::uint64_t begin = chunk * kChunkSize;
    return samples - begin < kChunkSize ? samples - begin : kChunkSize;
}

}  // namespace symdom::parallel
