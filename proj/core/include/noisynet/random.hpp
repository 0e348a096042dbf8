#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

#include "noisynet/linalg.hpp"

namespace noisynet {

// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit counter
// and a 64-bit key to 128 pseudo-random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

[[nodiscard]] PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// SplitMix64 finalizer; used to derive sub-stream keys from a master seed.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Counter-based random stream.
//
// Every draw consumes exactly one Philox block: the block counter is
// (position, stream_id) and the key is the 64-bit seed. The position advances by
// one per draw for gaussian(), uniform() and uniform_below(), so the stream
// state after k draws is (seed, stream_id, position + k) regardless of which
// kind of draw was made.
//
// Gaussian draws use the cosine branch of Box-Muller on the two 53-bit uniforms
// carried by one block.
class RandomStream {
public:
    RandomStream() = default;
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0, std::uint64_t position = 0) noexcept
        : seed_(seed), stream_id_(stream_id), position_(position) {}

    // Sub-stream for a path of integers (e.g. {layer, kind, repeat}). The key is the
    // SplitMix64 chain seed -> mix(seed ^ p0) -> mix(. ^ p1) ...; stream_id is left at 0.
    [[nodiscard]] static RandomStream derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }
    [[nodiscard]] std::uint64_t position() const noexcept { return position_; }
    void seek(std::uint64_t position) noexcept { position_ = position; }

    // Standard normal.
    double gaussian() noexcept;
    // Uniform in [0, 1).
    double uniform() noexcept;
    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_below(std::uint64_t bound) noexcept;

    void fill_gaussian(std::span<double> out) noexcept;

    friend bool operator==(const RandomStream&, const RandomStream&) = default;

private:
    PhiloxCounter next_block() noexcept;

    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t position_ = 0;
};

// n standard-normal draws from `stream` (advances it by n).
[[nodiscard]] Vector gaussian(RandomStream& stream, std::size_t n);

}  // namespace noisynet
