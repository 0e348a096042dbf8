#include "noisynet/random.hpp"

#include <cmath>
#include <numbers>

namespace noisynet {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline PhiloxCounter philox_round(PhiloxCounter c, PhiloxKey k) noexcept {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::uint64_t join(std::uint32_t lo, std::uint32_t hi) noexcept {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

// High 64 bits of the 128-bit product a * b.
inline std::uint64_t mulhi64(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t a_lo = a & 0xFFFFFFFFu, a_hi = a >> 32;
    const std::uint64_t b_lo = b & 0xFFFFFFFFu, b_hi = b >> 32;
    const std::uint64_t lo_lo = a_lo * b_lo;
    const std::uint64_t hi_lo = a_hi * b_lo;
    const std::uint64_t lo_hi = a_lo * b_hi;
    const std::uint64_t hi_hi = a_hi * b_hi;
    const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFu) + lo_hi;
    return hi_hi + (hi_lo >> 32) + (cross >> 32);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
    counter = philox_round(counter, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        counter = philox_round(counter, key);
    }
    return counter;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t key = splitmix64(master_seed);
    for (std::uint64_t p : path) {
        key = splitmix64(key ^ p);
    }
    return RandomStream(key);
}

PhiloxCounter RandomStream::next_block() noexcept {
    const PhiloxCounter counter{static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
                                static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    ++position_;
    return philox4x32_10(counter, key);
}

double RandomStream::gaussian() noexcept {
    const PhiloxCounter block = next_block();
    // u1 in (0, 1] so the logarithm is finite; u2 in [0, 1).
    const double u1 = static_cast<double>((join(block[0], block[1]) >> 11) + 1) * kTwoPow53Inv;
    const double u2 = static_cast<double>(join(block[2], block[3]) >> 11) * kTwoPow53Inv;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::uniform() noexcept {
    const PhiloxCounter block = next_block();
    return static_cast<double>(join(block[0], block[1]) >> 11) * kTwoPow53Inv;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) noexcept {
    // Multiply-shift; bias is at most bound / 2^64.
    const PhiloxCounter block = next_block();
    return mulhi64(join(block[0], block[1]), bound);
}

void RandomStream::fill_gaussian(std::span<double> out) noexcept {
    for (double& v : out) {
        v = gaussian();
    }
}

Vector gaussian(RandomStream& stream, std::size_t n) {
    Vector out(n);
    stream.fill_gaussian(out);
    return out;
}

}  // namespace noisynet
