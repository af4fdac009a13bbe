#pragma once

#include <array>
#include <cstdint>

namespace infopt {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
// Stateless: the output is a pure function of (key, counter), which is what
// lets every Monte Carlo path own an independent, reproducible sub-stream.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept {
        std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
        std::uint32_t k0 = key[0], k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
            c0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            c1 = static_cast<std::uint32_t>(p1);
            c2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            c3 = static_cast<std::uint32_t>(p0);
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return {c0, c1, c2, c3};
    }
};

// Draw stream for one (seed, stream index) pair. Block b of stream s is
// Philox(counter = {s_lo, s_hi, b_lo, b_hi}, key = mix(seed)); each block
// yields two 64-bit words, consumed in order.
class SubStream {
public:
    SubStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    [[nodiscard]] std::uint64_t bits() noexcept {
        if (next_ == kBufferedWords) refill();
        return buffer_[next_++];
    }

    // 53-bit uniform in the open interval (0, 1).
    [[nodiscard]] double uniform() noexcept { return to_open_unit(bits()); }

    // Standard normal via a 128-layer ziggurat (Doornik's ZIGNOR, with the
    // layer index taken from bits independent of the uniform).
    [[nodiscard]] double normal() noexcept;

private:
    void refill() noexcept {
        const auto out = Philox4x32::generate(
            {static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
             static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)},
            key_);
        ++block_;
        buffer_ = {(static_cast<std::uint64_t>(out[0]) << 32) | out[1],
                   (static_cast<std::uint64_t>(out[2]) << 32) | out[3]};
        next_ = 0;
    }

    static double to_open_unit(std::uint64_t word) noexcept {
        return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
    }

    [[nodiscard]] double normal_tail(bool negative) noexcept;

    static constexpr int kBufferedWords = 2;

    Philox4x32::Key key_{};
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, kBufferedWords> buffer_{};
    int next_ = kBufferedWords;
};

}  // namespace infopt
