#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace locc {

// Philox4x32-10 (Salmon et al., SC'11). Stateless: output depends only on
// (counter, key), which is what makes per-chunk streams thread-independent.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    static Key key_from_seed(std::uint64_t seed) {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }
};

// Uniform doubles for one sample: the sample index occupies the first two
// counter words, the draw index the third.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t sample, std::uint32_t lane = 0)
        : key_(Philox4x32::key_from_seed(seed)),
          lo_(static_cast<std::uint32_t>(sample)),
          hi_(static_cast<std::uint32_t>(sample >> 32)),
          lane_(lane) {}

    // In [0, 1) with 53 random bits.
    double uniform() {
        if (pos_ == 2) {
            block_ = Philox4x32::generate({lo_, hi_, draw_++, lane_}, key_);
            pos_ = 0;
        }
        const std::uint32_t a = block_[static_cast<std::size_t>(2 * pos_)] >> 5;
        const std::uint32_t b = block_[static_cast<std::size_t>(2 * pos_ + 1)] >> 6;
        ++pos_;
        return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
    }

    // In (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    double exponential() { return -std::log(uniform_open0()); }

    double normal() {
        const double u1 = uniform_open0();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    Philox4x32::Key key_;
    std::uint32_t lo_, hi_, lane_;
    std::uint32_t draw_ = 0;
    Philox4x32::Block block_{};
    int pos_ = 2;
};

}  // namespace locc
