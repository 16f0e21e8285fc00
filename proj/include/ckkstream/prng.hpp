// Deterministic seeded randomness: a ChaCha20-based PRF keyed by a 128-bit
// seed, with domain-separated streams per tag, plus the samplers the client
// pipeline needs (uniform below q, ternary, discrete Gaussian).

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cks {

struct Seed128 {
    std::array<uint8_t, 16> bytes{};

    static Seed128 from_hex(std::string_view hex);
    std::string to_hex() const;
    bool operator==(const Seed128&) const = default;
};

class SeedStream {
public:
    SeedStream(const Seed128& seed, std::string_view tag);

    uint64_t next_u64();
    // uniform in [0, bound) by rejection
    uint64_t uniform_below(uint64_t bound);
    // uniform over {-1, 0, 1}
    int32_t ternary();
    // uniform in [0, 1) with 53 bits
    double unit_double();

private:
    void refill();
    std::array<uint32_t, 8> key_{};
    std::array<uint32_t, 3> nonce_{};
    uint32_t counter_ = 0;
    std::array<uint8_t, 64> buf_{};
    size_t pos_ = 64;
};

// Truncated discrete Gaussian over the integers, tail cut at floor(6*sigma).
class DiscreteGaussian {
public:
    explicit DiscreteGaussian(double sigma);
    int32_t sample(SeedStream& rng) const;
    int32_t tail_bound() const { return bound_; }

private:
    int32_t bound_;
    std::vector<uint64_t> cdt_;  // cumulative thresholds for k = -B..B
};

enum class SampleDist { Uniform, Ternary, Gaussian };

// Deterministic per-(seed, tag) sample vector. Uniform values are < q;
// ternary and gaussian values are centered (int64 cast of the signed value).
std::vector<int64_t> prng_expand(const Seed128& seed, std::string_view tag, size_t count,
                                 SampleDist dist, uint64_t q = 0, double sigma = 3.2);

}  // namespace cks
