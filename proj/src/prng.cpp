#include "ckkstream/prng.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace cks {

namespace {

inline uint32_t rotl32(uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

#define CKS_QR(a, b, c, d)          \
    a += b; d ^= a; d = rotl32(d, 16); \
    c += d; b ^= c; b = rotl32(b, 12); \
    a += b; d ^= a; d = rotl32(d, 8);  \
    c += d; b ^= c; b = rotl32(b, 7)

void chacha20_block(const std::array<uint32_t, 8>& key, const std::array<uint32_t, 3>& nonce,
                    uint32_t counter, std::array<uint8_t, 64>& out) {
    uint32_t s[16] = {0x61707865u, 0x3320646eu, 0x79622d32u, 0x6b206574u,
                      key[0],      key[1],      key[2],      key[3],
                      key[4],      key[5],      key[6],      key[7],
                      counter,     nonce[0],    nonce[1],    nonce[2]};
    uint32_t w[16];
    std::memcpy(w, s, sizeof(w));
    for (int round = 0; round < 10; ++round) {
        CKS_QR(w[0], w[4], w[8], w[12]);
        CKS_QR(w[1], w[5], w[9], w[13]);
        CKS_QR(w[2], w[6], w[10], w[14]);
        CKS_QR(w[3], w[7], w[11], w[15]);
        CKS_QR(w[0], w[5], w[10], w[15]);
        CKS_QR(w[1], w[6], w[11], w[12]);
        CKS_QR(w[2], w[7], w[8], w[13]);
        CKS_QR(w[3], w[4], w[9], w[14]);
    }
    for (int i = 0; i < 16; ++i) {
        const uint32_t v = w[i] + s[i];
        out[4 * i + 0] = (uint8_t)(v);
        out[4 * i + 1] = (uint8_t)(v >> 8);
        out[4 * i + 2] = (uint8_t)(v >> 16);
        out[4 * i + 3] = (uint8_t)(v >> 24);
    }
}

#undef CKS_QR

uint64_t fnv1a64(std::string_view s, uint64_t basis) {
    uint64_t h = basis;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Seed128 Seed128::from_hex(std::string_view hex) {
    if (hex.size() > 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
    if (hex.size() != 32) throw std::invalid_argument("seed must be 32 hex digits (128 bits)");
    Seed128 s;
    for (size_t i = 0; i < 16; ++i) {
        const int hi = hex_val(hex[2 * i]), lo = hex_val(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("seed contains a non-hex digit");
        s.bytes[i] = (uint8_t)((hi << 4) | lo);
    }
    return s;
}

std::string Seed128::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(32);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

SeedStream::SeedStream(const Seed128& seed, std::string_view tag) {
    // 128-bit seed doubled into the 256-bit cipher key; the tag picks the
    // stream via the nonce words
    for (int i = 0; i < 4; ++i) {
        uint32_t w = 0;
        for (int b = 3; b >= 0; --b) w = (w << 8) | seed.bytes[4 * i + b];
        key_[i] = w;
        key_[i + 4] = w ^ 0x9e3779b9u;
    }
    const uint64_t h1 = fnv1a64(tag, 0xcbf29ce484222325ull);
    const uint64_t h2 = fnv1a64(tag, 0x84222325cbf29ce4ull) ^ (uint64_t)tag.size();
    nonce_[0] = (uint32_t)h1;
    nonce_[1] = (uint32_t)(h1 >> 32);
    nonce_[2] = (uint32_t)h2;
}

void SeedStream::refill() {
    chacha20_block(key_, nonce_, counter_++, buf_);
    pos_ = 0;
}

uint64_t SeedStream::next_u64() {
    if (pos_ + 8 > buf_.size()) refill();
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf_[pos_ + i];
    pos_ += 8;
    return v;
}

uint64_t SeedStream::uniform_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
    if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
    int bits = 0;
    while ((1ull << bits) < bound) ++bits;
    const uint64_t mask = bits >= 64 ? ~0ull : (1ull << bits) - 1;
    for (;;) {
        const uint64_t v = next_u64() & mask;
        if (v < bound) return v;
    }
}

int32_t SeedStream::ternary() {
    return (int32_t)uniform_below(3) - 1;
}

double SeedStream::unit_double() {
    return (double)(next_u64() >> 11) * 0x1.0p-53;
}

DiscreteGaussian::DiscreteGaussian(double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
    bound_ = (int32_t)std::floor(6.0 * sigma);
    const int size = 2 * bound_ + 1;
    std::vector<long double> weights(size);
    long double total = 0;
    for (int k = -bound_; k <= bound_; ++k) {
        const long double w = std::exp((long double)(-(double)k * k) / (2.0L * sigma * sigma));
        weights[k + bound_] = w;
        total += w;
    }
    cdt_.resize(size);
    long double acc = 0;
    for (int i = 0; i < size; ++i) {
        acc += weights[i] / total;
        long double scaled = acc * 18446744073709551615.0L;
        cdt_[i] = i + 1 == size ? ~0ull : (uint64_t)scaled;
    }
}

int32_t DiscreteGaussian::sample(SeedStream& rng) const {
    const uint64_t u = rng.next_u64();
    size_t lo = 0, hi = cdt_.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        if (u <= cdt_[mid])
            hi = mid;
        else
            lo = mid + 1;
    }
    return (int32_t)lo - bound_;
}

std::vector<int64_t> prng_expand(const Seed128& seed, std::string_view tag, size_t count,
                                 SampleDist dist, uint64_t q, double sigma) {
    SeedStream rng(seed, tag);
    std::vector<int64_t> out(count);
    switch (dist) {
        case SampleDist::Uniform: {
            if (q == 0) throw std::invalid_argument("prng_expand: uniform needs a modulus");
            for (auto& v : out) v = (int64_t)rng.uniform_below(q);
            break;
        }
        case SampleDist::Ternary:
            for (auto& v : out) v = rng.ternary();
            break;
        case SampleDist::Gaussian: {
            DiscreteGaussian g(sigma);
            for (auto& v : out) v = g.sample(rng);
            break;
        }
    }
    return out;
}

}  // namespace cks
