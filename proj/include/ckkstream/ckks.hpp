// CKKS client-side operations: seeded key/mask/error generation, encode
// (IFFT + round + RNS + NTT), encrypt, decrypt, decode (INTT + CRT + FFT),
// the mantissa-precision sweep, and the on-chip/off-chip memory accountant.

#pragma once

#include <cstdint>
#include <vector>

#include "ckkstream/fourier.hpp"
#include "ckkstream/modarith.hpp"
#include "ckkstream/prng.hpp"
#include "ckkstream/redfloat.hpp"
#include "ckkstream/rns_poly.hpp"

namespace cks {

struct CkksParams {
    uint32_t log_n = 16;      // polynomial degree 2^log_n, 14..16 supported
    uint32_t prime_bits = 36;
    uint32_t levels = 24;     // doubled-scale level count
    double scale = 68719476736.0;  // 2^36
    double sigma = 3.2;

    uint32_t n() const { return 1u << log_n; }
    uint32_t slot_count() const { return 1u << (log_n - 1); }
};

struct KeyMaterial {
    Seed128 seed;
    RnsPolynomial sk;   // ternary key, NTT domain
    RnsPolynomial pk0;  // pk0 + pk1*sk = e (small), per limb
    RnsPolynomial pk1;
};

struct Plaintext {
    RnsPolynomial poly;  // NTT domain
    double scale = 0.0;
    uint32_t level = 0;
};

struct Ciphertext {
    RnsPolynomial c0;
    RnsPolynomial c1;
    double scale = 0.0;
    uint32_t level = 0;
};

class CkksContext {
public:
    explicit CkksContext(const CkksParams& params);

    const CkksParams& params() const { return params_; }
    uint32_t n() const { return params_.n(); }
    const std::vector<NttFriendlyPrime>& chain() const { return chain_; }
    const NttKernel& kernel(size_t limb) const { return kernels_[limb]; }
    const RnsBasis& basis(uint32_t level) const;
    const std::vector<RedComplex>& fft_roots() const { return fft_roots_; }      // w^j, w = e^(2pi i/N)
    const std::vector<RedComplex>& zeta_pos() const { return zeta_pos_; }        // zeta^n
    const std::vector<RedComplex>& zeta_neg() const { return zeta_neg_; }        // zeta^-n

    // limb transforms with the public natural-order convention
    void forward_ntt_limb(std::vector<uint64_t>& limb, size_t limb_index) const;
    void inverse_ntt_limb(std::vector<uint64_t>& limb, size_t limb_index) const;

private:
    CkksParams params_;
    std::vector<NttFriendlyPrime> chain_;
    std::vector<NttKernel> kernels_;
    std::vector<RnsBasis> bases_;  // bases_[l-1] covers the first l primes
    std::vector<RedComplex> fft_roots_, zeta_pos_, zeta_neg_;
};

// complex FFT in the reduced-precision datapath; sign +1 evaluates
// sum x[n] w^(+nk), sign -1 uses w^(-nk)
void red_fft(std::vector<RedComplex>& values, int sign, const RedFloatFormat& fmt,
             const std::vector<RedComplex>& roots, RedOpCount* ops = nullptr);

KeyMaterial keygen(const CkksContext& ctx, const Seed128& seed);

Plaintext encode(const CkksContext& ctx, const std::vector<RedComplex>& slots,
                 const RedFloatFormat& fmt);
std::vector<RedComplex> decode(const CkksContext& ctx, const Plaintext& pt,
                               const RedFloatFormat& fmt);

Ciphertext encrypt(const CkksContext& ctx, const Plaintext& pt, const KeyMaterial& keys,
                   const Seed128& enc_seed);
// test hook: v = e0 = e1 = 0, decrypt is bit-exact
Ciphertext encrypt_noiseless(const CkksContext& ctx, const Plaintext& pt);
Plaintext decrypt(const CkksContext& ctx, const Ciphertext& ct, const KeyMaterial& keys);

Ciphertext add_ciphertexts(const CkksContext& ctx, const Ciphertext& a, const Ciphertext& b);

// real-coefficient embedding path with scaling and rounding disabled
std::vector<double> encode_real(const CkksContext& ctx, const std::vector<RedComplex>& slots,
                                const RedFloatFormat& fmt);
std::vector<RedComplex> decode_real(const CkksContext& ctx, const std::vector<double>& coeffs,
                                    const RedFloatFormat& fmt);

double max_slot_error(const std::vector<RedComplex>& a, const std::vector<RedComplex>& b);

struct SweepRow {
    uint32_t mantissa_bits;
    double precision_bits;
};

// precision_bits(m) = -log2(max roundtrip slot error over `trials` messages)
std::vector<SweepRow> roundtrip_precision_sweep(const CkksContext& ctx, uint32_t m_lo,
                                                uint32_t m_hi, uint32_t m_step, uint32_t trials,
                                                const Seed128& seed);

struct OnchipFlags {
    bool twiddles = false;
    bool randoms = false;
};

struct MemoryReport {
    uint64_t public_key_bytes = 0;
    uint64_t masks_errors_bytes = 0;
    uint64_t twiddles_bytes = 0;
    uint64_t seed_bytes = 0;
};

// external-storage bytes per category; on-chip generation replaces a
// category with its seed storage. lanes sizes the per-lane twiddle phase
// registers of the generator.
MemoryReport memory_accountant(const CkksParams& params, uint32_t coeff_bits, OnchipFlags onchip,
                               uint32_t lanes = 8);

}  // namespace cks
