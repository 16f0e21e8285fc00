// NTT-friendly prime enumeration, Montgomery multiplication with a
// shift-and-add reduction step, and RNS/CRT limb conversion.

#pragma once

#include <cstdint>
#include <vector>

#include "ckkstream/bigint.hpp"
#include "ckkstream/rns_poly.hpp"

namespace cks {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);
bool is_prime_u64(uint64_t n);  // deterministic Miller-Rabin below 2^64

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t q) {
    uint64_t r = a + b;
    return r >= q ? r - q : r;
}
inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t q) {
    return a >= b ? a - b : a + q - b;
}

struct KTerm {
    uint32_t exp;  // power-of-two exponent
    int8_t sign;   // +1 or -1
};

// A prime of the form q = 2^p_bw + k*2^(n+1) + 1 with k = +-2^a +-2^b +-2^c.
// p_bw is the anchor exponent (the top bit of q); k >= 0 under this anchoring.
struct NttFriendlyPrime {
    uint64_t q = 0;
    uint32_t p_bw = 0;
    uint32_t n = 0;            // supports transforms up to N = 2^n
    uint32_t two_adicity = 0;  // v2(q - 1), always >= n + 1
    int64_t k = 0;
    std::vector<KTerm> k_terms;  // at most 3 signed power-of-two terms

    uint64_t reconstruct() const;
};

struct ShiftAddTerm {
    uint32_t shift;
    int8_t sign;
};

// Precomputed Montgomery constants for one prime. The q_inv multiplication in
// the reduction is replaced by shift_add_plan, so the hot path contains a
// single general multiplier.
class MontgomeryContext {
public:
    MontgomeryContext() = default;

    uint64_t q() const { return q_; }
    uint32_t r_exp() const { return r_exp_; }
    uint64_t q_inv() const { return q_inv_; }
    uint64_t r2() const { return r2_; }
    uint64_t one() const { return r_mod_q_; }  // R mod q, the Montgomery unit
    const std::vector<ShiftAddTerm>& shift_add_plan() const { return plan_; }

    // (x * q_inv) mod R via the shift-and-add plan
    uint64_t shift_add(uint64_t x) const {
        uint64_t acc = x;
        for (const auto& t : plan_) {
            uint64_t s = x << t.shift;
            acc = t.sign > 0 ? acc + s : acc - s;
        }
        return acc & r_mask_;
    }

    // (a * b * R^-1) mod q; checked variant of the kernel below
    uint64_t mul(uint64_t a, uint64_t b) const;

    // unchecked hot-path kernel: callers guarantee a, b < q
    uint64_t mul_unchecked(uint64_t a, uint64_t b) const {
        unsigned __int128 big = (unsigned __int128)a * b;
        uint64_t m = shift_add((uint64_t)big & r_mask_);
        __int128 t = (__int128)big - (__int128)((unsigned __int128)m * q_);
        t >>= r_exp_;
        if (t < 0) t += q_;
        return (uint64_t)t;
    }

    uint64_t to_mont(uint64_t a) const { return mul(a, r2_); }
    uint64_t from_mont(uint64_t a) const { return mul(a, 1); }

    friend MontgomeryContext make_montgomery_context(const NttFriendlyPrime& p);

private:
    uint64_t q_ = 0;
    uint32_t r_exp_ = 0;
    uint64_t r_mask_ = 0;
    uint64_t q_inv_ = 0;
    uint64_t r2_ = 0;
    uint64_t r_mod_q_ = 0;
    std::vector<ShiftAddTerm> plan_;
};

// Every prime q in [2^bit_lo, 2^bit_hi) supporting negacyclic transforms of
// size 2^n whose k witness fits the restricted three-term form and whose
// closed-form QInv is exact (the shift-and-add supportability condition).
// Sorted ascending.
std::vector<NttFriendlyPrime> enumerate_ntt_friendly_primes(uint32_t bit_lo, uint32_t bit_hi,
                                                            uint32_t n);

MontgomeryContext make_montgomery_context(const NttFriendlyPrime& p);

// extended Euclid inverse of odd q modulo 2^r_exp
uint64_t euclid_inverse_pow2(uint64_t q, uint32_t r_exp);
// Euler-route inverse: q^(2^(r_exp-1) - 1) mod 2^r_exp
uint64_t euler_inverse_pow2(uint64_t q, uint32_t r_exp);
// closed-form QInv = 1 - 2^p_bw - k*2^(n+1) mod 2^r_exp
uint64_t closed_form_q_inv(const NttFriendlyPrime& p, uint32_t r_exp);

struct RnsBasis {
    std::vector<NttFriendlyPrime> primes;
    BigUint big_modulus;
    BigUint half_modulus;
    // reconstruction: x = sum_i ((v_i * crt_inv[i]) mod q_i) * crt_quotient[i] mod Q
    std::vector<BigUint> crt_quotients;  // Q / q_i
    std::vector<uint64_t> crt_inv;       // (Q/q_i)^-1 mod q_i

    size_t size() const { return primes.size(); }
};

RnsBasis make_rns_basis(std::vector<NttFriendlyPrime> primes);

// limb j of the result holds coeffs mod primes[j]; centered inputs accepted
std::vector<std::vector<uint64_t>> rns_decompose(const std::vector<BigInt>& coeffs,
                                                 const RnsBasis& basis);
std::vector<std::vector<uint64_t>> rns_decompose_i64(const std::vector<int64_t>& coeffs,
                                                     const RnsBasis& basis);

// unique centered representatives in (-Q/2, Q/2] congruent to every limb
std::vector<BigInt> crt_reconstruct(const std::vector<std::vector<uint64_t>>& limbs,
                                    const RnsBasis& basis);

}  // namespace cks
