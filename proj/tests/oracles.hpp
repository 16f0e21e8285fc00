// Test-only oracles, kept independent of the implementation paths they check.

#pragma once

#include <cstdint>
#include <vector>

#include "ckkstream/bigint.hpp"

namespace cks::oracle {

// big-integer route for (a*b) mod q, avoiding the Montgomery machinery
uint64_t mulmod_big(uint64_t a, uint64_t b, uint64_t q);

// Exhaustive scan for the NTT-friendly prime enumeration: walks every
// candidate q == 1 (mod 2^(n+1)) in [2^bit_lo, 2^bit_hi), tests primality,
// k-expressibility by direct triple-loop construction of the k value set,
// the magnitude condition, and closed-form invertibility via an independent
// Euler-route inverse.
std::vector<uint64_t> enumerate_primes_scan(uint32_t bit_lo, uint32_t bit_hi, uint32_t n);

// schoolbook negacyclic convolution in Z_q[x]/(x^N + 1)
std::vector<uint64_t> schoolbook_negacyclic(const std::vector<uint64_t>& a,
                                            const std::vector<uint64_t>& b, uint64_t q);

// Direct O(N^2) inverse canonical embedding: m_n = (2/N) Re sum_j z_j zeta^-(2j+1)n
// with zeta = exp(i pi / N). slots has length N/2.
std::vector<double> direct_inverse_embedding(const std::vector<double>& re,
                                             const std::vector<double>& im);

// High-probability slot-error bound for a fresh encryption roundtrip,
// independent of the implementation: canonical-embedding bounds with dense
// ternary secrets (expected weight 2N/3) plus the encode rounding term.
double analytic_noise_bound(double sigma, uint32_t n, double scale);

// encode/decode-only slot error bound (quantization by rounding to Delta)
double encode_quantization_bound(uint32_t n, double scale);

}  // namespace cks::oracle
