#include "ckkstream/modarith.hpp"

#include <algorithm>
#include <stdexcept>

namespace cks {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((unsigned __int128)a * b % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (n % p == 0) return n == p;
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this witness set is deterministic for all n < 2^64
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

int bit_length(uint64_t x) {
    int n = 0;
    while (x) {
        ++n;
        x >>= 1;
    }
    return n;
}

uint32_t two_adicity_of(uint64_t x) {
    uint32_t c = 0;
    while ((x & 1) == 0) {
        x >>= 1;
        ++c;
    }
    return c;
}

// non-adjacent form digits of k, as (exponent, sign) pairs
std::vector<KTerm> naf_terms(uint64_t k) {
    std::vector<KTerm> terms;
    uint32_t pos = 0;
    while (k) {
        if (k & 1) {
            if ((k & 3) == 3) {
                terms.push_back({pos, -1});
                k += 1;
            } else {
                terms.push_back({pos, +1});
            }
        }
        k >>= 1;
        ++pos;
    }
    return terms;
}

uint64_t pow2_mask(uint32_t r_exp) {
    return r_exp >= 64 ? ~0ull : (1ull << r_exp) - 1;
}

uint32_t pick_r_exp(const NttFriendlyPrime& p) {
    return p.q > (1ull << p.p_bw) ? p.p_bw + 1 : p.p_bw;
}

}  // namespace

uint64_t NttFriendlyPrime::reconstruct() const {
    __int128 k_val = 0;
    for (const auto& t : k_terms) k_val += (__int128)t.sign * ((__int128)1 << t.exp);
    __int128 v = ((__int128)1 << p_bw) + k_val * ((__int128)1 << (n + 1)) + 1;
    return (uint64_t)v;
}

uint64_t euclid_inverse_pow2(uint64_t q, uint32_t r_exp) {
    if ((q & 1) == 0) throw std::invalid_argument("euclid_inverse_pow2: q must be odd");
    __int128 r0 = (__int128)1 << r_exp, r1 = q;
    __int128 t0 = 0, t1 = 1;
    while (r1 != 0) {
        __int128 quot = r0 / r1;
        __int128 r2 = r0 - quot * r1;
        r0 = r1;
        r1 = r2;
        __int128 t2 = t0 - quot * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw std::invalid_argument("euclid_inverse_pow2: not coprime");
    __int128 mod = (__int128)1 << r_exp;
    t0 %= mod;
    if (t0 < 0) t0 += mod;
    return (uint64_t)t0;
}

uint64_t euler_inverse_pow2(uint64_t q, uint32_t r_exp) {
    // q^(2^(r_exp-1) - 1) mod 2^r_exp, Euler's theorem with phi(2^r) = 2^(r-1)
    uint64_t mask = pow2_mask(r_exp);
    uint64_t exp = ((uint64_t)1 << (r_exp - 1)) - 1;
    uint64_t result = 1, base = q & mask;
    while (exp) {
        if (exp & 1) result = (result * base) & mask;
        base = (base * base) & mask;
        exp >>= 1;
    }
    return result;
}

uint64_t closed_form_q_inv(const NttFriendlyPrime& p, uint32_t r_exp) {
    uint64_t mask = pow2_mask(r_exp);
    __int128 k_val = 0;
    for (const auto& t : p.k_terms) k_val += (__int128)t.sign * ((__int128)1 << t.exp);
    __int128 v = (__int128)1 - ((__int128)1 << p.p_bw) - k_val * ((__int128)1 << (p.n + 1));
    return (uint64_t)v & mask;
}

std::vector<NttFriendlyPrime> enumerate_ntt_friendly_primes(uint32_t bit_lo, uint32_t bit_hi,
                                                            uint32_t n) {
    if (bit_lo < 8 || bit_lo > bit_hi || bit_hi > 62 || n < 2)
        throw std::invalid_argument("enumerate_ntt_friendly_primes: invalid range");

    std::vector<NttFriendlyPrime> out;
    const uint64_t step = 1ull << (n + 1);
    const uint64_t lo = 1ull << bit_lo;
    const uint64_t hi = 1ull << bit_hi;
    // first candidate >= lo with q == 1 mod 2^(n+1)
    uint64_t q = ((lo - 1 + step - 1) / step) * step + 1;
    if (q < lo) q += step;
    for (; q < hi; q += step) {
        if (!is_prime_u64(q)) continue;
        const uint32_t p_bw = (uint32_t)(bit_length(q) - 1);  // top-bit anchor, so k >= 0
        const uint64_t k = (q - 1 - (1ull << p_bw)) >> (n + 1);
        std::vector<KTerm> terms = naf_terms(k);
        if (terms.size() > 3) continue;
        // magnitude condition on k
        const int mag_exp = (int)((p_bw + 1) / 2) - 1 - (int)(n + 1);
        if (mag_exp > 0) {
            if (k < (1ull << mag_exp)) continue;
        } else if (k == 0) {
            continue;
        }
        NttFriendlyPrime p;
        p.q = q;
        p.p_bw = p_bw;
        p.n = n;
        p.two_adicity = two_adicity_of(q - 1);
        p.k = (int64_t)k;
        p.k_terms = std::move(terms);
        // shift-and-add supportability: the closed form must be the true inverse
        const uint32_t r_exp = pick_r_exp(p);
        if (closed_form_q_inv(p, r_exp) != euclid_inverse_pow2(q, r_exp)) continue;
        out.push_back(std::move(p));
    }
    return out;
}

uint64_t MontgomeryContext::mul(uint64_t a, uint64_t b) const {
    if (a >= q_ || b >= q_) throw std::invalid_argument("mont_mul: operand not reduced mod q");
    return mul_unchecked(a, b);
}

MontgomeryContext make_montgomery_context(const NttFriendlyPrime& p) {
    if (p.q == 0 || (p.q & 1) == 0 || p.reconstruct() != p.q)
        throw std::invalid_argument("make_montgomery_context: invalid prime witness");

    MontgomeryContext ctx;
    ctx.q_ = p.q;
    ctx.r_exp_ = pick_r_exp(p);
    ctx.r_mask_ = pow2_mask(ctx.r_exp_);

    const uint64_t by_euclid = euclid_inverse_pow2(p.q, ctx.r_exp_);
    const uint64_t by_closed_form = closed_form_q_inv(p, ctx.r_exp_);
    if (by_euclid != by_closed_form)
        throw std::runtime_error("make_montgomery_context: closed-form QInv disagrees with Euclid "
                                 "(prime outside the supported form)");
    ctx.q_inv_ = by_euclid;

    ctx.plan_.clear();
    if (p.p_bw < ctx.r_exp_) ctx.plan_.push_back({p.p_bw, -1});
    for (const auto& t : p.k_terms) {
        uint32_t shift = t.exp + p.n + 1;
        if (shift < ctx.r_exp_) ctx.plan_.push_back({shift, (int8_t)-t.sign});
    }

    const uint64_t r_mod_q = ((unsigned __int128)1 << ctx.r_exp_) % p.q;
    ctx.r_mod_q_ = r_mod_q;
    ctx.r2_ = mul_mod(r_mod_q, r_mod_q, p.q);
    return ctx;
}

RnsBasis make_rns_basis(std::vector<NttFriendlyPrime> primes) {
    if (primes.empty()) throw std::invalid_argument("make_rns_basis: empty prime list");
    for (size_t i = 0; i < primes.size(); ++i)
        for (size_t j = i + 1; j < primes.size(); ++j)
            if (primes[i].q == primes[j].q)
                throw std::invalid_argument("make_rns_basis: primes must be pairwise distinct");

    RnsBasis basis;
    basis.primes = std::move(primes);
    basis.big_modulus = BigUint(1);
    for (const auto& p : basis.primes) basis.big_modulus.mul_u64(p.q);
    basis.half_modulus = basis.big_modulus.shifted_right1();

    basis.crt_quotients.reserve(basis.primes.size());
    basis.crt_inv.reserve(basis.primes.size());
    for (const auto& p : basis.primes) {
        BigUint quot(1);
        for (const auto& other : basis.primes)
            if (other.q != p.q) quot.mul_u64(other.q);
        const uint64_t quot_mod = quot.mod_u64(p.q);
        // inverse mod prime via Fermat
        basis.crt_inv.push_back(pow_mod(quot_mod, p.q - 2, p.q));
        basis.crt_quotients.push_back(std::move(quot));
    }
    return basis;
}

std::vector<std::vector<uint64_t>> rns_decompose(const std::vector<BigInt>& coeffs,
                                                 const RnsBasis& basis) {
    std::vector<std::vector<uint64_t>> limbs(basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        const uint64_t q = basis.primes[j].q;
        limbs[j].resize(coeffs.size());
        for (size_t i = 0; i < coeffs.size(); ++i) limbs[j][i] = coeffs[i].mod_u64(q);
    }
    return limbs;
}

std::vector<std::vector<uint64_t>> rns_decompose_i64(const std::vector<int64_t>& coeffs,
                                                     const RnsBasis& basis) {
    std::vector<std::vector<uint64_t>> limbs(basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        const uint64_t q = basis.primes[j].q;
        limbs[j].resize(coeffs.size());
        for (size_t i = 0; i < coeffs.size(); ++i) {
            int64_t c = coeffs[i] % (int64_t)q;
            if (c < 0) c += (int64_t)q;
            limbs[j][i] = (uint64_t)c;
        }
    }
    return limbs;
}

std::vector<BigInt> crt_reconstruct(const std::vector<std::vector<uint64_t>>& limbs,
                                    const RnsBasis& basis) {
    if (limbs.size() != basis.size())
        throw std::invalid_argument("crt_reconstruct: limb count does not match basis");
    const size_t count = limbs.empty() ? 0 : limbs[0].size();
    for (const auto& l : limbs)
        if (l.size() != count) throw std::invalid_argument("crt_reconstruct: ragged limbs");

    const size_t L = basis.size();
    const size_t qwords = basis.big_modulus.limb_count();
    const size_t aw = qwords + 2;  // acc fits sum of L partial products, L <= 2^64

    // word-array copies of Q << k for the final reduction (acc < L * Q)
    int max_shift = 0;
    while ((1u << (max_shift + 1)) <= L) ++max_shift;
    std::vector<std::vector<uint64_t>> qshift(max_shift + 1);
    {
        BigUint cur = basis.big_modulus;
        for (int k = 0; k <= max_shift; ++k) {
            qshift[k].assign(aw, 0);
            for (size_t w = 0; w < cur.limb_count(); ++w) qshift[k][w] = cur.limb(w);
            BigUint doubled = cur;
            doubled.add(cur);
            cur = doubled;
        }
    }
    std::vector<uint64_t> half(aw, 0);
    for (size_t w = 0; w < basis.half_modulus.limb_count(); ++w)
        half[w] = basis.half_modulus.limb(w);

    auto cmp_words = [aw](const uint64_t* a, const uint64_t* b) {
        for (size_t i = aw; i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        }
        return 0;
    };
    auto sub_words = [aw](uint64_t* a, const uint64_t* b) {
        unsigned __int128 borrow = 0;
        for (size_t i = 0; i < aw; ++i) {
            unsigned __int128 rhs = (unsigned __int128)b[i] + borrow;
            if ((unsigned __int128)a[i] >= rhs) {
                a[i] = (uint64_t)((unsigned __int128)a[i] - rhs);
                borrow = 0;
            } else {
                a[i] = (uint64_t)(((unsigned __int128)1 << 64) + a[i] - rhs);
                borrow = 1;
            }
        }
    };

    std::vector<BigInt> out(count);
    std::vector<uint64_t> acc(aw);
    for (size_t i = 0; i < count; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (size_t j = 0; j < L; ++j) {
            const uint64_t q = basis.primes[j].q;
            if (limbs[j][i] >= q) throw std::invalid_argument("crt_reconstruct: limb not reduced");
            const uint64_t t = mul_mod(limbs[j][i], basis.crt_inv[j], q);
            // acc += crt_quotients[j] * t
            const BigUint& w = basis.crt_quotients[j];
            unsigned __int128 carry = 0;
            const size_t wn = w.limb_count();
            for (size_t wi = 0; wi < wn; ++wi) {
                carry += (unsigned __int128)w.limb(wi) * t + acc[wi];
                acc[wi] = (uint64_t)carry;
                carry >>= 64;
            }
            for (size_t wi = wn; carry && wi < aw; ++wi) {
                carry += acc[wi];
                acc[wi] = (uint64_t)carry;
                carry >>= 64;
            }
        }
        for (int k = max_shift; k >= 0; --k)
            while (cmp_words(acc.data(), qshift[k].data()) >= 0) sub_words(acc.data(), qshift[k].data());

        BigInt value;
        if (cmp_words(acc.data(), half.data()) > 0) {
            // centered representative: acc - Q, stored as negative magnitude Q - acc
            std::vector<uint64_t> neg = qshift[0];
            sub_words(neg.data(), acc.data());
            value.neg = true;
            value.mag = BigUint::from_words(neg.data(), aw);
        } else {
            value.neg = false;
            value.mag = BigUint::from_words(acc.data(), aw);
        }
        out[i] = std::move(value);
    }
    return out;
}

}  // namespace cks
