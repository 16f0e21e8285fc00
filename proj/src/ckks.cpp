#include "ckkstream/ckks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cks {

namespace {

constexpr double kPi = 3.14159265358979323846;

RnsPolynomial zero_poly(const CkksContext& ctx, uint32_t level, PolyDomain domain) {
    RnsPolynomial p;
    p.degree = ctx.n();
    p.domain = domain;
    p.ordering = PolyOrdering::Natural;
    for (uint32_t j = 0; j < level; ++j) {
        p.prime_ids.push_back(ctx.chain()[j].q);
        p.limbs.emplace_back(ctx.n(), 0);
    }
    return p;
}

// lift centered samples into each limb and transform to the NTT domain
RnsPolynomial lift_to_ntt(const CkksContext& ctx, const std::vector<int64_t>& values,
                          uint32_t level) {
    RnsPolynomial p = zero_poly(ctx, level, PolyDomain::Coefficient);
    for (uint32_t j = 0; j < level; ++j) {
        const int64_t q = (int64_t)ctx.chain()[j].q;
        auto& limb = p.limbs[j];
        for (uint32_t i = 0; i < ctx.n(); ++i) {
            int64_t c = values[i] % q;
            if (c < 0) c += q;
            limb[i] = (uint64_t)c;
        }
        ctx.forward_ntt_limb(limb, j);
    }
    p.domain = PolyDomain::Ntt;
    return p;
}

void check_same_shape(const RnsPolynomial& a, const RnsPolynomial& b) {
    if (a.degree != b.degree || a.prime_ids != b.prime_ids || a.domain != b.domain)
        throw std::invalid_argument("polynomial shape mismatch");
}

}  // namespace

CkksContext::CkksContext(const CkksParams& params) : params_(params) {
    if (params.log_n < 4 || params.log_n > 16)
        throw std::invalid_argument("log_n out of supported range");
    if (params.levels == 0) throw std::invalid_argument("levels must be positive");
    if (params.scale > std::ldexp(1.0, (int)params.prime_bits) + 0.5)
        throw std::invalid_argument("scale exceeds 2^prime_bits");

    auto primes = enumerate_ntt_friendly_primes(params.prime_bits - 1, params.prime_bits, 16);
    if (primes.size() < params.levels)
        throw std::invalid_argument("not enough enumerated primes for the requested levels");
    chain_.assign(primes.begin(), primes.begin() + params.levels);

    kernels_.reserve(chain_.size());
    for (const auto& p : chain_) kernels_.emplace_back(p, params.log_n);

    bases_.reserve(chain_.size());
    for (uint32_t l = 1; l <= params.levels; ++l)
        bases_.push_back(make_rns_basis({chain_.begin(), chain_.begin() + l}));

    const uint32_t n = params.n();
    fft_roots_.resize(n);
    zeta_pos_.resize(n);
    zeta_neg_.resize(n);
    for (uint32_t j = 0; j < n; ++j) {
        const double ang_root = 2.0 * kPi * (double)j / (double)n;
        fft_roots_[j] = {std::cos(ang_root), std::sin(ang_root)};
        const double ang_zeta = kPi * (double)j / (double)n;
        zeta_pos_[j] = {std::cos(ang_zeta), std::sin(ang_zeta)};
        zeta_neg_[j] = {std::cos(ang_zeta), -std::sin(ang_zeta)};
    }
}

const RnsBasis& CkksContext::basis(uint32_t level) const {
    if (level == 0 || level > bases_.size()) throw std::invalid_argument("level out of range");
    return bases_[level - 1];
}

void CkksContext::forward_ntt_limb(std::vector<uint64_t>& limb, size_t limb_index) const {
    const NttKernel& k = kernels_[limb_index];
    k.forward_inplace_bitrev(limb.data());
    for (uint32_t i = 0; i < params_.n(); ++i) {
        const uint32_t r = bit_reverse32(i, params_.log_n);
        if (r > i) std::swap(limb[i], limb[r]);
    }
}

void CkksContext::inverse_ntt_limb(std::vector<uint64_t>& limb, size_t limb_index) const {
    for (uint32_t i = 0; i < params_.n(); ++i) {
        const uint32_t r = bit_reverse32(i, params_.log_n);
        if (r > i) std::swap(limb[i], limb[r]);
    }
    kernels_[limb_index].inverse_inplace_from_bitrev(limb.data());
}

void red_fft(std::vector<RedComplex>& values, int sign, const RedFloatFormat& fmt,
             const std::vector<RedComplex>& roots, RedOpCount* ops) {
    const size_t n = values.size();
    if (roots.size() != n) throw std::invalid_argument("red_fft: root table mismatch");
    uint32_t log_n = 0;
    while ((1ull << log_n) < n) ++log_n;
    if ((1ull << log_n) != n) throw std::invalid_argument("red_fft: size must be a power of two");

    for (uint32_t i = 0; i < n; ++i) {
        const uint32_t r = bit_reverse32(i, log_n);
        if (r > i) std::swap(values[i], values[r]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const size_t stride = n / len;
        for (size_t start = 0; start < n; start += len) {
            for (size_t j = 0; j < len / 2; ++j) {
                const size_t exp = j * stride;
                RedComplex w = roots[sign > 0 ? exp : (exp == 0 ? 0 : n - exp)];
                w.re = round_to_format(w.re, fmt);
                w.im = round_to_format(w.im, fmt);
                const RedComplex u = values[start + j];
                const RedComplex t = red_complex_mul(values[start + j + len / 2], w, fmt, ops);
                values[start + j] = red_complex_add(u, t, fmt, ops);
                values[start + j + len / 2] = red_complex_sub(u, t, fmt, ops);
            }
        }
    }
}

KeyMaterial keygen(const CkksContext& ctx, const Seed128& seed) {
    const uint32_t n = ctx.n();
    const uint32_t levels = ctx.params().levels;
    const auto sk_int = prng_expand(seed, "keygen/sk", n, SampleDist::Ternary);
    const auto e_int = prng_expand(seed, "keygen/e", n, SampleDist::Gaussian, 0, ctx.params().sigma);

    KeyMaterial km;
    km.seed = seed;
    km.sk = lift_to_ntt(ctx, sk_int, levels);
    RnsPolynomial e_hat = lift_to_ntt(ctx, e_int, levels);

    km.pk1 = zero_poly(ctx, levels, PolyDomain::Ntt);
    km.pk0 = zero_poly(ctx, levels, PolyDomain::Ntt);
    for (uint32_t j = 0; j < levels; ++j) {
        const uint64_t q = ctx.chain()[j].q;
        const NttKernel& k = ctx.kernel(j);
        // uniform ring elements may be sampled directly in the NTT domain
        const auto a = prng_expand(seed, "keygen/a/limb" + std::to_string(j), n,
                                   SampleDist::Uniform, q);
        for (uint32_t i = 0; i < n; ++i) {
            const uint64_t ai = (uint64_t)a[i];
            km.pk1.limbs[j][i] = ai;
            km.pk0.limbs[j][i] =
                sub_mod(e_hat.limbs[j][i], k.pointwise_mul(ai, km.sk.limbs[j][i]), q);
        }
    }
    return km;
}

Plaintext encode(const CkksContext& ctx, const std::vector<RedComplex>& slots,
                 const RedFloatFormat& fmt) {
    const uint32_t n = ctx.n();
    if (slots.size() != ctx.params().slot_count())
        throw std::invalid_argument("encode: expected N/2 slots");
    for (const auto& z : slots)
        if (std::hypot(z.re, z.im) > 1.0 + 1e-9)
            throw std::range_error("encode: slot magnitude exceeds the normalized bound");

    // inverse canonical embedding at reduced precision
    std::vector<RedComplex> buf(n, RedComplex{0.0, 0.0});
    for (uint32_t j = 0; j < slots.size(); ++j)
        buf[j] = {round_to_format(slots[j].re, fmt), round_to_format(slots[j].im, fmt)};
    red_fft(buf, -1, fmt, ctx.fft_roots());

    const double inv_n2 = 2.0 / (double)n;  // exact power of two
    const double delta = ctx.params().scale;
    std::vector<int64_t> coeffs(n);
    for (uint32_t i = 0; i < n; ++i) {
        RedComplex zn = ctx.zeta_neg()[i];
        zn.re = round_to_format(zn.re, fmt);
        zn.im = round_to_format(zn.im, fmt);
        const RedComplex t = red_complex_mul(buf[i], zn, fmt);
        const double scaled = (double)t.re * inv_n2 * delta;
        if (!(std::fabs(scaled) < 4.611686018427388e18))  // 2^62 headroom
            throw std::range_error("encode: coefficient exceeds the scale/modulus headroom");
        coeffs[i] = (int64_t)std::llround(scaled);
    }

    Plaintext pt;
    pt.scale = delta;
    pt.level = ctx.params().levels;
    pt.poly = zero_poly(ctx, pt.level, PolyDomain::Coefficient);
    auto limbs = rns_decompose_i64(coeffs, ctx.basis(pt.level));
    pt.poly.limbs = std::move(limbs);
    for (uint32_t j = 0; j < pt.level; ++j) ctx.forward_ntt_limb(pt.poly.limbs[j], j);
    pt.poly.domain = PolyDomain::Ntt;
    return pt;
}

std::vector<RedComplex> decode(const CkksContext& ctx, const Plaintext& pt,
                               const RedFloatFormat& fmt) {
    const uint32_t n = ctx.n();
    if (pt.poly.degree != n || pt.poly.domain != PolyDomain::Ntt)
        throw std::invalid_argument("decode: expected an NTT-domain plaintext");
    const uint32_t level = (uint32_t)pt.poly.limb_count();

    std::vector<std::vector<uint64_t>> limbs = pt.poly.limbs;
    for (uint32_t j = 0; j < level; ++j) ctx.inverse_ntt_limb(limbs[j], j);
    const auto centered = crt_reconstruct(limbs, ctx.basis(level));

    std::vector<RedComplex> buf(n);
    const double inv_delta = 1.0 / pt.scale;
    for (uint32_t i = 0; i < n; ++i) {
        const double m = round_to_format(centered[i].to_double() * inv_delta, fmt);
        RedComplex zp = ctx.zeta_pos()[i];
        zp.re = round_to_format(zp.re, fmt);
        zp.im = round_to_format(zp.im, fmt);
        buf[i] = {red_mul(m, zp.re, fmt), red_mul(m, zp.im, fmt)};
    }
    red_fft(buf, +1, fmt, ctx.fft_roots());
    buf.resize(ctx.params().slot_count());
    return buf;
}

Ciphertext encrypt(const CkksContext& ctx, const Plaintext& pt, const KeyMaterial& keys,
                   const Seed128& enc_seed) {
    const uint32_t n = ctx.n();
    const uint32_t level = pt.level;
    if (level != keys.pk0.limb_count())
        throw std::invalid_argument("encrypt: plaintext level does not match key material");

    const auto v_int = prng_expand(enc_seed, "enc/v", n, SampleDist::Ternary);
    const auto e0_int = prng_expand(enc_seed, "enc/e0", n, SampleDist::Gaussian, 0, ctx.params().sigma);
    const auto e1_int = prng_expand(enc_seed, "enc/e1", n, SampleDist::Gaussian, 0, ctx.params().sigma);
    RnsPolynomial v_hat = lift_to_ntt(ctx, v_int, level);
    RnsPolynomial e0_hat = lift_to_ntt(ctx, e0_int, level);
    RnsPolynomial e1_hat = lift_to_ntt(ctx, e1_int, level);

    Ciphertext ct;
    ct.scale = pt.scale;
    ct.level = level;
    ct.c0 = zero_poly(ctx, level, PolyDomain::Ntt);
    ct.c1 = zero_poly(ctx, level, PolyDomain::Ntt);
    for (uint32_t j = 0; j < level; ++j) {
        const uint64_t q = ctx.chain()[j].q;
        const NttKernel& k = ctx.kernel(j);
        for (uint32_t i = 0; i < n; ++i) {
            const uint64_t v = v_hat.limbs[j][i];
            uint64_t c0 = k.pointwise_mul(v, keys.pk0.limbs[j][i]);
            c0 = add_mod(c0, e0_hat.limbs[j][i], q);
            ct.c0.limbs[j][i] = add_mod(c0, pt.poly.limbs[j][i], q);
            uint64_t c1 = k.pointwise_mul(v, keys.pk1.limbs[j][i]);
            ct.c1.limbs[j][i] = add_mod(c1, e1_hat.limbs[j][i], q);
        }
    }
    return ct;
}

Ciphertext encrypt_noiseless(const CkksContext& ctx, const Plaintext& pt) {
    Ciphertext ct;
    ct.scale = pt.scale;
    ct.level = pt.level;
    ct.c0 = pt.poly;
    ct.c1 = zero_poly(ctx, pt.level, PolyDomain::Ntt);
    return ct;
}

Plaintext decrypt(const CkksContext& ctx, const Ciphertext& ct, const KeyMaterial& keys) {
    check_same_shape(ct.c0, ct.c1);
    const uint32_t level = (uint32_t)ct.c0.limb_count();
    if (level > keys.sk.limb_count())
        throw std::invalid_argument("decrypt: ciphertext level exceeds key material");

    Plaintext pt;
    pt.scale = ct.scale;
    pt.level = level;
    pt.poly = zero_poly(ctx, level, PolyDomain::Ntt);
    for (uint32_t j = 0; j < level; ++j) {
        const uint64_t q = ctx.chain()[j].q;
        const NttKernel& k = ctx.kernel(j);
        for (uint32_t i = 0; i < ctx.n(); ++i) {
            const uint64_t prod = k.pointwise_mul(ct.c1.limbs[j][i], keys.sk.limbs[j][i]);
            pt.poly.limbs[j][i] = add_mod(ct.c0.limbs[j][i], prod, q);
        }
    }
    return pt;
}

Ciphertext add_ciphertexts(const CkksContext& ctx, const Ciphertext& a, const Ciphertext& b) {
    check_same_shape(a.c0, b.c0);
    check_same_shape(a.c1, b.c1);
    if (a.scale != b.scale) throw std::invalid_argument("ciphertext scales differ");
    Ciphertext out = a;
    for (size_t j = 0; j < a.c0.limb_count(); ++j) {
        const uint64_t q = ctx.chain()[j].q;
        for (uint32_t i = 0; i < ctx.n(); ++i) {
            out.c0.limbs[j][i] = add_mod(a.c0.limbs[j][i], b.c0.limbs[j][i], q);
            out.c1.limbs[j][i] = add_mod(a.c1.limbs[j][i], b.c1.limbs[j][i], q);
        }
    }
    return out;
}

std::vector<double> encode_real(const CkksContext& ctx, const std::vector<RedComplex>& slots,
                                const RedFloatFormat& fmt) {
    const uint32_t n = ctx.n();
    if (slots.size() != ctx.params().slot_count())
        throw std::invalid_argument("encode_real: expected N/2 slots");
    std::vector<RedComplex> buf(n, RedComplex{0.0, 0.0});
    for (uint32_t j = 0; j < slots.size(); ++j)
        buf[j] = {round_to_format(slots[j].re, fmt), round_to_format(slots[j].im, fmt)};
    red_fft(buf, -1, fmt, ctx.fft_roots());
    const double inv_n2 = 2.0 / (double)n;
    std::vector<double> coeffs(n);
    for (uint32_t i = 0; i < n; ++i) {
        RedComplex zn = ctx.zeta_neg()[i];
        zn.re = round_to_format(zn.re, fmt);
        zn.im = round_to_format(zn.im, fmt);
        const RedComplex t = red_complex_mul(buf[i], zn, fmt);
        coeffs[i] = red_mul(t.re, inv_n2, fmt);
    }
    return coeffs;
}

std::vector<RedComplex> decode_real(const CkksContext& ctx, const std::vector<double>& coeffs,
                                    const RedFloatFormat& fmt) {
    const uint32_t n = ctx.n();
    if (coeffs.size() != n) throw std::invalid_argument("decode_real: expected N coefficients");
    std::vector<RedComplex> buf(n);
    for (uint32_t i = 0; i < n; ++i) {
        const double m = round_to_format(coeffs[i], fmt);
        RedComplex zp = ctx.zeta_pos()[i];
        zp.re = round_to_format(zp.re, fmt);
        zp.im = round_to_format(zp.im, fmt);
        buf[i] = {red_mul(m, zp.re, fmt), red_mul(m, zp.im, fmt)};
    }
    red_fft(buf, +1, fmt, ctx.fft_roots());
    buf.resize(ctx.params().slot_count());
    return buf;
}

double max_slot_error(const std::vector<RedComplex>& a, const std::vector<RedComplex>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("slot vectors differ in length");
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::hypot(a[i].re - b[i].re, a[i].im - b[i].im));
    return worst;
}

std::vector<SweepRow> roundtrip_precision_sweep(const CkksContext& ctx, uint32_t m_lo,
                                                uint32_t m_hi, uint32_t m_step, uint32_t trials,
                                                const Seed128& seed) {
    if (m_lo < 20 || m_hi > 52 || m_lo > m_hi || m_step == 0)
        throw std::invalid_argument("sweep range must lie in [20, 52]");
    const KeyMaterial keys = keygen(ctx, seed);
    std::vector<SweepRow> rows;
    for (uint32_t m = m_lo; m <= m_hi; m += m_step) {
        const RedFloatFormat fmt(m);
        double worst = 0.0;
        for (uint32_t t = 0; t < trials; ++t) {
            SeedStream msg_rng(seed, "sweep/msg/" + std::to_string(t));
            std::vector<RedComplex> slots(ctx.params().slot_count());
            for (auto& z : slots) {
                z.re = msg_rng.unit_double() * 1.41421356237309515 - 0.70710678118654757;
                z.im = msg_rng.unit_double() * 1.41421356237309515 - 0.70710678118654757;
            }
            Seed128 enc_seed = seed;
            enc_seed.bytes[0] ^= (uint8_t)t;
            enc_seed.bytes[1] ^= (uint8_t)(t >> 8);
            enc_seed.bytes[2] ^= (uint8_t)m;
            const auto pt = encode(ctx, slots, fmt);
            const auto ct = encrypt(ctx, pt, keys, enc_seed);
            const auto back = decode(ctx, decrypt(ctx, ct, keys), fmt);
            worst = std::max(worst, max_slot_error(slots, back));
        }
        rows.push_back({m, -std::log2(worst)});
    }
    return rows;
}

MemoryReport memory_accountant(const CkksParams& params, uint32_t coeff_bits, OnchipFlags onchip,
                               uint32_t lanes) {
    MemoryReport rep;
    if (params.levels == 0) return rep;
    const uint64_t poly_bytes =
        (uint64_t)params.levels * params.n() * coeff_bits / 8;  // one polynomial-equivalent
    rep.public_key_bytes = 2 * poly_bytes;
    rep.masks_errors_bytes = poly_bytes;
    rep.twiddles_bytes = poly_bytes;
    if (onchip.twiddles) {
        rep.twiddles_bytes = 0;
        // per limb, per stage: one phase register per lane plus the step word
        rep.seed_bytes += (uint64_t)params.levels * params.log_n * (lanes + 1) * 8;
    }
    if (onchip.randoms) {
        rep.masks_errors_bytes = 0;
        rep.public_key_bytes = 0;  // keys regenerate from the stored seed
        rep.seed_bytes += 16;
    }
    return rep;
}

}  // namespace cks
