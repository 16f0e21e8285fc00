// Configurable-mantissa floating-point emulation for the reduced-precision
// FFT datapath. Values are computed in native 64-bit arithmetic and the
// mantissa is rounded to the format width after every operation; m = 52
// reproduces native doubles bit for bit.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

namespace cks {

struct RedFloatFormat {
    uint32_t mantissa_bits = 52;  // in [10, 52]; exponent fixed at 11 bits

    explicit RedFloatFormat(uint32_t m = 52) : mantissa_bits(m) {
        if (m < 10 || m > 52) throw std::invalid_argument("mantissa_bits must be in [10, 52]");
    }
};

// operation tally for the hardware unit model; overflow counts results that
// saturated to infinity from finite operands (the range flag)
struct RedOpCount {
    uint64_t mul = 0;
    uint64_t add = 0;
    uint64_t overflow = 0;
};

namespace detail {
inline uint64_t bits_of(double x) {
    uint64_t u;
    std::memcpy(&u, &x, sizeof(u));
    return u;
}
inline double double_of(uint64_t u) {
    double x;
    std::memcpy(&x, &u, sizeof(x));
    return x;
}
}  // namespace detail

// Round-to-nearest-even truncation of the mantissa to the format width.
// Subnormals flush to zero; overflow saturates to infinity (range flag in
// the caller's hands via isinf).
inline double round_to_format(double x, const RedFloatFormat& fmt) {
    if (fmt.mantissa_bits == 52) return x;
    uint64_t u = detail::bits_of(x);
    const uint64_t exp_field = (u >> 52) & 0x7ff;
    if (exp_field == 0x7ff) return x;  // inf/nan pass through
    if (exp_field == 0) return detail::double_of(u & 0x8000000000000000ull);  // flush subnormals
    const uint32_t shift = 52 - fmt.mantissa_bits;
    const uint64_t frac = u & ((1ull << shift) - 1);
    const uint64_t half = 1ull << (shift - 1);
    u &= ~((1ull << shift) - 1);
    if (frac > half || (frac == half && ((u >> shift) & 1)))
        u += 1ull << shift;  // carry may roll into the exponent; the layout handles it
    return detail::double_of(u);
}

namespace detail {
inline double tally_range(double result, RedOpCount* ops) {
    if (ops && std::isinf(result)) ++ops->overflow;
    return result;
}
}  // namespace detail

inline double red_add(double a, double b, const RedFloatFormat& fmt, RedOpCount* ops = nullptr) {
    if (ops) ++ops->add;
    return detail::tally_range(round_to_format(a + b, fmt), ops);
}

inline double red_sub(double a, double b, const RedFloatFormat& fmt, RedOpCount* ops = nullptr) {
    if (ops) ++ops->add;
    return detail::tally_range(round_to_format(a - b, fmt), ops);
}

inline double red_mul(double a, double b, const RedFloatFormat& fmt, RedOpCount* ops = nullptr) {
    if (ops) ++ops->mul;
    return detail::tally_range(round_to_format(a * b, fmt), ops);
}

struct RedComplex {
    double re = 0.0;
    double im = 0.0;
};

inline RedComplex red_complex_add(const RedComplex& a, const RedComplex& b,
                                  const RedFloatFormat& fmt, RedOpCount* ops = nullptr) {
    return {red_add(a.re, b.re, fmt, ops), red_add(a.im, b.im, fmt, ops)};
}

inline RedComplex red_complex_sub(const RedComplex& a, const RedComplex& b,
                                  const RedFloatFormat& fmt, RedOpCount* ops = nullptr) {
    return {red_sub(a.re, b.re, fmt, ops), red_sub(a.im, b.im, fmt, ops)};
}

// (ac - bd) + i(ad + bc): four real multiplies and two adds, the 4:1
// reconfigurable-unit shape
inline RedComplex red_complex_mul(const RedComplex& a, const RedComplex& b,
                                  const RedFloatFormat& fmt, RedOpCount* ops = nullptr) {
    const double ac = red_mul(a.re, b.re, fmt, ops);
    const double bd = red_mul(a.im, b.im, fmt, ops);
    const double ad = red_mul(a.re, b.im, fmt, ops);
    const double bc = red_mul(a.im, b.re, fmt, ops);
    return {red_sub(ac, bd, fmt, ops), red_add(ad, bc, fmt, ops)};
}

}  // namespace cks
