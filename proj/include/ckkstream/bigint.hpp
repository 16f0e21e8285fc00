// Minimal unsigned big integer. Used only on cold paths: prime enumeration
// witnesses, CRT reconstruction, and test oracles. The hot modular-multiply
// path never touches this type.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace cks {

class BigUint {
public:
    BigUint() = default;
    explicit BigUint(uint64_t v) {
        if (v) limbs_.push_back(v);
    }

    static BigUint from_words(const uint64_t* words, size_t n) {
        BigUint r;
        r.limbs_.assign(words, words + n);
        r.trim();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    size_t limb_count() const { return limbs_.size(); }
    uint64_t limb(size_t i) const { return i < limbs_.size() ? limbs_[i] : 0; }

    static int compare(const BigUint& a, const BigUint& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (size_t i = a.limbs_.size(); i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    BigUint& add(const BigUint& o) {
        if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
        unsigned __int128 carry = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            carry += limbs_[i];
            if (i < o.limbs_.size()) carry += o.limbs_[i];
            limbs_[i] = (uint64_t)carry;
            carry >>= 64;
        }
        if (carry) limbs_.push_back((uint64_t)carry);
        return *this;
    }

    // requires *this >= o
    BigUint& sub(const BigUint& o) {
        uint64_t borrow = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            unsigned __int128 rhs = (unsigned __int128)(i < o.limbs_.size() ? o.limbs_[i] : 0) + borrow;
            if ((unsigned __int128)limbs_[i] >= rhs) {
                limbs_[i] = (uint64_t)((unsigned __int128)limbs_[i] - rhs);
                borrow = 0;
            } else {
                limbs_[i] = (uint64_t)(((unsigned __int128)1 << 64) + limbs_[i] - rhs);
                borrow = 1;
            }
        }
        trim();
        return *this;
    }

    BigUint& mul_u64(uint64_t m) {
        if (m == 0) {
            limbs_.clear();
            return *this;
        }
        unsigned __int128 carry = 0;
        for (auto& l : limbs_) {
            carry += (unsigned __int128)l * m;
            l = (uint64_t)carry;
            carry >>= 64;
        }
        if (carry) limbs_.push_back((uint64_t)carry);
        return *this;
    }

    BigUint& add_u64(uint64_t v) {
        BigUint t(v);
        return add(t);
    }

    uint64_t mod_u64(uint64_t m) const {
        unsigned __int128 r = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            r = ((r << 64) | limbs_[i]) % m;
        }
        return (uint64_t)r;
    }

    BigUint shifted_right1() const {
        BigUint r = *this;
        for (size_t i = 0; i < r.limbs_.size(); ++i) {
            r.limbs_[i] >>= 1;
            if (i + 1 < r.limbs_.size()) r.limbs_[i] |= r.limbs_[i + 1] << 63;
        }
        r.trim();
        return r;
    }

    double to_double() const {
        double v = 0.0;
        for (size_t i = limbs_.size(); i-- > 0;)
            v = v * 18446744073709551616.0 + (double)limbs_[i];
        return v;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }
    std::vector<uint64_t> limbs_;  // little-endian base 2^64
};

// Signed value as (negative flag, magnitude); enough for centered CRT output.
struct BigInt {
    bool neg = false;
    BigUint mag;

    double to_double() const {
        double m = mag.to_double();
        return neg ? -m : m;
    }
    uint64_t mod_u64(uint64_t q) const {
        uint64_t r = mag.mod_u64(q);
        if (neg && r != 0) r = q - r;
        return r;
    }
};

}  // namespace cks
