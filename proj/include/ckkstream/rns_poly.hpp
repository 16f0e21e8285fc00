#pragma once

#include <cstdint>
#include <vector>

namespace cks {

enum class PolyDomain : uint8_t { Coefficient = 0, Ntt = 1 };
enum class PolyOrdering : uint8_t { Natural = 0, BitReversed = 1 };

// Degree-N coefficient vectors over a list of prime limbs. The domain and
// ordering flags are always flipped atomically by the transform routines;
// no operation leaves them inconsistent with the data.
struct RnsPolynomial {
    uint32_t degree = 0;
    std::vector<uint64_t> prime_ids;            // q for each limb, in basis order
    std::vector<std::vector<uint64_t>> limbs;   // limbs[j][i] < prime_ids[j]
    PolyDomain domain = PolyDomain::Coefficient;
    PolyOrdering ordering = PolyOrdering::Natural;

    size_t limb_count() const { return limbs.size(); }
};

}  // namespace cks
