#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <lrn/lrn.hpp>

namespace testing_support {

using lrn::Int;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed'2024ULL);
    return gen;
}

/// Uniform integer with up to `bits` bits and a random sign.
inline Int random_int(unsigned bits) {
    Int v = 0;
    for (unsigned i = 0; i < bits; i += 32) {
        v <<= 32;
        v += static_cast<unsigned long>(rng()() & 0xffffffffULL);
    }
    if (bits % 32) v >>= (32 - bits % 32);
    if (rng()() & 1) v = -v;
    return v;
}

inline long random_small(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline lrn::RamifiedPrime random_certified() {
    const auto& ps = lrn::RamifiedPrime::kCertified;
    return lrn::RamifiedPrime::certified(ps[static_cast<std::size_t>(random_small(0, ps.size() - 1))]);
}

inline lrn::QuadInt random_quadint(const lrn::RamifiedPrime& p, unsigned bits) {
    Int a = random_int(bits);
    Int b = random_int(bits);
    if (lrn::is_odd(a) != lrn::is_odd(b)) b += 1;
    return lrn::QuadInt::make(p, a, b);
}

/// A random element generating a valid Lucas pair with small coordinates.
inline lrn::QuadInt random_lucas_alpha(const lrn::RamifiedPrime& p) {
    while (true) {
        const long a = random_small(-40, 40);
        long b = random_small(-40, 40);
        if ((a - b) % 2 != 0) b += 1;
        if (b == 0) continue;
        const auto alpha = lrn::QuadInt::make(p, a, b);
        if (lrn::lucas_pair_valid(alpha)) return alpha;
    }
}

inline std::vector<lrn::Solution> restrict(const std::vector<lrn::Solution>& in,
                                           const std::function<bool(const lrn::Solution&)>& keep) {
    std::vector<lrn::Solution> out;
    for (const auto& s : in) {
        if (keep(s)) out.push_back(s);
    }
    return out;
}

}  // namespace testing_support
