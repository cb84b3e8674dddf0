#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <thread>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "quadint.hpp"
#include "solution.hpp"

namespace lrn {

struct SearchBounds {
    unsigned long y_max = 0;
    unsigned long n_max = 2;
    std::optional<unsigned long> k_max;  // otherwise implied by p^(2k+1) < 4 y^n
};

struct SqrtResult {
    Int root;
    bool exact = false;
};

/// floor(sqrt(v)) by Newton iteration from above.
inline SqrtResult integer_sqrt(const Int& v) {
    if (v < 0) throw NegativeInputError("integer_sqrt of a negative value");
    if (v < 2) return {v, true};
    // 2^ceil(bits/2) >= sqrt(v)
    const auto bits = mpz_sizeinbase(v.get_mpz_t(), 2);
    Int x = 1;
    mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), (bits + 1) / 2);
    while (true) {
        Int y = (x + v / x);
        mpz_fdiv_q_2exp(y.get_mpz_t(), y.get_mpz_t(), 1);
        if (y >= x) break;
        x = std::move(y);
    }
    while (x * x > v) --x;
    while ((x + 1) * (x + 1) <= v) ++x;
    return {x, x * x == v};
}

namespace detail {

// Residue filters: a square mod m must land in the residue set.
struct SquareFilter {
    unsigned long modulus;
    std::vector<bool> is_residue;
};

inline const std::array<SquareFilter, 4>& square_filters() {
    static const std::array<SquareFilter, 4> filters = [] {
        std::array<SquareFilter, 4> f{SquareFilter{64, {}}, SquareFilter{63, {}}, SquareFilter{65, {}},
                                      SquareFilter{11, {}}};
        for (auto& s : f) {
            s.is_residue.assign(s.modulus, false);
            for (unsigned long x = 0; x < s.modulus; ++x) s.is_residue[x * x % s.modulus] = true;
        }
        return f;
    }();
    return filters;
}

inline bool may_be_square(const Int& v) {
    for (const auto& f : square_filters()) {
        if (!f.is_residue[mpz_fdiv_ui(v.get_mpz_t(), f.modulus)]) return false;
    }
    return true;
}

inline void search_range(unsigned long p, const SearchBounds& bounds, unsigned long y_lo, unsigned long y_hi,
                         std::vector<Solution>& out) {
    std::vector<Int> ppow;  // p^(2k+1) for k = 0, 1, ...
    for (unsigned long y = y_lo; y <= y_hi; ++y) {
        Int four_yn = 4 * Int(y);
        for (unsigned long n = 2; n <= bounds.n_max; ++n) {
            four_yn *= y;
            for (unsigned long k = 0; !bounds.k_max || k <= *bounds.k_max; ++k) {
                if (ppow.size() <= k) ppow.push_back(ppow.empty() ? Int(p) : ppow.back() * p * p);
                if (ppow[k] >= four_yn) break;
                const Int d = four_yn - ppow[k];
                if (!may_be_square(d)) continue;
                const auto r = integer_sqrt(d);
                if (r.exact) out.push_back({p, r.root, Int(y), k, n});
            }
        }
    }
}

}  // namespace detail

/// Every (x, y, k, n) with 1 <= y <= y_max, 2 <= n <= n_max and
/// 4y^n - p^(2k+1) a positive square. Only odd powers of p are searched.
/// The y range is split across `workers` threads; the merged result is
/// sorted, so it does not depend on the worker count.
inline std::vector<Solution> brute_search(const RamifiedPrime& p, const SearchBounds& bounds, unsigned workers = 1) {
    if (bounds.y_max == 0 || bounds.n_max < 2) throw ScopeError("search bounds need y_max >= 1 and n_max >= 2");
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(bounds.y_max)));
    std::vector<std::vector<Solution>> parts(workers);
    // Interleaved chunks balance the cost, which grows with y.
    const unsigned long chunk = 16;
    auto job = [&](unsigned w) {
        for (unsigned long lo = 1 + w * chunk; lo <= bounds.y_max; lo += workers * chunk) {
            detail::search_range(p.value(), bounds, lo, std::min(bounds.y_max, lo + chunk - 1), parts[w]);
        }
    };
    if (workers == 1) {
        job(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w);
        for (auto& t : pool) t.join();
    }
    std::vector<Solution> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    normalize(out);
    return out;
}

/// Solutions of x^2 + p^m = 4y^n with m even, for the one-off check that
/// even powers of p contribute nothing.
inline std::vector<Solution> brute_search_even_power(const RamifiedPrime& p, const SearchBounds& bounds) {
    std::vector<Solution> out;
    for (unsigned long y = 1; y <= bounds.y_max; ++y) {
        for (unsigned long n = 2; n <= bounds.n_max; ++n) {
            const Int four_yn = 4 * pow(Int(y), n);
            for (unsigned long h = 0; !bounds.k_max || h <= *bounds.k_max; ++h) {
                const Int pm = pow(p.value(), 2 * h);
                if (pm >= four_yn) break;
                const auto r = integer_sqrt(four_yn - pm);
                // k records the half exponent m/2 here
                if (r.exact) out.push_back({p.value(), r.root, Int(y), h, n});
            }
        }
    }
    normalize(out);
    return out;
}

/// Keeps solutions with gcd(p, x) = 1 and n odd.
inline std::vector<Solution> filter_primitive(const std::vector<Solution>& sols) {
    std::vector<Solution> out;
    for (const auto& s : sols) {
        if (s.n % 2 == 1 && !mpz_divisible_ui_p(s.x.get_mpz_t(), s.p)) out.push_back(s);
    }
    return out;
}

}  // namespace lrn
