#pragma once

#include <algorithm>
#include <compare>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "bigint.hpp"

namespace lrn {

/// A tuple (x, y, k, n) with x^2 + p^(2k+1) = 4 y^n.
struct Solution {
    unsigned long p = 0;
    Int x;
    Int y;
    unsigned long k = 0;
    unsigned long n = 0;

    friend bool operator==(const Solution& a, const Solution& b) {
        return a.p == b.p && a.k == b.k && a.n == b.n && a.x == b.x && a.y == b.y;
    }

    // Deterministic order used everywhere a solution list is emitted.
    friend bool operator<(const Solution& a, const Solution& b) {
        if (a.p != b.p) return a.p < b.p;
        if (a.k != b.k) return a.k < b.k;
        if (a.n != b.n) return a.n < b.n;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }

    std::string to_string() const {
        return "(x=" + to_dec(x) + ", y=" + to_dec(y) + ", p=" + std::to_string(p) + ", k=" + std::to_string(k) +
               ", n=" + std::to_string(n) + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const Solution& s) { return os << s.to_string(); }
};

/// Sorts and removes duplicates.
inline void normalize(std::vector<Solution>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// x^2 + p^(2k+1) = 4 y^n, checked exactly; x > 0, y >= 1, n >= 1.
inline bool verify_solution(const Solution& s) {
    if (s.x <= 0 || s.y < 1 || s.n < 1 || s.p < 2) return false;
    return s.x * s.x + pow(s.p, 2 * s.k + 1) == 4 * pow(s.y, s.n);
}

}  // namespace lrn
