#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigint.hpp"

namespace lrn {

/// Dense integer polynomial, coefficients in ascending order of degree.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

    static IntPoly monomial(const Int& coeff, std::size_t degree) {
        std::vector<Int> c(degree + 1, Int(0));
        c[degree] = coeff;
        return IntPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& leading() const { return c_.back(); }

    Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }

    Int operator()(const Int& x) const {
        Int acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc *= x;
            acc += *it;
        }
        return acc;
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return IntPoly{};
        std::vector<Int> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
        return IntPoly(std::move(d));
    }

    friend IntPoly operator+(const IntPoly& x, const IntPoly& y) {
        std::vector<Int> c(std::max(x.c_.size(), y.c_.size()), Int(0));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coeff(i) + y.coeff(i);
        return IntPoly(std::move(c));
    }

    friend IntPoly operator*(const Int& s, const IntPoly& x) {
        std::vector<Int> c = x.c_;
        for (auto& v : c) v *= s;
        return IntPoly(std::move(c));
    }

    /// Divides out the gcd of the coefficients, sign-normalized so the leading
    /// coefficient is positive.
    IntPoly primitive_part() const {
        if (is_zero()) return *this;
        Int g = 0;
        for (const auto& v : c_) g = gcd(g, v);
        if (leading() < 0) g = -g;
        std::vector<Int> c = c_;
        for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        return IntPoly(std::move(c));
    }

    std::string to_string(const std::string& var = "a") const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const Int& v = c_[static_cast<std::size_t>(i)];
            if (v == 0) continue;
            if (!s.empty()) s += v < 0 ? " - " : " + ";
            else if (v < 0) s += "-";
            const Int mag = abs(v);
            if (mag != 1 || i == 0) s += to_dec(mag);
            if (i >= 1) s += var;
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Int> c_;
};

/// Cauchy bound: every complex root z satisfies |z| < 1 + max |c_i / c_d|.
inline Int cauchy_bound(const IntPoly& f) {
    Int m = 0;
    const Int lead = abs(f.leading());
    for (int i = 0; i < f.degree(); ++i) {
        Int q;
        const Int ci = abs(f.coeffs()[static_cast<std::size_t>(i)]);
        mpz_cdiv_q(q.get_mpz_t(), ci.get_mpz_t(), lead.get_mpz_t());
        if (q > m) m = q;
    }
    return m + 1;
}

namespace detail {

// Sorted integers m such that every real root r of f has floor(r) among them
// (a superset is allowed). Built from the same data for f' by bisection on
// the segments where f is monotone.
inline std::vector<Int> root_floor_candidates(const IntPoly& f) {
    const int d = f.degree();
    if (d <= 0) return {};
    if (d == 1) {
        Int q;
        const Int num = -f.coeff(0);
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), f.coeff(1).get_mpz_t());
        return {q};
    }
    const Int M = cauchy_bound(f);
    const std::vector<Int> crit = root_floor_candidates(f.derivative());

    std::vector<Int> points{-M, M};
    for (const auto& c : crit) {
        if (c >= -M && c <= M) points.push_back(c);
        if (c + 1 >= -M && c + 1 <= M) points.push_back(c + 1);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    std::vector<Int> out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Int& L = points[i];
        const Int& R = points[i + 1];
        if (std::binary_search(crit.begin(), crit.end(), L)) {
            // f' may vanish inside [L, L + 1]; any root here has floor L.
            out.push_back(L);
            continue;
        }
        // f' has no root in (L, R): f is strictly monotone on [L, R].
        const Int fL = f(L);
        const Int fR = f(R);
        if (fL == 0) out.push_back(L);
        if (fR == 0) out.push_back(R);
        if (sgn(fL) * sgn(fR) < 0) {
            Int lo = L;
            Int hi = R;
            const int sl = sgn(fL);
            while (hi - lo > 1) {
                Int mid = lo + hi;
                mpz_fdiv_q_2exp(mid.get_mpz_t(), mid.get_mpz_t(), 1);
                if (sgn(f(mid)) == sl) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push_back(lo);
            if (sgn(f(hi)) == 0) out.push_back(hi);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// All integer roots of a non-zero polynomial, ascending. Every returned
/// value is confirmed by exact evaluation.
inline std::vector<Int> integer_roots(const IntPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("integer_roots: zero polynomial");
    std::vector<Int> roots;
    for (const auto& m : detail::root_floor_candidates(f)) {
        if (f(m) == 0) roots.push_back(m);
    }
    return roots;
}

}  // namespace lrn
