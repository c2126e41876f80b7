#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <vector>

namespace altmod {

/// Arbitrary-precision integer used throughout the library. Normal-form
/// reductions can blow up intermediate entries even for small inputs, so
/// nothing here uses fixed-width arithmetic.
using Int = boost::multiprecision::cpp_int;

using boost::multiprecision::abs;
using boost::multiprecision::gcd;
using boost::multiprecision::lcm;

/// Floor division (round toward negative infinity), exact for b != 0.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;                     // truncates toward zero
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Non-negative remainder in [0, |b|).
inline Int pos_mod(const Int& a, const Int& b) {
    Int r = a % b;
    if (r < 0) r += abs(b);
    return r;
}

/// Extended gcd: returns g = gcd(a, b) >= 0 and sets x, y with a*x + b*y = g.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        if (a < 0) { x = -1; y = 0; return -a; }
        x = 1; y = 0; return a;
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

/// Inverse of a modulo m (gcd(a, m) must be 1).
inline Int inv_mod(const Int& a, const Int& m) {
    Int x, y;
    Int g = ext_gcd(pos_mod(a, m), m, x, y);
    if (g != 1) throw std::domain_error("inv_mod: element not invertible");
    return pos_mod(x, m);
}

/// Exact integer square root of a perfect square; throws otherwise.
inline Int exact_sqrt(const Int& n) {
    if (n < 0) throw std::logic_error("exact_sqrt: negative argument");
    Int r = boost::multiprecision::sqrt(n);
    if (r * r != n) throw std::logic_error("exact_sqrt: not a perfect square");
    return r;
}

/// p-adic valuation of n (n != 0).
inline int p_valuation(Int n, const Int& p) {
    if (n == 0) throw std::logic_error("p_valuation: zero argument");
    n = abs(n);
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

/// Distinct prime divisors of n > 1, ascending. Trial division; group orders
/// in this library are desk-scale.
inline std::vector<Int> prime_divisors(Int n) {
    std::vector<Int> ps;
    n = abs(n);
    for (Int d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace altmod
