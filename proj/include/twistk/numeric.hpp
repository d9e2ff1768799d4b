#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistk {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline long lcm_long(long a, long b) {
    if (a == 0 || b == 0) return 0;
    return a / std::gcd(a, b) * b;
}

inline std::vector<long> divisors(long n) {
    std::vector<long> small, large;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// Smallest prime p ≡ 1 (mod m) with p > lower. Dirichlet guarantees one exists.
inline long prime_in_progression(long m, long lower) {
    long p = (lower / m) * m + 1;
    while (p <= lower || !is_prime(p)) p += m;
    return p;
}

inline Int isqrt_exact(const Int& n) {
    Int r = boost::multiprecision::sqrt(n);
    if (r * r != n) throw std::runtime_error("isqrt_exact: not a perfect square");
    return r;
}

// Canonical residue in [0, m).
inline long mod_pos(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace twistk
