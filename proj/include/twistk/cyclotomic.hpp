#pragma once

#include "twistk/error.hpp"
#include "twistk/linalg.hpp"
#include "twistk/numeric.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

namespace twistk {

namespace detail {

// Integer coefficients of the N-th cyclotomic polynomial, ascending degree.
inline const std::vector<Int>& cyclotomic_poly(long n) {
    static std::mutex mu;
    static std::map<long, std::vector<Int>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto compute = [](auto&& self, long m) -> const std::vector<Int>& {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        // x^m - 1 divided by the cyclotomic polynomials of all proper divisors
        std::vector<Int> num(m + 1, 0);
        num[0] = -1;
        num[m] = 1;
        for (long d : divisors(m)) {
            if (d == m) continue;
            const std::vector<Int>& phi_d = self(self, d);
            // exact division: num /= phi_d (phi_d is monic)
            std::vector<Int> quot(num.size() - phi_d.size() + 1, 0);
            for (std::size_t i = quot.size(); i-- > 0;) {
                Int c = num[i + phi_d.size() - 1];
                quot[i] = c;
                if (c == 0) continue;
                for (std::size_t k = 0; k < phi_d.size(); ++k)
                    num[i + k] -= c * phi_d[k];
            }
            num = std::move(quot);
        }
        return cache.emplace(m, std::move(num)).first->second;
    };
    return compute(compute, n);
}

// Remainder of a rational polynomial modulo the (monic) N-th cyclotomic
// polynomial; result has exactly euler_phi(N) coefficients.
inline std::vector<Rational> reduce_mod_cyclotomic(std::vector<Rational> poly, long n) {
    std::vector<Int> phi = cyclotomic_poly(n);
    std::size_t deg = phi.size() - 1; // = euler_phi(n)
    if (poly.size() < deg) poly.resize(deg, Rational(0));
    for (std::size_t i = poly.size(); i-- > deg;) {
        Rational c = poly[i];
        if (c == 0) continue;
        poly[i] = 0;
        for (std::size_t k = 0; k < deg; ++k)
            if (phi[k] != 0) poly[i - deg + k] -= c * Rational(phi[k]);
    }
    poly.resize(deg);
    return poly;
}

} // namespace detail

// Element of the cyclotomic field Q(zeta_conductor) in the power basis
// 1, z, ..., z^(phi(conductor)-1). Always kept at the minimal conductor, so
// equality is plain structural equality.
class CycNum {
public:
    CycNum() : conductor_(1), coeffs_{Rational(0)} {}
    explicit CycNum(const Rational& r) : conductor_(1), coeffs_{r} {}
    explicit CycNum(long v) : conductor_(1), coeffs_{Rational(v)} {}
    explicit CycNum(const Int& v) : conductor_(1), coeffs_{Rational(v)} {}

    static CycNum root_of_unity(long n, long k) {
        if (n <= 0) fail("Mismatch", "root_of_unity: order must be positive");
        k = mod_pos(k, n);
        long g = std::gcd(k == 0 ? n : k, n);
        n /= g;
        k /= g;
        if (n == 1) return CycNum(Rational(1));
        std::vector<Rational> poly(k + 1, Rational(0));
        poly[k] = 1;
        CycNum out;
        out.conductor_ = n;
        out.coeffs_ = detail::reduce_mod_cyclotomic(std::move(poly), n);
        out.canonicalize();
        return out;
    }

    long conductor() const { return conductor_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const { return conductor_ == 1; }

    Rational as_rational() const {
        if (conductor_ != 1) fail("NotIntegral", "value is not rational");
        return coeffs_[0];
    }

    // Coefficient vector in the power basis of Q(zeta_m); conductor() must
    // divide m. Used for Q-linear algebra across mixed conductors.
    std::vector<Rational> coords_at(long m) const {
        if (m % conductor_ != 0) fail("Mismatch", "coords_at: conductor does not divide target");
        if (m == conductor_) return coeffs_;
        long step = m / conductor_;
        std::vector<Rational> poly(static_cast<std::size_t>(conductor_) * step, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) poly[i * step] = coeffs_[i];
        return detail::reduce_mod_cyclotomic(std::move(poly), m);
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        long m = lcm_long(a.conductor_, b.conductor_);
        std::vector<Rational> x = a.coords_at(m), y = b.coords_at(m);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
        return from_coords(m, std::move(x));
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) { return a + (-b); }

    CycNum operator-() const {
        CycNum out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }

    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        if (a.conductor_ == 1) return b.scaled(a.coeffs_[0]);
        if (b.conductor_ == 1) return a.scaled(b.coeffs_[0]);
        long m = lcm_long(a.conductor_, b.conductor_);
        std::vector<Rational> x = a.coords_at(m), y = b.coords_at(m);
        std::vector<Rational> prod(2 * x.size(), Rational(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < y.size(); ++j)
                if (y[j] != 0) prod[i + j] += x[i] * y[j];
        }
        return from_coords(m, detail::reduce_mod_cyclotomic(std::move(prod), m));
    }

    CycNum& operator+=(const CycNum& b) { return *this = *this + b; }
    CycNum& operator-=(const CycNum& b) { return *this = *this - b; }
    CycNum& operator*=(const CycNum& b) { return *this = *this * b; }

    CycNum scaled(const Rational& s) const {
        if (s == 0) return CycNum();
        CycNum out = *this;
        for (auto& c : out.coeffs_) c *= s;
        return out;
    }

    // Galois automorphism zeta -> zeta^j for gcd(j, conductor) = 1.
    CycNum galois(long j) const {
        j = mod_pos(j, conductor_);
        if (conductor_ == 1 || j == 1) return *this;
        if (std::gcd(j, conductor_) != 1) fail("Mismatch", "galois: exponent not coprime");
        std::vector<Rational> poly(conductor_, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            poly[(i * j) % conductor_] += coeffs_[i];
        CycNum out;
        out.conductor_ = conductor_;
        out.coeffs_ = detail::reduce_mod_cyclotomic(std::move(poly), conductor_);
        return out; // Galois maps preserve the minimal conductor
    }

    friend CycNum conjugate(const CycNum& a) { return a.galois(a.conductor_ - 1); }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        return a.conductor_ == b.conductor_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    // Structural total order (conductor, then coefficients); used only to make
    // basis orderings and serialized output deterministic.
    friend bool operator<(const CycNum& a, const CycNum& b) {
        if (a.conductor_ != b.conductor_) return a.conductor_ < b.conductor_;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            if (a.coeffs_[i] != b.coeffs_[i]) return a.coeffs_[i] < b.coeffs_[i];
        return false;
    }

    std::string str() const {
        std::ostringstream os;
        os << "c:" << conductor_ << ":";
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) os << ",";
            os << numerator(coeffs_[i]) << "/" << denominator(coeffs_[i]);
        }
        return os.str();
    }

private:
    static CycNum from_coords(long m, std::vector<Rational> coords) {
        CycNum out;
        out.conductor_ = m;
        out.coeffs_ = std::move(coords);
        out.canonicalize();
        return out;
    }

    void canonicalize() {
        if (conductor_ == 1) return;
        if (is_zero()) {
            conductor_ = 1;
            coeffs_.assign(1, Rational(0));
            return;
        }
        long n = conductor_;
        std::vector<long> units;
        for (long j = 2; j < n; ++j)
            if (std::gcd(j, n) == 1) units.push_back(j);
        std::map<long, bool> stab;
        auto stabilizes = [&](long j) {
            auto it = stab.find(j);
            if (it != stab.end()) return it->second;
            bool ok = galois(j) == *this;
            stab.emplace(j, ok);
            return ok;
        };
        for (long d : divisors(n)) {
            if (d == n) return; // already minimal
            bool fixed = true;
            for (long j : units)
                if ((j - 1) % d == 0 && !stabilizes(j)) {
                    fixed = false;
                    break;
                }
            if (!fixed) continue;
            // express in the power basis of Q(zeta_d)
            long phi_d = euler_phi(d);
            long phi_n = euler_phi(n);
            RatMat sys(phi_n, std::vector<Rational>(phi_d, Rational(0)));
            for (long i = 0; i < phi_d; ++i) {
                std::vector<Rational> poly(static_cast<std::size_t>(i) * (n / d) + 1, Rational(0));
                poly.back() = 1;
                std::vector<Rational> red = detail::reduce_mod_cyclotomic(std::move(poly), n);
                for (long r = 0; r < phi_n; ++r) sys[r][i] = red[r];
            }
            auto sol = rat_solve(std::move(sys), coeffs_);
            if (!sol) fail("Mismatch", "canonicalize: inconsistent subfield descent");
            conductor_ = d;
            coeffs_ = std::move(*sol);
            return;
        }
    }

    long conductor_;
    std::vector<Rational> coeffs_;
};

inline CycNum operator*(const Rational& s, const CycNum& a) { return a.scaled(s); }

} // namespace twistk
