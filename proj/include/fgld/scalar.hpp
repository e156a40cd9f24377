#pragma once

// Exact scalar rings: p-local rationals (arbitrary precision) and the prime
// field F_p. Both are immutable value types.

#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"

namespace fgld {

/// Largest prime accepted anywhere in the library.
inline constexpr unsigned kMaxPrime = 17;

inline bool is_prime(unsigned p) {
    if (p < 2) return false;
    for (unsigned q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

inline void validate_prime(unsigned p) {
    if (p > kMaxPrime || !is_prime(p))
        throw Error(ErrorKind::InvalidConfig,
                    "p must be a prime <= " + std::to_string(kMaxPrime) + ", got " + std::to_string(p));
}

class PrimeFieldElement;

/// Exact rational in lowest terms. Used for every computation that divides by p
/// before integrality is certified.
class PLocalRational {
public:
    PLocalRational() = default;
    PLocalRational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
    explicit PLocalRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    PLocalRational(const mpz_class& num, const mpz_class& den) : q_(num, den) {
        if (sgn(den) == 0) throw Error(ErrorKind::InvalidConfig, "zero denominator");
        q_.canonicalize();
    }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_p_integral(unsigned p) const { return mpz_divisible_ui_p(q_.get_den_mpz_t(), p) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    PLocalRational& operator+=(const PLocalRational& o) { q_ += o.q_; return *this; }
    PLocalRational& operator-=(const PLocalRational& o) { q_ -= o.q_; return *this; }
    PLocalRational& operator*=(const PLocalRational& o) { q_ *= o.q_; return *this; }
    PLocalRational& operator/=(const PLocalRational& o) {
        if (o.is_zero()) throw Error(ErrorKind::NonUnitConstantTerm, "division by zero rational");
        q_ /= o.q_;
        return *this;
    }

    friend PLocalRational operator+(PLocalRational a, const PLocalRational& b) { return a += b; }
    friend PLocalRational operator-(PLocalRational a, const PLocalRational& b) { return a -= b; }
    friend PLocalRational operator*(PLocalRational a, const PLocalRational& b) { return a *= b; }
    friend PLocalRational operator/(PLocalRational a, const PLocalRational& b) { return a /= b; }
    friend PLocalRational operator-(const PLocalRational& a) { return PLocalRational(mpq_class(-a.q_)); }
    friend bool operator==(const PLocalRational& a, const PLocalRational& b) { return a.q_ == b.q_; }

    std::string str() const { return q_.get_str(); }
    friend std::ostream& operator<<(std::ostream& os, const PLocalRational& q) { return os << q.str(); }

private:
    mpq_class q_;
};

/// Element of F_p. The modulus travels with the value so mixed-prime arithmetic
/// is caught instead of silently producing garbage.
class PrimeFieldElement {
public:
    PrimeFieldElement() = default;
    PrimeFieldElement(long value, unsigned p) : p_(p) {
        long r = value % static_cast<long>(p);
        residue_ = static_cast<std::uint32_t>(r < 0 ? r + static_cast<long>(p) : r);
    }

    std::uint32_t residue() const { return residue_; }
    unsigned modulus() const { return p_; }
    bool is_zero() const { return residue_ == 0; }

    PrimeFieldElement inverse() const {
        if (residue_ == 0) throw Error(ErrorKind::NonUnitConstantTerm, "zero has no inverse in F_p");
        return {static_cast<long>(pow_mod(residue_, p_ - 2, p_)), p_};
    }

    PrimeFieldElement& operator+=(const PrimeFieldElement& o) {
        check(o);
        residue_ = (residue_ + o.residue_) % p_;
        return *this;
    }
    PrimeFieldElement& operator-=(const PrimeFieldElement& o) {
        check(o);
        residue_ = (residue_ + p_ - o.residue_) % p_;
        return *this;
    }
    PrimeFieldElement& operator*=(const PrimeFieldElement& o) {
        check(o);
        residue_ = static_cast<std::uint32_t>(std::uint64_t(residue_) * o.residue_ % p_);
        return *this;
    }
    PrimeFieldElement& operator/=(const PrimeFieldElement& o) { return *this *= o.inverse(); }

    friend PrimeFieldElement operator+(PrimeFieldElement a, const PrimeFieldElement& b) { return a += b; }
    friend PrimeFieldElement operator-(PrimeFieldElement a, const PrimeFieldElement& b) { return a -= b; }
    friend PrimeFieldElement operator*(PrimeFieldElement a, const PrimeFieldElement& b) { return a *= b; }
    friend PrimeFieldElement operator/(PrimeFieldElement a, const PrimeFieldElement& b) { return a /= b; }
    friend PrimeFieldElement operator-(const PrimeFieldElement& a) {
        return {static_cast<long>(a.p_ - a.residue_), a.p_};
    }
    friend bool operator==(const PrimeFieldElement& a, const PrimeFieldElement& b) {
        return a.residue_ == b.residue_ && a.p_ == b.p_;
    }

    std::string str() const { return std::to_string(residue_); }
    friend std::ostream& operator<<(std::ostream& os, const PrimeFieldElement& x) { return os << x.residue_; }

    static std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
        std::uint64_t r = 1 % m;
        b %= m;
        for (; e; e >>= 1, b = b * b % m)
            if (e & 1) r = r * b % m;
        return r;
    }

private:
    void check(const PrimeFieldElement& o) const {
        if (o.p_ != p_)
            throw Error(ErrorKind::VariableMismatch, "mixed moduli " + std::to_string(p_) + " and " + std::to_string(o.p_));
    }

    std::uint32_t residue_ = 0;
    unsigned p_ = 2;
};

/// (numerator * denominator^{-1}) mod p. Throws NotPIntegral when p divides the
/// denominator.
inline PrimeFieldElement reduce_mod_p(const PLocalRational& q, unsigned p) {
    if (!q.is_p_integral(p))
        throw Error(ErrorKind::NotPIntegral, q.str() + " is not " + std::to_string(p) + "-integral");
    const unsigned long num = mpz_fdiv_ui(q.raw().get_num_mpz_t(), p);
    const unsigned long den = mpz_fdiv_ui(q.raw().get_den_mpz_t(), p);
    return PrimeFieldElement(static_cast<long>(num), p) / PrimeFieldElement(static_cast<long>(den), p);
}

// Scalar-ring hooks used by the generic series code (found by ADL).

inline bool is_zero(const PLocalRational& q) { return q.is_zero(); }
inline bool is_zero(const PrimeFieldElement& x) { return x.is_zero(); }

inline PLocalRational scalar_like(const PLocalRational&, long n) { return PLocalRational(n); }
inline PrimeFieldElement scalar_like(const PrimeFieldElement& proto, long n) { return {n, proto.modulus()}; }

inline PLocalRational scalar_inverse(const PLocalRational& q) {
    if (q.is_zero()) throw Error(ErrorKind::NonUnitConstantTerm, "zero is not a unit");
    return PLocalRational(1) / q;
}
inline PrimeFieldElement scalar_inverse(const PrimeFieldElement& x) { return x.inverse(); }

inline std::string scalar_str(const PLocalRational& q) { return q.str(); }
inline std::string scalar_str(const PrimeFieldElement& x) { return x.str(); }

inline bool scalar_is_negative(const PLocalRational& q) { return sgn(q.raw()) < 0; }
inline bool scalar_is_negative(const PrimeFieldElement&) { return false; }

}  // namespace fgld
