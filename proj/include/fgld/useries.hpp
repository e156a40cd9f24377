#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace fgld {

/// Truncated series sum_{t<M} c_t u^t over F_p. Every identity on a USeries
/// holds modulo u^M, where M is the precision.
class USeries {
public:
    USeries() = default;
    USeries(unsigned p, int precision) : p_(p), c_(static_cast<std::size_t>(std::max(precision, 0)), 0) {}
    USeries(unsigned p, std::vector<std::uint32_t> coeffs) : p_(p), c_(std::move(coeffs)) {
        for (auto& x : c_) x %= p_;
    }

    static USeries zero(unsigned p, int precision) { return {p, precision}; }
    static USeries constant(unsigned p, int precision, long value) {
        USeries s(p, precision);
        if (precision > 0) s.c_[0] = PrimeFieldElement(value, p).residue();
        return s;
    }
    static USeries monomial(unsigned p, int precision, int t, long value = 1) {
        USeries s(p, precision);
        if (t < precision) s.c_[static_cast<std::size_t>(t)] = PrimeFieldElement(value, p).residue();
        return s;
    }

    unsigned prime() const { return p_; }
    int precision() const { return static_cast<int>(c_.size()); }
    std::uint32_t operator[](int t) const { return t < precision() ? c_[static_cast<std::size_t>(t)] : 0; }
    const std::vector<std::uint32_t>& coefficients() const { return c_; }

    void set(int t, long value) {
        if (t >= 0 && t < precision()) c_[static_cast<std::size_t>(t)] = PrimeFieldElement(value, p_).residue();
    }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](std::uint32_t x) { return x == 0; });
    }

    /// u-adic valuation; nullopt when the series vanishes up to its precision.
    std::optional<int> weight() const {
        for (std::size_t t = 0; t < c_.size(); ++t)
            if (c_[t] != 0) return static_cast<int>(t);
        return std::nullopt;
    }

    bool is_unit() const { return !c_.empty() && c_[0] != 0; }

    USeries truncated(int precision) const {
        USeries r(p_, std::min(precision, this->precision()));
        std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
        return r;
    }

    /// Multiplication by u^k; precision is kept.
    USeries shifted_up(int k) const {
        USeries r(p_, precision());
        for (int t = 0; t + k < precision(); ++t) r.c_[static_cast<std::size_t>(t + k)] = c_[static_cast<std::size_t>(t)];
        return r;
    }

    /// Exact division by u^k. The result is known only modulo u^{M-k}.
    USeries divided_by_u_power(int k) const {
        for (int t = 0; t < std::min(k, precision()); ++t)
            if (c_[static_cast<std::size_t>(t)] != 0)
                throw Error(ErrorKind::InexactDivision, "series not divisible by u^" + std::to_string(k));
        USeries r(p_, precision() - k);
        for (int t = 0; t < r.precision(); ++t) r.c_[static_cast<std::size_t>(t)] = c_[static_cast<std::size_t>(t + k)];
        return r;
    }

    USeries& operator+=(const USeries& o) {
        check(o);
        for (std::size_t t = 0; t < c_.size(); ++t) c_[t] = (c_[t] + o.c_[t]) % p_;
        return *this;
    }
    USeries& operator-=(const USeries& o) {
        check(o);
        for (std::size_t t = 0; t < c_.size(); ++t) c_[t] = (c_[t] + p_ - o.c_[t]) % p_;
        return *this;
    }
    USeries operator-() const {
        USeries r(p_, precision());
        for (std::size_t t = 0; t < c_.size(); ++t) r.c_[t] = (p_ - c_[t]) % p_;
        return r;
    }
    USeries scaled(std::uint32_t k) const {
        USeries r(p_, precision());
        k %= p_;
        for (std::size_t t = 0; t < c_.size(); ++t) r.c_[t] = static_cast<std::uint32_t>(std::uint64_t(c_[t]) * k % p_);
        return r;
    }

    friend USeries operator+(USeries a, const USeries& b) { return a += b; }
    friend USeries operator-(USeries a, const USeries& b) { return a -= b; }
    friend USeries operator*(const USeries& a, const USeries& b) {
        a.check(b);
        const std::size_t m = a.c_.size();
        std::vector<std::uint64_t> acc(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; i + j < m; ++j) acc[i + j] += std::uint64_t(a.c_[i]) * b.c_[j];
        }
        USeries r(a.p_, static_cast<int>(m));
        for (std::size_t t = 0; t < m; ++t) r.c_[t] = static_cast<std::uint32_t>(acc[t] % a.p_);
        return r;
    }
    USeries& operator*=(const USeries& o) { return *this = *this * o; }

    friend bool operator==(const USeries& a, const USeries& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

    /// Inverse of a unit (nonzero constant term), by the usual recurrence.
    USeries inverse() const {
        if (!is_unit()) throw Error(ErrorKind::NonUnitConstantTerm, "USeries with zero constant term is not a unit");
        const std::uint64_t inv0 = PrimeFieldElement(c_[0], p_).inverse().residue();
        USeries r(p_, precision());
        r.c_[0] = static_cast<std::uint32_t>(inv0);
        for (std::size_t t = 1; t < c_.size(); ++t) {
            std::uint64_t s = 0;
            for (std::size_t j = 1; j <= t; ++j) s += std::uint64_t(c_[j]) * r.c_[t - j] % p_;
            r.c_[t] = static_cast<std::uint32_t>((p_ - s % p_) % p_ * inv0 % p_);
        }
        return r;
    }

    /// "c*u^t + ... + O(u^M)" in increasing t.
    std::string render() const {
        std::string out;
        for (std::size_t t = 0; t < c_.size(); ++t) {
            if (c_[t] == 0) continue;
            if (!out.empty()) out += " + ";
            if (c_[t] != 1 || t == 0) out += std::to_string(c_[t]);
            if (t > 0) out += (c_[t] != 1 ? "*" : "") + std::string("u^") + std::to_string(t);
        }
        if (out.empty()) out = "0";
        return out + " + O(u^" + std::to_string(c_.size()) + ")";
    }

private:
    void check(const USeries& o) const {
        if (o.p_ != p_) throw Error(ErrorKind::VariableMismatch, "USeries over different primes");
        if (o.c_.size() != c_.size())
            throw Error(ErrorKind::PrecisionMismatch, "USeries precisions " + std::to_string(c_.size()) + " and " +
                                                          std::to_string(o.c_.size()));
    }

    unsigned p_ = 2;
    std::vector<std::uint32_t> c_;
};

}  // namespace fgld
