#pragma once

// Weight descent: z -> a coefficient of nbar(z) of strictly smaller weight,
// repeated until a unit appears.

#include <cctype>
#include <string>
#include <vector>

#include "dvr.hpp"

namespace fgld {

/// u-adic valuation of z as a weight with denominator 1.
inline WeightValue weight_of(const USeries& z) {
    const auto t = z.weight();
    return {t ? std::optional<long>(*t) : std::nullopt, 1};
}

/// The substitution homomorphism F_p[[u_n]] -> R determined by u_n -> nbar.
class NbarMap {
public:
    NbarMap(const DvrRing& R, DvrElement nbar) : R_(&R), nbar_(std::move(nbar)) {
        const auto v = nbar_.valuation();
        if (!v || *v == 0) throw Error(ErrorKind::InvalidConfig, "nbar(u_n) must have positive finite valuation");
        nbar_val_ = *v;
    }

    const DvrElement& nbar() const { return nbar_; }
    long nbar_valuation() const { return nbar_val_; }

    /// sum_t c_t nbar^t by Horner's rule, at the precision of nbar, together
    /// with the a-adic precision of the result: the unknown tail O(u^P) of z
    /// maps into a^{P val(nbar)} R.
    std::pair<DvrElement, long> evaluate(const USeries& z) const {
        const int prec = nbar_.precision();
        DvrElement acc = R_->zero(prec);
        for (int t = z.precision() - 1; t >= 0; --t) {
            acc = R_->mul(acc, nbar_);
            if (z[t] != 0) acc = acc + R_->from_constant(USeries::constant(R_->prime(), prec, z[t]));
        }
        const long a_prec = std::min(static_cast<long>(z.precision()) * nbar_val_, static_cast<long>(prec) * R_->d());
        return {acc, a_prec};
    }

    /// nbar(z), truncated to the u-precision it is actually known to.
    DvrElement operator()(const USeries& z) const {
        auto [r, a_prec] = evaluate(z);
        return r.truncated(static_cast<int>(a_prec / R_->d()));
    }

private:
    const DvrRing* R_;
    DvrElement nbar_;
    long nbar_val_ = 0;
};

inline DvrElement apply_nbar(const USeries& z, const NbarMap& nbar) { return nbar(z); }

/// Coefficient of a^i in the reduced representative.
inline USeries phi_extract(const DvrElement& r, int i) {
    if (i < 0 || i >= r.degree_bound())
        throw Error(ErrorKind::IndexOutOfRange, "phi index " + std::to_string(i) + " outside [0, " +
                                                    std::to_string(r.degree_bound()) + ")");
    return r[i];
}

/// Parses "2*u^3 + u^5", "u", "1", or a coefficient list "0,1,0,1".
inline USeries parse_useries(const std::string& text, unsigned p, int prec) {
    const auto fail = [&](const std::string& why) {
        return Error(ErrorKind::ParseError, "cannot parse '" + text + "' as a series in u: " + why);
    };
    const auto to_long = [&](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw fail("bad integer '" + s + "'");
        return std::stol(s);
    };
    std::string clean;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '[' && ch != ']') clean += ch;
    if (clean.empty()) throw fail("empty");
    USeries z(p, prec);
    const auto add = [&](long t, long c) {
        if (t >= prec) throw fail("exponent " + std::to_string(t) + " is beyond the precision " + std::to_string(prec));
        z.set(static_cast<int>(t), static_cast<long>(z[static_cast<int>(t)]) + c);
    };
    if (clean.find(',') != std::string::npos) {
        std::size_t start = 0;
        for (long t = 0;; ++t) {
            const std::size_t end = clean.find(',', start);
            add(t, to_long(clean.substr(start, end - start)));
            if (end == std::string::npos) break;
            start = end + 1;
        }
        return z;
    }
    std::size_t start = 0;
    while (start <= clean.size()) {
        const std::size_t end = clean.find('+', start);
        const std::string term = clean.substr(start, end == std::string::npos ? std::string::npos : end - start);
        const std::size_t upos = term.find('u');
        if (upos == std::string::npos) {
            add(0, to_long(term));
        } else {
            std::string coeff = term.substr(0, upos);
            if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
            const std::string rest = term.substr(upos + 1);
            long t = 1;
            if (!rest.empty()) {
                if (rest[0] != '^') throw fail("expected '^' after u");
                t = to_long(rest.substr(1));
            }
            add(t, coeff.empty() ? 1 : to_long(coeff));
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return z;
}

struct DescentStep {
    USeries z;
    WeightValue weight;
    int chosen_index = 0;
    USeries extracted;
};

struct DescentTrace {
    std::vector<DescentStep> steps;
    USeries terminal;
};

/// Picks the minimal-weight a-coefficient of nbar(z), smallest index on ties.
/// Coefficient i is known modulo u^{ceil((A - i)/d)}, A the a-adic precision.
inline std::pair<USeries, int> descent_step(const USeries& z, const NbarMap& nbar) {
    const auto wz = z.weight();
    if (!wz) throw Error(ErrorKind::PrecisionExhausted, "z vanishes to precision");
    if (*wz < 1) throw Error(ErrorKind::InvalidConfig, "descent step needs wt(z) >= 1, got " + std::to_string(*wz));
    auto [r, a_prec] = nbar.evaluate(z);
    const long d = r.degree_bound();
    std::optional<long> best;
    int chosen = 0;
    USeries extracted;
    for (int i = 0; i < d; ++i) {
        const long known = std::max(0L, std::min<long>(r.precision(), (a_prec - i + d - 1) / d));
        const USeries c = phi_extract(r, i).truncated(static_cast<int>(known));
        if (const auto t = c.weight()) {
            const long v = *t * d + i;
            if (!best || v < *best) {
                best = v;
                chosen = i;
                extracted = c;
            }
        }
    }
    if (!best) throw Error(ErrorKind::PrecisionExhausted, "nbar(z) vanishes to its precision");
    if (*extracted.weight() >= *wz)
        throw Error(ErrorKind::WeightNotReduced, "wt " + std::to_string(*wz) + " -> " + std::to_string(*extracted.weight()));
    return {extracted, chosen};
}

inline DescentTrace descent_run(const USeries& z, const NbarMap& nbar, long d) {
    const auto w0 = z.weight();
    if (!w0) throw Error(ErrorKind::PrecisionExhausted, "z vanishes to precision");
    DescentTrace trace;
    USeries cur = z;
    const long bound = *w0 * d;
    while (*cur.weight() >= 1) {
        if (static_cast<long>(trace.steps.size()) >= bound)
            throw Error(ErrorKind::WeightNotReduced, "descent exceeded " + std::to_string(bound) + " steps");
        auto [next, idx] = descent_step(cur, nbar);
        trace.steps.push_back({cur, weight_of(cur), idx, next});
        cur = std::move(next);
    }
    trace.terminal = cur;
    return trace;
}

/// Checks the trace invariants: strictly decreasing weights, chaining, unit terminal.
inline bool trace_is_valid(const DescentTrace& t) {
    for (std::size_t k = 0; k < t.steps.size(); ++k) {
        const auto& s = t.steps[k];
        const auto next = s.extracted.weight();
        if (!next || !s.weight.numerator || *next >= *s.weight.numerator) return false;
        const USeries& following = k + 1 < t.steps.size() ? t.steps[k + 1].z : t.terminal;
        if (!(following == s.extracted)) return false;
    }
    return t.terminal.is_unit();
}

}  // namespace fgld
