#pragma once

// The complete DVR R = F_p[[u_n]][a]/g(a), where [p](a) = U a^{p^n} g(a).

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "checks.hpp"
#include "fgl.hpp"
#include "reduced_law.hpp"
#include "useries.hpp"

namespace fgld {

/// F and [p]_F reduced modulo (p, u_1, ..., u_{n-1}), at the low total-degree cap.
struct ReducedFgl {
    ChromaticConfig config;
    SpacePtr xy_space;
    SpacePtr a_space;
    ModPSeries addition;
    ModPSeries p_series;
};

inline ReducedFgl reduce_to_un(const FormalGroupLaw& F) {
    const ChromaticConfig& c = F.config;
    std::vector<std::string> lower = c.u_names();
    lower.pop_back();
    ReducedFgl r{c, SeriesSpace::make({"x", "y"}, {c.top_u()}, c.formal_cap),
                 SeriesSpace::make({"a"}, {c.top_u()}, c.formal_cap), ModPSeries(nullptr, {0, c.p}),
                 ModPSeries(nullptr, {0, c.p})};
    r.addition = F.reduced_addition.set_to_zero(lower).restrict_to(r.xy_space);
    const SpacePtr x_space = SeriesSpace::make({"x"}, {c.top_u()}, c.formal_cap);
    r.p_series = i_series(r.addition, x_space, static_cast<long>(c.p)).remap(r.a_space, {"a", c.top_u()});
    return r;
}

/// Dense truncated series in one formal variable over F_p[[u]]/u^M.
namespace aseries {

inline UCoeffSeries zeros(unsigned p, int prec, int len) {
    return {std::vector<USeries>(static_cast<std::size_t>(len), USeries::zero(p, prec))};
}

inline UCoeffSeries mul(const UCoeffSeries& x, const UCoeffSeries& y, int len) {
    const unsigned p = x.coeffs.front().prime();
    const int prec = x.coeffs.front().precision();
    UCoeffSeries r = zeros(p, prec, len);
    const int nx = std::min<int>(len, static_cast<int>(x.coeffs.size()));
    const int ny = static_cast<int>(y.coeffs.size());
    for (int i = 0; i < nx; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; j < ny && i + j < len; ++j) {
            if (y[j].is_zero()) continue;
            r.coeffs[static_cast<std::size_t>(i + j)] += x[i] * y[j];
        }
    }
    return r;
}

inline UCoeffSeries inverse(const UCoeffSeries& x, int len) {
    const unsigned p = x.coeffs.front().prime();
    const int prec = x.coeffs.front().precision();
    UCoeffSeries r = zeros(p, prec, len);
    const USeries inv0 = x[0].inverse();
    r.coeffs[0] = inv0;
    for (int j = 1; j < len; ++j) {
        USeries acc = USeries::zero(p, prec);
        for (int k = 1; k <= j && k < static_cast<int>(x.coeffs.size()); ++k)
            if (!x[k].is_zero()) acc += x[k] * r[j - k];
        r.coeffs[static_cast<std::size_t>(j)] = -(acc * inv0);
    }
    return r;
}

inline UCoeffSeries slice(const UCoeffSeries& x, int from, int to) {
    UCoeffSeries r;
    for (int i = from; i < to; ++i)
        r.coeffs.push_back(i < static_cast<int>(x.coeffs.size()) ? x[i] : USeries::zero(x[0].prime(), x[0].precision()));
    return r;
}

}  // namespace aseries

/// "c*u^t*a^i" monomials of sum_i c_i(u) a^i, ordered by a-degree, then u-degree.
inline std::string render_a_poly(const std::vector<USeries>& coeffs) {
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const USeries& c = coeffs[i];
        for (int t = 0; t < c.precision(); ++t) {
            if (c[t] == 0) continue;
            std::string term;
            if (c[t] != 1 || (t == 0 && i == 0)) term = std::to_string(c[t]);
            const auto factor = [&term](const std::string& f) { term += (term.empty() ? "" : "*") + f; };
            if (t > 0) factor("u^" + std::to_string(t));
            if (i > 0) factor("a^" + std::to_string(i));
            out += (out.empty() ? "" : " + ") + term;
        }
    }
    if (out.empty()) out = "0";
    const int prec = coeffs.empty() ? 0 : coeffs.front().precision();
    return out + " + O(u^" + std::to_string(prec) + ")";
}

struct DistinguishedPoly {
    unsigned p = 2;
    int precision = 0;
    std::vector<USeries> coefficients;  ///< length d+1, monic

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    const USeries& operator[](int i) const { return coefficients[static_cast<std::size_t>(i)]; }
    friend bool operator==(const DistinguishedPoly&, const DistinguishedPoly&) = default;

    std::string render() const { return render_a_poly(coefficients); }
};

struct WeierstrassFactorization {
    UCoeffSeries unit_part;  ///< U, valid below a-degree `valid_degree`
    DistinguishedPoly distinguished;
    int pole_order = 0;
    int valid_degree = 0;
};

/// Monic, lower coefficients in (u_n), constant term not in (u_n^2).
inline bool eisenstein_check(const DistinguishedPoly& g) {
    const int d = g.degree();
    if (d < 1 || !(g[d] == USeries::constant(g.p, g.precision, 1))) return false;
    for (int i = 0; i < d; ++i)
        if (g[i][0] != 0) return false;
    return g.precision >= 2 && g[0][1] != 0;
}

/// Prepares h = [p](a) (reduced, dense in a): finds U and monic g of degree
/// d with U a^{p^n} g = h, by exactly M rounds of u-adic refinement.
inline WeierstrassFactorization weierstrass_prepare(const UCoeffSeries& h, int pole_order, int d) {
    const unsigned p = h[0].prime();
    const int M = h[0].precision();
    const int len = static_cast<int>(h.coeffs.size()) - pole_order;
    if (len <= 2 * d) throw Error(ErrorKind::NotPreparable, "a-cap too small for degree " + std::to_string(d));
    for (int i = 0; i < pole_order; ++i)
        if (!h[i].is_zero())
            throw Error(ErrorKind::NotPreparable, "coefficient of a^" + std::to_string(i) + " is nonzero below the pole order");
    const UCoeffSeries shifted = aseries::slice(h, pole_order, pole_order + len);
    for (int i = 0; i < d; ++i)
        if (shifted[i][0] != 0)
            throw Error(ErrorKind::NotPreparable, "coefficient of a^" + std::to_string(i + pole_order) + " is not in (u)");
    if (!shifted[d].is_unit())
        throw Error(ErrorKind::NotPreparable, "coefficient of a^" + std::to_string(d + pole_order) + " is not a unit");

    const int nh = len - d;
    const UCoeffSeries low = aseries::slice(shifted, 0, d);
    const UCoeffSeries high = aseries::slice(shifted, d, len);
    const UCoeffSeries w = aseries::mul(low, aseries::inverse(high, nh), nh);

    UCoeffSeries q = aseries::zeros(p, M, nh);
    q.coeffs[0] = USeries::constant(p, M, 1);
    for (int round = 0; round < M; ++round) {
        const UCoeffSeries qw = aseries::mul(q, w, nh);
        UCoeffSeries next = aseries::zeros(p, M, nh);
        next.coeffs[0] = USeries::constant(p, M, 1);
        for (int j = 0; j + d < nh; ++j) next.coeffs[static_cast<std::size_t>(j)] -= qw[j + d];
        q = std::move(next);
    }
    const UCoeffSeries qw = aseries::mul(q, w, d);

    WeierstrassFactorization out;
    out.pole_order = pole_order;
    out.distinguished.p = p;
    out.distinguished.precision = M;
    for (int i = 0; i < d; ++i) out.distinguished.coefficients.push_back(qw[i]);
    out.distinguished.coefficients.push_back(USeries::constant(p, M, 1));
    // Truncation error enters q from the top and moves down d places per round
    // while gaining a factor of u, so the low d coefficients are exact once
    // nh >= (M+1) d; U is trusted below nh - d.
    out.valid_degree = nh - d;
    out.unit_part = aseries::mul(high, aseries::inverse(q, out.valid_degree), out.valid_degree);
    if (!out.unit_part[0].is_unit()) throw Error(ErrorKind::NotPreparable, "unit part has non-unit constant term");
    return out;
}

/// U a^{pole} g compared with h below a-degree pole + valid_degree.
inline Check weierstrass_reconstruction_check(const WeierstrassFactorization& w, const UCoeffSeries& h) {
    UCoeffSeries g{w.distinguished.coefficients};
    const int len = w.valid_degree;
    const UCoeffSeries ug = aseries::mul(w.unit_part, g, len);
    int bad = -1;
    for (int i = 0; i < w.pole_order + len && i < static_cast<int>(h.coeffs.size()); ++i) {
        const USeries expect = i < w.pole_order ? USeries::zero(h[0].prime(), h[0].precision()) : ug[i - w.pole_order];
        if (!(expect == h[i])) {
            bad = i;
            break;
        }
    }
    return {"weierstrass_reconstruction", bad < 0 ? CheckStatus::Pass : CheckStatus::Fail,
            "U a^" + std::to_string(w.pole_order) + " g = [p](a) mod (u^" + std::to_string(h[0].precision()) + ", a^" +
                std::to_string(w.pole_order + len) + ")",
            bad < 0 ? std::nullopt : std::optional<std::string>("first mismatch at a^" + std::to_string(bad))};
}

/// wt = valuation / d, or Infinite when the element vanishes to its precision.
struct WeightValue {
    std::optional<long> numerator;
    long denominator = 1;

    static WeightValue infinite(long d) { return {std::nullopt, d}; }
    bool is_infinite() const { return !numerator.has_value(); }

    std::string str() const {
        if (is_infinite()) return "inf";
        return std::to_string(*numerator) + "/" + std::to_string(denominator);
    }
    friend bool operator==(const WeightValue& a, const WeightValue& b) {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
        return *a.numerator * b.denominator == *b.numerator * a.denominator;
    }
    friend std::strong_ordering operator<=>(const WeightValue& a, const WeightValue& b) {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() <=> b.is_infinite();
        return *a.numerator * b.denominator <=> *b.numerator * a.denominator;
    }
};

class DvrRing;

/// sum_{i<d} c_i(u) a^i in R, known modulo u^P (P = precision()).
class DvrElement {
public:
    DvrElement() = default;
    DvrElement(std::vector<USeries> coeffs) : c_(std::move(coeffs)) {}  // NOLINT(google-explicit-constructor)

    int degree_bound() const { return static_cast<int>(c_.size()); }
    int precision() const { return c_.empty() ? 0 : c_.front().precision(); }
    unsigned prime() const { return c_.front().prime(); }
    const USeries& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<USeries>& coefficients() const { return c_; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const USeries& s) { return s.is_zero(); });
    }

    /// min over nonzero u^t a^i of t d + i.
    std::optional<long> valuation() const {
        std::optional<long> best;
        const long d = degree_bound();
        for (long i = 0; i < d; ++i) {
            if (auto t = c_[static_cast<std::size_t>(i)].weight()) {
                const long v = *t * d + i;
                if (!best || v < *best) best = v;
            }
        }
        return best;
    }
    WeightValue weight() const { return {valuation(), degree_bound()}; }
    /// Valuations at or beyond this are indistinguishable from zero.
    long horizon() const { return static_cast<long>(precision()) * degree_bound(); }

    DvrElement truncated(int prec) const {
        std::vector<USeries> r;
        for (const auto& s : c_) r.push_back(s.truncated(prec));
        return r;
    }

    friend DvrElement operator+(const DvrElement& x, const DvrElement& y) { return combine(x, y, false); }
    friend DvrElement operator-(const DvrElement& x, const DvrElement& y) { return combine(x, y, true); }
    DvrElement operator-() const {
        std::vector<USeries> r;
        for (const auto& s : c_) r.push_back(-s);
        return r;
    }
    DvrElement scaled(std::uint32_t k) const {
        std::vector<USeries> r;
        for (const auto& s : c_) r.push_back(s.scaled(k));
        return r;
    }
    /// Exact division of every coefficient by u^k.
    DvrElement divided_by_u_power(int k) const {
        std::vector<USeries> r;
        for (const auto& s : c_) r.push_back(s.divided_by_u_power(k));
        return r;
    }

    friend bool operator==(const DvrElement& a, const DvrElement& b) { return a.c_ == b.c_; }

    std::string render() const { return render_a_poly(c_); }

private:
    static DvrElement combine(const DvrElement& x, const DvrElement& y, bool subtract) {
        const int prec = std::min(x.precision(), y.precision());
        std::vector<USeries> r;
        for (int i = 0; i < x.degree_bound(); ++i) {
            const USeries a = x[i].truncated(prec), b = y[i].truncated(prec);
            r.push_back(subtract ? a - b : a + b);
        }
        return r;
    }

    std::vector<USeries> c_;
};

/// Arithmetic in R = F_p[[u]][a]/g(a). Also holds theta = a^d / u, which is
/// a unit of R, and its inverse powers for exact division by powers of a.
class DvrRing {
public:
    explicit DvrRing(DistinguishedPoly g) : g_(std::move(g)) {
        if (!eisenstein_check(g_)) throw Error(ErrorKind::NotPreparable, "g is not an Eisenstein polynomial");
        const int d = g_.degree();
        std::vector<USeries> th;
        for (int i = 0; i < d; ++i) th.push_back(-g_[i].divided_by_u_power(1));
        theta_ = th;
        theta_inv_pow_.push_back(one(g_.precision - 1));
        const DvrElement inv = unit_inverse(theta_);
        for (int s = 1; s <= g_.precision; ++s) theta_inv_pow_.push_back(mul(theta_inv_pow_.back(), inv));
    }

    const DistinguishedPoly& g() const { return g_; }
    unsigned prime() const { return g_.p; }
    int d() const { return g_.degree(); }
    int precision() const { return g_.precision; }
    const DvrElement& theta() const { return theta_; }

    DvrElement zero(int prec = -1) const { return from_constant(USeries::zero(prime(), prec < 0 ? precision() : prec)); }
    DvrElement one(int prec = -1) const { return from_constant(USeries::constant(prime(), prec < 0 ? precision() : prec, 1)); }
    DvrElement from_constant(const USeries& c) const {
        std::vector<USeries> r(static_cast<std::size_t>(d()), USeries::zero(prime(), c.precision()));
        r[0] = c;
        return r;
    }
    /// u^t a^i with i reduced modulo g as needed.
    DvrElement monomial(int t, int i, int prec = -1) const {
        DvrElement r = from_constant(USeries::monomial(prime(), prec < 0 ? precision() : prec, t));
        for (int k = 0; k < i; ++k) r = mul_by_a(r);
        return r;
    }
    DvrElement a() const { return monomial(0, 1); }
    DvrElement u() const { return monomial(1, 0); }

    /// Polynomial product followed by monic division by g.
    DvrElement mul(const DvrElement& x, const DvrElement& y) const {
        const int prec = std::min(x.precision(), y.precision());
        const int dd = d();
        std::vector<USeries> acc(static_cast<std::size_t>(2 * dd - 1), USeries::zero(prime(), prec));
        for (int i = 0; i < dd; ++i) {
            const USeries xi = x[i].truncated(prec);
            if (xi.is_zero()) continue;
            for (int j = 0; j < dd; ++j) {
                if (y[j].is_zero()) continue;
                acc[static_cast<std::size_t>(i + j)] += xi * y[j].truncated(prec);
            }
        }
        return reduce(std::move(acc), prec);
    }

    DvrElement mul_by_a(const DvrElement& x) const {
        const int prec = x.precision();
        std::vector<USeries> acc(static_cast<std::size_t>(d()) + 1, USeries::zero(prime(), prec));
        for (int i = 0; i < d(); ++i) acc[static_cast<std::size_t>(i) + 1] = x[i];
        return reduce(std::move(acc), prec);
    }

    DvrElement pow(const DvrElement& x, long e) const {
        DvrElement r = one(x.precision()), b = x;
        for (; e > 0; e >>= 1) {
            if (e & 1) r = mul(r, b);
            if (e > 1) b = mul(b, b);
        }
        return r;
    }

    /// Inverse of an element of valuation 0, by Newton iteration.
    DvrElement unit_inverse(const DvrElement& x) const {
        if (x.precision() == 0 || x[0][0] == 0)
            throw Error(ErrorKind::NonUnitConstantTerm, "element of positive valuation is not a unit of R");
        const int prec = x.precision();
        DvrElement y = from_constant(USeries::constant(prime(), prec, PrimeFieldElement(x[0][0], prime()).inverse().residue()));
        const DvrElement two = from_constant(USeries::constant(prime(), prec, 2));
        for (int iter = 0; iter < 64; ++iter) {
            DvrElement next = mul(y, two - mul(x, y));
            if (next == y) return y;
            y = std::move(next);
        }
        throw Error(ErrorKind::PrecisionExhausted, "unit inverse did not converge");
    }

    /// x / a^v for val(x) >= v. The result loses ceil(v/d) u-adic digits.
    DvrElement divide_by_a_power(const DvrElement& x, long v) const {
        if (v == 0) return x;
        const auto val = x.valuation();
        if (val && *val < v)
            throw Error(ErrorKind::InexactDivision,
                        "valuation " + std::to_string(*val) + " is below the divisor a^" + std::to_string(v));
        const long dd = d();
        const long s = v / dd, r0 = v % dd;
        DvrElement y = x;
        long steps = s;
        if (r0 != 0) {
            for (long k = 0; k < dd - r0; ++k) y = mul_by_a(y);
            steps = s + 1;
        }
        if (steps > y.precision())
            throw Error(ErrorKind::PrecisionExhausted, "dividing by a^" + std::to_string(v) + " exhausts the precision");
        if (steps > static_cast<long>(theta_inv_pow_.size()) - 1)
            throw Error(ErrorKind::PrecisionExhausted, "theta power beyond the table");
        const DvrElement q = y.divided_by_u_power(static_cast<int>(steps));
        return mul(q, theta_inv_pow_[static_cast<std::size_t>(steps)]);
    }

    /// Horner evaluation of sum_m c_m b^m for m below the a-adic horizon of b.
    DvrElement evaluate(const UCoeffSeries& s, const DvrElement& b) const {
        const int prec = std::min(precision(), b.precision());
        const auto vb = b.valuation();
        if (vb && *vb == 0) throw Error(ErrorKind::NonUnitConstantTerm, "series evaluated at a unit does not converge");
        int top = 0;
        if (vb) {
            const long needed = (static_cast<long>(prec) * d() + *vb - 1) / *vb - 1;
            if (needed > s.degree_cap())
                throw Error(ErrorKind::PrecisionExhausted, "series known to degree " + std::to_string(s.degree_cap()) +
                                                               ", evaluation needs " + std::to_string(needed));
            top = static_cast<int>(needed);
        }
        DvrElement acc = zero(prec);
        const bool is_a = b == a().truncated(b.precision());
        for (int m = top; m >= 0; --m) {
            acc = is_a ? mul_by_a(acc) : mul(acc, b);
            acc = acc + from_constant(s[m].truncated(prec));
        }
        return acc;
    }

private:
    DvrElement reduce(std::vector<USeries> acc, int prec) const {
        const int dd = d();
        for (int k = static_cast<int>(acc.size()) - 1; k >= dd; --k) {
            const USeries top = acc[static_cast<std::size_t>(k)];
            if (top.is_zero()) continue;
            for (int i = 0; i < dd; ++i)
                acc[static_cast<std::size_t>(k - dd + i)] -= top * g_[i].truncated(prec);
        }
        acc.resize(static_cast<std::size_t>(dd));
        return acc;
    }

    DistinguishedPoly g_;
    DvrElement theta_;
    std::vector<DvrElement> theta_inv_pow_;
};

/// Psi = prod_{i=1}^{p-1} [i](a); also returns prod [-i](a) for the comparison.
struct PsiResult {
    DvrElement psi;
    DvrElement psi_negative;
};

inline PsiResult compute_psi(const ReducedLaw& law, const DvrRing& R) {
    PsiResult out{R.one(), R.one()};
    const DvrElement a = R.a();
    for (long i = 1; i < static_cast<long>(law.config.p); ++i) {
        out.psi = R.mul(out.psi, R.evaluate(law.series(i), a));
        out.psi_negative = R.mul(out.psi_negative, R.evaluate(law.series(-i), a));
    }
    return out;
}

}  // namespace fgld
